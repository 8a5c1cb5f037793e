#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace citefit {

// Base class for all citefit errors.
class error : public std::runtime_error {
public:
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input file. Carries a human-readable locus (line number or
// element path) so the offending record can be found.
class parse_error : public error {
public:
    parse_error(const std::string& what, const std::string& locus)
        : error(what + " (at " + locus + ")"), locus_(locus) {}
    const std::string& locus() const { return locus_; }

private:
    std::string locus_;
};

// Invalid configuration, e.g. conflicting name-override entries.
class config_error : public error {
public:
    using error::error;
};

// Argument outside the function's domain (empty list to a geometric mean,
// paper year past the collection year, ...).
class domain_error : public error {
public:
    using error::error;
};

// Singular or near-singular design matrix. Names the columns whose
// R diagonal collapsed so the caller can see what is collinear.
class rank_deficiency_error : public error {
public:
    rank_deficiency_error(const std::string& what, std::vector<std::string> columns)
        : error(what), columns_(std::move(columns)) {}
    const std::vector<std::string>& columns() const { return columns_; }

private:
    std::vector<std::string> columns_;
};

} // namespace citefit
