#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace citefit::names {

// Raw-name -> canonical-name overrides. Entries win over the automatic
// rules and their values are taken verbatim. Loading rejects entries that
// map the same key to two different values.
class Overrides {
public:
    Overrides() = default;
    explicit Overrides(const std::vector<std::pair<std::string, std::string>>& entries);
    static Overrides load_csv(const std::string& path); // columns: raw,canonical

    const std::string* find(const std::string& key) const;
    bool empty() const { return map_.empty(); }

private:
    std::map<std::string, std::string> map_;
};

// Canonical form of one author name: case-folded, punctuation stripped,
// "Last, F." reordered to "F. Last" before folding, whitespace collapsed.
// So "B. Shneiderman" and "Shneiderman, B." both become "b shneiderman".
// Overrides are consulted last (raw form first, then the folded form) and
// their value is returned verbatim. Idempotent on its own output.
std::string normalize(std::string_view raw, const Overrides& overrides = {});

// Batch form mirroring the single-name rules; keys are the inputs.
std::map<std::string, std::string> normalize_names(const std::vector<std::string>& raw_names,
                                                   const Overrides& overrides = {});

} // namespace citefit::names
