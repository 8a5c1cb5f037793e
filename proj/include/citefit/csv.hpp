#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace citefit::csv {

// One parsed record; fields are unescaped.
using Row = std::vector<std::string>;

// RFC 4180-style CSV: quoted fields may contain commas, quotes ("" escape)
// and newlines. Lines whose first character is '#' (outside any quoted
// field) are artifact header comments and are skipped; they are collected
// into `comments` when given. Throws parse_error with a line locus.
std::vector<Row> parse(std::string_view text, std::vector<std::string>* comments = nullptr);
std::vector<Row> parse_file(const std::string& path, std::vector<std::string>* comments = nullptr);

// Quotes a field only when it needs it.
std::string escape(std::string_view field);
void write_row(std::ostream& os, const Row& row);

} // namespace citefit::csv
