#include "citefit/csv.hpp"

#include "citefit/errors.hpp"

#include <fstream>
#include <ostream>
#include <sstream>

namespace citefit::csv {

std::vector<Row> parse(std::string_view text, std::vector<std::string>* comments) {
    std::vector<Row> rows;
    Row row;
    std::string field;
    bool in_quotes = false;
    bool at_record_start = true;
    bool in_comment = false;
    size_t line = 1;

    auto end_field = [&] {
        row.push_back(std::move(field));
        field.clear();
    };
    auto end_record = [&] {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
        at_record_start = true;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_comment) {
            if (c == '\n') {
                ++line;
                in_comment = false;
            } else if (c != '\r' && comments) {
                comments->back().push_back(c);
            }
            continue;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '#':
            if (at_record_start) {
                in_comment = true;
                if (comments) comments->emplace_back();
            } else {
                field.push_back(c);
            }
            break;
        case '"':
            if (!field.empty())
                throw parse_error("unexpected quote inside unquoted field", "line " + std::to_string(line));
            in_quotes = true;
            at_record_start = false;
            break;
        case ',':
            end_field();
            at_record_start = false;
            break;
        case '\r':
            break;
        case '\n':
            ++line;
            if (!at_record_start) end_record();
            break;
        default:
            field.push_back(c);
            at_record_start = false;
            break;
        }
    }
    if (in_quotes)
        throw parse_error("unterminated quoted field", "line " + std::to_string(line));
    if (!at_record_start) end_record();
    return rows;
}

std::vector<Row> parse_file(const std::string& path, std::vector<std::string>* comments) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str(), comments);
    } catch (const parse_error& e) {
        throw parse_error(std::string("in ") + path + ": " + e.what(), e.locus());
    }
}

std::string escape(std::string_view field) {
    bool needs_quotes = field.find_first_of(",\"\n\r") != std::string_view::npos;
    if (!needs_quotes && !field.empty() && field.front() == '#') needs_quotes = true;
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& os, const Row& row) {
    for (size_t i = 0; i < row.size(); ++i) {
        if (i) os << ',';
        os << escape(row[i]);
    }
    os << '\n';
}

} // namespace citefit::csv
