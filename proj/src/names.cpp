#include "citefit/names.hpp"

#include "citefit/csv.hpp"
#include "citefit/errors.hpp"
#include "citefit/util.hpp"

#include <cctype>

namespace citefit::names {

Overrides::Overrides(const std::vector<std::pair<std::string, std::string>>& entries) {
    for (const auto& [key, value] : entries) {
        auto [it, inserted] = map_.emplace(key, value);
        if (!inserted && it->second != value)
            throw config_error("conflicting name override for \"" + key + "\": \"" +
                               it->second + "\" vs \"" + value + "\"");
    }
    // Override values are canonical by declaration; making them fixed
    // points keeps normalization idempotent. Explicit entries still win.
    for (const auto& [key, value] : entries) {
        (void)key;
        map_.emplace(value, value);
    }
}

Overrides Overrides::load_csv(const std::string& path) {
    auto rows = csv::parse_file(path);
    std::vector<std::pair<std::string, std::string>> entries;
    for (size_t i = 0; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.size() == 1 && row[0].empty()) continue;
        if (row.size() < 2)
            throw parse_error("override row needs two columns (raw,canonical)",
                              path + " row " + std::to_string(i + 1));
        if (i == 0 && util::to_lower(row[0]) == "raw") continue; // header
        entries.emplace_back(row[0], row[1]);
    }
    return Overrides(entries);
}

const std::string* Overrides::find(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? nullptr : &it->second;
}

namespace {

// Fold: lowercase ASCII, punctuation to spaces, collapse runs of spaces.
std::string fold(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char raw : s) {
        unsigned char c = static_cast<unsigned char>(raw);
        char mapped;
        if (std::isalnum(c)) {
            mapped = static_cast<char>(std::tolower(c));
        } else if (c >= 0x80) {
            mapped = raw; // keep non-ASCII bytes as-is
        } else {
            pending_space = true;
            continue;
        }
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        out.push_back(mapped);
    }
    return out;
}

} // namespace

std::string normalize(std::string_view raw, const Overrides& overrides) {
    std::string trimmed = util::trim(raw);
    if (const std::string* hit = overrides.find(trimmed)) return *hit;

    // "Last, First M." -> "First M. Last"
    std::string reordered = trimmed;
    size_t comma = trimmed.find(',');
    if (comma != std::string::npos) {
        std::string last = util::trim(trimmed.substr(0, comma));
        std::string rest = util::trim(trimmed.substr(comma + 1));
        reordered = rest.empty() ? last : rest + " " + last;
    }
    std::string canonical = fold(reordered);
    if (const std::string* hit = overrides.find(canonical)) return *hit;
    return canonical;
}

std::map<std::string, std::string> normalize_names(const std::vector<std::string>& raw_names,
                                                   const Overrides& overrides) {
    std::map<std::string, std::string> out;
    for (const auto& raw : raw_names) out.emplace(raw, normalize(raw, overrides));
    return out;
}

} // namespace citefit::names
