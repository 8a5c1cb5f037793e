#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace citefit::xml {

// Minimal DOM for the bibliographic record files this tool ingests.
// Understands elements, attributes, character data, comments, CDATA,
// processing instructions and the standard entities; it is not a general
// XML processor (no DTD expansion, no namespaces).
struct Element {
    std::string name;
    std::map<std::string, std::string> attributes;
    std::vector<Element> children;
    std::string text;   // concatenated character data directly under this element
    size_t line = 0;    // 1-based line of the opening tag

    const Element* first_child(std::string_view child_name) const;
    std::vector<const Element*> children_named(std::string_view child_name) const;
    // Depth-first search for all descendants with the given name.
    std::vector<const Element*> descendants_named(std::string_view child_name) const;
    std::string attribute(std::string_view key) const; // "" when absent
};

// Parses a whole document; returns the root element.
// Throws parse_error with a line locus on malformed input.
Element parse(std::string_view text);
Element parse_file(const std::string& path);

} // namespace citefit::xml
