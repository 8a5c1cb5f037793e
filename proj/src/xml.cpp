#include "citefit/xml.hpp"

#include "citefit/errors.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace citefit::xml {

namespace {

struct Cursor {
    std::string_view text;
    size_t pos = 0;
    size_t line = 1;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }
    char get() {
        char c = text[pos++];
        if (c == '\n') ++line;
        return c;
    }
    bool consume(std::string_view token) {
        if (text.substr(pos, token.size()) != token) return false;
        for (size_t i = 0; i < token.size(); ++i) get();
        return true;
    }
    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) get();
    }
    [[noreturn]] void fail(const std::string& msg) const {
        throw parse_error(msg, "line " + std::to_string(line));
    }
};

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes one &...; entity starting after the ampersand.
void decode_entity(Cursor& c, std::string& out) {
    std::string name;
    while (!c.eof() && c.peek() != ';') {
        name.push_back(c.get());
        if (name.size() > 12) c.fail("unterminated entity reference");
    }
    if (c.eof()) c.fail("unterminated entity reference");
    c.get(); // ';'
    if (name == "amp") out.push_back('&');
    else if (name == "lt") out.push_back('<');
    else if (name == "gt") out.push_back('>');
    else if (name == "quot") out.push_back('"');
    else if (name == "apos") out.push_back('\'');
    else if (!name.empty() && name[0] == '#') {
        unsigned long cp = 0;
        try {
            cp = (name.size() > 1 && (name[1] == 'x' || name[1] == 'X'))
                     ? std::stoul(name.substr(2), nullptr, 16)
                     : std::stoul(name.substr(1), nullptr, 10);
        } catch (...) {
            c.fail("bad character reference &" + name + ";");
        }
        append_utf8(out, cp);
    } else {
        c.fail("unknown entity &" + name + ";");
    }
}

bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':';
}

std::string read_name(Cursor& c) {
    std::string name;
    while (!c.eof() && is_name_char(c.peek())) name.push_back(c.get());
    if (name.empty()) c.fail("expected a name");
    return name;
}

void skip_misc(Cursor& c) {
    // comments, PIs, doctype
    for (;;) {
        c.skip_ws();
        if (c.consume("<!--")) {
            while (!c.eof() && !c.consume("-->")) c.get();
        } else if (c.consume("<?")) {
            while (!c.eof() && !c.consume("?>")) c.get();
        } else if (c.consume("<!DOCTYPE")) {
            int depth = 1;
            while (!c.eof() && depth > 0) {
                char ch = c.get();
                if (ch == '<') ++depth;
                else if (ch == '>') --depth;
            }
        } else {
            return;
        }
    }
}

Element parse_element(Cursor& c); // fwd

void parse_content(Cursor& c, Element& el) {
    for (;;) {
        if (c.eof()) c.fail("unexpected end of document inside <" + el.name + ">");
        if (c.peek() == '<') {
            if (c.consume("<!--")) {
                while (!c.eof() && !c.consume("-->")) c.get();
                continue;
            }
            if (c.consume("<![CDATA[")) {
                while (!c.eof() && !c.consume("]]>")) el.text.push_back(c.get());
                continue;
            }
            if (c.consume("<?")) {
                while (!c.eof() && !c.consume("?>")) c.get();
                continue;
            }
            if (c.text.substr(c.pos, 2) == "</") {
                c.get();
                c.get();
                std::string closing = read_name(c);
                if (closing != el.name)
                    c.fail("mismatched closing tag </" + closing + "> for <" + el.name + ">");
                c.skip_ws();
                if (c.eof() || c.get() != '>') c.fail("malformed closing tag");
                return;
            }
            el.children.push_back(parse_element(c));
        } else if (c.peek() == '&') {
            c.get();
            decode_entity(c, el.text);
        } else {
            el.text.push_back(c.get());
        }
    }
}

Element parse_element(Cursor& c) {
    if (c.eof() || c.get() != '<') c.fail("expected '<'");
    Element el;
    el.line = c.line;
    el.name = read_name(c);
    for (;;) {
        c.skip_ws();
        if (c.eof()) c.fail("unterminated tag <" + el.name + ">");
        if (c.consume("/>")) return el;
        if (c.peek() == '>') {
            c.get();
            parse_content(c, el);
            return el;
        }
        std::string key = read_name(c);
        c.skip_ws();
        if (c.eof() || c.get() != '=') c.fail("expected '=' after attribute " + key);
        c.skip_ws();
        if (c.eof()) c.fail("unterminated attribute " + key);
        char quote = c.get();
        if (quote != '"' && quote != '\'') c.fail("attribute value must be quoted");
        std::string value;
        while (!c.eof() && c.peek() != quote) {
            if (c.peek() == '&') {
                c.get();
                decode_entity(c, value);
            } else {
                value.push_back(c.get());
            }
        }
        if (c.eof()) c.fail("unterminated attribute value for " + key);
        c.get(); // closing quote
        el.attributes[key] = value;
    }
}

} // namespace

const Element* Element::first_child(std::string_view child_name) const {
    for (const auto& ch : children)
        if (ch.name == child_name) return &ch;
    return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const auto& ch : children)
        if (ch.name == child_name) out.push_back(&ch);
    return out;
}

std::vector<const Element*> Element::descendants_named(std::string_view child_name) const {
    std::vector<const Element*> out;
    for (const auto& ch : children) {
        if (ch.name == child_name) out.push_back(&ch);
        auto deeper = ch.descendants_named(child_name);
        out.insert(out.end(), deeper.begin(), deeper.end());
    }
    return out;
}

std::string Element::attribute(std::string_view key) const {
    auto it = attributes.find(std::string(key));
    return it == attributes.end() ? std::string() : it->second;
}

Element parse(std::string_view text) {
    Cursor c{text};
    skip_misc(c);
    if (c.eof()) throw parse_error("empty document", "line 1");
    Element root = parse_element(c);
    skip_misc(c);
    c.skip_ws();
    if (!c.eof()) c.fail("trailing content after document root");
    return root;
}

Element parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string data = ss.str();
    try {
        return parse(data);
    } catch (const parse_error& e) {
        throw parse_error(std::string("in ") + path + ": " + e.what(), e.locus());
    }
}

} // namespace citefit::xml
