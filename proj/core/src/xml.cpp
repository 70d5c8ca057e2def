#include "svgchart/xml.hpp"

#include <cctype>
#include <cstdint>

namespace svgchart::xml {

const std::string* Node::attr(std::string_view name) const {
    for (const auto& [k, v] : attributes)
        if (k == name) return &v;
    return nullptr;
}

namespace {

struct Parser {
    std::string_view in;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(msg + " at offset " + std::to_string(pos));
    }

    bool eof() const { return pos >= in.size(); }
    char peek() const { return in[pos]; }
    bool starts_with(std::string_view s) const { return in.substr(pos, s.size()) == s; }

    void skip_ws() {
        while (!eof() && std::isspace(static_cast<unsigned char>(in[pos]))) ++pos;
    }

    void skip_until(std::string_view terminator) {
        size_t found = in.find(terminator, pos);
        if (found == std::string_view::npos) fail("unterminated construct");
        pos = found + terminator.size();
    }

    // Skips comments, PIs, DOCTYPE and whitespace before/between markup.
    void skip_misc() {
        for (;;) {
            skip_ws();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (starts_with("<!")) {
                // DOCTYPE, possibly with an internal subset
                size_t depth = 0;
                while (!eof()) {
                    char c = in[pos++];
                    if (c == '[') ++depth;
                    else if (c == ']' && depth > 0) --depth;
                    else if (c == '>' && depth == 0) break;
                }
            } else {
                return;
            }
        }
    }

    static bool is_name_start(char c) {
        return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':' ||
               static_cast<unsigned char>(c) >= 0x80;
    }
    static bool is_name_char(char c) {
        return is_name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
               c == '-' || c == '.';
    }

    std::string read_name() {
        if (eof() || !is_name_start(peek())) fail("expected name");
        size_t start = pos;
        while (!eof() && is_name_char(peek())) ++pos;
        return std::string(in.substr(start, pos - start));
    }

    void append_decoded(std::string& out, std::string_view raw) {
        for (size_t i = 0; i < raw.size();) {
            if (raw[i] != '&') {
                out += raw[i++];
                continue;
            }
            size_t semi = raw.find(';', i);
            if (semi == std::string_view::npos) {
                out += raw[i++];
                continue;
            }
            std::string_view ent = raw.substr(i + 1, semi - i - 1);
            if (ent == "lt") out += '<';
            else if (ent == "gt") out += '>';
            else if (ent == "amp") out += '&';
            else if (ent == "apos") out += '\'';
            else if (ent == "quot") out += '"';
            else if (!ent.empty() && ent[0] == '#') {
                uint32_t cp = 0;
                bool ok = ent.size() > 1;
                if (ent.size() > 2 && (ent[1] == 'x' || ent[1] == 'X')) {
                    for (size_t k = 2; k < ent.size() && ok; ++k) {
                        char c = ent[k];
                        cp <<= 4;
                        if (c >= '0' && c <= '9') cp |= static_cast<uint32_t>(c - '0');
                        else if (c >= 'a' && c <= 'f') cp |= static_cast<uint32_t>(c - 'a' + 10);
                        else if (c >= 'A' && c <= 'F') cp |= static_cast<uint32_t>(c - 'A' + 10);
                        else ok = false;
                    }
                } else {
                    for (size_t k = 1; k < ent.size() && ok; ++k) {
                        char c = ent[k];
                        if (c < '0' || c > '9') { ok = false; break; }
                        cp = cp * 10 + static_cast<uint32_t>(c - '0');
                    }
                }
                if (!ok || cp == 0 || cp > 0x10FFFF) {
                    out.append(raw.substr(i, semi - i + 1));
                } else if (cp < 0x80) {
                    out += static_cast<char>(cp);
                } else if (cp < 0x800) {
                    out += static_cast<char>(0xC0 | (cp >> 6));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                } else if (cp < 0x10000) {
                    out += static_cast<char>(0xE0 | (cp >> 12));
                    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                } else {
                    out += static_cast<char>(0xF0 | (cp >> 18));
                    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
                    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
                    out += static_cast<char>(0x80 | (cp & 0x3F));
                }
            } else {
                out.append(raw.substr(i, semi - i + 1));  // unknown entity kept verbatim
            }
            i = semi + 1;
        }
    }

    std::string read_attr_value() {
        if (eof() || (peek() != '"' && peek() != '\'')) fail("expected quoted attribute value");
        char quote = in[pos++];
        size_t start = pos;
        size_t end = in.find(quote, pos);
        if (end == std::string_view::npos) fail("unterminated attribute value");
        pos = end + 1;
        std::string out;
        append_decoded(out, in.substr(start, end - start));
        return out;
    }

    Node parse_element() {
        if (eof() || peek() != '<') fail("expected element");
        ++pos;
        Node node;
        node.tag = read_name();
        for (;;) {
            skip_ws();
            if (eof()) fail("unterminated start tag");
            if (peek() == '>') { ++pos; break; }
            if (starts_with("/>")) { pos += 2; return node; }
            std::string name = read_name();
            skip_ws();
            if (eof() || peek() != '=') fail("expected '=' in attribute");
            ++pos;
            skip_ws();
            node.attributes.emplace_back(std::move(name), read_attr_value());
        }
        parse_content(node);
        return node;
    }

    void parse_content(Node& node) {
        for (;;) {
            if (eof()) fail("unterminated element <" + node.tag + ">");
            if (peek() == '<') {
                if (starts_with("</")) {
                    pos += 2;
                    std::string name = read_name();
                    if (name != node.tag) fail("mismatched end tag </" + name + ">");
                    skip_ws();
                    if (eof() || peek() != '>') fail("malformed end tag");
                    ++pos;
                    return;
                }
                if (starts_with("<!--")) { skip_until("-->"); continue; }
                if (starts_with("<![CDATA[")) {
                    pos += 9;
                    size_t end = in.find("]]>", pos);
                    if (end == std::string_view::npos) fail("unterminated CDATA");
                    node.text.append(in.substr(pos, end - pos));
                    pos = end + 3;
                    continue;
                }
                if (starts_with("<?")) { skip_until("?>"); continue; }
                node.children.push_back(parse_element());
            } else {
                size_t start = pos;
                while (!eof() && peek() != '<') ++pos;
                append_decoded(node.text, in.substr(start, pos - start));
            }
        }
    }
};

}  // namespace

Node parse(std::string_view input) {
    Parser p{input};
    if (p.starts_with("\xEF\xBB\xBF")) p.pos += 3;
    p.skip_misc();
    if (p.eof() || p.peek() != '<') p.fail("no root element");
    Node root = p.parse_element();
    p.skip_misc();
    if (!p.eof()) p.fail("trailing content after root element");
    return root;
}

}  // namespace svgchart::xml
