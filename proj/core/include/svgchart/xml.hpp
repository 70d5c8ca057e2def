#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace svgchart::xml {

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// One element. Attributes keep source order; `text` is the character data
// appearing directly inside the element (child element text is not merged in).
struct Node {
    std::string tag;
    std::vector<std::pair<std::string, std::string>> attributes;
    std::vector<Node> children;
    std::string text;

    const std::string* attr(std::string_view name) const;
};

// Parses a single XML document and returns its root element.
// Comments, processing instructions and DOCTYPE are skipped; CDATA becomes
// text; the five predefined entities and numeric character references are
// decoded. Throws ParseError on malformed input.
Node parse(std::string_view input);

}  // namespace svgchart::xml
