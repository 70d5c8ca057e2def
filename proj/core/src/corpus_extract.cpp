#include "svgchart/corpus.hpp"

#include <algorithm>
#include <cctype>

namespace svgchart::corpus {

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool tag_boundary(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '>' || c == '/';
}

// Finds "<name" occurrences at tag boundaries in lowercased html.
size_t find_tag(const std::string& haystack_lower, std::string_view name, size_t from) {
    std::string needle = "<" + std::string(name);
    for (size_t pos = haystack_lower.find(needle, from); pos != std::string::npos;
         pos = haystack_lower.find(needle, pos + 1)) {
        size_t after = pos + needle.size();
        if (after >= haystack_lower.size() || tag_boundary(haystack_lower[after])) return pos;
    }
    return std::string::npos;
}

std::string collect_page_styles(const std::string& html, const std::string& html_lower) {
    std::string styles;
    size_t pos = 0;
    for (;;) {
        size_t open = find_tag(html_lower, "style", pos);
        if (open == std::string::npos) break;
        size_t open_end = html_lower.find('>', open);
        if (open_end == std::string::npos) break;
        size_t close = html_lower.find("</style", open_end);
        if (close == std::string::npos) break;
        styles += html.substr(open_end + 1, close - open_end - 1);
        styles += "\n";
        pos = html_lower.find('>', close);
        if (pos == std::string::npos) break;
        ++pos;
    }
    return styles;
}

// Matches the closing of the <svg ...> subtree starting at `start`.
// Returns one-past-the-end offset, or npos.
size_t find_svg_end(const std::string& html_lower, size_t start) {
    size_t pos = start;
    int depth = 0;
    for (;;) {
        size_t open = find_tag(html_lower, "svg", pos);
        size_t close = html_lower.find("</svg", pos);
        if (open != std::string::npos && (close == std::string::npos || open < close)) {
            size_t gt = html_lower.find('>', open);
            if (gt == std::string::npos) return std::string::npos;
            bool self_closing = gt > open && html_lower[gt - 1] == '/';
            if (!self_closing) ++depth;
            else if (depth == 0) return gt + 1;  // lone <svg ... />
            pos = gt + 1;
            continue;
        }
        if (close == std::string::npos) return std::string::npos;
        size_t gt = html_lower.find('>', close);
        if (gt == std::string::npos) return std::string::npos;
        if (--depth == 0) return gt + 1;
        pos = gt + 1;
    }
}

bool has_excluded_content(const std::string& svg_lower) {
    for (const char* tag : {"animate", "animatetransform", "animatemotion", "script"})
        if (find_tag(svg_lower, tag, 0) != std::string::npos) return true;
    return false;
}

std::string make_standalone(std::string svg, const std::string& page_styles) {
    std::string svg_lower = lower(svg);
    size_t open_end = svg.find('>');
    if (open_end == std::string::npos) return svg;

    if (svg_lower.substr(0, open_end).find("xmlns") == std::string::npos) {
        const std::string ns = " xmlns=\"http://www.w3.org/2000/svg\"";
        size_t insert_at = svg[open_end - 1] == '/' ? open_end - 1 : open_end;
        svg.insert(insert_at, ns);
    }

    if (!page_styles.empty()) {
        std::string block = "<style>" + page_styles + "</style>";
        size_t close = lower(svg).rfind("</svg");
        if (close != std::string::npos) {
            svg.insert(close, block);
        } else {
            // self-closing root: reopen it so the style block has a home
            size_t end = svg.rfind("/>");
            if (end != std::string::npos)
                svg = svg.substr(0, end) + ">" + block + "</svg>";
        }
    }
    return svg;
}

}  // namespace

std::vector<ExtractedSvg> extract_svgs_from_html(const PageDocument& page) {
    std::vector<ExtractedSvg> out;
    const std::string& html = page.body;
    const std::string html_lower = lower(html);
    const std::string page_styles = collect_page_styles(html, html_lower);

    size_t pos = 0;
    for (;;) {
        size_t start = find_tag(html_lower, "svg", pos);
        if (start == std::string::npos) break;
        size_t end = find_svg_end(html_lower, start);
        if (end == std::string::npos) break;

        std::string raw = html.substr(start, end - start);
        ExtractedSvg extracted;
        if (has_excluded_content(lower(raw))) extracted.exclusion = "animation/script";
        extracted.svg_text = make_standalone(std::move(raw), page_styles);
        out.push_back(std::move(extracted));
        pos = end;
    }
    return out;
}

std::vector<std::string> extract_links(const PageDocument& page) {
    std::vector<std::string> out;
    const std::string html_lower = lower(page.body);
    size_t pos = 0;
    for (;;) {
        size_t a = find_tag(html_lower, "a", pos);
        if (a == std::string::npos) break;
        size_t gt = html_lower.find('>', a);
        if (gt == std::string::npos) break;
        std::string_view tag(page.body.data() + a, gt - a);
        std::string tag_lower = html_lower.substr(a, gt - a);
        size_t href = tag_lower.find("href");
        if (href != std::string::npos) {
            size_t eq = tag.find('=', href);
            if (eq != std::string_view::npos) {
                size_t v = eq + 1;
                while (v < tag.size() && std::isspace(static_cast<unsigned char>(tag[v]))) ++v;
                std::string value;
                if (v < tag.size() && (tag[v] == '"' || tag[v] == '\'')) {
                    size_t close = tag.find(tag[v], v + 1);
                    if (close != std::string_view::npos)
                        value = std::string(tag.substr(v + 1, close - v - 1));
                } else {
                    size_t end = v;
                    while (end < tag.size() &&
                           !std::isspace(static_cast<unsigned char>(tag[end])))
                        ++end;
                    value = std::string(tag.substr(v, end - v));
                }
                if (auto resolved = resolve_href(page.url, value)) out.push_back(*resolved);
            }
        }
        pos = gt + 1;
    }
    return out;
}

std::string Url::origin() const {
    std::string out = scheme + "://" + host;
    if (port != 0 && !((scheme == "http" && port == 80) || (scheme == "https" && port == 443)))
        out += ":" + std::to_string(port);
    return out;
}

std::optional<Url> parse_url(std::string_view url) {
    size_t scheme_end = url.find("://");
    if (scheme_end == std::string_view::npos) return std::nullopt;
    Url out;
    out.scheme = lower(url.substr(0, scheme_end));
    if (out.scheme != "http" && out.scheme != "https") return std::nullopt;

    std::string_view rest = url.substr(scheme_end + 3);
    size_t path_start = rest.find('/');
    std::string_view authority = path_start == std::string_view::npos ? rest : rest.substr(0, path_start);
    out.path = path_start == std::string_view::npos ? "/" : std::string(rest.substr(path_start));

    size_t colon = authority.rfind(':');
    if (colon != std::string_view::npos) {
        out.host = lower(authority.substr(0, colon));
        try {
            out.port = std::stoi(std::string(authority.substr(colon + 1)));
        } catch (const std::exception&) {
            return std::nullopt;
        }
    } else {
        out.host = lower(authority);
    }
    if (out.host.empty()) return std::nullopt;

    size_t frag = out.path.find('#');
    if (frag != std::string::npos) out.path.resize(frag);
    if (out.path.empty()) out.path = "/";
    return out;
}

std::optional<std::string> resolve_href(const std::string& base_url, std::string_view href) {
    while (!href.empty() && std::isspace(static_cast<unsigned char>(href.front()))) href.remove_prefix(1);
    while (!href.empty() && std::isspace(static_cast<unsigned char>(href.back()))) href.remove_suffix(1);
    if (href.empty() || href.front() == '#') return std::nullopt;
    std::string h = lower(href.substr(0, 11));
    if (h.starts_with("javascript:") || h.starts_with("mailto:") || h.starts_with("data:"))
        return std::nullopt;

    if (href.starts_with("http://") || href.starts_with("https://")) {
        auto url = parse_url(href);
        if (!url) return std::nullopt;
        return url->full();
    }

    auto base = parse_url(base_url);
    if (!base) return std::nullopt;

    std::string path;
    if (href.starts_with("//")) {
        auto url = parse_url(base->scheme + ":" + std::string(href));
        if (!url) return std::nullopt;
        return url->full();
    }
    if (href.front() == '/') {
        path = std::string(href);
    } else {
        std::string dir = base->path.substr(0, base->path.rfind('/') + 1);
        path = dir + std::string(href);
    }

    size_t frag = path.find('#');
    if (frag != std::string::npos) path.resize(frag);

    // normalize ./ and ../
    std::vector<std::string> segments;
    size_t i = 0;
    while (i <= path.size()) {
        size_t slash = path.find('/', i);
        std::string seg = path.substr(i, slash == std::string::npos ? std::string::npos : slash - i);
        if (seg == "..") {
            if (!segments.empty()) segments.pop_back();
        } else if (!seg.empty() && seg != ".") {
            segments.push_back(seg);
        }
        if (slash == std::string::npos) break;
        i = slash + 1;
    }
    std::string normalized = "/";
    for (size_t s = 0; s < segments.size(); ++s) {
        normalized += segments[s];
        if (s + 1 < segments.size()) normalized += "/";
    }
    if (path.ends_with("/") && normalized.back() != '/') normalized += "/";
    return base->origin() + normalized;
}

}  // namespace svgchart::corpus
