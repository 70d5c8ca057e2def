#include "svgchart/path_data.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace svgchart::path {

int command_arity(char op) {
    switch (op) {
        case 'M': case 'm': case 'L': case 'l': case 'T': case 't': return 2;
        case 'H': case 'h': case 'V': case 'v': return 1;
        case 'C': case 'c': return 6;
        case 'S': case 's': case 'Q': case 'q': return 4;
        case 'A': case 'a': return 7;
        case 'Z': case 'z': return 0;
        default: return -1;
    }
}

namespace {

struct Scanner {
    std::string_view in;
    size_t pos = 0;

    bool eof() const { return pos >= in.size(); }
    char peek() const { return in[pos]; }

    void skip_separators() {
        while (!eof() && (std::isspace(static_cast<unsigned char>(in[pos])) || in[pos] == ','))
            ++pos;
    }

    std::optional<double> number() {
        skip_separators();
        size_t start = pos;
        size_t p = pos;
        auto at = [&](size_t i) { return i < in.size() ? in[i] : '\0'; };
        if (at(p) == '+' || at(p) == '-') ++p;
        size_t mantissa_digits = 0;
        while (std::isdigit(static_cast<unsigned char>(at(p)))) { ++p; ++mantissa_digits; }
        if (at(p) == '.') {
            ++p;
            while (std::isdigit(static_cast<unsigned char>(at(p)))) { ++p; ++mantissa_digits; }
        }
        if (mantissa_digits == 0) return std::nullopt;
        if (at(p) == 'e' || at(p) == 'E') {
            size_t q = p + 1;
            if (at(q) == '+' || at(q) == '-') ++q;
            if (std::isdigit(static_cast<unsigned char>(at(q)))) {
                ++q;
                while (std::isdigit(static_cast<unsigned char>(at(q)))) ++q;
                p = q;
            }
        }
        std::string buf(in.substr(start, p - start));
        pos = p;
        return std::strtod(buf.c_str(), nullptr);
    }

    // Arc flags are single characters and may be packed without separators.
    std::optional<double> flag() {
        skip_separators();
        if (eof()) return std::nullopt;
        if (in[pos] == '0' || in[pos] == '1') return static_cast<double>(in[pos++] - '0');
        return std::nullopt;
    }
};

}  // namespace

PathProgram parse_path(std::string_view d) {
    PathProgram program;
    program.d_length = d.size();

    Scanner s{d};
    char current = '\0';
    for (;;) {
        s.skip_separators();
        if (s.eof()) break;
        char op;
        char c = s.peek();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            if (command_arity(c) < 0) break;  // trailing garbage truncates
            op = c;
            ++s.pos;
        } else {
            // implicit repetition; a moveto repeats as lineto
            if (current == '\0' || current == 'Z' || current == 'z') break;
            op = current == 'M' ? 'L' : current == 'm' ? 'l' : current;
        }
        if (program.commands.empty() && op != 'M' && op != 'm')
            throw EmptyPath("path data does not start with a moveto");

        int arity = command_arity(op);
        std::vector<double> args;
        args.reserve(static_cast<size_t>(arity));
        bool complete = true;
        for (int i = 0; i < arity; ++i) {
            bool is_arc_flag = (op == 'A' || op == 'a') && (i == 3 || i == 4);
            auto value = is_arc_flag ? s.flag() : s.number();
            if (!value) { complete = false; break; }
            args.push_back(*value);
        }
        if (!complete) break;  // drop the partial group, keep the valid prefix
        program.commands.push_back({op, std::move(args)});
        current = op;
    }

    if (program.commands.empty())
        throw EmptyPath("no valid leading moveto");
    return program;
}

PathMetrics path_metrics(const PathProgram& program) {
    PathMetrics m;
    m.d_length = program.d_length;

    double cx = 0, cy = 0;
    double subpath_x = 0, subpath_y = 0;
    bool have_start = false;

    for (const auto& cmd : program.commands) {
        const auto& a = cmd.args;
        switch (cmd.op) {
            case 'M': cx = a[0]; cy = a[1]; subpath_x = cx; subpath_y = cy; break;
            case 'm': cx += a[0]; cy += a[1]; subpath_x = cx; subpath_y = cy; break;
            case 'L': case 'T': cx = a[0]; cy = a[1]; break;
            case 'l': case 't': cx += a[0]; cy += a[1]; break;
            case 'H': cx = a[0]; break;
            case 'h': cx += a[0]; break;
            case 'V': cy = a[0]; break;
            case 'v': cy += a[0]; break;
            case 'C': cx = a[4]; cy = a[5]; break;
            case 'c': cx += a[4]; cy += a[5]; break;
            case 'S': case 'Q': cx = a[2]; cy = a[3]; break;
            case 's': case 'q': cx += a[2]; cy += a[3]; break;
            case 'A': cx = a[5]; cy = a[6]; ++m.arc_calls; break;
            case 'a': cx += a[5]; cy += a[6]; ++m.arc_calls; break;
            case 'Z': case 'z': cx = subpath_x; cy = subpath_y; break;
            default: break;
        }
        if (!have_start) {
            m.start_x = cx;
            m.start_y = cy;
            have_start = true;
        }
    }

    m.end_x = cx;
    m.end_y = cy;
    m.endpoint_distance = std::hypot(m.end_x - m.start_x, m.end_y - m.start_y);
    char last = program.commands.back().op;
    m.is_polygon = last == 'Z' || last == 'z' || m.endpoint_distance <= 1e-6;
    return m;
}

}  // namespace svgchart::path
