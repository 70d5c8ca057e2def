#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace svgchart::path {

struct EmptyPath : std::runtime_error {
    explicit EmptyPath(const std::string& what) : std::runtime_error(what) {}
};

// One explicit command; implicit repetition is expanded during parsing, so
// args.size() always equals the command's arity (0 for Z/z).
struct PathCommand {
    char op;
    std::vector<double> args;
};

struct PathProgram {
    std::vector<PathCommand> commands;
    size_t d_length = 0;  // character count of the source `d` string
};

struct PathMetrics {
    size_t d_length = 0;
    double start_x = 0, start_y = 0;
    double end_x = 0, end_y = 0;
    double endpoint_distance = 0;
    bool is_polygon = false;
    int arc_calls = 0;
};

// Arity of an op letter, or -1 if unknown.
int command_arity(char op);

// Parses an SVG path `d` string. Handles comma/whitespace separation,
// scientific notation, implicit command repetition and packed arc flags.
// Trailing garbage truncates at the last complete command. Throws EmptyPath
// when there is no valid leading moveto.
PathProgram parse_path(std::string_view d);

PathMetrics path_metrics(const PathProgram& program);

}  // namespace svgchart::path
