#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "biphase/grid.hpp"
#include "biphase/pgs.hpp"
#include "biphase/verification.hpp"

namespace biphase::cli {

/// Shortest decimal that reads back to the same double ("." separator).
std::string format_double(double value);

/// Header `i,x,u` (1D) or `i,j,x,y,u` (2D), one row per node, LF endings.
void write_field_csv(std::ostream& out, const Field& field);

/// Inverse of write_field_csv. Throws Error{ParseError} with a line number.
Field read_field_csv(std::istream& in);

/// Header `sweep,max_update,residual,energy`; energy is empty when not recorded.
void write_traces_csv(std::ostream& out, const SolveReport& report);

/// Header `kind,x,y` with kind in {positive,negative}.
void write_free_boundary_csv(std::ostream& out, const FreeBoundary& fb);

nlohmann::ordered_json field_json(const Field& field);
nlohmann::ordered_json traces_json(const SolveReport& report);
nlohmann::ordered_json free_boundary_json(const FreeBoundary& fb);

/// Everything needed to regenerate an output artifact.
struct RunManifest {
    std::string command;
    std::string problem;
    int dim = 1;
    std::vector<int> grid_sizes;
    nlohmann::ordered_json solver = nlohmann::ordered_json::object();
    std::vector<std::string> outputs;
    std::optional<std::uint64_t> seed;

    nlohmann::ordered_json to_json() const;
};

std::string tool_version();

/// Writes `text` to `path`, creating parent directories. Throws
/// std::runtime_error on I/O failure.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace biphase::cli
