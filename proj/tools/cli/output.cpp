#include "cli/output.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "biphase/error.hpp"

#ifndef BIPHASE_VERSION
#define BIPHASE_VERSION "dev"
#endif

namespace biphase::cli {

namespace {

[[noreturn]] void csv_fail(int line, const std::string& msg) {
    throw Error(ErrorCode::ParseError, "field csv:" + std::to_string(line) + ": " + msg);
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    while (true) {
        const auto comma = line.find(',');
        out.push_back(line.substr(0, comma));
        if (comma == std::string_view::npos) break;
        line.remove_prefix(comma + 1);
    }
    return out;
}

template <typename T>
T parse_cell(std::string_view cell, int line) {
    T value{};
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
        csv_fail(line, "cannot parse '" + std::string(cell) + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("to_chars failed");
    return std::string(buf, ptr);
}

void write_field_csv(std::ostream& out, const Field& field) {
    const Grid& grid = field.grid();
    out << (grid.dim() == 1 ? "i,x,u\n" : "i,j,x,y,u\n");
    for (std::size_t k = 0; k < field.size(); ++k) {
        const NodeIndex idx = grid.multi(k);
        if (grid.dim() == 1) {
            out << idx.i << ',' << format_double(grid.coord(idx.i)) << ',' << format_double(field[k]) << '\n';
        } else {
            out << idx.i << ',' << idx.j << ',' << format_double(grid.coord(idx.i)) << ','
                << format_double(grid.coord(idx.j)) << ',' << format_double(field[k]) << '\n';
        }
    }
}

Field read_field_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) csv_fail(1, "empty input");
    int dim = 0;
    if (line == "i,x,u") {
        dim = 1;
    } else if (line == "i,j,x,y,u") {
        dim = 2;
    } else {
        csv_fail(1, "unrecognized header '" + line + "'");
    }

    struct Row {
        int i, j;
        double u;
        int line;
    };
    std::vector<Row> rows;
    int line_no = 1;
    int max_i = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != static_cast<std::size_t>(dim == 1 ? 3 : 5)) csv_fail(line_no, "wrong column count");
        Row r{parse_cell<int>(cells[0], line_no), dim == 2 ? parse_cell<int>(cells[1], line_no) : 0,
              parse_cell<double>(cells.back(), line_no), line_no};
        max_i = std::max(max_i, r.i);
        rows.push_back(r);
    }
    if (max_i < 2) csv_fail(line_no, "need at least 3 nodes per axis");
    const Grid grid = Grid::make(dim, max_i);
    if (rows.size() != grid.node_count()) csv_fail(line_no, "node count does not match a square lattice");
    std::vector<double> values(grid.node_count(), 0.0);
    std::vector<bool> seen(grid.node_count(), false);
    for (const Row& r : rows) {
        if (!grid.contains({r.i, r.j})) csv_fail(r.line, "node index out of range");
        const std::size_t k = grid.flat({r.i, r.j});
        if (seen[k]) csv_fail(r.line, "duplicate node");
        seen[k] = true;
        values[k] = r.u;
    }
    return Field(grid, std::move(values));
}

void write_traces_csv(std::ostream& out, const SolveReport& report) {
    out << "sweep,max_update,residual,energy\n";
    for (std::size_t s = 0; s < report.update_trace.size(); ++s) {
        out << (s + 1) << ',' << format_double(report.update_trace[s]) << ','
            << format_double(report.residual_trace[s]) << ',';
        if (s < report.energy_trace.size()) out << format_double(report.energy_trace[s]);
        out << '\n';
    }
}

void write_free_boundary_csv(std::ostream& out, const FreeBoundary& fb) {
    out << "kind,x,y\n";
    for (const Point& p : fb.positive_interface)
        out << "positive," << format_double(p.x) << ',' << format_double(p.y) << '\n';
    for (const Point& p : fb.negative_interface)
        out << "negative," << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

nlohmann::ordered_json field_json(const Field& field) {
    const Grid& grid = field.grid();
    nlohmann::ordered_json j;
    j["columns"] = grid.dim() == 1 ? nlohmann::ordered_json{"i", "x", "u"}
                                   : nlohmann::ordered_json{"i", "j", "x", "y", "u"};
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < field.size(); ++k) {
        const NodeIndex idx = grid.multi(k);
        if (grid.dim() == 1) {
            rows.push_back({idx.i, grid.coord(idx.i), field[k]});
        } else {
            rows.push_back({idx.i, idx.j, grid.coord(idx.i), grid.coord(idx.j), field[k]});
        }
    }
    j["rows"] = std::move(rows);
    return j;
}

nlohmann::ordered_json traces_json(const SolveReport& report) {
    nlohmann::ordered_json j;
    j["columns"] = {"sweep", "max_update", "residual", "energy"};
    auto rows = nlohmann::ordered_json::array();
    for (std::size_t s = 0; s < report.update_trace.size(); ++s) {
        nlohmann::ordered_json energy =
            s < report.energy_trace.size() ? nlohmann::ordered_json(report.energy_trace[s]) : nullptr;
        rows.push_back({s + 1, report.update_trace[s], report.residual_trace[s], energy});
    }
    j["rows"] = std::move(rows);
    return j;
}

nlohmann::ordered_json free_boundary_json(const FreeBoundary& fb) {
    nlohmann::ordered_json j;
    j["columns"] = {"kind", "x", "y"};
    auto rows = nlohmann::ordered_json::array();
    for (const Point& p : fb.positive_interface) rows.push_back({"positive", p.x, p.y});
    for (const Point& p : fb.negative_interface) rows.push_back({"negative", p.x, p.y});
    j["rows"] = std::move(rows);
    return j;
}

nlohmann::ordered_json RunManifest::to_json() const {
    nlohmann::ordered_json j;
    j["tool"] = "biphase";
    j["version"] = tool_version();
    j["command"] = command;
    j["problem"] = problem;
    j["dim"] = dim;
    j["grid_sizes"] = grid_sizes;
    j["solver"] = solver;
    j["outputs"] = outputs;
    j["seed"] = seed ? nlohmann::ordered_json(*seed) : nullptr;
    return j;
}

std::string tool_version() { return BIPHASE_VERSION; }

void write_text_file(const std::string& path, const std::string& text) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace biphase::cli
