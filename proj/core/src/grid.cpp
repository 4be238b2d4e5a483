#include "biphase/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "biphase/error.hpp"

namespace biphase {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidGrid: return "invalid-grid";
        case ErrorCode::OutOfDomain: return "out-of-domain";
        case ErrorCode::InvalidProblem: return "invalid-problem";
        case ErrorCode::BoundaryViolation: return "boundary-violation";
        case ErrorCode::DomainError: return "domain-error";
        case ErrorCode::OracleTooLarge: return "oracle-too-large";
        case ErrorCode::UnsupportedProblem: return "unsupported-problem";
        case ErrorCode::ParseError: return "parse-error";
        case ErrorCode::InvalidConfig: return "invalid-config";
    }
    return "unknown";
}

Grid Grid::make(int dim, int n) {
    if (dim != 1 && dim != 2) {
        throw Error(ErrorCode::InvalidGrid, "grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (n < 2) {
        throw Error(ErrorCode::InvalidGrid, "grid needs n >= 2 subdivisions, got " + std::to_string(n));
    }
    return Grid(dim, n);
}

Grid::Grid(int dim, int n) : dim_(dim), n_(n), h_(2.0 / static_cast<double>(n)) {}

std::size_t Grid::node_count() const noexcept {
    const std::size_t m = points_per_axis();
    return dim_ == 1 ? m : m * m;
}

std::size_t Grid::interior_count() const noexcept {
    const auto m = static_cast<std::size_t>(n_ - 1);
    return dim_ == 1 ? m : m * m;
}

double Grid::coord(int i) const noexcept {
    if (i == 0) return -1.0;
    if (i == n_) return 1.0;
    return -1.0 + static_cast<double>(i) * h_;
}

std::size_t Grid::flat(NodeIndex idx) const noexcept {
    return static_cast<std::size_t>(idx.j) * points_per_axis() + static_cast<std::size_t>(idx.i);
}

NodeIndex Grid::multi(std::size_t flat) const noexcept {
    const std::size_t m = points_per_axis();
    return {static_cast<int>(flat % m), static_cast<int>(flat / m)};
}

bool Grid::contains(NodeIndex idx) const noexcept {
    if (idx.i < 0 || idx.i > n_) return false;
    if (dim_ == 1) return idx.j == 0;
    return idx.j >= 0 && idx.j <= n_;
}

bool Grid::is_interior(NodeIndex idx) const noexcept {
    if (!contains(idx)) return false;
    const bool i_in = idx.i >= 1 && idx.i <= n_ - 1;
    if (dim_ == 1) return i_in;
    return i_in && idx.j >= 1 && idx.j <= n_ - 1;
}

std::vector<std::size_t> Grid::interior_nodes() const {
    std::vector<std::size_t> out;
    out.reserve(interior_count());
    if (dim_ == 1) {
        for (int i = 1; i < n_; ++i) out.push_back(static_cast<std::size_t>(i));
    } else {
        for (int j = 1; j < n_; ++j)
            for (int i = 1; i < n_; ++i) out.push_back(flat({i, j}));
    }
    return out;
}

std::vector<std::size_t> Grid::boundary_nodes() const {
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k < node_count(); ++k)
        if (!is_interior(k)) out.push_back(k);
    return out;
}

Neighbors Grid::neighbors(std::size_t flat) const noexcept {
    Neighbors nb;
    nb.nodes[0] = flat - 1;
    nb.nodes[1] = flat + 1;
    if (dim_ == 1) {
        nb.count = 2;
    } else {
        const std::size_t m = points_per_axis();
        nb.nodes[2] = flat - m;
        nb.nodes[3] = flat + m;
        nb.count = 4;
    }
    return nb;
}

Field::Field(const Grid& grid) : grid_(grid), values_(grid.node_count(), 0.0) {}

Field::Field(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw Error(ErrorCode::DomainError, "field has " + std::to_string(values_.size()) +
                                                " values but the grid has " +
                                                std::to_string(grid_.node_count()) + " nodes");
    }
    if (!all_finite()) {
        throw Error(ErrorCode::DomainError, "field contains a non-finite value");
    }
}

bool Field::all_finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double laplacian_at(const Grid& grid, std::span<const double> values, std::size_t flat) noexcept {
    const Neighbors nb = grid.neighbors(flat);
    double sum = 0.0;
    for (std::size_t k : nb.view()) sum += values[k];
    const double h = grid.h();
    return (sum - static_cast<double>(nb.count) * values[flat]) / (h * h);
}

double laplacian(const Field& field, NodeIndex idx) {
    const Grid& grid = field.grid();
    if (!grid.is_interior(idx)) {
        throw Error(ErrorCode::OutOfDomain, "laplacian requested at non-interior node (" +
                                                std::to_string(idx.i) + "," + std::to_string(idx.j) + ")");
    }
    return laplacian_at(grid, field.values(), grid.flat(idx));
}

}  // namespace biphase
