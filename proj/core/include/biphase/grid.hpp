#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace biphase {

/// Multi-index of a lattice node. `j` is unused (zero) on 1D grids.
struct NodeIndex {
    int i = 0;
    int j = 0;

    friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
};

/// Stencil neighbours of an interior node: 2 in 1D, 4 in 2D.
struct Neighbors {
    std::array<std::size_t, 4> nodes{};
    std::size_t count = 0;

    std::span<const std::size_t> view() const& { return {nodes.data(), count}; }
    // A view of a temporary would dangle inside a range-for.
    std::span<const std::size_t> view() const&& = delete;
};

/// Uniform lattice on [-1,1] or [-1,1]^2 with n subdivisions per axis.
///
/// Nodes are stored flat in row-major order (j outer, i inner). All index
/// arithmetic lives here so the solvers stay layout-agnostic. Coordinates
/// are recomputed from the index on every query.
class Grid {
public:
    /// Throws Error{InvalidGrid} unless dim is 1 or 2 and n >= 2.
    static Grid make(int dim, int n);

    int dim() const noexcept { return dim_; }
    int n() const noexcept { return n_; }
    double h() const noexcept { return h_; }

    std::size_t points_per_axis() const noexcept { return static_cast<std::size_t>(n_) + 1; }
    std::size_t node_count() const noexcept;
    std::size_t interior_count() const noexcept;

    /// x_i = -1 + i*h, with the end points pinned to exactly -1 and 1.
    double coord(int i) const noexcept;

    std::size_t flat(NodeIndex idx) const noexcept;
    NodeIndex multi(std::size_t flat) const noexcept;

    bool is_interior(NodeIndex idx) const noexcept;
    bool is_interior(std::size_t flat) const noexcept { return is_interior(multi(flat)); }
    bool contains(NodeIndex idx) const noexcept;

    /// Interior nodes in ascending lexicographic (sweep) order.
    std::vector<std::size_t> interior_nodes() const;
    std::vector<std::size_t> boundary_nodes() const;

    /// Neighbours of an interior node; left/right first, then down/up in 2D.
    Neighbors neighbors(std::size_t flat) const noexcept;

    /// Number of stencil neighbours (2 or 4); the Laplacian diagonal is -this/h^2.
    int stencil_arms() const noexcept { return 2 * dim_; }

    friend bool operator==(const Grid& a, const Grid& b) noexcept {
        return a.dim_ == b.dim_ && a.n_ == b.n_;
    }

private:
    Grid(int dim, int n);

    int dim_;
    int n_;
    double h_;
};

/// Real values on every node of a grid.
class Field {
public:
    /// Zero-filled field.
    explicit Field(const Grid& grid);
    /// Throws Error{DomainError} on a size mismatch or a non-finite value.
    Field(const Grid& grid, std::vector<double> values);

    const Grid& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }

    double operator[](std::size_t k) const noexcept { return values_[k]; }
    double& operator[](std::size_t k) noexcept { return values_[k]; }
    double at(NodeIndex idx) const { return values_[grid_.flat(idx)]; }

    std::span<const double> values() const& noexcept { return values_; }
    std::span<double> values() & noexcept { return values_; }
    std::span<const double> values() const&& = delete;

    bool all_finite() const noexcept;

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Discrete Laplacian L_h at an interior node. Throws Error{OutOfDomain} for
/// boundary or out-of-range indices.
double laplacian(const Field& field, NodeIndex idx);

/// Unchecked L_h at an interior flat index, reading the raw node values.
double laplacian_at(const Grid& grid, std::span<const double> values, std::size_t flat) noexcept;

}  // namespace biphase
