#include "biphase/operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "biphase/error.hpp"

namespace biphase {

namespace {

constexpr double kBoundaryTol = 1e-9;

void require_same_grid(const Field& u, const SampledProblem& prob) {
    if (!(u.grid() == prob.grid())) {
        throw Error(ErrorCode::DomainError, "field and problem live on different grids");
    }
}

}  // namespace

double pairwise_sum(std::span<const double> terms) noexcept {
    if (terms.size() <= 8) return std::accumulate(terms.begin(), terms.end(), 0.0);
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

Residual minmax_operator(const Field& u, const SampledProblem& prob) {
    require_same_grid(u, prob);
    const Grid& grid = prob.grid();
    Residual r{Field(grid), 0.0};
    for (std::size_t k : grid.interior_nodes()) {
        const double lap = laplacian_at(grid, u.values(), k);
        const double f = minmax_value(lap, u[k], prob.lambda_plus()[k], prob.lambda_minus()[k]);
        r.values[k] = f;
        r.max_norm = std::max(r.max_norm, std::abs(f));
    }
    return r;
}

Residual minmax_residual(const Field& u, const SampledProblem& prob) {
    require_same_grid(u, prob);
    const Grid& grid = prob.grid();
    for (std::size_t k : grid.boundary_nodes()) {
        const double diff = std::abs(u[k] - prob.boundary()[k]);
        if (!(diff <= kBoundaryTol)) {
            std::ostringstream os;
            os << "field differs from boundary data by " << diff << " at boundary node " << k;
            throw Error(ErrorCode::BoundaryViolation, os.str());
        }
    }
    return minmax_operator(u, prob);
}

double energy(const Field& v, const SampledProblem& prob) {
    require_same_grid(v, prob);
    const Grid& grid = prob.grid();
    for (std::size_t k : grid.boundary_nodes()) {
        if (v[k] != 0.0) {
            throw Error(ErrorCode::DomainError, "energy needs a field that vanishes on the boundary (node " +
                                                    std::to_string(k) + ")");
        }
    }
    const double h2 = grid.h() * grid.h();
    const auto interior = grid.interior_nodes();
    std::vector<double> terms;
    terms.reserve(interior.size());
    for (std::size_t k : interior) {
        const double vk = v[k];
        const double lap = laplacian_at(grid, v.values(), k);
        const double lap_g = prob.boundary_neighbor_sum(k) / h2;
        terms.push_back(-0.5 * lap * vk + prob.lambda_plus()[k] * std::max(vk, 0.0) -
                        prob.lambda_minus()[k] * std::min(vk, 0.0) - lap_g * vk);
    }
    return pairwise_sum(terms);
}

double energy_delta_single_sum(double before, double after, std::size_t node, double neighbor_sum,
                               const SampledProblem& prob) noexcept {
    const Grid& grid = prob.grid();
    const double h2 = grid.h() * grid.h();
    const double arms = static_cast<double>(grid.stencil_arms());
    const double d = after - before;
    // -½(L_h v, v) contributes (arms/2h²)·v_α² - v_α·Σneighbours/h² in v_α.
    const double quadratic = (arms / (2.0 * h2)) * (after + before) * d - d * neighbor_sum / h2;
    const double lp = prob.lambda_plus()[node];
    const double lm = prob.lambda_minus()[node];
    const double linear = lp * (std::max(after, 0.0) - std::max(before, 0.0)) -
                          lm * (std::min(after, 0.0) - std::min(before, 0.0));
    const double source = prob.boundary_neighbor_sum(node) / h2 * d;
    return quadratic + linear - source;
}

double energy_delta_single(double before, double after, std::size_t node, std::span<const double> neighbors,
                           const SampledProblem& prob) noexcept {
    const double sum = std::accumulate(neighbors.begin(), neighbors.end(), 0.0);
    return energy_delta_single_sum(before, after, node, sum, prob);
}

}  // namespace biphase
