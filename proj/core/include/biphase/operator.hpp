#pragma once

#include <cstddef>
#include <span>

#include "biphase/grid.hpp"
#include "biphase/problem.hpp"

namespace biphase {

/// Pointwise min-max operator: min(-lap + λ⁺, max(-lap - λ⁻, u)).
inline double minmax_value(double lap, double u, double lambda_plus, double lambda_minus) noexcept {
    const double upper = -lap + lambda_plus;
    const double lower = -lap - lambda_minus;
    const double inner = lower > u ? lower : u;
    return upper < inner ? upper : inner;
}

/// F_h[u] at every interior node (zero on the boundary) plus its max-norm.
struct Residual {
    Field values;
    double max_norm = 0.0;
};

/// F_h evaluated on whatever boundary values `u` carries. Used where the
/// field is not required to match g (comparison checks).
Residual minmax_operator(const Field& u, const SampledProblem& prob);

/// F_h residual of a candidate solution. Throws Error{BoundaryViolation} if
/// u differs from g by more than 1e-9 on a boundary node, and
/// Error{DomainError} if u lives on a different grid.
Residual minmax_residual(const Field& u, const SampledProblem& prob);

/// Discrete energy
///
///   J_h(v) = -½(L_h v, v) + (λ⁺, v∨0) - (λ⁻, v∧0) - (L_h g, v)
///
/// for v in 𝒦 (zero on ∂𝒩). With g zero-extended, (L_h g)_α = G_α/h² where
/// G_α sums g over the boundary neighbours of α. Node contributions are
/// combined by pairwise summation. Throws Error{DomainError} if v has a
/// nonzero boundary entry.
double energy(const Field& v, const SampledProblem& prob);

/// Exact change J_h(after) - J_h(before) when only v[node] moves from
/// `before` to `after`. `neighbors` are the current values of v at the
/// stencil neighbours (zero for boundary neighbours).
double energy_delta_single(double before, double after, std::size_t node, std::span<const double> neighbors,
                           const SampledProblem& prob) noexcept;

/// Same as above with the neighbour values already summed.
double energy_delta_single_sum(double before, double after, std::size_t node, double neighbor_sum,
                               const SampledProblem& prob) noexcept;

/// Pairwise (cascade) summation.
double pairwise_sum(std::span<const double> terms) noexcept;

}  // namespace biphase
