#pragma once

#include "biphase/pgs.hpp"
#include "biphase/problem.hpp"

namespace biphase {

struct RegularizationConfig {
    /// Smoothing width ε of β_ε(z) = β(z/ε).
    double eps = 1e-3;
    int max_sweeps = 1'000'000;
    /// Stop once the largest nodal change in a sweep drops below this.
    double tolerance = 1e-12;

    /// Throws Error{InvalidConfig} unless eps > 0, tolerance > 0, max_sweeps >= 1.
    void validate() const;
};

/// Monotone ramp: 0 for z <= -1, 1 for z >= 1, cubic smoothstep 3t² - 2t³
/// with t = (z+1)/2 in between. C¹, non-decreasing.
double beta(double z) noexcept;

inline double beta_eps(double z, double eps) noexcept { return beta(z / eps); }

/// Solves the regularized system L_h u = λ⁺β_ε(u) − λ⁻β_ε(−u), u = g on ∂𝒩,
/// by nonlinear Gauss-Seidel. Each node's scalar equation is solved by
/// bisection on [(S − h²λ⁺)/c, (S + h²λ⁻)/c], which always brackets the root
/// because the right-hand side lies in [−λ⁻, λ⁺].
///
/// residual_trace holds max |L_h u − λ⁺β_ε(u) + λ⁻β_ε(−u)| per sweep.
/// Termination is ConvergedByUpdate or SweepLimit.
SolveReport solve_regularized(const SampledProblem& prob, const RegularizationConfig& cfg);

}  // namespace biphase
