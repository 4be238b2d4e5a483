#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "biphase/grid.hpp"
#include "biphase/problem.hpp"

namespace biphase {

enum class Termination {
    ConvergedByUpdate,
    ConvergedByResidual,
    SweepLimit,
    /// Both tolerances disabled and the requested sweep count was run.
    FixedSweeps,
};

std::string_view to_string(Termination t) noexcept;

struct SolverConfig {
    int max_sweeps = 1'000'000;
    /// Stop once the largest |change| in a sweep drops below this; 0 disables.
    double update_tol = 1e-12;
    /// Stop once max |F_h[u]| drops below this; 0 disables.
    double residual_tol = 1e-10;
    bool record_energy = false;
    /// Starting field; only interior values are read. Zero interior when empty.
    std::optional<Field> initial_guess;

    /// Exactly `sweeps` sweeps with early exit disabled.
    static SolverConfig fixed_sweeps(int sweeps);

    /// Throws Error{InvalidConfig}.
    void validate() const;
};

/// Per-update check of the energy-decrease inequality
/// J(before) - J(after) >= (after - before)²/h² - 1e-12.
struct EnergyAudit {
    std::size_t updates = 0;
    std::size_t violations = 0;
    /// min over updates of (decrease - change²/h²).
    double worst_margin = 0.0;
    /// Largest single-update energy increase seen (0 if none).
    double max_increase = 0.0;
};

struct SolveReport {
    explicit SolveReport(Field initial) : solution(std::move(initial)) {}

    Field solution;
    int sweeps = 0;
    Termination reason = Termination::SweepLimit;
    std::vector<double> update_trace;
    std::vector<double> residual_trace;
    /// J_h(u - g) after each sweep; empty unless record_energy.
    std::vector<double> energy_trace;
    std::optional<EnergyAudit> energy_audit;
    double wall_seconds = 0.0;

    bool converged() const noexcept {
        return reason == Termination::ConvergedByUpdate || reason == Termination::ConvergedByResidual;
    }
    double final_residual() const noexcept { return residual_trace.empty() ? 0.0 : residual_trace.back(); }
};

/// One projected Gauss-Seidel node update on the shifted unknown ũ = u - g.
///
/// With S the sum of the current neighbour values (2 in 1D, 4 in 2D) and
/// c = neighbors.size():
///   z¹ = (S - h²λ̃⁺)/c,  z² = (S + h²λ̃⁻)/c,
/// returns z¹ if z¹ >= 0, else z² if z² <= 0, else 0.
double pgs_update(std::span<const double> neighbors, double modified_plus, double modified_minus,
                  double h) noexcept;

double pgs_update(std::size_t node, std::span<const double> neighbors, const SampledProblem& prob) noexcept;

/// Projected Gauss-Seidel on the discrete min-max system. Sweeps interior
/// nodes in ascending lexicographic order, updating in place. Non-convergence
/// is reported through SolveReport::reason, never thrown.
SolveReport solve(const SampledProblem& prob, const SolverConfig& cfg = {});

}  // namespace biphase
