#include "biphase/pgs.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>

#include "biphase/error.hpp"
#include "biphase/operator.hpp"

namespace biphase {

namespace {

constexpr double kAuditSlack = 1e-12;

/// Max |F_h[u]| computed from ũ and the precomputed (L_h g)_α.
double residual_from_shifted(const SampledProblem& prob, std::span<const double> shifted,
                             std::span<const std::size_t> interior, std::span<const double> lap_g) {
    const Grid& grid = prob.grid();
    double worst = 0.0;
    for (std::size_t n = 0; n < interior.size(); ++n) {
        const std::size_t k = interior[n];
        const double lap = laplacian_at(grid, shifted, k) + lap_g[n];
        const double f = minmax_value(lap, shifted[k], prob.lambda_plus()[k], prob.lambda_minus()[k]);
        worst = std::max(worst, std::abs(f));
    }
    return worst;
}

}  // namespace

std::string_view to_string(Termination t) noexcept {
    switch (t) {
        case Termination::ConvergedByUpdate: return "converged-by-update";
        case Termination::ConvergedByResidual: return "converged-by-residual";
        case Termination::SweepLimit: return "sweep-limit";
        case Termination::FixedSweeps: return "fixed-sweeps";
    }
    return "unknown";
}

SolverConfig SolverConfig::fixed_sweeps(int sweeps) {
    SolverConfig cfg;
    cfg.max_sweeps = sweeps;
    cfg.update_tol = 0.0;
    cfg.residual_tol = 0.0;
    return cfg;
}

void SolverConfig::validate() const {
    if (max_sweeps < 1) throw Error(ErrorCode::InvalidConfig, "max_sweeps must be >= 1");
    if (!(update_tol >= 0.0) || !(residual_tol >= 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "tolerances must be >= 0 (0 disables early exit)");
    }
}

double pgs_update(std::span<const double> neighbors, double modified_plus, double modified_minus,
                  double h) noexcept {
    double sum = 0.0;
    for (double v : neighbors) sum += v;
    const double c = static_cast<double>(neighbors.size());
    const double h2 = h * h;
    const double z1 = (sum - h2 * modified_plus) / c;
    if (z1 >= 0.0) return z1;
    const double z2 = (sum + h2 * modified_minus) / c;
    if (z2 <= 0.0) return z2;
    return 0.0;
}

double pgs_update(std::size_t node, std::span<const double> neighbors, const SampledProblem& prob) noexcept {
    return pgs_update(neighbors, prob.modified_plus()[node], prob.modified_minus()[node], prob.grid().h());
}

SolveReport solve(const SampledProblem& prob, const SolverConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Grid& grid = prob.grid();
    const double h = grid.h();
    const double h2 = h * h;
    const auto interior = grid.interior_nodes();

    std::vector<double> lap_g(interior.size());
    for (std::size_t n = 0; n < interior.size(); ++n) lap_g[n] = prob.boundary_neighbor_sum(interior[n]) / h2;

    // ũ: zero on the boundary for the whole solve.
    Field shifted(grid);
    if (cfg.initial_guess) {
        if (!(cfg.initial_guess->grid() == grid)) {
            throw Error(ErrorCode::DomainError, "initial guess lives on a different grid");
        }
        for (std::size_t k : interior) shifted[k] = (*cfg.initial_guess)[k];
    }

    SolveReport report(Field{grid});
    if (cfg.record_energy) report.energy_audit = EnergyAudit{0, 0, std::numeric_limits<double>::infinity(), 0.0};

    std::array<double, 4> nb_values{};
    const bool tolerances_disabled = cfg.update_tol == 0.0 && cfg.residual_tol == 0.0;

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t k : interior) {
            const Neighbors nb = grid.neighbors(k);
            for (std::size_t a = 0; a < nb.count; ++a) nb_values[a] = shifted[nb.nodes[a]];
            const std::span<const double> nbv(nb_values.data(), nb.count);
            const double before = shifted[k];
            const double after = pgs_update(nbv, prob.modified_plus()[k], prob.modified_minus()[k], h);
            const double change = after - before;
            if (report.energy_audit) {
                EnergyAudit& audit = *report.energy_audit;
                const double delta = energy_delta_single(before, after, k, nbv, prob);
                const double margin = -delta - change * change / h2;
                ++audit.updates;
                audit.worst_margin = std::min(audit.worst_margin, margin);
                audit.max_increase = std::max(audit.max_increase, delta);
                if (margin < -kAuditSlack) ++audit.violations;
            }
            shifted[k] = after;
            max_change = std::max(max_change, std::abs(change));
        }

        const double residual = residual_from_shifted(prob, shifted.values(), interior, lap_g);
        report.update_trace.push_back(max_change);
        report.residual_trace.push_back(residual);
        if (cfg.record_energy) report.energy_trace.push_back(energy(shifted, prob));
        report.sweeps = sweep;

        if (cfg.update_tol > 0.0 && max_change < cfg.update_tol) {
            report.reason = Termination::ConvergedByUpdate;
            break;
        }
        if (cfg.residual_tol > 0.0 && residual < cfg.residual_tol) {
            report.reason = Termination::ConvergedByResidual;
            break;
        }
        if (sweep == cfg.max_sweeps) {
            report.reason = tolerances_disabled ? Termination::FixedSweeps : Termination::SweepLimit;
        }
    }

    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        report.solution[k] = shifted[k] + prob.boundary()[k];
    }
    if (report.energy_audit && report.energy_audit->updates == 0) report.energy_audit->worst_margin = 0.0;
    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace biphase
