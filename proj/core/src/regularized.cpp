#include "biphase/regularized.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "biphase/error.hpp"

namespace biphase {

namespace {

constexpr double kBisectionWidth = 1e-14;
constexpr int kMaxHalvings = 200;

struct NodeEquation {
    double neighbor_sum;
    double arms;
    double h2;
    double lambda_plus;
    double lambda_minus;
    double eps;

    /// Strictly decreasing in u.
    double operator()(double u) const noexcept {
        return (neighbor_sum - arms * u) / h2 - lambda_plus * beta_eps(u, eps) + lambda_minus * beta_eps(-u, eps);
    }
};

double solve_node(const NodeEquation& eq) noexcept {
    double lo = (eq.neighbor_sum - eq.h2 * eq.lambda_plus) / eq.arms;
    double hi = (eq.neighbor_sum + eq.h2 * eq.lambda_minus) / eq.arms;
    for (int it = 0; it < kMaxHalvings && hi - lo > kBisectionWidth; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double f = eq(mid);
        if (f == 0.0) return mid;
        (f > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void RegularizationConfig::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorCode::InvalidConfig, "eps must be > 0");
    if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be > 0");
    if (max_sweeps < 1) throw Error(ErrorCode::InvalidConfig, "max_sweeps must be >= 1");
}

double beta(double z) noexcept {
    if (z <= -1.0) return 0.0;
    if (z >= 1.0) return 1.0;
    const double t = 0.5 * (z + 1.0);
    return t * t * (3.0 - 2.0 * t);
}

SolveReport solve_regularized(const SampledProblem& prob, const RegularizationConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    const Grid& grid = prob.grid();
    const double h2 = grid.h() * grid.h();
    const double arms = static_cast<double>(grid.stencil_arms());
    const auto interior = grid.interior_nodes();

    SolveReport report(prob.boundary_field());
    Field& u = report.solution;

    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t k : interior) {
            double sum = 0.0;
            const Neighbors nbs = grid.neighbors(k);
            for (std::size_t nb : nbs.view()) sum += u[nb];
            const NodeEquation eq{sum, arms, h2, prob.lambda_plus()[k], prob.lambda_minus()[k], cfg.eps};
            const double next = solve_node(eq);
            max_change = std::max(max_change, std::abs(next - u[k]));
            u[k] = next;
        }

        double residual = 0.0;
        for (std::size_t k : interior) {
            const double rhs =
                prob.lambda_plus()[k] * beta_eps(u[k], cfg.eps) - prob.lambda_minus()[k] * beta_eps(-u[k], cfg.eps);
            residual = std::max(residual, std::abs(laplacian_at(grid, u.values(), k) - rhs));
        }
        report.update_trace.push_back(max_change);
        report.residual_trace.push_back(residual);
        report.sweeps = sweep;

        if (max_change < cfg.tolerance) {
            report.reason = Termination::ConvergedByUpdate;
            break;
        }
        report.reason = Termination::SweepLimit;
    }

    report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace biphase
