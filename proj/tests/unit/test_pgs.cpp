#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "biphase/error.hpp"
#include "biphase/operator.hpp"
#include "biphase/pgs.hpp"
#include "biphase/problem.hpp"
#include "biphase/verification.hpp"
#include "test_support.hpp"

namespace biphase {
namespace {

using testing::max_abs_diff;
using testing::random_interior_field;

SolverConfig tight() {
    SolverConfig cfg;
    cfg.update_tol = 0.0;
    cfg.residual_tol = 1e-11;
    return cfg;
}

TEST(PgsUpdate, WorkedExamples) {
    const std::array<double, 2> pos{0.5, 0.3}, neg{-0.5, -0.3}, band{0.02, -0.01};
    EXPECT_NEAR(pgs_update(pos, 8.0, 8.0, 0.1), 0.36, 1e-15);
    EXPECT_NEAR(pgs_update(neg, 8.0, 8.0, 0.1), -0.36, 1e-15);
    EXPECT_EQ(pgs_update(band, 8.0, 8.0, 0.1), 0.0);
}

TEST(PgsUpdate, DeadBandOrdering) {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> nbd(-1.0, 1.0), lam(-50.0, 50.0), hd(0.01, 0.5);
    for (int dim : {1, 2}) {
        const std::size_t c = dim == 1 ? 2 : 4;
        for (int t = 0; t < 5000; ++t) {
            std::array<double, 4> nb{};
            double sum = 0.0;
            for (std::size_t a = 0; a < c; ++a) sum += (nb[a] = nbd(rng));
            const double mp = lam(rng);
            const double mm = std::abs(lam(rng)) - mp + 0.01;  // λ̃⁺ + λ̃⁻ > 0
            const double h = hd(rng);
            const double z1 = (sum - h * h * mp) / static_cast<double>(c);
            const double z2 = (sum + h * h * mm) / static_cast<double>(c);
            EXPECT_NEAR(z2 - z1, h * h * (mp + mm) / static_cast<double>(c), 1e-12);
            const int cases = (z1 >= 0.0) + (z2 <= 0.0) + (z1 < 0.0 && z2 > 0.0);
            EXPECT_EQ(cases, 1);
            const double u = pgs_update(std::span<const double>(nb.data(), c), mp, mm, h);
            if (z1 >= 0.0) EXPECT_EQ(u, z1);
            else if (z2 <= 0.0) EXPECT_EQ(u, z2);
            else EXPECT_EQ(u, 0.0);
        }
    }
}

// J_h restricted to one coordinate is quadratic on each half-line, so three
// evaluations of the full energy fix it exactly on each side.
double coordinate_minimizer_oracle(Field v, std::size_t k, const SampledProblem& p) {
    auto j = [&](double t) {
        v[k] = t;
        return energy(v, p);
    };
    double best_t = 0.0, best_j = j(0.0);
    for (double side : {1.0, -1.0}) {
        const double j0 = j(0.0), j1 = j(side), j2 = j(2.0 * side);
        // q(s) = a s² + b s + j0 in the variable s = t/side >= 0
        const double a = (j2 - 2.0 * j1 + j0) / 2.0;
        const double b = j1 - j0 - a;
        const double s = std::max(0.0, -b / (2.0 * a));
        const double cand = j(side * s);
        if (cand < best_j) {
            best_j = cand;
            best_t = side * s;
        }
    }
    return best_t;
}

TEST(PgsUpdate, IsExactCoordinateMinimizer) {
    std::mt19937_64 rng(99);
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, dim == 1 ? 9 : 5);
        for (int trial = 0; trial < 40; ++trial) {
            const SampledProblem p = random_problem(g, 1000 + trial);
            const Field v = random_interior_field(g, rng, 0.3);
            const auto interior = g.interior_nodes();
            const std::size_t k = interior[rng() % interior.size()];
            std::vector<double> nb;
            const Neighbors nbs = g.neighbors(k);
            for (std::size_t m : nbs.view()) nb.push_back(v[m]);
            EXPECT_NEAR(pgs_update(k, nb, p), coordinate_minimizer_oracle(v, k, p), 1e-10)
                << "dim=" << dim << " trial=" << trial;
        }
    }
}

TEST(Solve, ZeroDataConvergesInOneSweep) {
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, 10);
        std::vector<double> lp(g.node_count(), 0.0), lm(g.node_count(), 0.0), bnd(g.node_count(), 0.0);
        for (std::size_t k : g.interior_nodes()) {
            lp[k] = 0.0;
            lm[k] = 3.0;
        }
        const SolveReport r = solve(SampledProblem::from_fields(g, lp, lm, bnd));
        EXPECT_TRUE(r.converged());
        EXPECT_EQ(r.sweeps, 1);
        for (double x : r.solution.values()) EXPECT_EQ(x, 0.0);
    }
}

TEST(Solve, SingleInteriorNodeExample1) {
    const SolveReport r = solve(sample(example1(), Grid::make(1, 2)));
    EXPECT_EQ(r.solution[1], 0.0);
    EXPECT_EQ(r.solution[0], -1.0);
    EXPECT_EQ(r.solution[2], 1.0);
}

TEST(Solve, BoundaryEqualsDataExactly) {
    const Grid g = Grid::make(2, 12);
    const SampledProblem p = sample(example2(), g);
    const SolveReport r = solve(p);
    for (std::size_t k : g.boundary_nodes()) EXPECT_EQ(r.solution[k], p.boundary()[k]);
}

TEST(Solve, EnergyAuditAndMonotoneTrace) {
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, dim == 1 ? 20 : 16);
        SolverConfig cfg;
        cfg.record_energy = true;
        const SolveReport r = solve(sample(dim == 1 ? example1() : example2(), g), cfg);
        ASSERT_TRUE(r.energy_audit.has_value());
        EXPECT_GT(r.energy_audit->updates, 0u);
        EXPECT_EQ(r.energy_audit->violations, 0u);
        EXPECT_GE(r.energy_audit->worst_margin, -1e-12);
        ASSERT_EQ(r.energy_trace.size(), static_cast<std::size_t>(r.sweeps));
        for (std::size_t s = 1; s < r.energy_trace.size(); ++s)
            EXPECT_LE(r.energy_trace[s], r.energy_trace[s - 1] + 1e-12);
    }
}

TEST(Solve, NoAuditUnlessRequested) {
    const SolveReport r = solve(sample(example1(), Grid::make(1, 10)));
    EXPECT_FALSE(r.energy_audit.has_value());
    EXPECT_TRUE(r.energy_trace.empty());
}

// At a converged point one more sweep moves nothing and the residual is zero,
// and both traces shrink together.
TEST(Solve, FixedPointEquivalence) {
    for (int dim : {1, 2}) {
        const Grid g = Grid::make(dim, dim == 1 ? 30 : 12);
        const SampledProblem p = sample(dim == 1 ? example1() : example2(), g);
        const SolveReport r = solve(p, tight());
        ASSERT_TRUE(r.converged());
        const double scale = 1.0 + p.max_lambda_sum();
        EXPECT_LE(minmax_residual(r.solution, p).max_norm, 1e-10 * scale);

        Field shifted(g);
        for (std::size_t k : g.interior_nodes()) shifted[k] = r.solution[k];
        double max_change = 0.0;
        for (std::size_t k : g.interior_nodes()) {
            std::vector<double> nb;
            const Neighbors nbs = g.neighbors(k);
            for (std::size_t m : nbs.view()) nb.push_back(shifted[m]);
            const double next = pgs_update(k, nb, p);
            max_change = std::max(max_change, std::abs(next - shifted[k]));
            shifted[k] = next;
        }
        EXPECT_LE(max_change, 1e-10 * scale);
    }
}

TEST(Solve, ConvergedSolutionSatisfiesBand) {
    const Grid g = Grid::make(2, 14);
    const SampledProblem p = sample(example2(), g);
    const SolveReport r = solve(p, tight());
    for (std::size_t k : g.interior_nodes()) {
        const double lap = laplacian_at(g, r.solution.values(), k);
        EXPECT_GE(lap, -p.lambda_minus()[k] - 1e-8);
        EXPECT_LE(lap, p.lambda_plus()[k] + 1e-8);
    }
}

TEST(Solve, FixedSweepsRunsExactlyThatMany) {
    const SolveReport r = solve(sample(example1(), Grid::make(1, 40)), SolverConfig::fixed_sweeps(17));
    EXPECT_EQ(r.sweeps, 17);
    EXPECT_EQ(r.reason, Termination::FixedSweeps);
    EXPECT_EQ(r.update_trace.size(), 17u);
    EXPECT_EQ(r.residual_trace.size(), 17u);
}

TEST(Solve, SweepLimitIsReportedNotThrown) {
    SolverConfig cfg;
    cfg.max_sweeps = 3;
    const SolveReport r = solve(sample(example1(), Grid::make(1, 60)), cfg);
    EXPECT_EQ(r.reason, Termination::SweepLimit);
    EXPECT_FALSE(r.converged());
}

TEST(Solve, InitialGuessIndependence) {
    std::mt19937_64 rng(4);
    const Grid g = Grid::make(2, 10);
    const SampledProblem p = sample(example2(), g);
    const SolveReport a = solve(p, tight());
    SolverConfig cfg = tight();
    cfg.initial_guess = random_interior_field(g, rng, 2.0);
    const SolveReport b = solve(p, cfg);
    ASSERT_TRUE(a.converged() && b.converged());
    EXPECT_LE(max_abs_diff(a.solution, b.solution), 1e-9);
}

TEST(Solve, InvalidConfig) {
    const SampledProblem p = sample(example1(), Grid::make(1, 4));
    SolverConfig cfg;
    cfg.max_sweeps = 0;
    EXPECT_THROW((void)solve(p, cfg), Error);
    cfg = {};
    cfg.update_tol = -1.0;
    EXPECT_THROW((void)solve(p, cfg), Error);
    cfg = {};
    cfg.initial_guess = Field(Grid::make(1, 5));
    EXPECT_THROW((void)solve(p, cfg), Error);
}

TEST(Termination, Names) {
    EXPECT_EQ(to_string(Termination::ConvergedByUpdate), "converged-by-update");
    EXPECT_EQ(to_string(Termination::FixedSweeps), "fixed-sweeps");
}

}  // namespace
}  // namespace biphase
