#include <gtest/gtest.h>

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
    cfg.residual_tol = 1e-12;
    return cfg;
}

Field shifted(const Field& u, const SampledProblem& p) {
    Field v(u.grid());
    for (std::size_t k : u.grid().interior_nodes()) v[k] = u[k] - p.boundary()[k];
    return v;
}

TEST(Oracle, SingleNodeExample1) {
    const SampledProblem p = sample(example1(), Grid::make(1, 2));
    const OracleResult r = oracle_solve(p);
    EXPECT_EQ(r.method, OracleMethod::SignEnumeration);
    EXPECT_EQ(r.patterns_tried, 3u);
    EXPECT_EQ(r.patterns_consistent, 1u);
    EXPECT_NEAR(r.solution[1], 0.0, 1e-15);
    EXPECT_EQ(r.solution[0], -1.0);
}

TEST(Oracle, ZeroDataGivesZeroField) {
    const Grid g = Grid::make(2, 4);
    std::vector<double> lp(g.node_count(), 0.0), lm(g.node_count(), 0.0), bnd(g.node_count(), 0.0);
    for (std::size_t k : g.interior_nodes()) {
        lp[k] = 2.0;
        lm[k] = 0.5;
    }
    const Field u = oracle_minimize(SampledProblem::from_fields(g, lp, lm, bnd));
    for (double x : u.values()) EXPECT_NEAR(x, 0.0, 1e-15);
}

TEST(Oracle, AgreesWithPgsOnRandomProblems) {
    int count = 0;
    for (int n = 2; n <= 8; ++n) {
        for (int s = 0; s < 12; ++s, ++count) {
            const SampledProblem p = random_problem(Grid::make(1, n), 100 * n + s);
            EXPECT_LE(oracle_discrepancy(p, tight()), 1e-8) << "1D n=" << n << " seed=" << s;
        }
    }
    for (int n : {3, 4}) {
        for (int s = 0; s < 10; ++s, ++count) {
            const SampledProblem p = random_problem(Grid::make(2, n), 7000 + 100 * n + s);
            EXPECT_LE(oracle_discrepancy(p, tight()), 1e-8) << "2D n=" << n << " seed=" << s;
        }
    }
    EXPECT_GE(count, 100);
}

TEST(Oracle, CoordinateDescentBranchAgrees) {
    // 2D n=5 has 16 interior nodes, past the enumeration limit.
    const SampledProblem p = random_problem(Grid::make(2, 5), 42);
    const OracleResult r = oracle_solve(p);
    EXPECT_EQ(r.method, OracleMethod::CoordinateDescent);
    EXPECT_LE(max_abs_diff(r.solution, solve(p, tight()).solution), 1e-8);
}

// The PGS limit minimizes J_h: random perturbations never go lower.
TEST(Oracle, PgsSolutionMinimizesEnergy) {
    std::mt19937_64 rng(5);
    const Grid g = Grid::make(2, 6);
    const SampledProblem p = random_problem(g, 77);
    const Field v = shifted(solve(p, tight()).solution, p);
    const double j = energy(v, p);
    EXPECT_NEAR(oracle_solve(p).energy, j, 1e-9 * (1.0 + std::abs(j)));
    for (int t = 0; t < 200; ++t) {
        const Field d = random_interior_field(g, rng, t < 100 ? 1e-3 : 1.0);
        Field w = v;
        for (std::size_t k : g.interior_nodes()) w[k] += d[k];
        EXPECT_GE(energy(w, p), j - 1e-12);
    }
}

TEST(Oracle, TooLarge) {
    const SampledProblem p = random_problem(Grid::make(2, 10), 1);
    try {
        (void)oracle_solve(p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::OracleTooLarge);
    }
}

TEST(RandomProblem, DeterministicAndInRange) {
    const Grid g = Grid::make(2, 4);
    const SampledProblem a = random_problem(g, 9), b = random_problem(g, 9), c = random_problem(g, 10);
    bool differs = false;
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        EXPECT_EQ(a.lambda_plus()[k], b.lambda_plus()[k]);
        EXPECT_EQ(a.boundary()[k], b.boundary()[k]);
        differs |= a.lambda_plus()[k] != c.lambda_plus()[k];
        if (g.is_interior(k)) {
            EXPECT_GE(a.lambda_plus()[k], 0.1);
            EXPECT_LE(a.lambda_minus()[k], 10.0);
        } else {
            EXPECT_GE(a.boundary()[k], -1.0);
            EXPECT_LE(a.boundary()[k], 1.0);
        }
    }
    EXPECT_TRUE(differs);
}

TEST(MaxError, Examples) {
    const Grid g = Grid::make(1, 20);
    const ProblemSpec spec = example1();
    Field u(g);
    for (std::size_t k = 0; k < g.node_count(); ++k) u[k] = (*spec.exact)({g.coord(static_cast<int>(k)), 0.0});
    EXPECT_EQ(max_error(u, spec).max_error, 0.0);
    u[7] += 0.125;
    const ErrorReport r = max_error(u, spec, 40);
    EXPECT_DOUBLE_EQ(r.max_error, 0.125);
    EXPECT_EQ(r.n, 20);
    EXPECT_EQ(r.sweeps, 40);
    EXPECT_DOUBLE_EQ(r.error_field[7], 0.125);
}

TEST(MaxError, Unsupported) {
    try {
        (void)max_error(Field(Grid::make(2, 4)), example2());
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::UnsupportedProblem);
    }
    EXPECT_THROW((void)max_error(Field(Grid::make(2, 4)), example1()), Error);
}

TEST(Comparison, Reflexive) {
    const Grid g = Grid::make(2, 8);
    const SampledProblem p = sample(example2(), g);
    const Field u = solve(p).solution;
    EXPECT_EQ(check_comparison(u, u, p), Comparison::Holds);
}

TEST(Comparison, UniformShiftDown) {
    const Grid g = Grid::make(1, 20);
    const SampledProblem p = sample(example1(), g);
    const Field v2 = solve(p, tight()).solution;
    for (double c : {1e-3, 0.1, 2.0}) {
        Field v1 = v2;
        for (double& x : v1.values()) x -= c;
        EXPECT_EQ(check_comparison(v1, v2, p), Comparison::Holds) << c;
        EXPECT_EQ(check_comparison(v2, v1, p), Comparison::PremisesNotMet) << c;
    }
}

TEST(Comparison, PremiseGate) {
    std::mt19937_64 rng(12);
    const Grid g = Grid::make(2, 6);
    const SampledProblem p = sample(example2(), g);
    Field v1 = random_interior_field(g, rng), v2 = random_interior_field(g, rng);
    v1[g.boundary_nodes().front()] = 1.0;
    v2[g.boundary_nodes().front()] = 0.0;
    EXPECT_EQ(check_comparison(v1, v2, p), Comparison::PremisesNotMet);
}

TEST(Comparison, GridMismatch) {
    const SampledProblem p = sample(example1(), Grid::make(1, 6));
    try {
        (void)check_comparison(Field(Grid::make(1, 6)), Field(Grid::make(1, 8)), p);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
    EXPECT_EQ(to_string(Comparison::PremisesNotMet), "premises-not-met");
}

TEST(FreeBoundary, Example1Interfaces) {
    for (int n : {20, 65, 120}) {
        const Grid g = Grid::make(1, n);
        const SampledProblem p = sample(example1(), g);
        const Field u = solve(p, tight()).solution;
        const double h = g.h();
        const FreeBoundary fb = extract_free_boundary(u, h * h);
        ASSERT_FALSE(fb.positive_interface.empty());
        ASSERT_FALSE(fb.negative_interface.empty());
        for (const Point& q : fb.positive_interface) EXPECT_LE(std::abs(q.x - 0.5), h) << n;
        for (const Point& q : fb.negative_interface) EXPECT_LE(std::abs(q.x + 0.5), h) << n;
    }
}

TEST(FreeBoundary, Example1SignStructure) {
    const Grid g = Grid::make(1, 20);
    const SampledProblem p = sample(example1(), g);
    const FreeBoundary fb = extract_free_boundary(solve(p, tight()).solution, g.h() * g.h());
    for (std::size_t k = 0; k < g.node_count(); ++k) {
        const double x = g.coord(static_cast<int>(k));
        if (std::abs(x) <= 0.4 + 1e-12) EXPECT_EQ(fb.phase[k], Phase::Zero) << x;
        if (x >= 0.6 - 1e-12) EXPECT_EQ(fb.phase[k], Phase::Positive) << x;
        if (x <= -0.6 + 1e-12) EXPECT_EQ(fb.phase[k], Phase::Negative) << x;
    }
}

TEST(FreeBoundary, SinglePhaseFields) {
    const Grid g = Grid::make(2, 5);
    const FreeBoundary zero = extract_free_boundary(Field(g), 1e-3);
    EXPECT_EQ(zero.count(Phase::Zero, g), g.interior_count());
    EXPECT_TRUE(zero.positive_interface.empty());
    EXPECT_TRUE(zero.negative_interface.empty());

    const FreeBoundary pos = extract_free_boundary(Field(g, std::vector<double>(g.node_count(), 0.5)), 1e-3);
    EXPECT_EQ(pos.count(Phase::Positive, g), g.interior_count());
    EXPECT_TRUE(pos.positive_interface.empty());
    EXPECT_TRUE(pos.negative_interface.empty());
}

TEST(FreeBoundary, MidpointsIn2D) {
    const Grid g = Grid::make(2, 4);
    Field u(g);
    u[g.flat({2, 2})] = 1.0;
    const FreeBoundary fb = extract_free_boundary(u, 0.1);
    ASSERT_EQ(fb.positive_interface.size(), 4u);
    EXPECT_TRUE(fb.negative_interface.empty());
    for (const Point& q : fb.positive_interface) EXPECT_DOUBLE_EQ(std::abs(q.x) + std::abs(q.y), 0.25);
}

TEST(FreeBoundary, RejectsNonPositiveThreshold) {
    const Grid g = Grid::make(1, 4);
    EXPECT_THROW((void)extract_free_boundary(Field(g), 0.0), Error);
    EXPECT_THROW((void)extract_free_boundary(Field(g), -1.0), Error);
}

TEST(FreeBoundary, DefaultThreshold) {
    const Grid g = Grid::make(2, 100);
    EXPECT_DOUBLE_EQ(default_phase_threshold(sample(example2(), g)), 0.02 * 0.02 * 4.0 / 8.0);
}

TEST(OnePhase, NonNegativeBoundaryGivesNonNegativeSolution) {
    RandomProblemOptions opts;
    opts.boundary_min = 0.0;
    for (int s = 0; s < 10; ++s) {
        const SampledProblem p = random_problem(Grid::make(s % 2 == 0 ? 1 : 2, 12), 500 + s, opts);
        const SolveReport r = solve(p, tight());
        for (double x : r.solution.values()) EXPECT_GE(x, -1e-9);
    }
}

}  // namespace
}  // namespace biphase
