#include "biphase/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "biphase/error.hpp"
#include "biphase/operator.hpp"

namespace biphase {

namespace {

constexpr double kSignTol = 1e-12;
constexpr double kBandTol = 1e-9;
constexpr double kDescentTol = 1e-14;
constexpr int kDescentMaxSweeps = 1'000'000;
constexpr double kPremiseSlack = 1e-12;
constexpr double kVerdictSlack = 1e-9;

/// Solves the dense system in place (row-major, size×size) with partial
/// pivoting. Returns false on a (numerically) singular matrix.
bool dense_solve(std::vector<double>& a, std::vector<double>& b, std::size_t size) {
    for (std::size_t col = 0; col < size; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < size; ++r)
            if (std::abs(a[r * size + col]) > std::abs(a[pivot * size + col])) pivot = r;
        if (std::abs(a[pivot * size + col]) < 1e-300) return false;
        if (pivot != col) {
            for (std::size_t c = 0; c < size; ++c) std::swap(a[col * size + c], a[pivot * size + c]);
            std::swap(b[col], b[pivot]);
        }
        const double diag = a[col * size + col];
        for (std::size_t r = col + 1; r < size; ++r) {
            const double factor = a[r * size + col] / diag;
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < size; ++c) a[r * size + c] -= factor * a[col * size + c];
            b[r] -= factor * b[col];
        }
    }
    for (std::size_t r = size; r-- > 0;) {
        double acc = b[r];
        for (std::size_t c = r + 1; c < size; ++c) acc -= a[r * size + c] * b[c];
        b[r] = acc / a[r * size + r];
    }
    return true;
}

Field shifted_of(const Field& u, const SampledProblem& prob) {
    Field v(prob.grid());
    for (std::size_t k : prob.grid().interior_nodes()) v[k] = u[k];
    return v;
}

OracleResult enumerate_signs(const SampledProblem& prob) {
    const Grid& grid = prob.grid();
    const auto interior = grid.interior_nodes();
    const std::size_t m = interior.size();
    const double h2 = grid.h() * grid.h();
    const double arms = static_cast<double>(grid.stencil_arms());

    std::vector<int> slot(grid.node_count(), -1);  // flat -> position in `interior`
    for (std::size_t p = 0; p < m; ++p) slot[interior[p]] = static_cast<int>(p);

    std::size_t total = 1;
    for (std::size_t p = 0; p < m; ++p) total *= 3;

    OracleResult best(Field{grid});
    best.energy = std::numeric_limits<double>::infinity();
    bool found = false;

    std::vector<int> sign(m, 0);  // digits: 0 → zero, 1 → +, 2 → −
    std::vector<int> unknown_of(m);
    std::vector<std::size_t> unknowns;
    std::vector<double> mat, rhs;
    Field candidate = prob.boundary_field();

    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        for (std::size_t p = 0; p < m; ++p) {
            sign[p] = static_cast<int>(c % 3);
            c /= 3;
        }
        unknowns.clear();
        for (std::size_t p = 0; p < m; ++p) {
            unknown_of[p] = sign[p] == 0 ? -1 : static_cast<int>(unknowns.size());
            if (sign[p] != 0) unknowns.push_back(p);
        }
        const std::size_t size = unknowns.size();
        mat.assign(size * size, 0.0);
        rhs.assign(size, 0.0);
        // arms·u_α − Σ_{unknown nb} u_nb = G_α − h²·target_α
        for (std::size_t r = 0; r < size; ++r) {
            const std::size_t p = unknowns[r];
            const std::size_t k = interior[p];
            mat[r * size + r] = arms;
            const Neighbors nbs = grid.neighbors(k);
            for (std::size_t nb : nbs.view()) {
                const int q = slot[nb];
                if (q >= 0 && unknown_of[q] >= 0) mat[r * size + static_cast<std::size_t>(unknown_of[q])] -= 1.0;
            }
            const double target = sign[p] == 1 ? prob.lambda_plus()[k] : -prob.lambda_minus()[k];
            rhs[r] = prob.boundary_neighbor_sum(k) - h2 * target;
        }
        if (size > 0 && !dense_solve(mat, rhs, size)) continue;

        for (std::size_t p = 0; p < m; ++p)
            candidate[interior[p]] = sign[p] == 0 ? 0.0 : rhs[static_cast<std::size_t>(unknown_of[p])];

        bool consistent = true;
        for (std::size_t p = 0; p < m && consistent; ++p) {
            const std::size_t k = interior[p];
            const double value = candidate[k];
            if (sign[p] == 1) {
                consistent = value >= -kSignTol;
            } else if (sign[p] == 2) {
                consistent = value <= kSignTol;
            } else {
                const double lap = laplacian_at(grid, candidate.values(), k);
                const double lp = prob.lambda_plus()[k];
                const double lm = prob.lambda_minus()[k];
                consistent = lap >= -lm - kBandTol * (1.0 + lm) && lap <= lp + kBandTol * (1.0 + lp);
            }
        }
        ++best.patterns_tried;
        if (!consistent) continue;
        ++best.patterns_consistent;

        const double j = energy(shifted_of(candidate, prob), prob);
        if (!found || j < best.energy) {
            found = true;
            best.energy = j;
            best.solution = candidate;
        }
    }

    if (!found) {
        throw Error(ErrorCode::DomainError, "sign enumeration found no consistent candidate");
    }
    best.method = OracleMethod::SignEnumeration;
    return best;
}

/// argmin over t of a·t² − b·t + λ⁺·max(t,0) − λ⁻·min(t,0), a > 0, checked
/// piece by piece.
double coordinate_minimizer(double a, double b, double lp, double lm) {
    const auto objective = [&](double t) { return a * t * t - b * t + lp * std::max(t, 0.0) - lm * std::min(t, 0.0); };
    const double candidates[3] = {std::max(0.0, (b - lp) / (2.0 * a)), std::min(0.0, (b + lm) / (2.0 * a)), 0.0};
    double best = candidates[2];
    double best_value = objective(best);
    for (double t : candidates) {
        const double value = objective(t);
        if (value < best_value) {
            best = t;
            best_value = value;
        }
    }
    return best;
}

OracleResult coordinate_descent(const SampledProblem& prob) {
    const Grid& grid = prob.grid();
    const auto interior = grid.interior_nodes();
    const double h2 = grid.h() * grid.h();
    const double a = static_cast<double>(grid.stencil_arms()) / (2.0 * h2);

    Field v(grid);
    for (int sweep = 0; sweep < kDescentMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t k : interior) {
            double sum = prob.boundary_neighbor_sum(k);
            const Neighbors nbs = grid.neighbors(k);
            for (std::size_t nb : nbs.view()) sum += v[nb];
            const double next = coordinate_minimizer(a, sum / h2, prob.lambda_plus()[k], prob.lambda_minus()[k]);
            max_change = std::max(max_change, std::abs(next - v[k]));
            v[k] = next;
        }
        if (max_change < kDescentTol) break;
    }

    OracleResult result(prob.boundary_field());
    result.method = OracleMethod::CoordinateDescent;
    result.energy = energy(v, prob);
    for (std::size_t k : interior) result.solution[k] = v[k];
    return result;
}

bool same_grid(const Grid& a, const Grid& b) { return a == b; }

}  // namespace

ErrorReport max_error(const Field& u, const ProblemSpec& spec, std::optional<int> sweeps) {
    if (!spec.exact) {
        throw Error(ErrorCode::UnsupportedProblem, "problem '" + spec.name + "' has no exact solution");
    }
    const Grid& grid = u.grid();
    if (spec.dim != grid.dim()) throw Error(ErrorCode::DomainError, "problem and field dimensions differ");
    ErrorReport report{grid.n(), sweeps, 0.0, Field(grid)};
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        const NodeIndex idx = grid.multi(k);
        const Point p{grid.coord(idx.i), grid.dim() == 2 ? grid.coord(idx.j) : 0.0};
        const double err = std::abs(u[k] - (*spec.exact)(p));
        report.error_field[k] = err;
        report.max_error = std::max(report.max_error, err);
    }
    return report;
}

OracleResult oracle_solve(const SampledProblem& prob) {
    const std::size_t m = prob.grid().interior_count();
    if (m > kOracleMaxInterior) {
        throw Error(ErrorCode::OracleTooLarge, "oracle is limited to " + std::to_string(kOracleMaxInterior) +
                                                   " interior nodes, problem has " + std::to_string(m));
    }
    if (m <= kOracleMaxEnumerated) return enumerate_signs(prob);
    return coordinate_descent(prob);
}

SampledProblem random_problem(const Grid& grid, std::uint64_t seed, const RandomProblemOptions& options) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> lambda(options.lambda_min, options.lambda_max);
    std::uniform_real_distribution<double> boundary(options.boundary_min, options.boundary_max);
    const std::size_t count = grid.node_count();
    std::vector<double> lp(count, 0.0), lm(count, 0.0), g(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        if (grid.is_interior(k)) {
            lp[k] = lambda(rng);
            lm[k] = lambda(rng);
        } else {
            g[k] = boundary(rng);
        }
    }
    return SampledProblem::from_fields(grid, std::move(lp), std::move(lm), std::move(g));
}

double oracle_discrepancy(const SampledProblem& prob, const SolverConfig& cfg) {
    const Field reference = oracle_minimize(prob);
    const SolveReport report = solve(prob, cfg);
    double worst = 0.0;
    for (std::size_t k = 0; k < reference.size(); ++k)
        worst = std::max(worst, std::abs(report.solution[k] - reference[k]));
    return worst;
}

std::string_view to_string(Comparison c) noexcept {
    switch (c) {
        case Comparison::Holds: return "holds";
        case Comparison::Violated: return "violated";
        case Comparison::PremisesNotMet: return "premises-not-met";
    }
    return "unknown";
}

Comparison check_comparison(const Field& v1, const Field& v2, const SampledProblem& prob) {
    if (!same_grid(v1.grid(), v2.grid()) || !same_grid(v1.grid(), prob.grid())) {
        throw Error(ErrorCode::DomainError, "comparison fields live on different grids");
    }
    const Grid& grid = prob.grid();
    for (std::size_t k : grid.boundary_nodes())
        if (v1[k] > v2[k] + kPremiseSlack) return Comparison::PremisesNotMet;
    const Field f1 = minmax_operator(v1, prob).values;
    const Field f2 = minmax_operator(v2, prob).values;
    for (std::size_t k : grid.interior_nodes())
        if (f1[k] > f2[k] + kPremiseSlack) return Comparison::PremisesNotMet;
    for (std::size_t k = 0; k < grid.node_count(); ++k)
        if (v1[k] > v2[k] + kVerdictSlack) return Comparison::Violated;
    return Comparison::Holds;
}

std::size_t FreeBoundary::count(Phase p, const Grid& grid) const {
    std::size_t c = 0;
    for (std::size_t k : grid.interior_nodes())
        if (phase[k] == p) ++c;
    return c;
}

FreeBoundary extract_free_boundary(const Field& u, double threshold) {
    if (!(threshold > 0.0)) throw Error(ErrorCode::InvalidConfig, "phase threshold must be > 0");
    const Grid& grid = u.grid();
    FreeBoundary fb;
    fb.threshold = threshold;
    fb.phase.resize(grid.node_count());
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        fb.phase[k] = u[k] > threshold ? Phase::Positive : (u[k] < -threshold ? Phase::Negative : Phase::Zero);
    }

    const auto visit_edge = [&](NodeIndex a, NodeIndex b) {
        if (!grid.is_interior(a) && !grid.is_interior(b)) return;
        const Phase pa = fb.phase[grid.flat(a)];
        const Phase pb = fb.phase[grid.flat(b)];
        if (pa == pb) return;
        Point mid{0.5 * (grid.coord(a.i) + grid.coord(b.i)), 0.0};
        if (grid.dim() == 2) mid.y = 0.5 * (grid.coord(a.j) + grid.coord(b.j));
        if ((pa == Phase::Positive) != (pb == Phase::Positive)) fb.positive_interface.push_back(mid);
        if ((pa == Phase::Negative) != (pb == Phase::Negative)) fb.negative_interface.push_back(mid);
    };

    const int n = grid.n();
    if (grid.dim() == 1) {
        for (int i = 0; i < n; ++i) visit_edge({i, 0}, {i + 1, 0});
    } else {
        for (int j = 0; j <= n; ++j)
            for (int i = 0; i < n; ++i) visit_edge({i, j}, {i + 1, j});
        for (int j = 0; j < n; ++j)
            for (int i = 0; i <= n; ++i) visit_edge({i, j}, {i, j + 1});
    }
    return fb;
}

double default_phase_threshold(const SampledProblem& prob) noexcept {
    const double h = prob.grid().h();
    return h * h * prob.max_lambda_sum() / 8.0;
}

}  // namespace biphase
