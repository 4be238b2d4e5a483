#include "biphase/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "biphase/error.hpp"

namespace biphase {

namespace {

constexpr double kExactBoundaryTol = 1e-12;

double example1_exact(double x) {
    if (x >= 0.5) return 4.0 * x * x - 4.0 * x + 1.0;
    if (x <= -0.5) return -4.0 * x * x - 4.0 * x - 1.0;
    return 0.0;
}

std::string node_name(const Grid& grid, std::size_t k) {
    const NodeIndex idx = grid.multi(k);
    std::ostringstream os;
    if (grid.dim() == 1) {
        os << "i=" << idx.i << " (x=" << grid.coord(idx.i) << ")";
    } else {
        os << "(i,j)=(" << idx.i << "," << idx.j << ") (x,y)=(" << grid.coord(idx.i) << ","
           << grid.coord(idx.j) << ")";
    }
    return os.str();
}

Point node_point(const Grid& grid, std::size_t k) {
    const NodeIndex idx = grid.multi(k);
    return {grid.coord(idx.i), grid.dim() == 2 ? grid.coord(idx.j) : 0.0};
}

}  // namespace

ProblemSpec example1() {
    ProblemSpec spec;
    spec.name = "example1";
    spec.dim = 1;
    spec.lambda_plus = [](Point) { return 8.0; };
    spec.lambda_minus = [](Point) { return 8.0; };
    spec.boundary = [](Point p) { return p.x < 0.0 ? -1.0 : 1.0; };
    spec.exact = [](Point p) { return example1_exact(p.x); };
    return spec;
}

ProblemSpec example2() {
    ProblemSpec spec;
    spec.name = "example2";
    spec.dim = 2;
    spec.lambda_plus = [](Point) { return 2.0; };
    spec.lambda_minus = [](Point) { return 2.0; };
    spec.boundary = [](Point p) {
        if (p.x == -1.0 || p.x == 1.0) {
            const double s = (1.0 - p.y) / 2.0;
            return s * s;
        }
        if (p.y == -1.0) return -p.x * std::abs(p.x);
        return 0.0;
    };
    return spec;
}

ProblemSpec builtin_example(int id) {
    switch (id) {
        case 1: return example1();
        case 2: return example2();
        default:
            throw Error(ErrorCode::InvalidProblem, "unknown built-in example " + std::to_string(id));
    }
}

SampledProblem::SampledProblem(const Grid& grid, Field lp, Field lm, Field g)
    : grid_(grid),
      lambda_plus_(std::move(lp)),
      lambda_minus_(std::move(lm)),
      boundary_(std::move(g)),
      modified_plus_(grid),
      modified_minus_(grid) {
    const double h2 = grid_.h() * grid_.h();
    for (std::size_t k : grid_.interior_nodes()) {
        const double correction = boundary_neighbor_sum(k) / h2;
        modified_plus_[k] = lambda_plus_[k] - correction;
        modified_minus_[k] = lambda_minus_[k] + correction;
    }
}

SampledProblem SampledProblem::from_fields(const Grid& grid, std::vector<double> lambda_plus,
                                           std::vector<double> lambda_minus, std::vector<double> boundary) {
    Field lp(grid, std::move(lambda_plus));
    Field lm(grid, std::move(lambda_minus));
    Field g(grid, std::move(boundary));
    for (std::size_t k = 0; k < grid.node_count(); ++k) {
        if (grid.is_interior(k)) {
            g[k] = 0.0;
            if (lp[k] < 0.0 || lm[k] < 0.0 || !(lp[k] + lm[k] > 0.0)) {
                std::ostringstream os;
                os << "positivity assumption violated at node " << node_name(grid, k) << ": lambda+=" << lp[k]
                   << ", lambda-=" << lm[k];
                throw Error(ErrorCode::InvalidProblem, os.str());
            }
        } else {
            lp[k] = 0.0;
            lm[k] = 0.0;
        }
    }
    return SampledProblem(grid, std::move(lp), std::move(lm), std::move(g));
}

double SampledProblem::boundary_neighbor_sum(std::size_t flat) const noexcept {
    double sum = 0.0;
    const Neighbors nbs = grid_.neighbors(flat);
    for (std::size_t k : nbs.view())
        if (!grid_.is_interior(k)) sum += boundary_[k];
    return sum;
}

double SampledProblem::max_lambda_sum() const noexcept {
    double best = 0.0;
    for (std::size_t k : grid_.interior_nodes()) best = std::max(best, lambda_plus_[k] + lambda_minus_[k]);
    return best;
}

SampledProblem sample(const ProblemSpec& spec, const Grid& grid) {
    if (spec.dim != grid.dim()) {
        throw Error(ErrorCode::DomainError, "problem '" + spec.name + "' is " + std::to_string(spec.dim) +
                                                "D but the grid is " + std::to_string(grid.dim()) + "D");
    }
    const std::size_t count = grid.node_count();
    std::vector<double> lp(count, 0.0), lm(count, 0.0), g(count, 0.0);
    for (std::size_t k = 0; k < count; ++k) {
        const Point p = node_point(grid, k);
        if (grid.is_interior(k)) {
            lp[k] = spec.lambda_plus(p);
            lm[k] = spec.lambda_minus(p);
        } else {
            g[k] = spec.boundary(p);
            if (spec.exact) {
                const double diff = std::abs((*spec.exact)(p) - g[k]);
                if (!(diff <= kExactBoundaryTol)) {
                    std::ostringstream os;
                    os << "exact solution of '" << spec.name << "' differs from g by " << diff << " at node "
                       << node_name(grid, k);
                    throw Error(ErrorCode::InvalidProblem, os.str());
                }
            }
        }
    }
    try {
        return SampledProblem::from_fields(grid, std::move(lp), std::move(lm), std::move(g));
    } catch (const Error& e) {
        throw Error(e.code(), "problem '" + spec.name + "': " + e.what());
    }
}

double eval_polynomial(const std::vector<double>& coeffs, double t) noexcept {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * t + *it;
    return acc;
}

}  // namespace biphase
