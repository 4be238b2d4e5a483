#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "biphase/grid.hpp"

namespace biphase {

/// Point in the unit interval or square; y is 0 on 1D problems.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

using ScalarFunction = std::function<double(Point)>;

/// A two-phase membrane problem: Δu = λ⁺χ{u>0} − λ⁻χ{u<0} in Ω, u = g on ∂Ω.
struct ProblemSpec {
    std::string name;
    int dim = 1;
    ScalarFunction lambda_plus;
    ScalarFunction lambda_minus;
    /// Only evaluated at boundary nodes.
    ScalarFunction boundary;
    std::optional<ScalarFunction> exact;

    bool has_exact() const noexcept { return exact.has_value(); }
};

/// Example 1: 1D, λ± = 8, u(-1) = -1, u(1) = 1, piecewise-quadratic exact solution.
ProblemSpec example1();

/// Example 2: 2D, λ± = 2, g = ((1-y)/2)^2 on x = ±1, -x|x| on y = -1, 0 on y = 1.
/// The vertical edges own the corners.
ProblemSpec example2();

/// Built-in lookup by number; throws Error{InvalidProblem} for unknown ids.
ProblemSpec builtin_example(int id);

/// A problem sampled on a grid.
///
/// lambda_plus/lambda_minus are zero on boundary nodes and boundary is zero on
/// interior nodes (the zero-extension convention). The modified coefficients
/// fold boundary data into the interior equations:
///
///   λ̃⁺ = λ⁺ − G/h²,   λ̃⁻ = λ⁻ + G/h²,
///
/// where G is the sum of g over the node's boundary neighbours, so that the
/// z-updates solve L_h u = λ⁺ and L_h u = −λ⁻ with u − g zero on ∂𝒩.
class SampledProblem {
public:
    /// Throws Error{InvalidProblem} if λ⁺ < 0, λ⁻ < 0 or λ⁺ + λ⁻ <= 0 at an
    /// interior node, or if any value is non-finite.
    static SampledProblem from_fields(const Grid& grid, std::vector<double> lambda_plus,
                                      std::vector<double> lambda_minus, std::vector<double> boundary);

    const Grid& grid() const noexcept { return grid_; }
    const Field& lambda_plus() const noexcept { return lambda_plus_; }
    const Field& lambda_minus() const noexcept { return lambda_minus_; }
    const Field& boundary() const noexcept { return boundary_; }
    const Field& modified_plus() const noexcept { return modified_plus_; }
    const Field& modified_minus() const noexcept { return modified_minus_; }

    /// Sum of g over the boundary neighbours of an interior node (h² (L_h g)_α).
    double boundary_neighbor_sum(std::size_t flat) const noexcept;

    /// max over interior nodes of λ⁺ + λ⁻.
    double max_lambda_sum() const noexcept;

    /// Field equal to g on ∂𝒩 and zero inside.
    Field boundary_field() const { return boundary_; }

private:
    SampledProblem(const Grid& grid, Field lp, Field lm, Field g);

    Grid grid_;
    Field lambda_plus_;
    Field lambda_minus_;
    Field boundary_;
    Field modified_plus_;
    Field modified_minus_;
};

/// Samples a spec on a grid. Throws Error{DomainError} on a dimension mismatch
/// and Error{InvalidProblem} when positivity fails or an exact solution
/// disagrees with g on the boundary by more than 1e-12.
SampledProblem sample(const ProblemSpec& spec, const Grid& grid);

/// Parses a problem config file (see README for the format). Errors carry
/// Error{ParseError} with the offending line number, or Error{InvalidConfig}
/// for semantically invalid content.
ProblemSpec parse_problem_config(const std::string& text, const std::string& source_name = "<config>");
ProblemSpec load_problem_config(const std::string& path);

/// Evaluates c0 + c1 t + c2 t² + ... (Horner).
double eval_polynomial(const std::vector<double>& coeffs, double t) noexcept;

}  // namespace biphase
