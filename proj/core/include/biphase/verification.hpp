#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "biphase/grid.hpp"
#include "biphase/pgs.hpp"
#include "biphase/problem.hpp"

namespace biphase {

/// Max-norm error against a known exact solution.
struct ErrorReport {
    int n = 0;
    /// Sweep count the field was produced with; empty means "converged".
    std::optional<int> sweeps;
    double max_error = 0.0;
    /// |u - u_exact| on every node.
    Field error_field;
};

/// R = max over all nodes of |u_α - u_exact(x_α)|. Throws
/// Error{UnsupportedProblem} when the spec has no exact solution and
/// Error{DomainError} on a dimension mismatch.
ErrorReport max_error(const Field& u, const ProblemSpec& spec, std::optional<int> sweeps = std::nullopt);

// Brute-force energy minimization ------------------------------------------

inline constexpr std::size_t kOracleMaxInterior = 64;
/// Sign patterns are enumerated up to this many interior nodes (3^12 patterns).
inline constexpr std::size_t kOracleMaxEnumerated = 12;

enum class OracleMethod { SignEnumeration, CoordinateDescent };

struct OracleResult {
    explicit OracleResult(Field initial) : solution(std::move(initial)) {}

    /// Minimizer shifted back to u (carries g on the boundary).
    Field solution;
    OracleMethod method = OracleMethod::SignEnumeration;
    double energy = 0.0;
    std::size_t patterns_tried = 0;
    std::size_t patterns_consistent = 0;
};

/// Minimizes J_h over 𝒦 without going through the PGS code path.
///
/// Up to kOracleMaxEnumerated interior nodes every assignment of {+, −, 0}
/// is tried: the implied linear system (L_h u = λ⁺ on +, L_h u = −λ⁻ on −,
/// u = 0 on 0) is solved by dense elimination, candidates whose signs or
/// zero-node band condition disagree with the pattern are discarded, and the
/// J_h-smallest survivor wins. Larger grids use cyclic coordinate descent
/// with a per-coordinate minimizer evaluated piece by piece.
///
/// Throws Error{OracleTooLarge} above kOracleMaxInterior interior nodes.
OracleResult oracle_solve(const SampledProblem& prob);

inline Field oracle_minimize(const SampledProblem& prob) { return oracle_solve(prob).solution; }

/// Ranges for randomized test instances; λ± and g are drawn per node.
struct RandomProblemOptions {
    double lambda_min = 0.1;
    double lambda_max = 10.0;
    double boundary_min = -1.0;
    double boundary_max = 1.0;
};

/// Deterministic for a given (grid, seed, options) on one platform.
SampledProblem random_problem(const Grid& grid, std::uint64_t seed, const RandomProblemOptions& options = {});

/// max |u_PGS − u_oracle| for one instance, PGS run with `cfg`.
double oracle_discrepancy(const SampledProblem& prob, const SolverConfig& cfg = {});

// Discrete comparison principle ---------------------------------------------

enum class Comparison {
    Holds,
    Violated,
    PremisesNotMet,
};

std::string_view to_string(Comparison c) noexcept;

/// If F_h[v1] <= F_h[v2] on the interior and v1 <= v2 on ∂𝒩 (1e-12 slack),
/// reports whether v1 <= v2 + 1e-9 everywhere. Otherwise PremisesNotMet.
/// Throws Error{DomainError} if the fields live on different grids.
Comparison check_comparison(const Field& v1, const Field& v2, const SampledProblem& prob);

// Free boundary ---------------------------------------------------------------

enum class Phase : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

struct FreeBoundary {
    double threshold = 0.0;
    /// One entry per node (boundary nodes included).
    std::vector<Phase> phase;
    /// Midpoints of grid edges separating {+} from {0,−}.
    std::vector<Point> positive_interface;
    /// Midpoints of grid edges separating {−} from {0,+}.
    std::vector<Point> negative_interface;

    /// Number of interior nodes in phase p.
    std::size_t count(Phase p, const Grid& grid) const;
};

/// Classifies u > τ as +, u < −τ as −, the rest as 0, and reports interface
/// midpoints on every grid edge with at least one interior endpoint.
/// Throws Error{InvalidConfig} unless τ > 0.
FreeBoundary extract_free_boundary(const Field& u, double threshold);

/// h²·max(λ⁺ + λ⁻)/8.
double default_phase_threshold(const SampledProblem& prob) noexcept;

}  // namespace biphase
