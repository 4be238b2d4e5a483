#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "biphase/error.hpp"
#include "biphase/operator.hpp"
#include "biphase/pgs.hpp"
#include "biphase/problem.hpp"
#include "biphase/regularized.hpp"
#include "biphase/verification.hpp"
#include "cli/output.hpp"
#include "cli/workers.hpp"

namespace biphase::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kOracleAgreement = 1e-8;
constexpr double kRegularizedResidualSlack = 1e-8;

struct ProblemArgs {
    int example = 0;
    std::string config;

    void add_to(CLI::App* app) {
        auto* ex = app->add_option("--example", example, "Built-in example (1 or 2)")
                       ->check(CLI::IsMember({1, 2}));
        auto* cfg = app->add_option("--config", config, "Problem config file");
        ex->excludes(cfg);
    }

    ProblemSpec load() const {
        if (example != 0) return builtin_example(example);
        if (!config.empty()) return load_problem_config(config);
        throw Error(ErrorCode::InvalidConfig, "one of --example or --config is required");
    }
};

json solver_json(const SolverConfig& cfg) {
    json j;
    j["max_sweeps"] = cfg.max_sweeps;
    j["update_tol"] = cfg.update_tol;
    j["residual_tol"] = cfg.residual_tol;
    j["record_energy"] = cfg.record_energy;
    j["initial_guess"] = "zero-interior";
    return j;
}

std::string joined_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

// solve ---------------------------------------------------------------------

struct SolveArgs {
    ProblemArgs problem;
    int n = 0;
    int max_sweeps = 1'000'000;
    double tol = 1e-12;
    double residual_tol = 1e-10;
    int fixed_iters = 0;
    double threshold = 0.0;
    std::string out_dir;
    std::string format = "csv";
};

int cmd_solve(const SolveArgs& args, std::ostream& out) {
    const ProblemSpec spec = args.problem.load();
    const Grid grid = Grid::make(spec.dim, args.n);
    const SampledProblem prob = sample(spec, grid);

    SolverConfig cfg;
    if (args.fixed_iters > 0) {
        cfg = SolverConfig::fixed_sweeps(args.fixed_iters);
    } else {
        cfg.max_sweeps = args.max_sweeps;
        cfg.update_tol = args.tol;
        cfg.residual_tol = args.residual_tol;
    }
    cfg.record_energy = true;
    const SolveReport report = solve(prob, cfg);

    const double threshold = args.threshold > 0.0 ? args.threshold : default_phase_threshold(prob);
    const FreeBoundary fb = extract_free_boundary(report.solution, threshold);

    out << "problem: " << spec.name << " (" << spec.dim << "D, n=" << grid.n() << ", h=" << grid.h() << ")\n";
    out << "termination: " << to_string(report.reason) << " after " << report.sweeps << " sweeps\n";
    out << std::setprecision(9);
    out << "residual max-norm: " << report.final_residual() << "\n";
    if (!report.energy_trace.empty()) out << "energy J_h: " << report.energy_trace.back() << "\n";
    if (spec.has_exact()) out << "max error vs exact: " << max_error(report.solution, spec).max_error << "\n";
    out << "phases (threshold " << threshold << "): +" << fb.count(Phase::Positive, grid) << " 0:"
        << fb.count(Phase::Zero, grid) << " -" << fb.count(Phase::Negative, grid) << "\n";
    out << "interface points: " << fb.positive_interface.size() << " positive, " << fb.negative_interface.size()
        << " negative\n";
    out << "wall time: " << report.wall_seconds << " s\n";

    if (!args.out_dir.empty()) {
        RunManifest manifest;
        manifest.command = "solve";
        manifest.problem = args.problem.example != 0 ? spec.name : args.problem.config;
        manifest.dim = spec.dim;
        manifest.grid_sizes = {grid.n()};
        manifest.solver = solver_json(cfg);
        manifest.solver["fixed_iters"] = args.fixed_iters;
        manifest.solver["phase_threshold"] = threshold;

        if (args.format == "csv") {
            std::ostringstream field, traces, boundary;
            write_field_csv(field, report.solution);
            write_traces_csv(traces, report);
            write_free_boundary_csv(boundary, fb);
            write_text_file(joined_path(args.out_dir, "solution.csv"), field.str());
            write_text_file(joined_path(args.out_dir, "traces.csv"), traces.str());
            write_text_file(joined_path(args.out_dir, "free_boundary.csv"), boundary.str());
            manifest.outputs = {"solution.csv", "traces.csv", "free_boundary.csv"};
        } else {
            json result;
            result["termination"] = std::string(to_string(report.reason));
            result["sweeps"] = report.sweeps;
            result["solution"] = field_json(report.solution);
            result["traces"] = traces_json(report);
            result["free_boundary"] = free_boundary_json(fb);
            write_text_file(joined_path(args.out_dir, "result.json"), result.dump(2) + "\n");
            manifest.outputs = {"result.json"};
        }
        write_text_file(joined_path(args.out_dir, "manifest.json"), manifest.to_json().dump(2) + "\n");
        out << "wrote " << args.out_dir << "\n";
    }

    if (report.reason == Termination::SweepLimit) return kExitSweepLimit;
    return kExitOk;
}

// table ---------------------------------------------------------------------

struct TableArgs {
    ProblemArgs problem;
    std::vector<int> n_list;
    std::vector<int> iter_mults;
    bool converged = false;
    int max_sweeps = 1'000'000;
    double tol = 1e-12;
    std::string out_path;
};

int cmd_table(const TableArgs& args, std::ostream& out) {
    const ProblemSpec spec = args.problem.load();
    if (!spec.has_exact()) {
        throw Error(ErrorCode::UnsupportedProblem, "table needs a problem with an exact solution");
    }
    for (int n : args.n_list) (void)Grid::make(spec.dim, n);
    for (int m : args.iter_mults) {
        if (m < 1) throw Error(ErrorCode::InvalidConfig, "iteration multipliers must be >= 1");
    }

    const std::size_t rows = args.iter_mults.size() + (args.converged ? 1 : 0);
    const std::size_t cols = args.n_list.size();
    std::vector<double> errors(rows * cols, 0.0);

    parallel_for(cols, [&](std::size_t c) {
        const int n = args.n_list[c];
        const SampledProblem prob = sample(spec, Grid::make(spec.dim, n));
        for (std::size_t r = 0; r < args.iter_mults.size(); ++r) {
            const int sweeps = args.iter_mults[r] * n;
            const SolveReport rep = solve(prob, SolverConfig::fixed_sweeps(sweeps));
            errors[r * cols + c] = max_error(rep.solution, spec, sweeps).max_error;
        }
        if (args.converged) {
            SolverConfig cfg;
            cfg.max_sweeps = args.max_sweeps;
            cfg.update_tol = args.tol;
            const SolveReport rep = solve(prob, cfg);
            errors[(rows - 1) * cols + c] = max_error(rep.solution, spec).max_error;
        }
    });

    std::ostringstream csv;
    csv << "M";
    for (int n : args.n_list) csv << ",N=" << n;
    csv << '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        if (r < args.iter_mults.size()) {
            csv << args.iter_mults[r] << "xN";
        } else {
            csv << "converged";
        }
        for (std::size_t c = 0; c < cols; ++c) csv << ',' << format_double(errors[r * cols + c]);
        csv << '\n';
    }

    if (args.out_path.empty()) {
        out << csv.str();
    } else {
        write_text_file(args.out_path, csv.str());
        RunManifest manifest;
        manifest.command = "table";
        manifest.problem = args.problem.example != 0 ? spec.name : args.problem.config;
        manifest.dim = spec.dim;
        manifest.grid_sizes = args.n_list;
        manifest.solver["iter_mults"] = args.iter_mults;
        manifest.solver["converged_row"] = args.converged;
        manifest.solver["max_sweeps"] = args.max_sweeps;
        manifest.solver["update_tol"] = args.tol;
        manifest.solver["initial_guess"] = "zero-interior";
        manifest.outputs = {std::filesystem::path(args.out_path).filename().string()};
        write_text_file(args.out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
        out << "wrote " << args.out_path << "\n";
    }
    return kExitOk;
}

// compare-regularized -------------------------------------------------------

struct CompareArgs {
    ProblemArgs problem;
    int n = 0;
    std::vector<double> eps;
    double cushion = 1e-6;
    double inner_tol = 1e-12;
    std::string out_path;
};

int cmd_compare_regularized(const CompareArgs& args, std::ostream& out) {
    const ProblemSpec spec = args.problem.load();
    const Grid grid = Grid::make(spec.dim, args.n);
    const SampledProblem prob = sample(spec, grid);
    for (double e : args.eps) {
        if (!(e > 0.0)) throw Error(ErrorCode::InvalidConfig, "every --eps value must be > 0");
    }

    SolverConfig pgs_cfg;
    pgs_cfg.update_tol = args.inner_tol;
    const SolveReport reference = solve(prob, pgs_cfg);

    std::ostringstream csv;
    csv << "eps,max_diff,diff_bound,max_residual,residual_bound,within_bounds\n";
    bool all_ok = true;
    for (double e : args.eps) {
        RegularizationConfig rc;
        rc.eps = e;
        rc.tolerance = args.inner_tol;
        const SolveReport reg = solve_regularized(prob, rc);
        double diff = 0.0;
        for (std::size_t k = 0; k < grid.node_count(); ++k)
            diff = std::max(diff, std::abs(reg.solution[k] - reference.solution[k]));
        const double residual = minmax_residual(reg.solution, prob).max_norm;
        const double diff_bound = e + args.cushion;
        const double residual_bound = e + kRegularizedResidualSlack;
        const bool ok = diff <= diff_bound && residual <= residual_bound && reg.converged();
        all_ok = all_ok && ok;
        csv << format_double(e) << ',' << format_double(diff) << ',' << format_double(diff_bound) << ','
            << format_double(residual) << ',' << format_double(residual_bound) << ',' << (ok ? "yes" : "no")
            << '\n';
    }

    out << csv.str();
    if (!args.out_path.empty()) {
        write_text_file(args.out_path, csv.str());
        RunManifest manifest;
        manifest.command = "compare-regularized";
        manifest.problem = args.problem.example != 0 ? spec.name : args.problem.config;
        manifest.dim = spec.dim;
        manifest.grid_sizes = {grid.n()};
        manifest.solver["eps"] = args.eps;
        manifest.solver["cushion"] = args.cushion;
        manifest.solver["inner_tol"] = args.inner_tol;
        manifest.outputs = {std::filesystem::path(args.out_path).filename().string()};
        write_text_file(args.out_path + ".manifest.json", manifest.to_json().dump(2) + "\n");
    }
    return all_ok ? kExitOk : kExitBoundViolation;
}

// oracle-check --------------------------------------------------------------

struct OracleArgs {
    int dim = 1;
    int n = 0;
    int trials = 0;
    std::uint64_t seed = 0;
};

int cmd_oracle_check(const OracleArgs& args, std::ostream& out, std::ostream& err) {
    const Grid grid = Grid::make(args.dim, args.n);
    if (grid.interior_count() > kOracleMaxInterior) {
        throw Error(ErrorCode::OracleTooLarge, "oracle-check is limited to " + std::to_string(kOracleMaxInterior) +
                                                   " interior nodes; n=" + std::to_string(args.n) + " gives " +
                                                   std::to_string(grid.interior_count()));
    }
    if (args.trials <= 0) {
        err << "warning: --trials " << args.trials << " runs no trials; vacuous pass\n";
        out << "trials: 0\nmax discrepancy: 0\nresult: pass\n";
        return kExitOk;
    }

    std::vector<double> discrepancy(static_cast<std::size_t>(args.trials), 0.0);
    parallel_for(discrepancy.size(), [&](std::size_t t) {
        const SampledProblem prob = random_problem(grid, args.seed + t);
        discrepancy[t] = oracle_discrepancy(prob);
    });
    const double worst = *std::max_element(discrepancy.begin(), discrepancy.end());
    const auto failures = std::count_if(discrepancy.begin(), discrepancy.end(),
                                        [](double d) { return !(d <= kOracleAgreement); });
    out << std::setprecision(6);
    out << "trials: " << args.trials << " (dim=" << args.dim << ", n=" << args.n << ", seed=" << args.seed << ")\n";
    out << "max discrepancy: " << worst << "\n";
    out << "failures: " << failures << "\n";
    out << "result: " << (failures == 0 ? "pass" : "fail") << "\n";
    return failures == 0 ? kExitOk : kExitBoundViolation;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-phase membrane problem solver (projected Gauss-Seidel)", "biphase"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version());

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve a problem and write field, traces and free boundary");
    solve_args.problem.add_to(solve_cmd);
    solve_cmd->add_option("--n", solve_args.n, "Subdivisions per axis")->required();
    solve_cmd->add_option("--max-sweeps", solve_args.max_sweeps, "Sweep limit")->capture_default_str();
    solve_cmd->add_option("--tol", solve_args.tol, "Max-update stopping tolerance")->capture_default_str();
    solve_cmd->add_option("--residual-tol", solve_args.residual_tol, "Residual stopping tolerance")
        ->capture_default_str();
    solve_cmd->add_option("--fixed-iters", solve_args.fixed_iters,
                          "Run exactly this many sweeps from a zero interior (tolerances ignored)");
    solve_cmd->add_option("--threshold", solve_args.threshold, "Phase threshold (default h^2 max(l+ + l-)/8)");
    solve_cmd->add_option("--out", solve_args.out_dir, "Output directory");
    solve_cmd->add_option("--format", solve_args.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    TableArgs table_args;
    auto* table_cmd = app.add_subcommand("table", "Max-error table R(N, M) against the exact solution");
    table_args.problem.add_to(table_cmd);
    table_cmd->add_option("--n-list", table_args.n_list, "Comma-separated grid sizes")->delimiter(',')->required();
    table_cmd->add_option("--iter-mults", table_args.iter_mults, "Comma-separated sweep multipliers (M = mult*N)")
        ->delimiter(',')
        ->required();
    table_cmd->add_flag("--converged", table_args.converged, "Append a converged-error row");
    table_cmd->add_option("--max-sweeps", table_args.max_sweeps, "Sweep limit for the converged row");
    table_cmd->add_option("--tol", table_args.tol, "Update tolerance for the converged row");
    table_cmd->add_option("--out", table_args.out_path, "Output CSV path (default: stdout)");

    CompareArgs compare_args;
    auto* compare_cmd =
        app.add_subcommand("compare-regularized", "Compare PGS with the eps-regularized semilinear solve");
    compare_args.problem.add_to(compare_cmd);
    compare_cmd->add_option("--n", compare_args.n, "Subdivisions per axis")->required();
    compare_cmd->add_option("--eps", compare_args.eps, "Comma-separated eps values")->delimiter(',')->required();
    compare_cmd->add_option("--cushion", compare_args.cushion, "Additive slack on |u - u_eps| <= eps")
        ->capture_default_str();
    compare_cmd->add_option("--inner-tol", compare_args.inner_tol, "Update tolerance for both solvers")
        ->capture_default_str();
    compare_cmd->add_option("--out", compare_args.out_path, "Also write the rows to this CSV file");

    OracleArgs oracle_args;
    auto* oracle_cmd = app.add_subcommand("oracle-check", "Randomized PGS vs brute-force minimizer agreement");
    oracle_cmd->add_option("--dim", oracle_args.dim, "Dimension")->check(CLI::IsMember({1, 2}))->capture_default_str();
    oracle_cmd->add_option("--n", oracle_args.n, "Subdivisions per axis")->required();
    oracle_cmd->add_option("--trials", oracle_args.trials, "Number of random problems")->required();
    oracle_cmd->add_option("--seed", oracle_args.seed, "Base seed")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (solve_cmd->parsed()) return cmd_solve(solve_args, out);
        if (table_cmd->parsed()) return cmd_table(table_args, out);
        if (compare_cmd->parsed()) return cmd_compare_regularized(compare_args, out);
        if (oracle_cmd->parsed()) return cmd_oracle_check(oracle_args, out, err);
    } catch (const Error& e) {
        err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace biphase::cli
