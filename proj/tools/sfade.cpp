// Command-line front end: solve built-in or user-defined problems, run
// convergence sweeps, list the built-in registry.
//
// Data files are deterministic; wall-clock timings appear in the run report
// (and in the convergence table, whose wall_seconds column is the one
// intentionally non-reproducible output).

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfade/io.hpp"
#include "sfade/problems.hpp"
#include "sfade/solver.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct ProblemChoice {
    int example = 0; // 0 = config file
    std::string config_path;
    sfade::BuiltinParams params;
    std::string descriptor;
};

sfade::ProblemSpec make_problem(const ProblemChoice& c) {
    if (c.example > 0) return sfade::builtin(c.example, c.params);
    return sfade::ProblemConfig::from_file(c.config_path).to_problem();
}

std::string default_out_dir() {
    if (const char* env = std::getenv("SFADE_OUT_DIR")) return env;
    return ".";
}

void add_problem_options(CLI::App* cmd, ProblemChoice& choice,
                         std::optional<double>& alpha, std::optional<double>& beta,
                         std::optional<double>& gamma, std::optional<double>& kalpha,
                         std::optional<double>& kbeta, std::optional<int>& case_id,
                         bool& source0) {
    auto* ex = cmd->add_option("--example", choice.example, "built-in example id (1-4)")
                   ->check(CLI::Range(1, 4));
    auto* cfg = cmd->add_option("--config", choice.config_path,
                                "JSON problem file (see README for the schema)")
                    ->check(CLI::ExistingFile);
    ex->excludes(cfg);
    cfg->excludes(ex);
    cmd->add_option("--alpha", alpha, "advection order (example variants)");
    cmd->add_option("--beta", beta, "diffusion order (example variants)");
    cmd->add_option("--gamma", gamma, "example 2 exponent");
    cmd->add_option("--kalpha", kalpha, "example 3 advection strength");
    cmd->add_option("--kbeta", kbeta, "example 3 diffusion strength");
    cmd->add_option("--case", case_id, "example 4 case (1 or 2)")->check(CLI::Range(1, 2));
    cmd->add_flag("--source0", source0, "example 3: use the zero-source variant");
}

void finish_problem_choice(ProblemChoice& choice, const std::optional<double>& alpha,
                           const std::optional<double>& beta, const std::optional<double>& gamma,
                           const std::optional<double>& kalpha,
                           const std::optional<double>& kbeta, const std::optional<int>& case_id,
                           bool source0) {
    if (choice.example == 0 && choice.config_path.empty())
        throw CLI::ValidationError("one of --example or --config is required");
    choice.params.alpha = alpha;
    choice.params.beta = beta;
    choice.params.gamma = gamma;
    choice.params.kalpha = kalpha;
    choice.params.kbeta = kbeta;
    choice.params.case_id = case_id;
    choice.params.zero_source = source0;
    if (choice.example > 0) {
        choice.descriptor = "example " + std::to_string(choice.example);
        auto app = [&](const char* name, const std::optional<double>& v) {
            if (v) choice.descriptor += std::string(" ") + name + "=" + sfade::format_number(*v);
        };
        app("alpha", alpha);
        app("beta", beta);
        app("gamma", gamma);
        app("kalpha", kalpha);
        app("kbeta", kbeta);
        if (case_id) choice.descriptor += " case=" + std::to_string(*case_id);
        if (source0) choice.descriptor += " source0";
    } else {
        choice.descriptor = "config " + choice.config_path;
    }
}

json stats_to_json(const sfade::StepStats& s) {
    return json{{"accepted_steps", s.accepted},
                {"rejected_steps", s.rejected},
                {"rhs_evaluations", s.rhs_evals}};
}

int run_solve(const ProblemChoice& choice, int n, double abstol, double reltol,
              std::vector<double> snapshots, int xsamples, const std::string& outdir,
              const std::string& format, bool dump_matrices) {
    sfade::ProblemSpec spec = make_problem(choice);
    if (snapshots.empty()) snapshots.push_back(spec.horizon);
    for (double t : snapshots)
        if (t < 0.0 || t > spec.horizon)
            throw std::invalid_argument("snapshot time outside [0, T]");
    if (xsamples < 2) throw std::invalid_argument("--xsamples must be at least 2");

    sfade::TolSettings tol;
    tol.abs_tol = abstol;
    tol.rel_tol = reltol;

    fs::create_directories(outdir);

    const auto t_start = std::chrono::steady_clock::now();
    sfade::SpectralSolution sol = sfade::solve(spec, n, tol, snapshots);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    for (const auto& w : sol.warnings) std::cerr << "warning: " << w << "\n";

    std::vector<std::string> files;
    const bool csv = format == "csv";

    // snapshots in long format: t, x, u
    sfade::Table snap;
    snap.columns = {"t", "x", "u"};
    for (double ts : snapshots) {
        Eigen::VectorXd a = sol.coefficients_at(ts);
        Eigen::VectorXd ph(n + 1);
        for (int i = 0; i < xsamples; ++i) {
            const double x = spec.ell * i / (xsamples - 1.0);
            sfade::phi_all(sol.basis, x, ph);
            snap.rows.push_back({ts, x, ph.dot(a)});
        }
    }
    const std::string snap_path = outdir + "/snapshots." + (csv ? "csv" : "json");
    if (csv)
        sfade::write_csv(snap, snap_path);
    else
        sfade::write_json(sfade::table_to_json(snap), snap_path);
    files.push_back(snap_path);

    std::optional<sfade::ErrorMetrics> metrics;
    if (spec.has_exact()) {
        metrics = sfade::error_metrics(sol);
        sfade::Table mt;
        mt.columns = {"n", "e2", "einf"};
        mt.rows.push_back({static_cast<long long>(n), metrics->e2, metrics->einf});
        const std::string mpath = outdir + "/metrics." + (csv ? "csv" : "json");
        if (csv)
            sfade::write_csv(mt, mpath);
        else
            sfade::write_json(sfade::table_to_json(mt), mpath);
        files.push_back(mpath);
    }

    if (dump_matrices) {
        sfade::SemidiscreteSystem sys = sfade::semidiscretize(spec, n);
        const std::pair<const char*, const Eigen::MatrixXd*> mats[] = {
            {"mass", &sys.ops.mass},
            {"mass_inv", &sys.ops.mass_inv},
            {"d_alpha_left", &sys.ops.d_alpha_left},
            {"d_alpha_right", &sys.ops.d_alpha_right},
            {"d_beta_left", &sys.ops.d_beta_left},
            {"d_beta_right", &sys.ops.d_beta_right}};
        for (const auto& [name, m] : mats) {
            const std::string p = outdir + "/matrix_" + name + ".csv";
            sfade::write_matrix_csv(*m, p);
            files.push_back(p);
        }
    }

    json report{{"problem", choice.descriptor},
                {"n", n},
                {"abs_tol", abstol},
                {"rel_tol", reltol},
                {"wall_seconds", wall},
                {"integrator", stats_to_json(sol.stats)},
                {"warnings", sol.warnings},
                {"files", files}};
    if (metrics) {
        report["e2"] = metrics->e2;
        report["einf"] = metrics->einf;
    }
    const std::string rpath = outdir + "/report.json";
    sfade::write_json(report, rpath);

    bool finite = std::isfinite(wall);
    if (metrics) finite = finite && std::isfinite(metrics->e2) && std::isfinite(metrics->einf);
    for (const auto& row : snap.rows)
        finite = finite && std::isfinite(std::get<double>(row[2]));

    std::cout << choice.descriptor << ": n=" << n << ", wall=" << wall << " s, steps "
              << sol.stats.accepted << " (+" << sol.stats.rejected << " rejected)";
    if (metrics) std::cout << ", E2=" << metrics->e2 << ", Einf=" << metrics->einf;
    std::cout << "\nreport: " << rpath << "\n";
    if (!finite) {
        std::cerr << "error: non-finite values in the run output\n";
        return 1;
    }
    return 0;
}

int run_convergence(const ProblemChoice& choice, int nmin, int nmax, int nstep, double abstol,
                    double reltol, const std::string& outdir, const std::string& format) {
    sfade::ProblemSpec spec = make_problem(choice);
    if (!spec.has_exact())
        throw std::invalid_argument("convergence requires a problem with a known exact solution");
    if (nmin < 1 || nmax < nmin || nstep < 1)
        throw std::invalid_argument("invalid sweep bounds (need 1 <= nmin <= nmax, nstep >= 1)");

    sfade::TolSettings tol;
    tol.abs_tol = abstol;
    tol.rel_tol = reltol;
    fs::create_directories(outdir);

    sfade::Table table;
    table.columns = {"n", "e2", "einf", "wall_seconds"};
    bool finite = true;
    for (int n = nmin; n <= nmax; n += nstep) {
        const auto t0 = std::chrono::steady_clock::now();
        sfade::SpectralSolution sol = sfade::solve(spec, n, tol);
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const sfade::ErrorMetrics m = sfade::error_metrics(sol);
        table.rows.push_back({static_cast<long long>(n), m.e2, m.einf, wall});
        finite = finite && std::isfinite(m.e2) && std::isfinite(m.einf);
        std::cout << "n=" << n << "  E2=" << m.e2 << "  Einf=" << m.einf << "  wall=" << wall
                  << " s\n";
    }
    const bool csv = format == "csv";
    const std::string path = outdir + "/convergence." + (csv ? "csv" : "json");
    if (csv)
        sfade::write_csv(table, path);
    else
        sfade::write_json(sfade::table_to_json(table), path);
    std::cout << "table: " << path << "\n";
    if (!finite) {
        std::cerr << "error: non-finite error metrics in the sweep\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral collocation solver for two-sided space-fractional "
                 "advection-diffusion equations"};
    app.require_subcommand(1);

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "solve one problem and write snapshots");
    ProblemChoice s_choice;
    std::optional<double> s_alpha, s_beta, s_gamma, s_kalpha, s_kbeta;
    std::optional<int> s_case;
    bool s_source0 = false;
    int s_n = 10;
    double s_abstol = 1.0e-14, s_reltol = 1.0e-12;
    std::vector<double> s_snapshots;
    int s_xsamples = 201;
    std::string s_out = default_out_dir(), s_format = "csv";
    bool s_dump = false;
    add_problem_options(solve_cmd, s_choice, s_alpha, s_beta, s_gamma, s_kalpha, s_kbeta,
                        s_case, s_source0);
    solve_cmd->add_option("--n", s_n, "basis size (n+1 functions)")->check(CLI::Range(1, 5000));
    solve_cmd->add_option("--abstol", s_abstol, "integrator absolute tolerance");
    solve_cmd->add_option("--reltol", s_reltol, "integrator relative tolerance");
    solve_cmd->add_option("--snapshots", s_snapshots, "comma-separated report times")
        ->delimiter(',');
    solve_cmd->add_option("--xsamples", s_xsamples, "snapshot grid size (default 201)");
    solve_cmd->add_option("--out", s_out, "output directory");
    solve_cmd->add_option("--format", s_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    solve_cmd->add_flag("--dump-matrices", s_dump, "also write the operator matrices as CSV");

    // convergence
    auto* conv_cmd = app.add_subcommand("convergence", "error table over a range of n");
    ProblemChoice c_choice;
    std::optional<double> c_alpha, c_beta, c_gamma, c_kalpha, c_kbeta;
    std::optional<int> c_case;
    bool c_source0 = false;
    int c_nmin = 1, c_nmax = 10, c_nstep = 1;
    double c_abstol = 1.0e-14, c_reltol = 1.0e-12;
    std::string c_out = default_out_dir(), c_format = "csv";
    add_problem_options(conv_cmd, c_choice, c_alpha, c_beta, c_gamma, c_kalpha, c_kbeta,
                        c_case, c_source0);
    conv_cmd->add_option("--nmin", c_nmin, "smallest n")->required();
    conv_cmd->add_option("--nmax", c_nmax, "largest n")->required();
    conv_cmd->add_option("--nstep", c_nstep, "sweep stride");
    conv_cmd->add_option("--abstol", c_abstol, "integrator absolute tolerance");
    conv_cmd->add_option("--reltol", c_reltol, "integrator relative tolerance");
    conv_cmd->add_option("--out", c_out, "output directory");
    conv_cmd->add_option("--format", c_format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));

    // list
    auto* list_cmd = app.add_subcommand("list", "describe the built-in problems");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list_cmd->parsed()) {
            for (const auto& line : sfade::builtin_listing()) std::cout << line << "\n";
            return 0;
        }
        if (solve_cmd->parsed()) {
            finish_problem_choice(s_choice, s_alpha, s_beta, s_gamma, s_kalpha, s_kbeta, s_case,
                                  s_source0);
            return run_solve(s_choice, s_n, s_abstol, s_reltol, s_snapshots, s_xsamples, s_out,
                             s_format, s_dump);
        }
        finish_problem_choice(c_choice, c_alpha, c_beta, c_gamma, c_kalpha, c_kbeta, c_case,
                              c_source0);
        return run_convergence(c_choice, c_nmin, c_nmax, c_nstep, c_abstol, c_reltol, c_out,
                               c_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
