#pragma once

// Command-line front end.
//
//   empso solve <config>
//   empso stability --beta B --c1 C1 --c2 C2 [--simulate STEPS]
//   empso bench <sphere|rastrigin|rosenbrock> --dim D --iters T
//   empso validate <config>
//
// Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.

#include "empso/runner/bench.hpp"
#include "empso/runner/config.hpp"
#include "empso/runner/csv.hpp"
#include "empso/runner/experiment.hpp"
#include "empso/stability.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <string>
#include <vector>

namespace empso::runner {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

namespace detail {

inline void print_complex(std::ostream& out, std::complex<double> z) {
    out << z.real();
    if (z.imag() != 0.0)
        out << (z.imag() < 0 ? " - " : " + ") << std::fabs(z.imag()) << "i";
}

inline int cmd_solve(const std::string& path, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = load_config(path);
    } catch (const ConfigError& e) {
        err << "invalid config: " << e.what() << '\n';
        return kValidation;
    }
    const std::filesystem::path dir = config.out_dir;
    try {
        std::filesystem::create_directories(dir);
        std::filesystem::remove(dir / "FAILED");
        const auto best = run_best_of(config);
        for (const auto& rec : best.records) {
            const auto seed_dir = dir / ("seed_" + std::to_string(rec.seed));
            write_record(rec, seed_dir / "record.json");
            if (!rec.grid_x.empty())
                export_all_csv(rec, seed_dir);
        }
        const auto& win = best.winner();
        write_record(win, dir / "record.json");
        if (!win.grid_x.empty()) {
            export_all_csv(win, dir);
        } else {
            export_csv(win, CsvKind::losses, dir);
        }

        out << std::setprecision(10);
        out << "problem " << config.problem_name() << ", best seed " << win.seed << " of " << best.records.size()
            << '\n';
        if (config.problem == ProblemKind::piab) {
            out << "energy " << win.energy << " (analytic " << schrodinger::analytic_energy(config.n, 1.0) << ")\n";
            out << "total loss " << win.final_loss.total << '\n';
            out << "residual integral " << win.final_loss.residual_integral << '\n';
            out << "probability " << win.final_loss.probability << '\n';
        } else {
            out << "best fitness " << win.final_loss.total << '\n';
        }
        out << "fitness evaluations " << win.evaluations << ", wall clock " << win.wall_clock_seconds << " s\n";
        out << "outputs in " << dir.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        std::ofstream marker(dir / "FAILED");
        marker << e.what() << '\n';
        err << "run failed: " << e.what() << '\n';
        return kRuntime;
    }
}

inline int cmd_stability(double beta, double c1, double c2, std::size_t simulate, std::ostream& out) {
    const auto coeffs = stability::lambda_coefficients(beta, c1, c2);
    const auto v = stability::analyze(beta, c1, c2);
    out << std::setprecision(10);
    out << (v.closed_form_stable ? "stable" : "unstable") << '\n';
    out << "lambda1 " << coeffs.lambda1 << "\nlambda2 " << coeffs.lambda2 << "\nlambda3 " << coeffs.lambda3 << '\n';
    out << "max|A| " << v.max_amplification << '\n';
    out << "roots";
    for (const auto& z : v.roots) {
        out << "  ";
        print_complex(out, z);
    }
    out << "\nprinted-cubic max|A| " << v.printed_max_amplification << '\n';
    if (simulate > 0) {
        const auto t = stability::simulate_deterministic(beta, c1, c2, 0.0, 0.0, {1.0, 1.0, 1.0}, simulate, 1e300);
        out << "simulate " << simulate << " steps from (1,1,1): "
            << (t.diverged ? "diverged" : "finished") << ", final " << t.values.back() << ", max|x| "
            << t.max_abs() << '\n';
    }
    return kOk;
}

inline int cmd_bench(const std::string& function, std::size_t dim, std::size_t iters, std::size_t seeds,
                     std::size_t swarm, std::uint64_t seed, std::ostream& out, std::ostream& err) {
    HyperParams h;
    h.max_iters = iters;
    h.swarm_size = swarm;
    h.seed = seed;
    try {
        const auto s = bench_optimizer(function, dim, h, seeds);
        out << std::setprecision(10);
        out << "function " << s.function << ", dim " << s.dim << ", iterations " << iters << '\n';
        for (std::size_t i = 0; i < s.best.size(); ++i)
            out << "seed " << s.seeds[i] << " best " << s.best[i] << " evaluations " << s.evaluations[i] << '\n';
        out << "median " << s.median << '\n';
        return kOk;
    } catch (const std::invalid_argument& e) {
        err << e.what() << '\n';
        return kValidation;
    }
}

} // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"EM-PSO differential-equation solver"};
    app.require_subcommand(1);

    std::string solve_path;
    auto* solve = app.add_subcommand("solve", "run an experiment and export CSVs");
    solve->add_option("config", solve_path, "config file")->required();

    double beta = 0.0, c1 = 0.0, c2 = 0.0;
    std::size_t simulate = 0;
    auto* stab = app.add_subcommand("stability", "hyperparameter stability analysis");
    stab->add_option("--beta", beta)->required();
    stab->add_option("--c1", c1)->required();
    stab->add_option("--c2", c2)->required();
    stab->add_option("--simulate", simulate, "iterate the deterministic recurrence for STEPS steps");

    std::string bench_fn;
    std::size_t bench_dim = 5, bench_iters = 500, bench_seeds = 10, bench_swarm = 50;
    std::uint64_t bench_seed = 1;
    auto* bench = app.add_subcommand("bench", "optimizer benchmark over several seeds");
    bench->add_option("function", bench_fn, "sphere | rastrigin | rosenbrock")->required();
    bench->add_option("--dim", bench_dim);
    bench->add_option("--iters", bench_iters);
    bench->add_option("--seeds", bench_seeds);
    bench->add_option("--swarm", bench_swarm);
    bench->add_option("--seed", bench_seed);

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "parse and validate a config");
    validate->add_option("config", validate_path, "config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n" << app.help();
        return kValidation;
    }

    if (solve->parsed())
        return detail::cmd_solve(solve_path, out, err);
    if (stab->parsed())
        return detail::cmd_stability(beta, c1, c2, simulate, out);
    if (bench->parsed())
        return detail::cmd_bench(bench_fn, bench_dim, bench_iters, bench_seeds, bench_swarm, bench_seed, out, err);
    if (validate->parsed()) {
        try {
            const auto c = load_config(validate_path);
            out << "ok: problem " << c.problem_name() << ", n " << c.n << ", max_iters " << c.max_iters << '\n';
            return kOk;
        } catch (const ConfigError& e) {
            err << "invalid config: " << e.what() << '\n';
            return kValidation;
        }
    }
    return kValidation;
}

} // namespace empso::runner
