#pragma once

// Experiment orchestration: turns a RunConfig into a swarm fitness, runs the
// optimizer, captures histories and persists the result.

#include "empso/net.hpp"
#include "empso/numerics.hpp"
#include "empso/runner/bench.hpp"
#include "empso/runner/config.hpp"
#include "empso/schrodinger.hpp"
#include "empso/swarm.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace empso::runner {

/// One recorded point of the optimization history (values at gbest).
struct HistoryPoint {
    std::size_t iteration = 0;
    double total_loss = 0.0;
    double residual_integral = 0.0;
    double regularization = 0.0;
    double probability = 0.0;
    double energy = 0.0;
};

struct RunRecord {
    RunConfig config;
    std::uint64_t seed = 0;
    /// Network weights (piab/generic_bvp) or the raw search point (bench).
    std::vector<double> best_params;
    double energy = 0.0;
    schrodinger::LossBreakdown final_loss;
    std::vector<HistoryPoint> history;
    /// Grid nodes and the final trial function on them.
    std::vector<double> grid_x;
    std::vector<double> psi;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
    double wall_clock_seconds = 0.0;
};

/// Maps a search point onto the network weights plus (for piab) the trailing
/// energy coordinate.
class PiabFitness {
public:
    PiabFitness(net::MlpArchitecture arch, std::shared_ptr<const numerics::Grid> grid,
                schrodinger::BoundaryConditions bc, numerics::Quadrature rule)
        : arch_(std::move(arch)), grid_(std::move(grid)), bc_(bc), rule_(rule), k_(net::param_count(arch_)) {}

    std::size_t dim() const noexcept { return k_ + 1; }
    const net::MlpArchitecture& arch() const noexcept { return arch_; }
    const std::shared_ptr<const numerics::Grid>& grid() const noexcept { return grid_; }

    numerics::SampledFunction trial(std::span<const double> x) const {
        return schrodinger::trial_solution(net::forward_grid(arch_, x.first(k_), grid_), bc_);
    }

    schrodinger::LossBreakdown breakdown(std::span<const double> x) const {
        return schrodinger::loss_from_trial(trial(x), x[k_], rule_);
    }

    double operator()(std::span<const double> x) const { return breakdown(x).total; }

private:
    net::MlpArchitecture arch_;
    std::shared_ptr<const numerics::Grid> grid_;
    schrodinger::BoundaryConditions bc_;
    numerics::Quadrature rule_;
    std::size_t k_;
};

/// Integrated squared residual of a generic second-order BVP.
class BvpFitness {
public:
    BvpFitness(net::MlpArchitecture arch, std::shared_ptr<const numerics::Grid> grid,
               schrodinger::BoundaryConditions bc, double a, double b, double c, numerics::Quadrature rule)
        : arch_(std::move(arch)), grid_(std::move(grid)), bc_(bc), a_(a), b_(b), c_(c), rule_(rule) {}

    std::size_t dim() const { return net::param_count(arch_); }

    numerics::SampledFunction trial(std::span<const double> x) const {
        return schrodinger::trial_solution(net::forward_grid(arch_, x, grid_), bc_);
    }

    double operator()(std::span<const double> x) const {
        const auto r = schrodinger::generic_residual(trial(x), a_, b_, c_);
        const double v = numerics::integrate(r * r, rule_);
        return std::isfinite(v) ? v : schrodinger::kPenalty;
    }

private:
    net::MlpArchitecture arch_;
    std::shared_ptr<const numerics::Grid> grid_;
    schrodinger::BoundaryConditions bc_;
    double a_, b_, c_;
    numerics::Quadrature rule_;
};

namespace detail {

inline bool record_due(std::size_t iteration, std::size_t stride, std::size_t max_iters) {
    return iteration % stride == 0 || iteration == max_iters;
}

} // namespace detail

/// Runs one seed (config.seed). Deterministic apart from wall_clock_seconds.
inline RunRecord run_experiment(const RunConfig& config) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    RunRecord rec;
    rec.config = config;
    rec.seed = config.seed;
    HyperParams hyper = config.hyper();

    auto finish = [&](const OptimizeResult& res) {
        rec.evaluations = res.evaluations;
        rec.iterations = res.iterations;
        rec.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (config.problem == ProblemKind::bench) {
        const auto fn = bench_function(config.bench_function);
        hyper.init_bounds = uniform_bounds(config.dim, fn.init.lo, fn.init.hi);
        auto observer = [&](const SwarmState& s) {
            if (detail::record_due(s.iteration, config.history_stride, config.max_iters))
                rec.history.push_back({s.iteration, s.gbest_fitness, s.gbest_fitness, 0.0, 0.0, 0.0});
        };
        const auto res = optimize(hyper, config.dim, fn.f, observer);
        rec.best_params = res.best_position;
        rec.final_loss.total = res.best_fitness;
        rec.final_loss.residual_integral = res.best_fitness;
        finish(res);
        return rec;
    }

    const net::MlpArchitecture arch(config.layers, config.activation);
    const std::size_t k = net::param_count(arch);

    if (config.problem == ProblemKind::generic_bvp) {
        const auto grid = numerics::make_grid(config.bvp_bc.x0, config.bvp_bc.x1, config.grid_m);
        const BvpFitness fitness(arch, grid, config.bvp_bc, config.bvp_a, config.bvp_b, config.bvp_c,
                                 config.quadrature);
        hyper.init_bounds = uniform_bounds(k, config.weight_init_lo, config.weight_init_hi);
        auto observer = [&](const SwarmState& s) {
            if (detail::record_due(s.iteration, config.history_stride, config.max_iters))
                rec.history.push_back({s.iteration, s.gbest_fitness, s.gbest_fitness, 0.0, 0.0, 0.0});
        };
        const auto res = optimize(hyper, k, std::cref(fitness), observer);
        rec.best_params = res.best_position;
        rec.final_loss.total = res.best_fitness;
        rec.final_loss.residual_integral = res.best_fitness;
        rec.grid_x = grid->nodes();
        rec.psi = fitness.trial(res.best_position).values();
        finish(res);
        return rec;
    }

    const auto grid = numerics::make_grid(0.0, 1.0, config.grid_m);
    const PiabFitness fitness(arch, grid, schrodinger::BoundaryConditions::box(1.0), config.quadrature);
    hyper.init_bounds = uniform_bounds(k, config.weight_init_lo, config.weight_init_hi);
    hyper.init_bounds.push_back({config.energy_init_lo, config.energy_init_hi});

    auto observer = [&](const SwarmState& s) {
        if (!detail::record_due(s.iteration, config.history_stride, config.max_iters))
            return;
        const auto b = fitness.breakdown(s.gbest_position);
        rec.history.push_back(
            {s.iteration, b.total, b.residual_integral, b.regularization, b.probability, s.gbest_position[k]});
    };
    const auto res = optimize(hyper, fitness.dim(), std::cref(fitness), observer);

    rec.best_params.assign(res.best_position.begin(), res.best_position.begin() + static_cast<std::ptrdiff_t>(k));
    rec.energy = res.best_position[k];
    rec.final_loss = fitness.breakdown(res.best_position);
    rec.grid_x = grid->nodes();
    rec.psi = fitness.trial(res.best_position).values();
    finish(res);
    return rec;
}

struct BestOf {
    std::vector<RunRecord> records;
    /// Index of the record with the lowest final total loss.
    std::size_t best = 0;

    const RunRecord& winner() const { return records.at(best); }
};

/// Runs seeds config.seed .. config.seed + seeds_best_of - 1 and picks the
/// lowest final loss (ties keep the earlier seed).
inline BestOf run_best_of(const RunConfig& config) {
    BestOf out;
    for (std::size_t i = 0; i < config.seeds_best_of; ++i) {
        RunConfig c = config;
        c.seed = config.seed + i;
        out.records.push_back(run_experiment(c));
        if (out.records.back().final_loss.total < out.records[out.best].final_loss.total)
            out.best = out.records.size() - 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

inline nlohmann::json config_to_json(const RunConfig& c) {
    return {{"problem", c.problem_name()},
            {"dim", c.dim},
            {"n", c.n},
            {"grid_m", c.grid_m},
            {"layers", c.layers},
            {"activation", std::string(net::to_string(c.activation))},
            {"beta", c.beta},
            {"c1", c.c1},
            {"c2", c.c2},
            {"swarm_size", c.swarm_size},
            {"max_iters", c.max_iters},
            {"seed", c.seed},
            {"energy_init_lo", c.energy_init_lo},
            {"energy_init_hi", c.energy_init_hi},
            {"weight_init_lo", c.weight_init_lo},
            {"weight_init_hi", c.weight_init_hi},
            {"out_dir", c.out_dir},
            {"history_stride", c.history_stride},
            {"quadrature", c.quadrature == numerics::Quadrature::simpson ? "simpson" : "trapezoid"},
            {"seeds_best_of", c.seeds_best_of}};
}

/// Record as JSON. `with_timing = false` drops the wall-clock field, leaving a
/// payload that is a pure function of the config.
inline nlohmann::json record_to_json(const RunRecord& r, bool with_timing = true) {
    nlohmann::json hist = nlohmann::json::array();
    for (const auto& h : r.history)
        hist.push_back({{"iteration", h.iteration},
                        {"total_loss", h.total_loss},
                        {"residual_integral", h.residual_integral},
                        {"regularization", h.regularization},
                        {"probability", h.probability},
                        {"energy", h.energy}});
    nlohmann::json j = {{"config", config_to_json(r.config)},
                        {"seed", r.seed},
                        {"best_params", r.best_params},
                        {"energy", r.energy},
                        {"final_loss",
                         {{"residual_integral", r.final_loss.residual_integral},
                          {"probability", r.final_loss.probability},
                          {"regularization", r.final_loss.regularization},
                          {"total", r.final_loss.total},
                          {"penalized", r.final_loss.penalized}}},
                        {"history", hist},
                        {"grid_x", r.grid_x},
                        {"psi", r.psi},
                        {"evaluations", r.evaluations},
                        {"iterations", r.iterations}};
    if (with_timing)
        j["wall_clock_seconds"] = r.wall_clock_seconds;
    return j;
}

inline void write_record(const RunRecord& r, const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << record_to_json(r).dump(2) << '\n';
    if (!out)
        throw std::runtime_error("failed writing " + path.string());
}

} // namespace empso::runner
