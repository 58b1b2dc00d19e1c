#pragma once

// Flat `key = value` experiment configuration.
//
//   # comment
//   problem = piab            # piab | generic_bvp | bench:<sphere|rastrigin|rosenbrock>
//   n = 1
//   layers = 1,16,16,1
//
// Unknown keys are rejected. Defaults for the energy window and iteration
// budget depend on `n` and are filled in only when the file leaves them out.

#include "empso/net.hpp"
#include "empso/numerics.hpp"
#include "empso/schrodinger.hpp"
#include "empso/swarm.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace empso::runner {

/// Configuration problem; `key()` names the offending entry when there is one.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

enum class ProblemKind { piab, generic_bvp, bench };

struct RunConfig {
    ProblemKind problem = ProblemKind::piab;
    /// Benchmark function name when problem == bench.
    std::string bench_function;
    /// Search dimension for benchmark problems.
    std::size_t dim = 5;

    int n = 1;
    std::size_t grid_m = 101;
    std::vector<std::size_t> layers{1, 16, 16, 1};
    net::Activation activation = net::Activation::tanh;

    double beta = 0.9;
    double c1 = 0.8;
    double c2 = 0.9;
    std::size_t swarm_size = 50;
    std::size_t max_iters = 5000;
    std::uint64_t seed = 1;

    double energy_init_lo = 4.0;
    double energy_init_hi = 6.0;
    double weight_init_lo = -2.0;
    double weight_init_hi = 2.0;

    std::string out_dir = "empso_out";
    std::size_t history_stride = 10;
    numerics::Quadrature quadrature = numerics::Quadrature::trapezoid;
    std::size_t seeds_best_of = 3;

    /// generic_bvp: f'' + a f' + b f - c = 0 with f(x0) = u0, f(x1) = u1.
    double bvp_a = 0.0;
    double bvp_b = 0.0;
    double bvp_c = 2.0;
    schrodinger::BoundaryConditions bvp_bc{0.0, 0.0, 1.0, 1.0};

    std::string problem_name() const {
        switch (problem) {
        case ProblemKind::piab: return "piab";
        case ProblemKind::generic_bvp: return "generic_bvp";
        case ProblemKind::bench: return "bench:" + bench_function;
        }
        return "piab";
    }

    HyperParams hyper() const {
        HyperParams h;
        h.beta = beta;
        h.c1 = c1;
        h.c2 = c2;
        h.swarm_size = swarm_size;
        h.max_iters = max_iters;
        h.seed = seed;
        return h;
    }

    /// Defaults that depend on the quantum number: the energy window brackets
    /// the target level as [floor(E_n), floor(E_n) + 2] and excited states get
    /// twice the iteration budget.
    static std::pair<double, double> default_energy_window(int n) {
        const double lo = std::floor(schrodinger::analytic_energy(n, 1.0));
        return {lo, lo + 2.0};
    }
    static std::size_t default_iterations(int n) { return n == 1 ? 5000 : 10000; }

    void validate() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d))
            throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    }
}

template <class Int>
Int parse_int(const std::string& key, const std::string& v) {
    Int out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end)
        throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    if (!v.empty() && v.front() == '-')
        throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
    return parse_int<std::size_t>(key, v);
}

} // namespace detail

inline void RunConfig::validate() const {
    if (problem == ProblemKind::bench) {
        if (bench_function != "sphere" && bench_function != "rastrigin" && bench_function != "rosenbrock")
            throw ConfigError("problem", "unknown benchmark function '" + bench_function + "'");
        if (dim < 1)
            throw ConfigError("dim", "must be at least 1");
    }
    if (n < 1)
        throw ConfigError("n", "quantum number must be at least 1");
    if (grid_m < 5)
        throw ConfigError("grid_m", "grid needs at least 5 nodes");
    if (quadrature == numerics::Quadrature::simpson && grid_m % 2 == 0)
        throw ConfigError("quadrature", "simpson needs an odd grid_m");
    try {
        net::MlpArchitecture arch(layers, activation);
        if (arch.layer_count() < 2)
            throw ConfigError("layers", "need at least one hidden layer");
    } catch (const std::invalid_argument& e) {
        throw ConfigError("layers", e.what());
    }
    if (!(beta > 0.0 && beta < 1.0))
        throw ConfigError("beta", "must satisfy 0 < beta < 1 (swarm stability condition), got " +
                                      std::to_string(beta));
    if (!(c1 + c2 >= 0.0 && c1 + c2 <= 2.0))
        throw ConfigError(c1 < 0.0 || c1 > 2.0 ? "c1" : "c2",
                          "c1 + c2 must lie in [0, 2] (swarm stability condition), got " + std::to_string(c1 + c2));
    if (swarm_size < 1)
        throw ConfigError("swarm_size", "must be at least 1");
    if (max_iters < 1)
        throw ConfigError("max_iters", "must be at least 1");
    if (!(energy_init_lo < energy_init_hi))
        throw ConfigError("energy_init_lo", "energy init interval must satisfy lo < hi");
    if (!(weight_init_lo <= weight_init_hi))
        throw ConfigError("weight_init_lo", "weight init interval must satisfy lo <= hi");
    if (history_stride < 1)
        throw ConfigError("history_stride", "must be at least 1");
    if (seeds_best_of < 1)
        throw ConfigError("seeds_best_of", "must be at least 1");
    if (problem == ProblemKind::generic_bvp && !(bvp_bc.x1 > bvp_bc.x0))
        throw ConfigError("bvp_x1", "must exceed bvp_x0");
    if (out_dir.empty())
        throw ConfigError("out_dir", "must not be empty");
}

/// Parses and validates configuration text.
inline RunConfig parse_config(std::string_view text) {
    static const std::set<std::string> known = {
        "problem",        "n",              "grid_m",         "layers",         "activation",
        "beta",           "c1",             "c2",             "swarm_size",     "max_iters",
        "seed",           "energy_init_lo", "energy_init_hi", "weight_init_lo", "weight_init_hi",
        "out_dir",        "history_stride", "quadrature",     "seeds_best_of",  "dim",
        "bvp_a",          "bvp_b",          "bvp_c",          "bvp_x0",         "bvp_u0",
        "bvp_x1",         "bvp_u1"};

    std::map<std::string, std::string> kv;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        const std::string t = detail::trim(line);
        if (t.empty())
            continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = detail::trim(std::string_view(t).substr(0, eq));
        std::string value = detail::trim(std::string_view(t).substr(eq + 1));
        if (!known.contains(key))
            throw ConfigError(key, "unknown key");
        if (kv.contains(key))
            throw ConfigError(key, "duplicate key");
        kv.emplace(std::move(key), std::move(value));
    }

    RunConfig c;
    auto get = [&](const char* k) -> std::optional<std::string> {
        if (auto it = kv.find(k); it != kv.end())
            return it->second;
        return std::nullopt;
    };

    if (auto v = get("problem")) {
        if (*v == "piab")
            c.problem = ProblemKind::piab;
        else if (*v == "generic_bvp")
            c.problem = ProblemKind::generic_bvp;
        else if (v->starts_with("bench:")) {
            c.problem = ProblemKind::bench;
            c.bench_function = v->substr(6);
        } else
            throw ConfigError("problem", "expected piab, generic_bvp or bench:<function>, got '" + *v + "'");
    }
    if (auto v = get("n"))
        c.n = detail::parse_int<int>("n", *v);
    if (c.n < 1)
        throw ConfigError("n", "quantum number must be at least 1");
    if (auto v = get("dim"))
        c.dim = detail::parse_count("dim", *v);
    if (auto v = get("grid_m"))
        c.grid_m = detail::parse_count("grid_m", *v);
    if (auto v = get("layers")) {
        c.layers.clear();
        std::string item;
        std::istringstream ls(*v);
        while (std::getline(ls, item, ','))
            c.layers.push_back(detail::parse_count("layers", detail::trim(item)));
    }
    if (auto v = get("activation")) {
        auto a = net::parse_activation(*v);
        if (!a)
            throw ConfigError("activation", "expected tanh or sigmoid, got '" + *v + "'");
        c.activation = *a;
    }
    if (auto v = get("beta"))
        c.beta = detail::parse_double("beta", *v);
    if (auto v = get("c1"))
        c.c1 = detail::parse_double("c1", *v);
    if (auto v = get("c2"))
        c.c2 = detail::parse_double("c2", *v);
    if (auto v = get("swarm_size"))
        c.swarm_size = detail::parse_count("swarm_size", *v);
    c.max_iters = RunConfig::default_iterations(c.n);
    if (auto v = get("max_iters"))
        c.max_iters = detail::parse_count("max_iters", *v);
    if (auto v = get("seed"))
        c.seed = detail::parse_int<std::uint64_t>("seed", *v);
    std::tie(c.energy_init_lo, c.energy_init_hi) = RunConfig::default_energy_window(c.n);
    if (auto v = get("energy_init_lo"))
        c.energy_init_lo = detail::parse_double("energy_init_lo", *v);
    if (auto v = get("energy_init_hi"))
        c.energy_init_hi = detail::parse_double("energy_init_hi", *v);
    if (auto v = get("weight_init_lo"))
        c.weight_init_lo = detail::parse_double("weight_init_lo", *v);
    if (auto v = get("weight_init_hi"))
        c.weight_init_hi = detail::parse_double("weight_init_hi", *v);
    if (auto v = get("out_dir"))
        c.out_dir = *v;
    if (auto v = get("history_stride"))
        c.history_stride = detail::parse_count("history_stride", *v);
    if (auto v = get("quadrature")) {
        if (*v == "trapezoid")
            c.quadrature = numerics::Quadrature::trapezoid;
        else if (*v == "simpson")
            c.quadrature = numerics::Quadrature::simpson;
        else
            throw ConfigError("quadrature", "expected trapezoid or simpson, got '" + *v + "'");
    }
    if (auto v = get("seeds_best_of"))
        c.seeds_best_of = detail::parse_count("seeds_best_of", *v);
    const std::pair<const char*, double*> bvp_keys[] = {
        {"bvp_a", &c.bvp_a},         {"bvp_b", &c.bvp_b},         {"bvp_c", &c.bvp_c},
        {"bvp_x0", &c.bvp_bc.x0},    {"bvp_u0", &c.bvp_bc.u0},    {"bvp_x1", &c.bvp_bc.x1},
        {"bvp_u1", &c.bvp_bc.u1}};
    for (const auto& [key, dst] : bvp_keys)
        if (auto v = get(key))
            *dst = detail::parse_double(key, *v);

    c.validate();
    return c;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

/// Config for the particle in a box with every default for level n.
inline RunConfig piab_defaults(int n) {
    return parse_config("problem = piab\nn = " + std::to_string(n) + "\n");
}

} // namespace empso::runner
