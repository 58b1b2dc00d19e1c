#pragma once

// Standard test functions for exercising the optimizer without the PDE stack.

#include "empso/swarm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace empso::runner {

inline double sphere(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return s;
}

inline double rastrigin(std::span<const double> x) {
    double s = 10.0 * static_cast<double>(x.size());
    for (double v : x)
        s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
    return s;
}

inline double rosenbrock(std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = 1.0 - x[i];
        s += 100.0 * a * a + b * b;
    }
    return s;
}

struct BenchFunction {
    std::string name;
    Fitness f;
    /// Conventional initialization box, applied to every dimension.
    Interval init;
};

inline BenchFunction bench_function(const std::string& name) {
    if (name == "sphere")
        return {name, sphere, {-5.0, 5.0}};
    if (name == "rastrigin")
        return {name, rastrigin, {-5.12, 5.12}};
    if (name == "rosenbrock")
        return {name, rosenbrock, {-2.048, 2.048}};
    throw std::invalid_argument("unknown benchmark function '" + name + "'");
}

struct BenchSummary {
    std::string function;
    std::size_t dim = 0;
    std::vector<std::uint64_t> seeds;
    std::vector<double> best;
    std::vector<std::size_t> evaluations;
    double median = 0.0;
};

inline double median(std::vector<double> v) {
    if (v.empty())
        throw std::invalid_argument("median of an empty sample");
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Optimizes `function` from seeds hyper.seed .. hyper.seed + seeds - 1.
/// Empty hyper.init_bounds are replaced by the function's conventional box.
inline BenchSummary bench_optimizer(const std::string& function, std::size_t dim, HyperParams hyper,
                                    std::size_t seeds = 10) {
    if (dim < 1)
        throw std::invalid_argument("benchmark dimension must be at least 1");
    if (seeds < 1)
        throw std::invalid_argument("benchmark needs at least one seed");
    const auto fn = bench_function(function);
    if (hyper.init_bounds.empty())
        hyper.init_bounds = uniform_bounds(dim, fn.init.lo, fn.init.hi);

    BenchSummary out{function, dim, {}, {}, {}, 0.0};
    const std::uint64_t base = hyper.seed;
    for (std::size_t s = 0; s < seeds; ++s) {
        hyper.seed = base + s;
        const auto res = optimize(hyper, dim, fn.f);
        out.seeds.push_back(hyper.seed);
        out.best.push_back(res.best_fitness);
        out.evaluations.push_back(res.evaluations);
    }
    out.median = median(out.best);
    return out;
}

} // namespace empso::runner
