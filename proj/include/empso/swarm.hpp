#pragma once

// Exponentially averaged momentum particle swarm optimizer (EM-PSO).
//
// Per particle and iteration, in this order:
//   M <- beta * M + (1 - beta) * v
//   v <- M + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)
//   x <- x + v
// with r1, r2 ~ U[0, 1) drawn independently per dimension. Personal bests
// move only on strict improvement; the global best is a single ordered
// reduction after all particles have moved.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace empso {

using Vector = std::vector<double>;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

struct HyperParams {
    double beta = 0.9;
    double c1 = 0.8;
    double c2 = 0.9;
    std::size_t swarm_size = 50;
    std::size_t max_iters = 5000;
    std::uint64_t seed = 0;
    std::vector<Interval> init_bounds;

    /// Permit c1 + c2 outside [0, 2]. Beta is never relaxed.
    bool allow_unsafe = false;

    /// Early stopping: stop once gbest improved by less than `early_stop_tol`
    /// over the last `early_stop_window` iterations. Window 0 disables it.
    std::size_t early_stop_window = 0;
    double early_stop_tol = 0.0;

    /// Worker threads for fitness evaluation; results do not depend on it.
    std::size_t threads = 1;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const {
        if (!(beta > 0.0 && beta < 1.0))
            throw std::invalid_argument("beta must satisfy 0 < beta < 1 for a stable swarm, got " +
                                        std::to_string(beta));
        const double s = c1 + c2;
        if (!std::isfinite(c1) || !std::isfinite(c2))
            throw std::invalid_argument("c1 and c2 must be finite");
        if (!allow_unsafe && !(s >= 0.0 && s <= 2.0))
            throw std::invalid_argument("c1 + c2 must lie in [0, 2] for a stable swarm, got " + std::to_string(s) +
                                        " (set allow_unsafe to override)");
        if (swarm_size < 1)
            throw std::invalid_argument("swarm_size must be at least 1");
        if (max_iters < 1)
            throw std::invalid_argument("max_iters must be at least 1");
        for (std::size_t d = 0; d < init_bounds.size(); ++d) {
            const auto& b = init_bounds[d];
            if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo <= b.hi))
                throw std::invalid_argument("init_bounds[" + std::to_string(d) + "] must satisfy lo <= hi");
        }
    }
};

/// Same interval on every dimension.
inline std::vector<Interval> uniform_bounds(std::size_t dim, double lo, double hi) {
    return std::vector<Interval>(dim, Interval{lo, hi});
}

struct Particle {
    Vector position;
    Vector velocity;
    Vector momentum;
    Vector pbest_position;
    double pbest_fitness = std::numeric_limits<double>::infinity();

    friend bool operator==(const Particle&, const Particle&) = default;
};

struct SwarmState {
    std::vector<Particle> particles;
    Vector gbest_position;
    double gbest_fitness = std::numeric_limits<double>::infinity();
    std::size_t iteration = 0;

    /// Fitness calls made so far, including initialization.
    std::size_t evaluations = 0;

    std::size_t dim() const noexcept { return gbest_position.size(); }

    friend bool operator==(const SwarmState&, const SwarmState&) = default;
};

using Fitness = std::function<double(std::span<const double>)>;

// ---------------------------------------------------------------------------
// Random streams

/// Counter-based random stream keyed by (seed, particle, iteration). Every
/// draw for a given key is reproducible no matter which thread or order
/// requests it. Iteration 0 is initialization.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t particle, std::uint64_t iteration)
        : engine_(key(seed, particle, iteration)) {}

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    static std::uint64_t key(std::uint64_t seed, std::uint64_t particle, std::uint64_t iteration) {
        std::uint64_t h = mix(seed);
        h = mix(h ^ (particle + 0x632be59bd9b4e019ULL));
        h = mix(h ^ (iteration + 0x85157af5ULL));
        return h;
    }

private:
    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

/// The (r1, r2) coefficient vectors a particle uses at a given iteration.
struct Coefficients {
    Vector r1;
    Vector r2;
};

/// r1[d] and r2[d] are drawn interleaved: r1[0], r2[0], r1[1], r2[1], ...
inline Coefficients draw_coefficients(std::uint64_t seed, std::size_t particle, std::size_t iteration,
                                      std::size_t dim) {
    Stream s(seed, particle, iteration);
    Coefficients c{Vector(dim), Vector(dim)};
    for (std::size_t d = 0; d < dim; ++d) {
        c.r1[d] = s.uniform();
        c.r2[d] = s.uniform();
    }
    return c;
}

// ---------------------------------------------------------------------------
// Momentum

inline Vector momentum_update(std::span<const double> momentum, std::span<const double> velocity, double beta) {
    if (momentum.size() != velocity.size())
        throw std::invalid_argument("momentum and velocity dimensions differ");
    Vector out(momentum.size());
    for (std::size_t d = 0; d < out.size(); ++d)
        out[d] = beta * momentum[d] + (1.0 - beta) * velocity[d];
    return out;
}

/// Explicit sum of beta^k (1 - beta) v^(d-k) over a velocity history
/// v^0..v^d, starting from zero momentum.
inline Vector momentum_closed_form(const std::vector<Vector>& velocity_history, double beta) {
    if (velocity_history.empty())
        throw std::invalid_argument("velocity history must not be empty");
    const std::size_t dim = velocity_history.front().size();
    Vector out(dim, 0.0);
    const std::size_t last = velocity_history.size() - 1;
    for (std::size_t k = 0; k <= last; ++k) {
        const Vector& v = velocity_history[last - k];
        if (v.size() != dim)
            throw std::invalid_argument("velocity history has inconsistent dimensions");
        const double w = std::pow(beta, static_cast<double>(k)) * (1.0 - beta);
        for (std::size_t d = 0; d < dim; ++d)
            out[d] += w * v[d];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Swarm dynamics

namespace detail {

inline bool improves(double candidate, double incumbent) {
    return std::isfinite(candidate) && candidate < incumbent;
}

// Evaluates fitness at every particle position. Output slot i belongs to
// particle i, so the schedule cannot change the results.
inline std::vector<double> evaluate_positions(const std::vector<Particle>& particles, const Fitness& fitness,
                                              std::size_t threads) {
    const std::size_t n = particles.size();
    std::vector<double> out(n);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            out[i] = fitness(particles[i].position);
        return out;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++)
            out[i] = fitness(particles[i].position);
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < std::min(threads, n); ++t)
            pool.emplace_back(worker);
    }
    return out;
}

// Lowest fitness wins; ties keep the lower index (or the incumbent).
inline void reduce_global_best(SwarmState& state) {
    for (const auto& p : state.particles) {
        if (improves(p.pbest_fitness, state.gbest_fitness)) {
            state.gbest_fitness = p.pbest_fitness;
            state.gbest_position = p.pbest_position;
        }
    }
}

} // namespace detail

inline SwarmState init_swarm(const HyperParams& hyper, std::size_t dim, const Fitness& fitness) {
    hyper.validate();
    if (dim == 0)
        throw std::invalid_argument("search space dimension must be positive");
    if (hyper.init_bounds.size() != dim)
        throw std::invalid_argument("init_bounds has " + std::to_string(hyper.init_bounds.size()) +
                                    " intervals but the search space has " + std::to_string(dim) + " dimensions");

    SwarmState state;
    state.particles.resize(hyper.swarm_size);
    for (std::size_t i = 0; i < hyper.swarm_size; ++i) {
        Stream s(hyper.seed, i, 0);
        Particle& p = state.particles[i];
        p.position.resize(dim);
        for (std::size_t d = 0; d < dim; ++d) {
            const auto& b = hyper.init_bounds[d];
            p.position[d] = b.lo + (b.hi - b.lo) * s.uniform();
        }
        p.velocity.assign(dim, 0.0);
        p.momentum.assign(dim, 0.0);
        p.pbest_position = p.position;
    }

    const auto f = detail::evaluate_positions(state.particles, fitness, hyper.threads);
    state.evaluations = hyper.swarm_size;
    for (std::size_t i = 0; i < hyper.swarm_size; ++i)
        state.particles[i].pbest_fitness = std::isfinite(f[i]) ? f[i] : std::numeric_limits<double>::infinity();

    // Argmin with lowest index on ties; if nothing is finite, particle 0 stands in.
    state.gbest_position = state.particles.front().pbest_position;
    state.gbest_fitness = state.particles.front().pbest_fitness;
    detail::reduce_global_best(state);
    return state;
}

inline SwarmState step(SwarmState state, const HyperParams& hyper, const Fitness& fitness) {
    const std::size_t dim = state.dim();
    const std::size_t iteration = state.iteration + 1;
    const double beta = hyper.beta;

    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        Particle& p = state.particles[i];
        const Coefficients r = draw_coefficients(hyper.seed, i, iteration, dim);
        for (std::size_t d = 0; d < dim; ++d) {
            p.momentum[d] = beta * p.momentum[d] + (1.0 - beta) * p.velocity[d];
            p.velocity[d] = p.momentum[d] + hyper.c1 * r.r1[d] * (p.pbest_position[d] - p.position[d]) +
                            hyper.c2 * r.r2[d] * (state.gbest_position[d] - p.position[d]);
            p.position[d] += p.velocity[d];
        }
    }

    const auto f = detail::evaluate_positions(state.particles, fitness, hyper.threads);
    state.evaluations += state.particles.size();
    for (std::size_t i = 0; i < state.particles.size(); ++i) {
        Particle& p = state.particles[i];
        if (detail::improves(f[i], p.pbest_fitness)) {
            p.pbest_fitness = f[i];
            p.pbest_position = p.position;
        }
    }
    detail::reduce_global_best(state);
    state.iteration = iteration;
    return state;
}

struct OptimizeResult {
    Vector best_position;
    double best_fitness = std::numeric_limits<double>::infinity();
    /// gbest fitness after each executed iteration.
    std::vector<double> history;
    std::size_t evaluations = 0;
    std::size_t iterations = 0;
};

/// Called with the state after initialization (iteration 0) and after every step.
using Observer = std::function<void(const SwarmState&)>;

inline OptimizeResult optimize(const HyperParams& hyper, std::size_t dim, const Fitness& fitness,
                               const Observer& observer = {}) {
    SwarmState state = init_swarm(hyper, dim, fitness);
    if (observer)
        observer(state);

    OptimizeResult result;
    result.history.reserve(hyper.max_iters);
    while (state.iteration < hyper.max_iters) {
        state = step(std::move(state), hyper, fitness);
        result.history.push_back(state.gbest_fitness);
        if (observer)
            observer(state);

        const std::size_t w = hyper.early_stop_window;
        if (w > 0 && result.history.size() > w) {
            const double before = result.history[result.history.size() - 1 - w];
            if (before - result.history.back() < hyper.early_stop_tol)
                break;
        }
    }
    result.best_position = state.gbest_position;
    result.best_fitness = state.gbest_fitness;
    result.evaluations = state.evaluations;
    result.iterations = state.iteration;
    return result;
}

} // namespace empso
