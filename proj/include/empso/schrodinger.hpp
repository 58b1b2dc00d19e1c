#pragma once

// Particle-in-a-box problem layer: boundary-satisfying trial solutions,
// equation residuals, the probability regularizer and the scalar loss the
// swarm minimizes. Units: hbar = m = 1.

#include "empso/numerics.hpp"
#include "empso/swarm.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace empso::schrodinger {

using numerics::Grid;
using numerics::Quadrature;
using numerics::SampledFunction;

/// Dirichlet data f(x0) = u0, f(x1) = u1.
struct BoundaryConditions {
    double x0 = 0.0;
    double u0 = 0.0;
    double x1 = 1.0;
    double u1 = 0.0;

    static BoundaryConditions box(double a) { return {0.0, 0.0, a, 0.0}; }
};

struct PiabProblem {
    double box_length = 1.0;
    int quantum_number = 1;
    Interval energy_init{4.0, 6.0};

    void validate() const {
        if (!(box_length > 0.0))
            throw std::invalid_argument("box length must be positive");
        if (quantum_number < 1)
            throw std::invalid_argument("quantum number must be at least 1");
        if (!(energy_init.lo < energy_init.hi))
            throw std::invalid_argument("energy init interval must be non-degenerate");
    }
};

struct LossBreakdown {
    double residual_integral = 0.0;
    double probability = 0.0;
    double regularization = 0.0;
    double total = 0.0;
    /// True when the state was non-physical (p <= 0 or non-finite terms) and
    /// `total` holds the penalty value.
    bool penalized = false;
};

inline constexpr double kPenalty = 1e12;

/// Lagaris-style construction: interpolate the boundary data and add
/// (x - x0)(x - x1) u, which vanishes at both ends.
inline SampledFunction trial_solution(const SampledFunction& u_raw, const BoundaryConditions& bc) {
    if (bc.x1 == bc.x0)
        throw std::invalid_argument("boundary points coincide");
    SampledFunction out(u_raw.grid_ptr());
    const Grid& g = u_raw.grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double x = g[i];
        out[i] = bc.u1 * ((x - bc.x0) / (bc.x1 - bc.x0)) + bc.u0 * ((x - bc.x1) / (bc.x0 - bc.x1)) +
                 (x - bc.x0) * (x - bc.x1) * u_raw[i];
    }
    // exact boundary values
    if (g.x0() == bc.x0)
        out[0] = bc.u0;
    if (g.x1() == bc.x1)
        out[g.size() - 1] = bc.u1;
    return out;
}

/// f'' + a f' + b f - c on interior nodes, zero at the two endpoints.
inline SampledFunction generic_residual(const SampledFunction& f, double a_coef, double b_coef, double c_coef) {
    const auto d1 = numerics::derivative(f);
    const auto d2 = numerics::second_derivative(f);
    SampledFunction r(f.grid_ptr());
    for (std::size_t i = 1; i + 1 < f.size(); ++i)
        r[i] = d2[i] + a_coef * d1[i] + b_coef * f[i] - c_coef;
    return r;
}

/// -1/2 psi'' - E psi on interior nodes (V = 0 inside the box), zero at the endpoints.
inline SampledFunction piab_residual(const SampledFunction& psi_hat, double energy) {
    const auto d2 = numerics::second_derivative(psi_hat);
    SampledFunction r(psi_hat.grid_ptr());
    for (std::size_t i = 1; i + 1 < psi_hat.size(); ++i)
        r[i] = -0.5 * d2[i] - energy * psi_hat[i];
    return r;
}

inline double probability(const SampledFunction& psi_hat, Quadrature rule = Quadrature::trapezoid) {
    return numerics::integrate(psi_hat * psi_hat, rule);
}

/// Coefficients of p^k (and of p^-k) in the regularizer, k = 1..4.
inline constexpr double kRegCoefficients[4] = {20.0, 5.0, 5.0 / 6.0, 5.0 / 48.0};

/// R(p) = (1-p)^2 + sum_k c_k (p^k + p^-k), minimum 51.875 at p = 1.
/// Throws std::domain_error for p <= 0.
inline double regularization(double p) {
    if (!(p > 0.0))
        throw std::domain_error("regularization undefined for probability " + std::to_string(p));
    const double q = 1.0 / p;
    double r = (1.0 - p) * (1.0 - p);
    double pk = 1.0, qk = 1.0;
    for (double c : kRegCoefficients) {
        pk *= p;
        qk *= q;
        r += c * (pk + qk);
    }
    return r;
}

/// Loss assembled from an already-built trial function.
inline LossBreakdown loss_from_trial(const SampledFunction& psi_hat, double energy,
                                     Quadrature rule = Quadrature::trapezoid) {
    LossBreakdown out;
    const auto r = piab_residual(psi_hat, energy);
    out.residual_integral = numerics::integrate(r * r, rule);
    out.probability = probability(psi_hat, rule);
    if (!(out.probability > 0.0) || !std::isfinite(out.probability) || !std::isfinite(out.residual_integral)) {
        out.penalized = true;
        out.total = kPenalty;
        return out;
    }
    out.regularization = regularization(out.probability);
    out.total = out.residual_integral + out.regularization;
    if (!std::isfinite(out.total)) {
        out.penalized = true;
        out.total = kPenalty;
    }
    return out;
}

using RawProvider = std::function<SampledFunction(std::shared_ptr<const Grid>)>;

inline LossBreakdown total_loss(const RawProvider& u_raw_provider, double energy, std::shared_ptr<const Grid> grid,
                                const BoundaryConditions& bc, Quadrature rule = Quadrature::trapezoid) {
    const SampledFunction u = u_raw_provider(std::move(grid));
    return loss_from_trial(trial_solution(u, bc), energy, rule);
}

/// sqrt(2/a) sin(n pi x / a)
inline SampledFunction analytic_wavefunction(int n, double a, std::shared_ptr<const Grid> grid) {
    if (n < 1 || !(a > 0.0))
        throw std::invalid_argument("analytic wavefunction needs n >= 1 and a > 0");
    const double amp = std::sqrt(2.0 / a);
    return SampledFunction::sample(std::move(grid),
                                   [&](double x) { return amp * std::sin(n * std::numbers::pi * x / a); });
}

/// n^2 pi^2 / (2 a^2)
inline double analytic_energy(int n, double a) {
    if (n < 1 || !(a > 0.0))
        throw std::invalid_argument("analytic energy needs n >= 1 and a > 0");
    return n * n * std::numbers::pi * std::numbers::pi / (2.0 * a * a);
}

/// Max-norm distance to the reference, minimized over the global sign of psi_hat.
inline double phase_aligned_error(const SampledFunction& psi_hat, const SampledFunction& psi_ref) {
    psi_hat.require_same_grid(psi_ref);
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < psi_hat.size(); ++i) {
        plus = std::fmax(plus, std::fabs(psi_hat[i] - psi_ref[i]));
        minus = std::fmax(minus, std::fabs(-psi_hat[i] - psi_ref[i]));
    }
    return std::fmin(plus, minus);
}

/// +1 or -1, whichever sign brings psi_hat closer to the reference.
inline double phase_sign(const SampledFunction& psi_hat, const SampledFunction& psi_ref) {
    psi_hat.require_same_grid(psi_ref);
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < psi_hat.size(); ++i) {
        plus = std::fmax(plus, std::fabs(psi_hat[i] - psi_ref[i]));
        minus = std::fmax(minus, std::fabs(-psi_hat[i] - psi_ref[i]));
    }
    return minus < plus ? -1.0 : 1.0;
}

} // namespace empso::schrodinger
