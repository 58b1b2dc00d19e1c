#pragma once

// Von Neumann analysis of the deterministic EM-PSO scheme (pbest = p1 and
// gbest = p2 frozen, r1 = r2 = 1):
//
//   x[d+1] = l1 x[d] - l2 x[d-1] - l3 x[d-2] + c1 p1 + c2 p2
//   l1 = 2 - beta - c1 - c2,  l2 = (1 - beta)^2,  l3 = beta (1 - beta)
//
// Two cubics are exposed. `amplification_roots` solves the published
// characteristic equation A^3 - l1 A^2 + l2 A - l3 = 0 verbatim. The
// recurrence above has characteristic polynomial A^3 - l1 A^2 + l2 A + l3
// (note the sign of l3); `recurrence_roots` solves that one, and it is the
// one whose roots govern `simulate_deterministic`. The verdict carries both
// so that any disagreement shows up in the data.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace empso::stability {

struct SchemeCoefficients {
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    double lambda3 = 0.0;
};

using Roots = std::array<std::complex<double>, 3>;

struct StabilityVerdict {
    bool closed_form_stable = false;
    /// Largest |A| over `roots`.
    double max_amplification = 0.0;
    /// Characteristic roots of the simulated recurrence.
    Roots roots{};
    /// Roots of the published cubic and their largest modulus.
    Roots printed_cubic_roots{};
    double printed_max_amplification = 0.0;
};

inline SchemeCoefficients lambda_coefficients(double beta, double c1, double c2) {
    return {2.0 - beta - c1 - c2, beta * beta - 2.0 * beta + 1.0, beta * (1.0 - beta)};
}

/// Value of the monic cubic z^3 + a2 z^2 + a1 z + a0.
inline std::complex<double> monic_cubic(double a2, double a1, double a0, std::complex<double> z) {
    return ((z + a2) * z + a1) * z + a0;
}

/// Roots of z^3 + a2 z^2 + a1 z + a0 as companion-matrix eigenvalues, each
/// polished with a few Newton steps.
inline Roots monic_cubic_roots(double a2, double a1, double a0) {
    Eigen::Matrix3d companion;
    companion << 0.0, 0.0, -a0,
                 1.0, 0.0, -a1,
                 0.0, 1.0, -a2;
    Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, /*computeEigenvectors=*/false);
    const auto ev = solver.eigenvalues();

    Roots roots;
    for (int i = 0; i < 3; ++i) {
        std::complex<double> z = ev[i];
        for (int it = 0; it < 8; ++it) {
            const std::complex<double> p = monic_cubic(a2, a1, a0, z);
            const std::complex<double> dp = (3.0 * z + 2.0 * a2) * z + a1;
            if (std::abs(dp) < 1e-300)
                break;
            const std::complex<double> next = z - p / dp;
            if (!(std::isfinite(next.real()) && std::isfinite(next.imag())))
                break;
            if (std::abs(monic_cubic(a2, a1, a0, next)) >= std::abs(p))
                break;
            z = next;
        }
        // purely real companion eigenvalues stay real
        if (ev[i].imag() == 0.0)
            z.imag(0.0);
        roots[static_cast<std::size_t>(i)] = z;
    }
    std::sort(roots.begin(), roots.end(), [](auto a, auto b) {
        return std::abs(a) != std::abs(b) ? std::abs(a) < std::abs(b) : a.imag() < b.imag();
    });
    return roots;
}

inline double max_modulus(const Roots& r) {
    double m = 0.0;
    for (const auto& z : r)
        m = std::max(m, std::abs(z));
    return m;
}

/// Roots of A^3 - l1 A^2 + l2 A - l3 = 0.
inline Roots amplification_roots(const SchemeCoefficients& c) {
    return monic_cubic_roots(-c.lambda1, c.lambda2, -c.lambda3);
}

/// Roots of A^3 - l1 A^2 + l2 A + l3 = 0, the characteristic polynomial of
/// the recurrence iterated by simulate_deterministic.
inline Roots recurrence_roots(const SchemeCoefficients& c) {
    return monic_cubic_roots(-c.lambda1, c.lambda2, c.lambda3);
}

/// Closed-form region: 0 < beta < 1 and 0 <= c1 + c2 <= 2.
inline bool is_stable(double beta, double c1, double c2) {
    const double s = c1 + c2;
    return beta > 0.0 && beta < 1.0 && s >= 0.0 && s <= 2.0;
}

inline StabilityVerdict analyze(double beta, double c1, double c2) {
    const auto coeffs = lambda_coefficients(beta, c1, c2);
    StabilityVerdict v;
    v.closed_form_stable = is_stable(beta, c1, c2);
    v.roots = recurrence_roots(coeffs);
    v.max_amplification = max_modulus(v.roots);
    v.printed_cubic_roots = amplification_roots(coeffs);
    v.printed_max_amplification = max_modulus(v.printed_cubic_roots);
    return v;
}

struct Trajectory {
    /// The three seed positions followed by every computed step.
    std::vector<double> values;
    /// Set when the iterate left the finite range (or the escape bound).
    bool diverged = false;

    double max_abs() const {
        double m = 0.0;
        for (double x : values)
            m = std::max(m, std::fabs(x));
        return m;
    }
};

/// Iterates the forced third-order recurrence for `steps` steps. Stops early
/// once an iterate is non-finite or its magnitude exceeds `escape`.
inline Trajectory simulate_deterministic(double beta, double c1, double c2, double p1, double p2,
                                         const std::array<double, 3>& x_init, std::size_t steps,
                                         double escape = std::numeric_limits<double>::infinity()) {
    if (steps < 1)
        throw std::invalid_argument("simulation needs at least one step");
    const auto c = lambda_coefficients(beta, c1, c2);
    const double forcing = c1 * p1 + c2 * p2;

    Trajectory t;
    t.values.reserve(steps + 3);
    t.values.assign(x_init.begin(), x_init.end());
    for (std::size_t d = 0; d < steps; ++d) {
        const std::size_t n = t.values.size();
        const double next = c.lambda1 * t.values[n - 1] - c.lambda2 * t.values[n - 2] -
                            c.lambda3 * t.values[n - 3] + forcing;
        t.values.push_back(next);
        if (!std::isfinite(next) || std::fabs(next) > escape) {
            t.diverged = true;
            break;
        }
    }
    return t;
}

} // namespace empso::stability
