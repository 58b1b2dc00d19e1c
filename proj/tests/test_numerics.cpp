#include "empso/numerics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace empso::numerics;
using std::numbers::pi;

namespace {

SampledFunction sample(double x0, double x1, std::size_t m, auto f) {
    return SampledFunction::sample(make_grid(x0, x1, m), f);
}

double max_err(const SampledFunction& f, auto exact, std::size_t from, std::size_t to) {
    double e = 0.0;
    for (std::size_t i = from; i < to; ++i)
        e = std::max(e, std::fabs(f[i] - exact(f.grid()[i])));
    return e;
}

} // namespace

TEST(Grid, SpacingAndNodes) {
    const auto g = make_grid(0.0, 1.0, 101);
    EXPECT_DOUBLE_EQ(g->spacing(), 0.01);
    EXPECT_DOUBLE_EQ((*g)[50], 0.5);
    EXPECT_EQ((*g)[100], 1.0);

    const auto g5 = make_grid(0.0, 1.0, 5);
    const double expected[] = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (std::size_t i = 0; i < 5; ++i)
        EXPECT_EQ((*g5)[i], expected[i]);
}

TEST(Grid, EndpointExactUnderAwkwardSpacing) {
    const auto g = make_grid(0.1, 0.7, 37);
    EXPECT_EQ((*g)[36], 0.7);
    for (std::size_t i = 1; i < g->size(); ++i)
        EXPECT_LT((*g)[i - 1], (*g)[i]);
}

TEST(Grid, RejectsBadInput) {
    EXPECT_THROW(make_grid(1.0, 0.0, 10), std::invalid_argument);
    EXPECT_THROW(make_grid(0.0, 0.0, 10), std::invalid_argument);
    EXPECT_THROW(make_grid(0.0, 1.0, 4), std::invalid_argument);
}

TEST(SampledFunction, LengthMustMatchGrid) {
    EXPECT_THROW(SampledFunction(make_grid(0, 1, 5), std::vector<double>(4)), std::invalid_argument);
}

TEST(Derivative, ExactOnQuadratics) {
    const auto f = sample(0.0, 1.0, 101, [](double x) { return x * x; });
    const auto d = derivative(f);
    EXPECT_LE(max_err(d, [](double x) { return 2.0 * x; }, 0, d.size()), 1e-10);
}

TEST(Derivative, ConstantGivesZero) {
    const auto d = derivative(sample(0.0, 1.0, 21, [](double) { return 3.5; }));
    for (double v : d.values())
        EXPECT_EQ(v, 0.0);
}

TEST(Derivative, SineWithinSecondOrderBound) {
    const auto f = sample(0.0, 1.0, 101, [](double x) { return std::sin(pi * x); });
    const auto d = derivative(f);
    const auto df = [](double x) { return pi * std::cos(pi * x); };
    const double h = 0.01;
    // central: h^2/6 |f'''|, one-sided ends: h^2/3 |f'''|
    EXPECT_LE(max_err(d, df, 1, d.size() - 1), h * h * pi * pi * pi / 6 * 1.01);
    EXPECT_LE(max_err(d, df, 0, d.size()), h * h * pi * pi * pi / 3 * 1.01);
}

TEST(SecondDerivative, ExactOnQuadraticsAndLinears) {
    const auto f = sample(0.0, 1.0, 101, [](double x) { return x * x; });
    const auto d2 = second_derivative(f);
    for (std::size_t i = 1; i + 1 < d2.size(); ++i)
        EXPECT_NEAR(d2[i], 2.0, 1e-10);

    const auto lin = second_derivative(sample(0.0, 1.0, 101, [](double x) { return 3.0 * x - 1.0; }));
    for (std::size_t i = 1; i + 1 < lin.size(); ++i)
        EXPECT_NEAR(lin[i], 0.0, 1e-9);
}

TEST(SecondDerivative, EndpointsCopyNeighbours) {
    const auto f = sample(0.0, 1.0, 11, [](double x) { return x * x * x; });
    const auto d2 = second_derivative(f);
    EXPECT_EQ(d2[0], d2[1]);
    EXPECT_EQ(d2[10], d2[9]);
}

TEST(SecondDerivative, SineWithinSecondOrderBound) {
    const auto f = sample(0.0, 1.0, 101, [](double x) { return std::sin(pi * x); });
    const auto d2 = second_derivative(f);
    EXPECT_LE(max_err(d2, [](double x) { return -pi * pi * std::sin(pi * x); }, 1, d2.size() - 1), 1e-2);
}

TEST(Derivative, ConvergenceOrderIsTwo) {
    auto err_at = [](std::size_t m) {
        const auto f = sample(0.0, 1.0, m, [](double x) { return std::sin(pi * x); });
        return max_err(derivative(f), [](double x) { return pi * std::cos(pi * x); }, 0, m);
    };
    const double ratio = err_at(51) / err_at(101);
    EXPECT_GE(ratio, 3.5);
    EXPECT_LE(ratio, 4.5);
}

TEST(Integrate, TrapezoidExactOnLinear) {
    for (std::size_t m : {5u, 6u, 33u, 101u}) {
        const auto f = sample(0.0, 1.0, m, [](double x) { return x; });
        EXPECT_NEAR(integrate(f), 0.5, 1e-12) << "m=" << m;
    }
}

TEST(Integrate, TrapezoidOnQuadraticMatchesClosedFormError) {
    // trapezoid overshoots by h^2/12 * (f'(1) - f'(0)) = h^2/6 for x^2
    const auto f = sample(0.0, 1.0, 101, [](double x) { return x * x; });
    EXPECT_NEAR(integrate(f), 1.0 / 3.0 + 1e-4 / 6.0, 1e-12);
    EXPECT_NEAR(integrate(f), 0.33335, 1e-6);
}

TEST(Integrate, PeriodicSquaredSine) {
    const auto f = sample(0.0, 1.0, 101, [](double x) { return 2.0 * std::sin(pi * x) * std::sin(pi * x); });
    EXPECT_NEAR(integrate(f), 1.0, 1e-6);
}

TEST(Integrate, SimpsonExactOnCubics) {
    const auto f = sample(0.0, 2.0, 11, [](double x) { return x * x * x - x; });
    EXPECT_NEAR(integrate(f, Quadrature::simpson), 4.0 - 2.0, 1e-12);
    EXPECT_THROW(integrate(sample(0.0, 1.0, 10, [](double x) { return x; }), Quadrature::simpson),
                 std::invalid_argument);
}

TEST(NumericsProperties, LinearityAndPositivity) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    const auto g = make_grid(-1.0, 2.0, 41);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(41), b(41);
        for (std::size_t i = 0; i < 41; ++i) {
            a[i] = u(rng);
            b[i] = u(rng);
        }
        const SampledFunction fa(g, a), fb(g, b);
        const double s = u(rng), t = u(rng);
        const auto combo = s * fa + t * fb;

        auto check = [&](const SampledFunction& lhs, const SampledFunction& ra, const SampledFunction& rb) {
            double scale = 0.0;
            for (std::size_t i = 0; i < lhs.size(); ++i)
                scale = std::max(scale, std::fabs(s * ra[i]) + std::fabs(t * rb[i]));
            for (std::size_t i = 0; i < lhs.size(); ++i)
                EXPECT_NEAR(lhs[i], s * ra[i] + t * rb[i], 1e-12 * scale);
        };
        check(derivative(combo), derivative(fa), derivative(fb));
        check(second_derivative(combo), second_derivative(fa), second_derivative(fb));
        const double lhs = integrate(combo), rhs = s * integrate(fa) + t * integrate(fb);
        EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::fabs(rhs)));

        EXPECT_GE(integrate(fa * fa), 0.0);
    }
}
