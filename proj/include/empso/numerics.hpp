#pragma once

// Discrete calculus on a uniform 1-D grid: second-order finite-difference
// stencils and composite quadrature.

#include <cmath>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace empso::numerics {

/// Uniform grid over [x0, x1] with m nodes (m >= 5).
class Grid {
public:
    Grid(double x0, double x1, std::size_t m) : x0_(x0), x1_(x1), m_(m) {
        if (!(std::isfinite(x0) && std::isfinite(x1)))
            throw std::invalid_argument("grid endpoints must be finite");
        if (!(x1 > x0))
            throw std::invalid_argument("grid requires x1 > x0");
        if (m < 5)
            throw std::invalid_argument("grid requires at least 5 nodes, got " + std::to_string(m));
        h_ = (x1 - x0) / static_cast<double>(m - 1);
        nodes_.resize(m);
        for (std::size_t i = 0; i < m; ++i)
            nodes_[i] = x0 + static_cast<double>(i) * h_;
        // pin the right endpoint so it carries no accumulated rounding
        nodes_.back() = x1;
    }

    double x0() const noexcept { return x0_; }
    double x1() const noexcept { return x1_; }
    std::size_t size() const noexcept { return m_; }
    double spacing() const noexcept { return h_; }
    double operator[](std::size_t i) const { return nodes_[i]; }
    const std::vector<double>& nodes() const noexcept { return nodes_; }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.x0_ == b.x0_ && a.x1_ == b.x1_ && a.m_ == b.m_;
    }

private:
    double x0_;
    double x1_;
    std::size_t m_;
    double h_ = 0.0;
    std::vector<double> nodes_;
};

inline std::shared_ptr<const Grid> make_grid(double x0, double x1, std::size_t m) {
    return std::make_shared<const Grid>(x0, x1, m);
}

/// Values of a function at every node of a shared grid.
class SampledFunction {
public:
    SampledFunction(std::shared_ptr<const Grid> grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values)) {
        if (!grid_)
            throw std::invalid_argument("sampled function needs a grid");
        if (values_.size() != grid_->size())
            throw std::invalid_argument("sampled function length " + std::to_string(values_.size()) +
                                        " does not match grid size " + std::to_string(grid_->size()));
    }

    /// Zero function on `grid`.
    explicit SampledFunction(std::shared_ptr<const Grid> grid)
        : SampledFunction(grid, std::vector<double>(grid ? grid->size() : 0, 0.0)) {}

    template <class F>
    static SampledFunction sample(std::shared_ptr<const Grid> grid, F&& f) {
        std::vector<double> v(grid->size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = f((*grid)[i]);
        return SampledFunction(std::move(grid), std::move(v));
    }

    const Grid& grid() const noexcept { return *grid_; }
    const std::shared_ptr<const Grid>& grid_ptr() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::vector<double>& values() noexcept { return values_; }

    bool all_finite() const noexcept {
        for (double v : values_)
            if (!std::isfinite(v))
                return false;
        return true;
    }

    bool same_grid(const SampledFunction& other) const noexcept {
        return grid_ == other.grid_ || *grid_ == *other.grid_;
    }

    SampledFunction& operator+=(const SampledFunction& o) {
        require_same_grid(o);
        for (std::size_t i = 0; i < values_.size(); ++i)
            values_[i] += o.values_[i];
        return *this;
    }
    SampledFunction& operator*=(double s) noexcept {
        for (double& v : values_)
            v *= s;
        return *this;
    }
    friend SampledFunction operator+(SampledFunction a, const SampledFunction& b) { return a += b; }
    friend SampledFunction operator*(double s, SampledFunction f) { return f *= s; }

    /// Pointwise product.
    friend SampledFunction operator*(const SampledFunction& a, const SampledFunction& b) {
        a.require_same_grid(b);
        SampledFunction out = a;
        for (std::size_t i = 0; i < out.values_.size(); ++i)
            out.values_[i] *= b.values_[i];
        return out;
    }

    void require_same_grid(const SampledFunction& o) const {
        if (!same_grid(o))
            throw std::invalid_argument("sampled functions live on different grids");
    }

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
};

enum class Quadrature { trapezoid, simpson };

/// First derivative: central differences inside, second-order one-sided at the ends.
inline SampledFunction derivative(const SampledFunction& f) {
    const std::size_t m = f.size();
    const double h = f.grid().spacing();
    std::vector<double> d(m);
    for (std::size_t i = 1; i + 1 < m; ++i)
        d[i] = (f[i + 1] - f[i - 1]) / (2.0 * h);
    d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    d[m - 1] = (3.0 * f[m - 1] - 4.0 * f[m - 2] + f[m - 3]) / (2.0 * h);
    return SampledFunction(f.grid_ptr(), std::move(d));
}

/// Second derivative via the three-point stencil. Endpoint entries copy their
/// interior neighbour; callers that score residuals ignore them.
inline SampledFunction second_derivative(const SampledFunction& f) {
    const std::size_t m = f.size();
    const double h2 = f.grid().spacing() * f.grid().spacing();
    std::vector<double> d(m);
    for (std::size_t i = 1; i + 1 < m; ++i)
        d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2;
    d[0] = d[1];
    d[m - 1] = d[m - 2];
    return SampledFunction(f.grid_ptr(), std::move(d));
}

inline double integrate_trapezoid(const std::vector<double>& v, double h) {
    double interior = 0.0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        interior += v[i];
    return h * (0.5 * v.front() + interior + 0.5 * v.back());
}

/// Composite Simpson; needs an even number of intervals (odd node count).
inline double integrate_simpson(const std::vector<double>& v, double h) {
    const std::size_t m = v.size();
    if (m % 2 == 0)
        throw std::invalid_argument("Simpson quadrature needs an odd node count, got " + std::to_string(m));
    double odd = 0.0, even = 0.0;
    for (std::size_t i = 1; i + 1 < m; ++i)
        (i % 2 == 1 ? odd : even) += v[i];
    return h / 3.0 * (v.front() + 4.0 * odd + 2.0 * even + v.back());
}

inline double integrate(const SampledFunction& f, Quadrature rule = Quadrature::trapezoid) {
    const double h = f.grid().spacing();
    return rule == Quadrature::simpson ? integrate_simpson(f.values(), h)
                                       : integrate_trapezoid(f.values(), h);
}

inline double max_abs(const SampledFunction& f) {
    double m = 0.0;
    for (double v : f.values())
        m = std::fmax(m, std::fabs(v));
    return m;
}

} // namespace empso::numerics
