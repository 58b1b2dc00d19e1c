#pragma once

// Fixed-topology multilayer perceptron evaluated straight from a flat
// parameter vector, so a swarm can treat the weights as search coordinates.
//
// Flattening order (part of the on-disk contract): for each layer in turn,
// the weight matrix in row-major order (row = output neuron, column = input
// neuron) followed by that layer's biases.

#include "empso/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace empso::net {

enum class Activation { tanh, sigmoid };

inline std::string_view to_string(Activation a) {
    return a == Activation::tanh ? "tanh" : "sigmoid";
}

inline std::optional<Activation> parse_activation(std::string_view s) {
    if (s == "tanh")
        return Activation::tanh;
    if (s == "sigmoid")
        return Activation::sigmoid;
    return std::nullopt;
}

inline double activate(Activation a, double z) {
    return a == Activation::tanh ? std::tanh(z) : 1.0 / (1.0 + std::exp(-z));
}

/// Layer widths from scalar input to scalar output; hidden layers use `activation`,
/// the output layer is affine.
class MlpArchitecture {
public:
    MlpArchitecture(std::vector<std::size_t> widths, Activation activation = Activation::tanh)
        : widths_(std::move(widths)), activation_(activation) {
        if (widths_.size() < 2)
            throw std::invalid_argument("architecture needs at least input and output layers");
        if (widths_.front() != 1 || widths_.back() != 1)
            throw std::invalid_argument("architecture must map a scalar to a scalar");
        for (std::size_t w : widths_)
            if (w == 0)
                throw std::invalid_argument("layer widths must be positive");
    }

    static MlpArchitecture default_piab() { return MlpArchitecture({1, 16, 16, 1}, Activation::tanh); }

    const std::vector<std::size_t>& widths() const noexcept { return widths_; }
    Activation activation() const noexcept { return activation_; }
    std::size_t layer_count() const noexcept { return widths_.size() - 1; }
    std::size_t max_width() const noexcept { return *std::max_element(widths_.begin(), widths_.end()); }

    friend bool operator==(const MlpArchitecture&, const MlpArchitecture&) = default;

private:
    std::vector<std::size_t> widths_;
    Activation activation_;
};

/// Number of weights plus biases.
inline std::size_t param_count(const MlpArchitecture& arch) {
    const auto& w = arch.widths();
    std::size_t k = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l)
        k += (w[l] + 1) * w[l + 1];
    return k;
}

/// Flat parameter vector tied to an architecture's size.
class ParamVector {
public:
    ParamVector(const MlpArchitecture& arch, std::vector<double> values) : values_(std::move(values)) {
        if (values_.size() != param_count(arch))
            throw std::invalid_argument("parameter vector has " + std::to_string(values_.size()) +
                                        " entries, architecture needs " + std::to_string(param_count(arch)));
    }
    explicit ParamVector(const MlpArchitecture& arch) : values_(param_count(arch), 0.0) {}

    std::span<const double> view() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    friend bool operator==(const ParamVector&, const ParamVector&) = default;

private:
    std::vector<double> values_;
};

/// One layer's parameters as views into the flat vector.
struct LayerParams {
    std::size_t in;
    std::size_t out;
    std::span<const double> weights; // out x in, row-major
    std::span<const double> biases;  // out

    double weight(std::size_t o, std::size_t i) const { return weights[o * in + i]; }
};

/// Splits a flat vector into per-layer views.
inline std::vector<LayerParams> unflatten(const MlpArchitecture& arch, std::span<const double> flat) {
    if (flat.size() != param_count(arch))
        throw std::invalid_argument("parameter vector has " + std::to_string(flat.size()) +
                                    " entries, architecture needs " + std::to_string(param_count(arch)));
    std::vector<LayerParams> layers;
    const auto& w = arch.widths();
    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const std::size_t in = w[l], out = w[l + 1];
        LayerParams lp{in, out, flat.subspan(offset, in * out), flat.subspan(offset + in * out, out)};
        offset += (in + 1) * out;
        layers.push_back(lp);
    }
    return layers;
}

/// Inverse of unflatten.
inline std::vector<double> flatten(const std::vector<LayerParams>& layers) {
    std::vector<double> flat;
    for (const auto& lp : layers) {
        flat.insert(flat.end(), lp.weights.begin(), lp.weights.end());
        flat.insert(flat.end(), lp.biases.begin(), lp.biases.end());
    }
    return flat;
}

namespace detail {

// Evaluates the network on a batch of inputs. `flat` must already be size-checked.
inline void forward_batch(const MlpArchitecture& arch, std::span<const double> flat,
                          std::span<const double> xs, std::span<double> out) {
    const auto& w = arch.widths();
    const std::size_t n = xs.size();
    const std::size_t width = arch.max_width();
    std::vector<double> cur(n * width), next(n * width);
    for (std::size_t j = 0; j < n; ++j)
        cur[j * width] = xs[j];

    std::size_t offset = 0;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        const std::size_t in = w[l], outw = w[l + 1];
        const double* W = flat.data() + offset;
        const double* b = W + in * outw;
        const bool hidden = l + 2 < w.size();
        for (std::size_t j = 0; j < n; ++j) {
            const double* a = &cur[j * width];
            double* z = &next[j * width];
            for (std::size_t o = 0; o < outw; ++o) {
                double s = b[o];
                const double* row = W + o * in;
                for (std::size_t i = 0; i < in; ++i)
                    s += row[i] * a[i];
                z[o] = hidden ? activate(arch.activation(), s) : s;
            }
        }
        offset += (in + 1) * outw;
        std::swap(cur, next);
    }
    for (std::size_t j = 0; j < n; ++j)
        out[j] = cur[j * width];
}

} // namespace detail

inline double forward(const MlpArchitecture& arch, std::span<const double> params, double x) {
    if (params.size() != param_count(arch))
        throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) +
                                    " entries, architecture needs " + std::to_string(param_count(arch)));
    double y = 0.0;
    detail::forward_batch(arch, params, std::span<const double>(&x, 1), std::span<double>(&y, 1));
    return y;
}

inline double forward(const MlpArchitecture& arch, const ParamVector& params, double x) {
    return forward(arch, params.view(), x);
}

/// Network output at every grid node.
inline numerics::SampledFunction forward_grid(const MlpArchitecture& arch, std::span<const double> params,
                                              std::shared_ptr<const numerics::Grid> grid) {
    if (params.size() != param_count(arch))
        throw std::invalid_argument("parameter vector has " + std::to_string(params.size()) +
                                    " entries, architecture needs " + std::to_string(param_count(arch)));
    std::vector<double> ys(grid->size());
    detail::forward_batch(arch, params, grid->nodes(), ys);
    return numerics::SampledFunction(std::move(grid), std::move(ys));
}

inline numerics::SampledFunction forward_grid(const MlpArchitecture& arch, const ParamVector& params,
                                              std::shared_ptr<const numerics::Grid> grid) {
    return forward_grid(arch, params.view(), std::move(grid));
}

} // namespace empso::net
