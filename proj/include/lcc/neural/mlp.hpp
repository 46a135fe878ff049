#pragma once

#include "lcc/common.hpp"
#include "lcc/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lcc::nn {

enum class Activation : std::uint8_t { identity = 0, relu = 1, tanh = 2, sigmoid = 3 };

std::string to_string(Activation act);
Activation parse_activation(const std::string& name);

struct Layer {
    Matrix weight;  // out x in
    Vector bias;    // out
    Activation act = Activation::identity;
};

/// Feed-forward network. Batched calls take one sample per column.
class Mlp {
public:
    Mlp() = default;
    explicit Mlp(std::vector<Layer> layers);

    /// Dense network with the given layer widths (input first). Weights use
    /// He-normal init for relu layers and Xavier-normal otherwise; biases start at zero.
    static Mlp make(const std::vector<Index>& widths, Activation hidden, Activation output, Rng& rng);

    Index in_dim() const { return layers_.empty() ? 0 : layers_.front().weight.cols(); }
    Index out_dim() const { return layers_.empty() ? 0 : layers_.back().weight.rows(); }
    std::size_t depth() const noexcept { return layers_.size(); }
    Index parameter_count() const;

    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<Layer>& layers() noexcept { return layers_; }

    bool all_finite() const;

    friend bool operator==(const Mlp& a, const Mlp& b);

private:
    std::vector<Layer> layers_;
};

/// Per-layer gradients with the same shapes as the network parameters.
struct MlpGrad {
    std::vector<Matrix> weight;
    std::vector<Vector> bias;

    static MlpGrad zeros_like(const Mlp& net);

    MlpGrad& operator*=(double s);
    MlpGrad& operator+=(const MlpGrad& other);
    double max_abs() const;
};

/// Activations recorded by a batched forward pass for reverse mode.
struct ForwardCache {
    std::vector<Matrix> inputs;  // input to each layer
    Matrix output;
};

Vector forward(const Mlp& net, const Eigen::Ref<const Vector>& x);
Matrix forward_batch(const Mlp& net, const Matrix& x);
Matrix forward_batch(const Mlp& net, const Matrix& x, ForwardCache& cache);

/// Reverse-mode pass: given dL/d(output) for the cached batch, returns the
/// parameter gradients and, when `d_input` is non-null, dL/d(input).
MlpGrad backward(const Mlp& net, const ForwardCache& cache, const Matrix& d_output, Matrix* d_input = nullptr);

/// Jacobian of the network output with respect to its input at x (out x in).
Matrix input_jacobian(const Mlp& net, const Eigen::Ref<const Vector>& x);

}  // namespace lcc::nn
