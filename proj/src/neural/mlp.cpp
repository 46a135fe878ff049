#include "lcc/neural/mlp.hpp"

#include <cmath>

namespace lcc::nn {

namespace {

Matrix activate(const Matrix& z, Activation act) {
    switch (act) {
        case Activation::identity:
            return z;
        case Activation::relu:
            return z.cwiseMax(0.0);
        case Activation::tanh:
            return z.array().tanh().matrix();
        case Activation::sigmoid:
            return (1.0 / (1.0 + (-z.array()).exp())).matrix();
    }
    return z;
}

// d(act)/dz expressed through the activation output y.
Matrix activation_slope(const Matrix& y, Activation act) {
    switch (act) {
        case Activation::identity:
            return Matrix::Ones(y.rows(), y.cols());
        case Activation::relu:
            return (y.array() > 0.0).cast<double>().matrix();
        case Activation::tanh:
            return (1.0 - y.array().square()).matrix();
        case Activation::sigmoid:
            return (y.array() * (1.0 - y.array())).matrix();
    }
    return Matrix::Ones(y.rows(), y.cols());
}

}  // namespace

std::string to_string(Activation act) {
    switch (act) {
        case Activation::identity:
            return "identity";
        case Activation::relu:
            return "relu";
        case Activation::tanh:
            return "tanh";
        case Activation::sigmoid:
            return "sigmoid";
    }
    return "?";
}

Activation parse_activation(const std::string& name) {
    if (name == "identity") return Activation::identity;
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    if (name == "sigmoid") return Activation::sigmoid;
    throw ConfigError("unknown activation: " + name);
}

Mlp::Mlp(std::vector<Layer> layers) : layers_(std::move(layers)) {
    for (std::size_t k = 0; k < layers_.size(); ++k) {
        const Layer& l = layers_[k];
        if (l.bias.size() != l.weight.rows()) throw DimensionError("Mlp: bias length does not match layer output");
        if (k > 0 && l.weight.cols() != layers_[k - 1].weight.rows()) {
            throw DimensionError("Mlp: layer " + std::to_string(k) + " input does not chain with previous output");
        }
    }
}

Mlp Mlp::make(const std::vector<Index>& widths, Activation hidden, Activation output, Rng& rng) {
    if (widths.size() < 2) throw ConfigError("Mlp::make: need at least input and output widths");
    std::vector<Layer> layers;
    for (std::size_t k = 0; k + 1 < widths.size(); ++k) {
        const Index in = widths[k];
        const Index out = widths[k + 1];
        const Activation act = (k + 2 == widths.size()) ? output : hidden;
        const double scale = act == Activation::relu ? std::sqrt(2.0 / static_cast<double>(in))
                                                   : std::sqrt(2.0 / static_cast<double>(in + out));
        Layer l{Matrix(out, in), Vector::Zero(out), act};
        for (Index j = 0; j < in; ++j) {
            for (Index i = 0; i < out; ++i) l.weight(i, j) = scale * rng.normal();
        }
        layers.push_back(std::move(l));
    }
    return Mlp(std::move(layers));
}

Index Mlp::parameter_count() const {
    Index n = 0;
    for (const Layer& l : layers_) n += l.weight.size() + l.bias.size();
    return n;
}

bool Mlp::all_finite() const {
    for (const Layer& l : layers_) {
        if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
    }
    return true;
}

bool operator==(const Mlp& a, const Mlp& b) {
    if (a.layers_.size() != b.layers_.size()) return false;
    for (std::size_t k = 0; k < a.layers_.size(); ++k) {
        const Layer& x = a.layers_[k];
        const Layer& y = b.layers_[k];
        if (x.act != y.act || x.weight.rows() != y.weight.rows() || x.weight.cols() != y.weight.cols() ||
            x.weight != y.weight || x.bias != y.bias) {
            return false;
        }
    }
    return true;
}

MlpGrad MlpGrad::zeros_like(const Mlp& net) {
    MlpGrad g;
    for (const Layer& l : net.layers()) {
        g.weight.push_back(Matrix::Zero(l.weight.rows(), l.weight.cols()));
        g.bias.push_back(Vector::Zero(l.bias.size()));
    }
    return g;
}

MlpGrad& MlpGrad::operator*=(double s) {
    for (auto& w : weight) w *= s;
    for (auto& b : bias) b *= s;
    return *this;
}

MlpGrad& MlpGrad::operator+=(const MlpGrad& other) {
    for (std::size_t k = 0; k < weight.size(); ++k) {
        weight[k] += other.weight[k];
        bias[k] += other.bias[k];
    }
    return *this;
}

double MlpGrad::max_abs() const {
    double m = 0.0;
    for (const auto& w : weight) m = std::max(m, w.cwiseAbs().maxCoeff());
    for (const auto& b : bias) m = std::max(m, b.cwiseAbs().maxCoeff());
    return m;
}

Vector forward(const Mlp& net, const Eigen::Ref<const Vector>& x) {
    require_dim(x.size(), net.in_dim(), "forward: input");
    Vector a = x;
    for (const Layer& l : net.layers()) a = activate(l.weight * a + l.bias, l.act);
    return a;
}

Matrix forward_batch(const Mlp& net, const Matrix& x) {
    require_dim(x.rows(), net.in_dim(), "forward_batch: input");
    Matrix a = x;
    for (const Layer& l : net.layers()) a = activate((l.weight * a).colwise() + l.bias, l.act);
    return a;
}

Matrix forward_batch(const Mlp& net, const Matrix& x, ForwardCache& cache) {
    require_dim(x.rows(), net.in_dim(), "forward_batch: input");
    cache.inputs.clear();
    Matrix a = x;
    for (const Layer& l : net.layers()) {
        cache.inputs.push_back(a);
        a = activate((l.weight * a).colwise() + l.bias, l.act);
    }
    cache.output = a;
    return a;
}

MlpGrad backward(const Mlp& net, const ForwardCache& cache, const Matrix& d_output, Matrix* d_input) {
    if (d_output.rows() != cache.output.rows() || d_output.cols() != cache.output.cols()) {
        throw DimensionError("backward: output gradient shape does not match cached output");
    }
    const auto& layers = net.layers();
    MlpGrad g = MlpGrad::zeros_like(net);
    Matrix delta = d_output;
    for (std::size_t k = layers.size(); k-- > 0;) {
        const Matrix& y = (k + 1 == layers.size()) ? cache.output : cache.inputs[k + 1];
        delta = delta.cwiseProduct(activation_slope(y, layers[k].act));
        g.weight[k].noalias() = delta * cache.inputs[k].transpose();
        g.bias[k] = delta.rowwise().sum();
        if (k > 0 || d_input != nullptr) delta = layers[k].weight.transpose() * delta;
    }
    if (d_input != nullptr) *d_input = std::move(delta);
    return g;
}

Matrix input_jacobian(const Mlp& net, const Eigen::Ref<const Vector>& x) {
    ForwardCache cache;
    forward_batch(net, Matrix(x), cache);
    Matrix jac(net.out_dim(), net.in_dim());
    for (Index o = 0; o < net.out_dim(); ++o) {
        Matrix seed = Matrix::Zero(net.out_dim(), 1);
        seed(o, 0) = 1.0;
        Matrix d_in;
        backward(net, cache, seed, &d_in);
        jac.row(o) = d_in.col(0).transpose();
    }
    return jac;
}

}  // namespace lcc::nn
