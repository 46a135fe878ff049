#pragma once

#include "lcc/neural/mlp.hpp"

#include <cmath>
#include <cstdint>

namespace lcc::nn {

/// Defaults follow the DCGAN convention: lr 2e-4, beta1 0.5.
struct AdamParams {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct AdamState {
    MlpGrad m;
    MlpGrad v;
    std::int64_t step = 0;

    static AdamState for_net(const Mlp& net) { return {MlpGrad::zeros_like(net), MlpGrad::zeros_like(net), 0}; }
};

/// One bias-corrected Adam update of a parameter block, descending `grad`.
/// `step` is the 1-based step index after incrementing.
template <typename P, typename G, typename S>
void adam_update(Eigen::MatrixBase<P>& param, const Eigen::MatrixBase<G>& grad, Eigen::MatrixBase<S>& m,
                 Eigen::MatrixBase<S>& v, std::int64_t step, const AdamParams& p) {
    m = p.beta1 * m + (1.0 - p.beta1) * grad;
    v = p.beta2 * v + (1.0 - p.beta2) * grad.cwiseProduct(grad);
    const double c1 = 1.0 - std::pow(p.beta1, static_cast<double>(step));
    const double c2 = 1.0 - std::pow(p.beta2, static_cast<double>(step));
    param.array() -= p.lr * (m.array() / c1) / ((v.array() / c2).sqrt() + p.eps);
}

/// Adam step on every layer of `net`. Throws if a parameter becomes non-finite.
void adam_step(Mlp& net, const MlpGrad& grad, AdamState& state, const AdamParams& params);

}  // namespace lcc::nn
