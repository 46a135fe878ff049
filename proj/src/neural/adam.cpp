#include "lcc/neural/adam.hpp"

namespace lcc::nn {

void adam_step(Mlp& net, const MlpGrad& grad, AdamState& state, const AdamParams& params) {
    auto& layers = net.layers();
    if (grad.weight.size() != layers.size() || state.m.weight.size() != layers.size()) {
        throw DimensionError("adam_step: gradient/state layer count does not match network");
    }
    ++state.step;
    for (std::size_t k = 0; k < layers.size(); ++k) {
        if (grad.weight[k].rows() != layers[k].weight.rows() || grad.weight[k].cols() != layers[k].weight.cols()) {
            throw DimensionError("adam_step: gradient shape mismatch at layer " + std::to_string(k));
        }
        adam_update(layers[k].weight, grad.weight[k], state.m.weight[k], state.v.weight[k], state.step, params);
        adam_update(layers[k].bias, grad.bias[k], state.m.bias[k], state.v.bias[k], state.step, params);
    }
    if (!net.all_finite()) {
        throw NonFiniteError("adam_step: non-finite parameter after step " + std::to_string(state.step));
    }
}

}  // namespace lcc::nn
