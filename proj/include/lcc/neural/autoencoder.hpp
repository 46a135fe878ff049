#pragma once

#include "lcc/neural/adam.hpp"
#include "lcc/neural/mlp.hpp"

#include <cstdint>
#include <vector>

namespace lcc::nn {

/// Encoder widths are data_dim -> hidden... -> latent_dim; the decoder mirrors them.
/// Both output layers are linear.
struct AutoencoderArch {
    std::vector<Index> hidden{64};
    Index latent_dim = 2;
    Activation hidden_act = Activation::tanh;
};

struct AutoencoderOptions {
    int epochs = 200;
    Index batch = 64;
    AdamParams adam{1e-3, 0.9, 0.999, 1e-8};
    std::uint64_t seed = 0;
};

struct AutoencoderFit {
    Mlp encoder;
    Mlp decoder;
    /// Full-data reconstruction MSE after each epoch.
    std::vector<double> loss_history;
};

AutoencoderFit init_autoencoder(Index data_dim, const AutoencoderArch& arch, std::uint64_t seed);

/// Minibatch Adam on the reconstruction MSE. Data holds one sample per column.
AutoencoderFit train_autoencoder(const Matrix& data, const AutoencoderArch& arch, const AutoencoderOptions& options);

}  // namespace lcc::nn
