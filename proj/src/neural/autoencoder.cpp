#include "lcc/neural/autoencoder.hpp"

#include "lcc/neural/loss.hpp"

#include <numeric>

namespace lcc::nn {

AutoencoderFit init_autoencoder(Index data_dim, const AutoencoderArch& arch, std::uint64_t seed) {
    if (data_dim < 1 || arch.latent_dim < 1) throw ConfigError("autoencoder: dimensions must be positive");
    Rng rng = Rng(seed).split(0);
    std::vector<Index> widths{data_dim};
    widths.insert(widths.end(), arch.hidden.begin(), arch.hidden.end());
    widths.push_back(arch.latent_dim);
    AutoencoderFit fit;
    fit.encoder = Mlp::make(widths, arch.hidden_act, Activation::identity, rng);
    std::vector<Index> mirrored(widths.rbegin(), widths.rend());
    fit.decoder = Mlp::make(mirrored, arch.hidden_act, Activation::identity, rng);
    return fit;
}

AutoencoderFit train_autoencoder(const Matrix& data, const AutoencoderArch& arch, const AutoencoderOptions& options) {
    if (data.cols() == 0) throw InsufficientDataError("train_autoencoder: empty data");
    if (options.batch < 1) throw ConfigError("train_autoencoder: batch must be positive");
    AutoencoderFit fit = init_autoencoder(data.rows(), arch, options.seed);
    AdamState enc_state = AdamState::for_net(fit.encoder);
    AdamState dec_state = AdamState::for_net(fit.decoder);
    Rng shuffle = Rng(options.seed).split(1);

    const Index n = data.cols();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        for (Index i = n - 1; i > 0; --i) {
            std::swap(order[static_cast<std::size_t>(i)],
                      order[static_cast<std::size_t>(shuffle.below(static_cast<std::uint64_t>(i + 1)))]);
        }
        for (Index start = 0; start < n; start += options.batch) {
            const Index len = std::min(options.batch, n - start);
            Matrix batch(data.rows(), len);
            for (Index k = 0; k < len; ++k) batch.col(k) = data.col(order[static_cast<std::size_t>(start + k)]);
            try {
                const AutoencoderLoss loss = autoencoder_loss(fit.encoder, fit.decoder, batch);
                adam_step(fit.encoder, loss.encoder, enc_state, options.adam);
                adam_step(fit.decoder, loss.decoder, dec_state, options.adam);
            } catch (const NonFiniteError& e) {
                throw NonFiniteError("train_autoencoder: diverged in epoch " + std::to_string(epoch) + ": " + e.what());
            }
        }
        const double epoch_loss = autoencoder_loss(fit.encoder, fit.decoder, data).value;
        fit.loss_history.push_back(epoch_loss);
    }
    return fit;
}

}  // namespace lcc::nn
