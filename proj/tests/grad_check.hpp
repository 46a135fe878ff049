#pragma once

#include "lcc/neural/loss.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace lcc::testing {

// Largest |analytic - numeric| / max(|analytic|, |numeric|, floor) over every
// parameter of `net`, using central differences of `loss`.
inline double max_relative_error(nn::Mlp& net, const nn::MlpGrad& analytic, const std::function<double()>& loss,
                                 double step = 1e-5, double floor = 1e-6) {
    double worst = 0.0;
    auto probe = [&](double& p, double a) {
        const double saved = p;
        p = saved + step;
        const double up = loss();
        p = saved - step;
        const double down = loss();
        p = saved;
        const double numeric = (up - down) / (2.0 * step);
        const double scale = std::max({std::abs(a), std::abs(numeric), floor});
        worst = std::max(worst, std::abs(a - numeric) / scale);
    };
    auto& layers = net.layers();
    for (std::size_t l = 0; l < layers.size(); ++l) {
        for (Index k = 0; k < layers[l].weight.size(); ++k) probe(layers[l].weight(k), analytic.weight[l](k));
        for (Index k = 0; k < layers[l].bias.size(); ++k) probe(layers[l].bias(k), analytic.bias[l](k));
    }
    return worst;
}

struct GradientReport {
    double autoencoder = 0.0;
    double discriminator = 0.0;
    double generator = 0.0;
};

// Seeded nets of the shapes used in training, small enough to probe every
// parameter.
inline GradientReport gradient_report(std::uint64_t seed, nn::Phi phi) {
    using namespace nn;
    Rng rng(seed);
    auto gaussian = [&](Index r, Index c) {
        Matrix x(r, c);
        for (Index k = 0; k < x.size(); ++k) x(k) = rng.normal();
        return x;
    };
    const Index m = 6, dim = 2, n = 16;
    Matrix codings = gaussian(m, n).cwiseAbs();
    for (Index j = 0; j < n; ++j) codings.col(j) /= codings.col(j).sum();
    const Matrix real = gaussian(dim, n);

    GradientReport out;
    {
        Mlp enc = Mlp::make({dim, 8, 2}, Activation::tanh, Activation::identity, rng);
        Mlp dec = Mlp::make({2, 8, dim}, Activation::tanh, Activation::identity, rng);
        const AutoencoderLoss l = autoencoder_loss(enc, dec, real);
        out.autoencoder = std::max(
            max_relative_error(enc, l.encoder, [&] { return autoencoder_loss(enc, dec, real).value; }),
            max_relative_error(dec, l.decoder, [&] { return autoencoder_loss(enc, dec, real).value; }));
    }
    Mlp gen = Mlp::make({m, 8, 8, dim}, Activation::relu, Activation::identity, rng);
    Mlp disc = Mlp::make({dim, 8, 8, 1}, Activation::relu, discriminator_output(phi), rng);
    {
        const ObjectiveGrad g = discriminator_objective(disc, gen, real, codings, phi);
        out.discriminator = max_relative_error(
            disc, g.grad, [&] { return discriminator_objective(disc, gen, real, codings, phi).value; });
    }
    {
        const ObjectiveGrad g = generator_objective(disc, gen, codings, phi);
        out.generator =
            max_relative_error(gen, g.grad, [&] { return generator_objective(disc, gen, codings, phi).value; });
    }
    return out;
}

}  // namespace lcc::testing
