#pragma once

#include "lcc/neural/mlp.hpp"

#include <string>

namespace lcc::nn {

/// Measuring function of the network distance: log t (original GAN) or t.
enum class Phi { log, identity };

std::string to_string(Phi phi);
Phi parse_phi(const std::string& name);

/// Inputs to the log branch are clamped to [kPhiEps, 1 - kPhiEps].
inline constexpr double kPhiEps = 1e-7;

double phi_value(Phi phi, double t);
/// Derivative of the (clamped) measuring function; zero where the clamp is active.
double phi_slope(Phi phi, double t);

/// Output activation the discriminator should use for a measuring function.
inline Activation discriminator_output(Phi phi) { return phi == Phi::log ? Activation::sigmoid : Activation::identity; }

struct AutoencoderLoss {
    double value = 0.0;
    MlpGrad encoder;
    MlpGrad decoder;
};

/// scale * mean over all entries of (decoder(encoder(x)) - x)^2.
AutoencoderLoss autoencoder_loss(const Mlp& encoder, const Mlp& decoder, const Matrix& x, double scale = 1.0);

struct ObjectiveGrad {
    double value = 0.0;
    MlpGrad grad;
};

/// scale * (1/n) sum_i phi(D(x_i)) + phi(1 - D(G(gamma_i))), gradient with
/// respect to the discriminator parameters. Real and coding batches must
/// have the same number of columns.
ObjectiveGrad discriminator_objective(const Mlp& discriminator, const Mlp& generator, const Matrix& real,
                                      const Matrix& codings, Phi phi, double scale = 1.0);

/// Same objective with precomputed generator outputs.
ObjectiveGrad discriminator_objective_on(const Mlp& discriminator, const Matrix& real, const Matrix& fake, Phi phi,
                                         double scale = 1.0);

/// scale * (1/n) sum_i phi(1 - D(G(gamma_i))), gradient with respect to the generator parameters.
ObjectiveGrad generator_objective(const Mlp& discriminator, const Mlp& generator, const Matrix& codings, Phi phi,
                                  double scale = 1.0);

/// Throws unless every column sums to one within 1e-9.
void require_codings(const Matrix& codings, Index m);

}  // namespace lcc::nn
