#include "lcc/neural/loss.hpp"

#include <algorithm>
#include <cmath>

namespace lcc::nn {

namespace {

void require_finite(double v, const char* term) {
    if (!std::isfinite(v)) throw NonFiniteError(std::string("non-finite loss term: ") + term);
}

}  // namespace

std::string to_string(Phi phi) { return phi == Phi::log ? "log" : "identity"; }

Phi parse_phi(const std::string& name) {
    if (name == "log") return Phi::log;
    if (name == "identity") return Phi::identity;
    throw ConfigError("unknown measuring function: " + name);
}

double phi_value(Phi phi, double t) {
    if (phi == Phi::identity) return t;
    return std::log(std::clamp(t, kPhiEps, 1.0 - kPhiEps));
}

double phi_slope(Phi phi, double t) {
    if (phi == Phi::identity) return 1.0;
    if (t < kPhiEps || t > 1.0 - kPhiEps) return 0.0;
    return 1.0 / t;
}

void require_codings(const Matrix& codings, Index m) {
    require_dim(codings.rows(), m, "generator input (coding length)");
    for (Index i = 0; i < codings.cols(); ++i) {
        const double s = codings.col(i).sum();
        if (!(std::abs(s - 1.0) <= 1e-9)) {
            throw Error("generator input column " + std::to_string(i) + " is not a coding (sum " + std::to_string(s) +
                        ")");
        }
    }
}

AutoencoderLoss autoencoder_loss(const Mlp& encoder, const Mlp& decoder, const Matrix& x, double scale) {
    require_dim(decoder.in_dim(), encoder.out_dim(), "autoencoder: latent width");
    require_dim(decoder.out_dim(), x.rows(), "autoencoder: decoder output");
    ForwardCache enc_cache, dec_cache;
    const Matrix h = forward_batch(encoder, x, enc_cache);
    const Matrix xr = forward_batch(decoder, h, dec_cache);
    const double count = static_cast<double>(x.size());
    const Matrix diff = xr - x;
    AutoencoderLoss out;
    out.value = scale * diff.squaredNorm() / count;
    require_finite(out.value, "reconstruction mse");
    Matrix d_h;
    out.decoder = backward(decoder, dec_cache, (2.0 * scale / count) * diff, &d_h);
    out.encoder = backward(encoder, enc_cache, d_h);
    return out;
}

ObjectiveGrad discriminator_objective_on(const Mlp& discriminator, const Matrix& real, const Matrix& fake, Phi phi,
                                         double scale) {
    require_dim(discriminator.out_dim(), 1, "discriminator output");
    require_dim(fake.cols(), real.cols(), "discriminator: fake batch size");
    const double n = static_cast<double>(real.cols());
    ForwardCache real_cache, fake_cache;
    const Matrix d_real = forward_batch(discriminator, real, real_cache);
    const Matrix d_fake = forward_batch(discriminator, fake, fake_cache);

    double real_term = 0.0;
    double fake_term = 0.0;
    Matrix g_real(1, real.cols());
    Matrix g_fake(1, fake.cols());
    for (Index i = 0; i < real.cols(); ++i) {
        real_term += phi_value(phi, d_real(0, i));
        fake_term += phi_value(phi, 1.0 - d_fake(0, i));
        g_real(0, i) = scale * phi_slope(phi, d_real(0, i)) / n;
        g_fake(0, i) = -scale * phi_slope(phi, 1.0 - d_fake(0, i)) / n;
    }
    require_finite(real_term, "phi(D(x))");
    require_finite(fake_term, "phi(1 - D(G(gamma)))");

    ObjectiveGrad out;
    out.value = scale * (real_term + fake_term) / n;
    out.grad = backward(discriminator, real_cache, g_real);
    out.grad += backward(discriminator, fake_cache, g_fake);
    return out;
}

ObjectiveGrad discriminator_objective(const Mlp& discriminator, const Mlp& generator, const Matrix& real,
                                      const Matrix& codings, Phi phi, double scale) {
    require_codings(codings, generator.in_dim());
    return discriminator_objective_on(discriminator, real, forward_batch(generator, codings), phi, scale);
}

ObjectiveGrad generator_objective(const Mlp& discriminator, const Mlp& generator, const Matrix& codings, Phi phi,
                                  double scale) {
    require_codings(codings, generator.in_dim());
    require_dim(discriminator.in_dim(), generator.out_dim(), "discriminator input");
    require_dim(discriminator.out_dim(), 1, "discriminator output");
    const double n = static_cast<double>(codings.cols());
    ForwardCache g_cache, d_cache;
    const Matrix fake = forward_batch(generator, codings, g_cache);
    const Matrix d_fake = forward_batch(discriminator, fake, d_cache);

    double term = 0.0;
    Matrix g_out(1, codings.cols());
    for (Index i = 0; i < codings.cols(); ++i) {
        term += phi_value(phi, 1.0 - d_fake(0, i));
        g_out(0, i) = -scale * phi_slope(phi, 1.0 - d_fake(0, i)) / n;
    }
    require_finite(term, "phi(1 - D(G(gamma)))");

    Matrix d_fake_in;
    backward(discriminator, d_cache, g_out, &d_fake_in);
    ObjectiveGrad out;
    out.value = scale * term / n;
    out.grad = backward(generator, g_cache, d_fake_in);
    return out;
}

}  // namespace lcc::nn
