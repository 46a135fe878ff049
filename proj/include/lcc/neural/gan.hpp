#pragma once

#include "lcc/lcc_core.hpp"
#include "lcc/neural/adam.hpp"
#include "lcc/neural/loss.hpp"
#include "lcc/sampling.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lcc::nn {

struct GanArch {
    std::vector<Index> generator_hidden{128, 128};
    std::vector<Index> discriminator_hidden{128, 128};
    /// identity for unbounded data, tanh for images scaled to [-1, 1].
    Activation generator_output = Activation::identity;
};

/// Generator G_w(gamma) consuming codings of length M, discriminator D_v, and their optimizer state.
struct GanModel {
    Mlp generator;
    Mlp discriminator;
    Phi phi = Phi::log;
    AdamParams adam;
    AdamState generator_state;
    AdamState discriminator_state;

    Index coding_dim() const { return generator.in_dim(); }
    Index data_dim() const { return generator.out_dim(); }
};

GanModel make_gan(Index coding_dim, Index data_dim, Phi phi, const GanArch& arch, const AdamParams& adam,
                  std::uint64_t seed);

struct GanTrace {
    /// -(discriminator objective) after each discriminator step's evaluation.
    std::vector<double> d_loss;
    /// Generator objective phi(1 - D(G(gamma))) evaluated before each generator step.
    std::vector<double> g_loss;
};

/// Alternating minibatch training: one discriminator ascent step on a fresh
/// coding batch, then one generator descent step on another fresh batch.
GanTrace train_gan(const Matrix& data, const AnchorSet& anchors, const SamplerConfig& sampler, GanModel& gan,
                   int iters, Index batch, std::uint64_t seed);

/// Generator outputs for the coding columns.
Matrix generate(const GanModel& gan, const Matrix& codings);

// Checkpoint layout: "LCCN", u32 layer count, then per layer u32 rows,
// u32 cols, u8 activation tag, rows*cols f64 weights (row-major), rows f64
// biases. All integers and floats little-endian.
void write_mlp(std::ostream& os, const Mlp& net);
void save_mlp(const std::string& path, const Mlp& net);
Mlp read_mlp(const std::vector<unsigned char>& bytes, const std::string& source = "checkpoint");
Mlp load_mlp(const std::string& path);

/// "iter,d_loss,g_loss" rows.
void write_trace_csv(std::ostream& os, const GanTrace& trace);

}  // namespace lcc::nn
