#include "lcc/neural/gan.hpp"

#include "lcc/binary_io.hpp"
#include "lcc/csv.hpp"

#include <fstream>

namespace lcc::nn {

GanModel make_gan(Index coding_dim, Index data_dim, Phi phi, const GanArch& arch, const AdamParams& adam,
                  std::uint64_t seed) {
    Rng g_rng = Rng(seed).split(10);
    Rng d_rng = Rng(seed).split(11);
    std::vector<Index> g_widths{coding_dim};
    g_widths.insert(g_widths.end(), arch.generator_hidden.begin(), arch.generator_hidden.end());
    g_widths.push_back(data_dim);
    std::vector<Index> d_widths{data_dim};
    d_widths.insert(d_widths.end(), arch.discriminator_hidden.begin(), arch.discriminator_hidden.end());
    d_widths.push_back(1);

    GanModel gan;
    gan.generator = Mlp::make(g_widths, Activation::relu, arch.generator_output, g_rng);
    gan.discriminator = Mlp::make(d_widths, Activation::relu, discriminator_output(phi), d_rng);
    gan.phi = phi;
    gan.adam = adam;
    gan.generator_state = AdamState::for_net(gan.generator);
    gan.discriminator_state = AdamState::for_net(gan.discriminator);
    return gan;
}

GanTrace train_gan(const Matrix& data, const AnchorSet& anchors, const SamplerConfig& sampler, GanModel& gan,
                   int iters, Index batch, std::uint64_t seed) {
    require_dim(gan.data_dim(), data.rows(), "train_gan: generator output vs data");
    require_dim(gan.coding_dim(), anchors.m(), "train_gan: generator input vs anchor count");
    if (data.cols() == 0) throw InsufficientDataError("train_gan: empty data");
    if (batch < 1) throw ConfigError("train_gan: batch must be positive");
    sampler.validate(anchors.m());

    Rng coding_rng = Rng(seed).split(1);
    Rng data_rng = Rng(seed).split(2);
    GanTrace trace;
    trace.d_loss.reserve(static_cast<std::size_t>(std::max(iters, 0)));
    trace.g_loss.reserve(static_cast<std::size_t>(std::max(iters, 0)));

    Matrix real(data.rows(), batch);
    for (int it = 0; it < iters; ++it) {
        try {
            const Matrix codings = sample_codings(anchors, sampler, coding_rng, batch);
            for (Index k = 0; k < batch; ++k) {
                real.col(k) = data.col(static_cast<Index>(data_rng.below(static_cast<std::uint64_t>(data.cols()))));
            }
            ObjectiveGrad d_obj = discriminator_objective(gan.discriminator, gan.generator, real, codings, gan.phi);
            d_obj.grad *= -1.0;  // ascend
            adam_step(gan.discriminator, d_obj.grad, gan.discriminator_state, gan.adam);

            const Matrix g_codings = sample_codings(anchors, sampler, coding_rng, batch);
            const ObjectiveGrad g_obj = generator_objective(gan.discriminator, gan.generator, g_codings, gan.phi);
            adam_step(gan.generator, g_obj.grad, gan.generator_state, gan.adam);

            trace.d_loss.push_back(-d_obj.value);
            trace.g_loss.push_back(g_obj.value);
        } catch (const NonFiniteError& e) {
            throw NonFiniteError("train_gan: aborted at iteration " + std::to_string(it) + ": " + e.what());
        }
    }
    return trace;
}

Matrix generate(const GanModel& gan, const Matrix& codings) {
    require_codings(codings, gan.coding_dim());
    return forward_batch(gan.generator, codings);
}

void write_mlp(std::ostream& os, const Mlp& net) {
    os.write("LCCN", 4);
    io::put_u32(os, static_cast<std::uint32_t>(net.depth()));
    for (const Layer& l : net.layers()) {
        io::put_u32(os, static_cast<std::uint32_t>(l.weight.rows()));
        io::put_u32(os, static_cast<std::uint32_t>(l.weight.cols()));
        os.put(static_cast<char>(l.act));
        for (Index i = 0; i < l.weight.rows(); ++i) {
            for (Index j = 0; j < l.weight.cols(); ++j) io::put_f64(os, l.weight(i, j));
        }
        for (Index i = 0; i < l.bias.size(); ++i) io::put_f64(os, l.bias(i));
    }
}

void save_mlp(const std::string& path, const Mlp& net) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    write_mlp(out, net);
}

Mlp read_mlp(const std::vector<unsigned char>& bytes, const std::string& source) {
    io::ByteReader in(bytes, source);
    in.expect_magic("LCCN");
    const std::uint32_t count = in.u32_le("layer count");
    std::vector<Layer> layers;
    for (std::uint32_t k = 0; k < count; ++k) {
        const std::uint32_t rows = in.u32_le("layer rows");
        const std::uint32_t cols = in.u32_le("layer cols");
        const std::uint64_t tag_offset = in.offset();
        const std::uint8_t tag = in.u8("activation tag");
        if (tag > static_cast<std::uint8_t>(Activation::sigmoid)) {
            throw ParseError(source + ": unknown activation tag " + std::to_string(tag), tag_offset);
        }
        if (static_cast<std::uint64_t>(rows) * cols * 8 > in.remaining()) {
            throw ParseError(source + ": truncated layer " + std::to_string(k), in.offset());
        }
        Layer l{Matrix(rows, cols), Vector(rows), static_cast<Activation>(tag)};
        for (Index i = 0; i < l.weight.rows(); ++i) {
            for (Index j = 0; j < l.weight.cols(); ++j) l.weight(i, j) = in.f64_le("weight");
        }
        for (Index i = 0; i < l.bias.size(); ++i) l.bias(i) = in.f64_le("bias");
        layers.push_back(std::move(l));
    }
    in.expect_end();
    try {
        return Mlp(std::move(layers));
    } catch (const DimensionError& e) {
        throw ParseError(source + ": " + e.what(), in.offset());
    }
}

Mlp load_mlp(const std::string& path) { return read_mlp(io::read_file(path), path); }

void write_trace_csv(std::ostream& os, const GanTrace& trace) {
    os << "iter,d_loss,g_loss\n";
    for (std::size_t i = 0; i < trace.d_loss.size(); ++i) {
        os << i << ',' << format_double(trace.d_loss[i]) << ',' << format_double(trace.g_loss[i]) << '\n';
    }
}

}  // namespace lcc::nn
