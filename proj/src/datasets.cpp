#include "lcc/datasets.hpp"

#include "lcc/binary_io.hpp"
#include "lcc/csv.hpp"
#include "lcc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lcc {

Dataset Dataset::slice(Index begin, Index count) const {
    if (begin < 0 || count < 0 || begin + count > size()) throw DimensionError("Dataset::slice: range out of bounds");
    Dataset out{samples.middleCols(begin, count), name, intrinsic_dim_hint, {}};
    if (!labels.empty()) {
        out.labels.assign(labels.begin() + begin, labels.begin() + begin + count);
    }
    return out;
}

Dataset make_ring(Index n, double radius, double noise_sigma, std::uint64_t seed) {
    if (n < 1) throw ConfigError("make_ring: n must be >= 1");
    Rng rng(seed);
    Matrix x(2, n);
    for (Index i = 0; i < n; ++i) {
        const double t = 2.0 * std::numbers::pi * rng.uniform();
        x(0, i) = radius * std::cos(t);
        x(1, i) = radius * std::sin(t);
        if (noise_sigma > 0.0) {
            x(0, i) += noise_sigma * rng.normal();
            x(1, i) += noise_sigma * rng.normal();
        }
    }
    return {std::move(x), "ring", 1, {}};
}

Dataset make_swiss_roll(Index n, double noise_sigma, std::uint64_t seed) {
    if (n < 1) throw ConfigError("make_swiss_roll: n must be >= 1");
    Rng rng(seed);
    Matrix x(3, n);
    for (Index i = 0; i < n; ++i) {
        const double t = 1.5 * std::numbers::pi * (1.0 + 2.0 * rng.uniform());
        const double y = 21.0 * rng.uniform();
        x(0, i) = t * std::cos(t);
        x(1, i) = y;
        x(2, i) = t * std::sin(t);
        if (noise_sigma > 0.0) {
            for (Index r = 0; r < 3; ++r) x(r, i) += noise_sigma * rng.normal();
        }
    }
    return {std::move(x), "swiss_roll", 2, {}};
}

Vector box_downsample(const Vector& image, Index rows, Index cols, Index out) {
    require_dim(image.size(), rows * cols, "box_downsample: image");
    if (out < 1) throw ConfigError("box_downsample: output size must be positive");
    // Output pixel (i, j) covers the input rectangle [i*sy, (i+1)*sy) x [j*sx, (j+1)*sx);
    // each input pixel contributes in proportion to its overlap.
    const double sy = static_cast<double>(rows) / static_cast<double>(out);
    const double sx = static_cast<double>(cols) / static_cast<double>(out);
    auto overlap = [](double a0, double a1, double b0, double b1) { return std::max(0.0, std::min(a1, b1) - std::max(a0, b0)); };
    Vector res(out * out);
    for (Index i = 0; i < out; ++i) {
        const double y0 = i * sy, y1 = (i + 1) * sy;
        for (Index j = 0; j < out; ++j) {
            const double x0 = j * sx, x1 = (j + 1) * sx;
            double acc = 0.0;
            for (Index r = static_cast<Index>(std::floor(y0)); r < std::min(rows, static_cast<Index>(std::ceil(y1))); ++r) {
                const double wy = overlap(y0, y1, static_cast<double>(r), static_cast<double>(r + 1));
                for (Index c = static_cast<Index>(std::floor(x0)); c < std::min(cols, static_cast<Index>(std::ceil(x1)));
                     ++c) {
                    acc += wy * overlap(x0, x1, static_cast<double>(c), static_cast<double>(c + 1)) * image(r * cols + c);
                }
            }
            res(i * out + j) = acc / (sy * sx);
        }
    }
    return res;
}

Dataset parse_mnist_idx(const std::vector<unsigned char>& images, const std::vector<unsigned char>* labels,
                        Index limit, Index downsample) {
    io::ByteReader in(images, "idx images");
    const std::uint32_t magic = in.u32_be("magic");
    if (magic != 0x00000803) throw ParseError("idx images: bad magic " + std::to_string(magic), 0);
    const std::uint32_t count = in.u32_be("image count");
    const std::uint32_t rows = in.u32_be("row count");
    const std::uint32_t cols = in.u32_be("column count");
    if (rows == 0 || cols == 0) throw ParseError("idx images: zero image dimension", in.offset());

    Index n = static_cast<Index>(count);
    if (limit > 0) n = std::min(n, limit);
    const Index pixels = static_cast<Index>(rows) * static_cast<Index>(cols);
    const Index dim = downsample > 0 ? downsample * downsample : pixels;

    std::vector<int> label_values;
    if (labels != nullptr) {
        io::ByteReader lin(*labels, "idx labels");
        const std::uint32_t lmagic = lin.u32_be("magic");
        if (lmagic != 0x00000801) throw ParseError("idx labels: bad magic " + std::to_string(lmagic), 0);
        const std::uint64_t count_offset = lin.offset();
        const std::uint32_t lcount = lin.u32_be("label count");
        if (lcount != count) throw ParseError("idx labels: count does not match image count", count_offset);
        const unsigned char* p = lin.take(static_cast<std::size_t>(n), "labels");
        label_values.assign(p, p + n);
    }

    Matrix x(dim, n);
    for (Index i = 0; i < n; ++i) {
        const unsigned char* p = in.take(static_cast<std::size_t>(pixels), "image pixels");
        Vector img(pixels);
        for (Index k = 0; k < pixels; ++k) img(k) = static_cast<double>(p[k]) / 127.5 - 1.0;
        x.col(i) = downsample > 0 ? box_downsample(img, rows, cols, downsample) : img;
    }
    return {std::move(x), "mnist", std::nullopt, std::move(label_values)};
}

Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path, Index limit,
                       Index downsample) {
    const auto images = io::read_file(images_path);
    if (labels_path.empty()) return parse_mnist_idx(images, nullptr, limit, downsample);
    const auto labels = io::read_file(labels_path);
    return parse_mnist_idx(images, &labels, limit, downsample);
}

void write_dataset_csv(std::ostream& os, const Dataset& data) { write_matrix_csv(os, data.samples.transpose()); }

}  // namespace lcc
