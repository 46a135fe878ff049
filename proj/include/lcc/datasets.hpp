#pragma once

#include "lcc/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lcc {

/// Samples are the columns of `samples` (data_dim x n).
struct Dataset {
    Matrix samples;
    std::string name;
    std::optional<int> intrinsic_dim_hint;
    /// Class labels when the source provides them.
    std::vector<int> labels;

    Index data_dim() const { return samples.rows(); }
    Index size() const { return samples.cols(); }

    /// Columns [begin, begin + count).
    Dataset slice(Index begin, Index count) const;
};

/// radius (cos t, sin t) + N(0, noise^2 I) with t ~ U[0, 2 pi).
Dataset make_ring(Index n, double radius, double noise_sigma, std::uint64_t seed);

/// (t cos t, y, t sin t) + N(0, noise^2 I) with t = 1.5 pi (1 + 2 u), u ~ U[0,1), y ~ U[0, 21).
Dataset make_swiss_roll(Index n, double noise_sigma, std::uint64_t seed);

/// Parses IDX image (magic 0x00000803) and optional label (0x00000801) buffers.
/// Pixels map to [-1, 1] via p / 127.5 - 1. With downsample > 0, images are
/// area-averaged (box filter) to downsample x downsample. limit = 0 keeps all.
Dataset parse_mnist_idx(const std::vector<unsigned char>& images, const std::vector<unsigned char>* labels,
                        Index limit, Index downsample);
Dataset load_mnist_idx(const std::string& images_path, const std::string& labels_path, Index limit,
                       Index downsample);

/// Box-filter resample of a rows x cols image (row-major) to out x out.
Vector box_downsample(const Vector& image, Index rows, Index cols, Index out);

/// One sample per row.
void write_dataset_csv(std::ostream& os, const Dataset& data);

}  // namespace lcc
