#pragma once

#include "lcc/common.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace lcc::cli {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    Index width = 0;
    Index height = 0;
    std::vector<std::uint8_t> pixels;
};

/// Binary PGM ("P5", maxval 255).
void write_pgm(std::ostream& os, const GrayImage& image);
void save_pgm(const std::string& path, const GrayImage& image);

/// Scatter plot of the first two coordinates of each column on a white canvas,
/// framed by the bounding box of `frame` (or of the points when `frame` is empty).
GrayImage render_scatter(const Matrix& points, Index size, const Matrix& frame = Matrix());

/// Tiles square images (one per column, values in [-1, 1]) into a grid.
GrayImage render_grid(const Matrix& images, Index side, Index columns);

}  // namespace lcc::cli
