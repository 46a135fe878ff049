#include "lcc/cli/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>

namespace lcc::cli {

void write_pgm(std::ostream& os, const GrayImage& image) {
    os << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    os.write(reinterpret_cast<const char*>(image.pixels.data()), static_cast<std::streamsize>(image.pixels.size()));
}

void save_pgm(const std::string& path, const GrayImage& image) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    write_pgm(out, image);
}

GrayImage render_scatter(const Matrix& points, Index size, const Matrix& frame) {
    if (points.rows() < 2) throw DimensionError("render_scatter: need at least two coordinates");
    const Matrix& box = frame.size() > 0 ? frame : points;
    GrayImage img{size, size, std::vector<std::uint8_t>(static_cast<std::size_t>(size * size), 255)};
    if (box.cols() == 0) return img;
    const double x0 = box.row(0).minCoeff(), x1 = box.row(0).maxCoeff();
    const double y0 = box.row(1).minCoeff(), y1 = box.row(1).maxCoeff();
    const double span = std::max({x1 - x0, y1 - y0, 1e-12}) * 1.1;
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    for (Index i = 0; i < points.cols(); ++i) {
        const double u = (points(0, i) - cx) / span + 0.5;
        const double v = 0.5 - (points(1, i) - cy) / span;
        if (!(u >= 0.0 && u < 1.0 && v >= 0.0 && v < 1.0)) continue;
        const Index px = static_cast<Index>(u * static_cast<double>(size));
        const Index py = static_cast<Index>(v * static_cast<double>(size));
        img.pixels[static_cast<std::size_t>(py * size + px)] = 0;
    }
    return img;
}

GrayImage render_grid(const Matrix& images, Index side, Index columns) {
    require_dim(images.rows(), side * side, "render_grid: image size");
    const Index n = images.cols();
    const Index cols = std::max<Index>(1, std::min(columns, n));
    const Index rows = n == 0 ? 1 : (n + cols - 1) / cols;
    const Index pad = 1;
    GrayImage img{cols * (side + pad) + pad, rows * (side + pad) + pad, {}};
    img.pixels.assign(static_cast<std::size_t>(img.width * img.height), 0);
    for (Index k = 0; k < n; ++k) {
        const Index ox = pad + (k % cols) * (side + pad);
        const Index oy = pad + (k / cols) * (side + pad);
        for (Index r = 0; r < side; ++r) {
            for (Index c = 0; c < side; ++c) {
                const double v = std::clamp((images(r * side + c, k) + 1.0) * 127.5, 0.0, 255.0);
                img.pixels[static_cast<std::size_t>((oy + r) * img.width + ox + c)] =
                    static_cast<std::uint8_t>(std::lround(v));
            }
        }
    }
    return img;
}

}  // namespace lcc::cli
