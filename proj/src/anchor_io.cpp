#include "lcc/anchor_io.hpp"

#include "lcc/binary_io.hpp"
#include "lcc/csv.hpp"

#include <fstream>
#include <iterator>

namespace lcc {

namespace io {

std::vector<unsigned char> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace io

void write_anchors(std::ostream& os, const AnchorSet& anchors) {
    os.write("LCCA", 4);
    io::put_u32(os, static_cast<std::uint32_t>(anchors.d_b()));
    io::put_u32(os, static_cast<std::uint32_t>(anchors.m()));
    const Matrix& V = anchors.matrix();
    for (Index j = 0; j < V.cols(); ++j) {
        for (Index i = 0; i < V.rows(); ++i) io::put_f64(os, V(i, j));
    }
}

void save_anchors(const std::string& path, const AnchorSet& anchors) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    write_anchors(out, anchors);
}

AnchorSet read_anchors(const std::vector<unsigned char>& bytes, const std::string& source) {
    io::ByteReader in(bytes, source);
    in.expect_magic("LCCA");
    const std::uint32_t d_b = in.u32_le("d_B");
    const std::uint32_t m = in.u32_le("M");
    if (d_b == 0 || m == 0) throw ParseError(source + ": zero dimension", in.offset());
    if (in.remaining() != static_cast<std::size_t>(d_b) * m * 8) {
        throw ParseError(source + ": payload size does not match " + std::to_string(d_b) + "x" + std::to_string(m),
                         in.offset());
    }
    Matrix V(d_b, m);
    for (Index j = 0; j < V.cols(); ++j) {
        for (Index i = 0; i < V.rows(); ++i) V(i, j) = in.f64_le("anchor entry");
    }
    return AnchorSet(std::move(V));
}

AnchorSet load_anchors(const std::string& path) { return read_anchors(io::read_file(path), path); }

void write_anchors_csv(std::ostream& os, const AnchorSet& anchors) {
    write_matrix_csv(os, anchors.matrix().transpose());
}

}  // namespace lcc
