#pragma once

#include "lcc/lcc_core.hpp"

#include <iosfwd>
#include <string>

namespace lcc {

// Binary layout: "LCCA", u32 d_B, u32 M (little-endian), then M * d_B
// little-endian f64 values in column-major order (anchor by anchor).

void write_anchors(std::ostream& os, const AnchorSet& anchors);
void save_anchors(const std::string& path, const AnchorSet& anchors);
AnchorSet read_anchors(const std::vector<unsigned char>& bytes, const std::string& source = "anchors");
AnchorSet load_anchors(const std::string& path);

/// One anchor per row, comma separated, full round-trip precision.
void write_anchors_csv(std::ostream& os, const AnchorSet& anchors);

}  // namespace lcc
