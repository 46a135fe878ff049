#pragma once

#include "lcc/lcc_core.hpp"
#include "lcc/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace lcc {

struct SamplerConfig {
    /// Neighborhood size: number of anchors receiving a nonzero weight.
    Index d = 5;
    std::uint64_t seed = 0;
    /// Redraw z while |sum z| falls below this.
    double min_abs_sum = 1e-2;
    int max_redraws = 64;

    void validate(Index m) const;
};

/// Indices of the d anchors closest to `query`, ascending by distance, ties to the lower index.
std::vector<Index> knn(const Eigen::Ref<const Vector>& query, const AnchorSet& anchors, Index d);

/// The center anchor followed by its d - 1 nearest other anchors.
std::vector<Index> neighborhood(const AnchorSet& anchors, Index center, Index d);

/// Local sampling around a given center anchor: z ~ N(0, I_d) is placed on
/// the neighborhood slots in ascending-distance order and normalized to sum one.
Coding sample_coding_at(const AnchorSet& anchors, Index center, const SamplerConfig& config, Rng& rng);

/// Same with the center drawn uniformly among the anchors.
Coding sample_coding(const AnchorSet& anchors, const SamplerConfig& config, Rng& rng);

/// n codings stacked as the columns of an M x n matrix.
Matrix sample_codings(const AnchorSet& anchors, const SamplerConfig& config, Rng& rng, Index n);

/// (1 - t) a + t b for t = 0, 1/(steps-1), ..., 1.
std::vector<Coding> interpolate(const Coding& a, const Coding& b, int steps);

/// One line per coding: "index:weight" pairs of the support, comma separated.
void write_codings_csv(std::ostream& os, const std::vector<Coding>& codings);
std::vector<Coding> read_codings_csv(std::istream& is, Index m);

}  // namespace lcc
