#include "lcc/sampling.hpp"

#include "lcc/csv.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace lcc {

void SamplerConfig::validate(Index m) const {
    if (d < 1 || d > m) {
        throw ConfigError("sampler: d must satisfy 1 <= d <= M (d=" + std::to_string(d) + ", M=" + std::to_string(m) +
                          ")");
    }
    if (!(min_abs_sum > 0.0)) throw ConfigError("sampler: min_abs_sum must be positive");
    if (max_redraws < 0) throw ConfigError("sampler: max_redraws must be nonnegative");
}

std::vector<Index> knn(const Eigen::Ref<const Vector>& query, const AnchorSet& anchors, Index d) {
    require_dim(query.size(), anchors.d_b(), "knn: query");
    if (d < 0 || d > anchors.m()) {
        throw DimensionError("knn: d=" + std::to_string(d) + " exceeds anchor count " + std::to_string(anchors.m()));
    }
    return nearest_anchors(query, anchors, d);
}

std::vector<Index> neighborhood(const AnchorSet& anchors, Index center, Index d) {
    if (center < 0 || center >= anchors.m()) throw DimensionError("neighborhood: center out of range");
    std::vector<Index> nb = knn(anchors.anchor(center), anchors, std::min(d + 1, anchors.m()));
    // Coincident anchors with a lower index would otherwise be able to displace the center.
    nb.erase(std::remove(nb.begin(), nb.end(), center), nb.end());
    nb.insert(nb.begin(), center);
    nb.resize(static_cast<std::size_t>(d));
    return nb;
}

Coding sample_coding_at(const AnchorSet& anchors, Index center, const SamplerConfig& config, Rng& rng) {
    config.validate(anchors.m());
    const std::vector<Index> nb = neighborhood(anchors, center, config.d);
    Vector z(config.d);
    for (int attempt = 0; attempt <= config.max_redraws; ++attempt) {
        for (Index k = 0; k < config.d; ++k) z(k) = rng.normal();
        const double s = z.sum();
        if (std::abs(s) < config.min_abs_sum) continue;
        Vector w = Vector::Zero(anchors.m());
        for (Index k = 0; k < config.d; ++k) w(nb[static_cast<std::size_t>(k)]) = z(k) / s;
        return Coding(std::move(w));
    }
    throw DegenerateCodingError("sample_coding: |sum z| below " + format_double(config.min_abs_sum) + " after " +
                                std::to_string(config.max_redraws) + " redraws");
}

Coding sample_coding(const AnchorSet& anchors, const SamplerConfig& config, Rng& rng) {
    const Index center = static_cast<Index>(rng.below(static_cast<std::uint64_t>(anchors.m())));
    return sample_coding_at(anchors, center, config, rng);
}

Matrix sample_codings(const AnchorSet& anchors, const SamplerConfig& config, Rng& rng, Index n) {
    Matrix out(anchors.m(), n);
    for (Index i = 0; i < n; ++i) out.col(i) = sample_coding(anchors, config, rng).weights;
    return out;
}

std::vector<Coding> interpolate(const Coding& a, const Coding& b, int steps) {
    require_dim(b.size(), a.size(), "interpolate: coding length");
    if (steps < 2) throw ConfigError("interpolate: steps must be >= 2");
    std::vector<Coding> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(steps - 1);
        out.emplace_back((1.0 - t) * a.weights + t * b.weights);
    }
    return out;
}

void write_codings_csv(std::ostream& os, const std::vector<Coding>& codings) {
    for (const Coding& c : codings) {
        bool first = true;
        for (Index j : c.support()) {
            os << (first ? "" : ",") << j << ':' << format_double(c.weights(j));
            first = false;
        }
        os << '\n';
    }
}

std::vector<Coding> read_codings_csv(std::istream& is, Index m) {
    std::vector<Coding> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        Vector w = Vector::Zero(m);
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            const auto colon = cell.find(':');
            long long idx = -1;
            double val = 0.0;
            const bool ok = colon != std::string::npos &&
                            std::from_chars(cell.data(), cell.data() + colon, idx).ec == std::errc{} &&
                            std::from_chars(cell.data() + colon + 1, cell.data() + cell.size(), val).ec == std::errc{};
            if (!ok || idx < 0 || idx >= m) {
                throw Error("codings csv: malformed entry '" + cell + "' on line " + std::to_string(line_no));
            }
            w(static_cast<Index>(idx)) = val;
        }
        out.emplace_back(std::move(w));
    }
    return out;
}

}  // namespace lcc
