#include "lcc/eval.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace lcc {

namespace {

// Sum of k(a_i, b_j) over all pairs, or over i != j when `distinct`.
double kernel_sum(const Matrix& a, const Matrix& b, double inv_two_bw2, bool distinct) {
    double total = 0.0;
    for (Index i = 0; i < a.cols(); ++i) {
        for (Index j = 0; j < b.cols(); ++j) {
            if (distinct && i == j) continue;
            total += std::exp(-(a.col(i) - b.col(j)).squaredNorm() * inv_two_bw2);
        }
    }
    return total;
}

}  // namespace

double mmd2(const Matrix& xs, const Matrix& ys, double bandwidth) {
    if (!(bandwidth > 0.0)) throw ConfigError("mmd2: bandwidth must be positive");
    if (xs.cols() == 0 || ys.cols() == 0) throw DimensionError("mmd2: empty sample set");
    require_dim(ys.rows(), xs.rows(), "mmd2: sample dimension");
    const Index n = xs.cols();
    const Index m = ys.cols();
    if (n < 2 || m < 2) return 0.0;
    const double c = 1.0 / (2.0 * bandwidth * bandwidth);
    const double kxx = kernel_sum(xs, xs, c, true) / static_cast<double>(n * (n - 1));
    const double kyy = kernel_sum(ys, ys, c, true) / static_cast<double>(m * (m - 1));
    // Equal sizes: paired U-statistic, cross pairs with i == j dropped too,
    // so identical sets give exactly zero. Otherwise the cross mean is over all pairs.
    const double kxy = n == m ? kernel_sum(xs, ys, c, true) / static_cast<double>(n * (n - 1))
                              : kernel_sum(xs, ys, c, false) / static_cast<double>(n * m);
    return kxx + kyy - 2.0 * kxy;
}

double median_pairwise_distance(const Matrix& xs) {
    if (xs.cols() < 2) throw DimensionError("median_pairwise_distance: need at least two samples");
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(xs.cols() * (xs.cols() - 1) / 2));
    for (Index i = 0; i < xs.cols(); ++i) {
        for (Index j = i + 1; j < xs.cols(); ++j) d.push_back((xs.col(i) - xs.col(j)).norm());
    }
    const std::size_t mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    if (d.size() % 2 == 1) return d[mid];
    const double upper = d[mid];
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double pearson_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b) {
    require_dim(b.size(), a.size(), "pearson_distance: vector length");
    const Vector ca = a.array() - a.mean();
    const Vector cb = b.array() - b.mean();
    const double na = ca.norm();
    const double nb = cb.norm();
    if (!(na > 0.0) || !(nb > 0.0)) throw Error("pearson_distance: zero-variance vector");
    const double r = std::clamp(ca.dot(cb) / (na * nb), -1.0, 1.0);
    return 1.0 - r;
}

std::pair<Index, double> pearson_nn(const Eigen::Ref<const Vector>& query, const Matrix& corpus) {
    if (corpus.cols() == 0) throw DimensionError("pearson_nn: empty corpus");
    Index best = 0;
    double best_d = pearson_distance(query, corpus.col(0));
    for (Index i = 1; i < corpus.cols(); ++i) {
        const double d = pearson_distance(query, corpus.col(i));
        if (d < best_d) {
            best_d = d;
            best = i;
        }
    }
    return {best, best_d};
}

}  // namespace lcc
