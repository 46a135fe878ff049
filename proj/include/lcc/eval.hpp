#pragma once

#include "lcc/common.hpp"

#include <utility>

namespace lcc {

/// Unbiased squared MMD with the Gaussian kernel exp(-||a - b||^2 / (2 bandwidth^2)).
/// Samples are columns. When either set has fewer than two samples there are
/// no distinct within-set pairs and the estimate is 0 by convention. With equal
/// sizes the cross term also skips i == j, so identical sets give exactly 0.
double mmd2(const Matrix& xs, const Matrix& ys, double bandwidth);

/// Median of the pairwise Euclidean distances between distinct columns.
double median_pairwise_distance(const Matrix& xs);

/// 1 - Pearson correlation. Throws for constant vectors.
double pearson_distance(const Eigen::Ref<const Vector>& a, const Eigen::Ref<const Vector>& b);

/// Closest corpus column under pearson_distance; ties go to the lower index.
std::pair<Index, double> pearson_nn(const Eigen::Ref<const Vector>& query, const Matrix& corpus);

}  // namespace lcc
