#pragma once

#include "lcc/common.hpp"

#include <cstdint>
#include <vector>

namespace lcc {

/// Anchor points (local bases) stored as the columns of a d_B x M matrix.
class AnchorSet {
public:
    AnchorSet() = default;
    explicit AnchorSet(Matrix anchors);

    Index d_b() const noexcept { return anchors_.rows(); }
    Index m() const noexcept { return anchors_.cols(); }

    const Matrix& matrix() const noexcept { return anchors_; }
    auto anchor(Index j) const { return anchors_.col(j); }

    friend bool operator==(const AnchorSet& a, const AnchorSet& b) {
        return a.anchors_.rows() == b.anchors_.rows() && a.anchors_.cols() == b.anchors_.cols() &&
               a.anchors_ == b.anchors_;
    }

private:
    Matrix anchors_;
};

/// Weights over the anchors of an AnchorSet. Solver and sampler outputs sum to one.
struct Coding {
    Vector weights;

    Coding() = default;
    explicit Coding(Vector w) : weights(std::move(w)) {}

    static Coding one_hot(Index m, Index j) {
        Vector w = Vector::Zero(m);
        w(j) = 1.0;
        return Coding(std::move(w));
    }

    Index size() const noexcept { return weights.size(); }
    double sum() const { return weights.sum(); }
    Index nnz() const { return (weights.array() != 0.0).count(); }
    std::vector<Index> support() const;
};

struct LccConfig {
    double l_h = 1.0;
    /// L_G when q == 2, L_nu when q == 3.
    double l_q = 1e-4;
    int q = 2;
    Index m = 128;
    Index d = 5;
    int max_outer_iters = 100;
    int max_coding_sweeps = 100;
    double coding_tol = 1e-10;
    double anchor_tol = 1e-6;
    std::uint64_t seed = 0;
    /// With fewer points than anchors, seed the surplus anchors from jittered
    /// data points instead of failing.
    bool fill_missing_anchors = false;

    void validate() const;
};

/// r(h) = V * gamma.
Vector reconstruct(const Coding& coding, const AnchorSet& anchors);

/// Per-point training objective
///   2 L_h ||h - V gamma|| + L_q sum_v |gamma_v| ||v - h||^q.
double coding_objective(const Eigen::Ref<const Vector>& h, const Coding& coding, const AnchorSet& anchors,
                        const LccConfig& config);

/// Indices of the d anchors closest to h, ascending by distance, ties to the lower index.
std::vector<Index> nearest_anchors(const Eigen::Ref<const Vector>& h, const AnchorSet& anchors, Index d);

/// Solves the coding subproblem for one point over its config.d nearest
/// anchors, so at most d weights are nonzero. Starts from `warm_start` when
/// its support lies in that neighborhood, otherwise from the one-hot coding of
/// the nearest anchor. The result is the visited iterate with the smallest
/// coding_objective.
Coding solve_coding(const Eigen::Ref<const Vector>& h, const AnchorSet& anchors, const LccConfig& config,
                    const Coding* warm_start = nullptr);

/// Mean of coding_objective over the columns of `points`.
double lcc_objective(const Matrix& points, const std::vector<Coding>& codings, const AnchorSet& anchors,
                     const LccConfig& config);

/// Localization measure: mean over points of
///   2 L_h ||h - r(h)|| + L_q sum_v |gamma_v| ||v - r(h)||^q.
double localization_measure(const Matrix& points, const std::vector<Coding>& codings, const AnchorSet& anchors,
                            const LccConfig& config);

struct LccFit {
    AnchorSet anchors;
    std::vector<Coding> codings;
    /// objective_history[0] is the value at initialization, then one entry per outer iteration.
    std::vector<double> objective_history;
};

/// k-means++ seeding over the columns of `points`.
AnchorSet init_anchors(const Matrix& points, const LccConfig& config);

/// Alternating minimization over codings and anchors, starting from `initial`.
LccFit learn_anchors(const Matrix& points, const AnchorSet& initial, const LccConfig& config);

/// Same, starting from init_anchors(points, config).
LccFit learn_anchors(const Matrix& points, const LccConfig& config);

}  // namespace lcc
