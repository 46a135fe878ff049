#include "lcc/lcc_core.hpp"

#include "lcc/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace lcc {

namespace {

// Smoothing added under the reconstruction norm inside the coordinate solver.
constexpr double kSmoothing = 1e-12;
// Normalization divisor below which a coding is considered degenerate.
constexpr double kMinCodingSum = 1e-8;

double pow_q(double dist, int q) { return q == 2 ? dist * dist : dist * dist * dist; }

Index nearest_anchor(const Eigen::Ref<const Vector>& h, const Matrix& anchors) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < anchors.cols(); ++j) {
        const double d = (anchors.col(j) - h).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = j;
        }
    }
    return best;
}

// Minimizes  a * sqrt(alpha (t - c)^2 + s0) + l1 |t - k1| + l2 |t - k2|  over t.
// The function is convex; candidates are the two kinks and the clamped
// stationary point of each smooth piece. Returns 0 unless a candidate is
// strictly better than staying put.
class PairProblem {
public:
    double a, alpha, c, s0, l1, k1, l2, k2;

    double operator()(double t) const {
        return a * std::sqrt(alpha * (t - c) * (t - c) + s0) + l1 * std::abs(t - k1) + l2 * std::abs(t - k2);
    }

    double argmin() const {
        const double lo = std::min(k1, k2);
        const double hi = std::max(k1, k2);
        std::array<double, 6> cand{0.0, lo, hi, 0.0, 0.0, 0.0};
        std::size_t n = 3;
        if (a > 0.0 && alpha > 0.0) {
            const double inf = std::numeric_limits<double>::infinity();
            const std::array<std::array<double, 2>, 3> pieces{{{-inf, lo}, {lo, hi}, {hi, inf}}};
            for (const auto& piece : pieces) {
                const double probe = std::isfinite(piece[0]) ? (std::isfinite(piece[1]) ? 0.5 * (piece[0] + piece[1])
                                                                                         : piece[0] + 1.0)
                                                             : piece[1] - 1.0;
                const double slope = l1 * sign(probe - k1) + l2 * sign(probe - k2);
                const double kappa = -slope / (a * std::sqrt(alpha));
                if (std::abs(kappa) >= 1.0) continue;
                const double w = kappa * std::sqrt(s0 / (1.0 - kappa * kappa));
                cand[n++] = std::clamp(c + w / std::sqrt(alpha), piece[0], piece[1]);
            }
        }
        double best_t = 0.0;
        double best_f = (*this)(0.0);
        for (std::size_t i = 1; i < n; ++i) {
            const double f = (*this)(cand[i]);
            if (f < best_f) {
                best_f = f;
                best_t = cand[i];
            }
        }
        return best_t;
    }

private:
    static double sign(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }
};

double smoothed_objective(const Vector& residual, const Vector& gamma, const Vector& penalty, double l_h) {
    return 2.0 * l_h * std::sqrt(residual.squaredNorm() + kSmoothing) + penalty.cwiseProduct(gamma.cwiseAbs()).sum();
}

}  // namespace

AnchorSet::AnchorSet(Matrix anchors) : anchors_(std::move(anchors)) {
    if (anchors_.rows() == 0 || anchors_.cols() == 0) throw DimensionError("AnchorSet: empty anchor matrix");
    if (!anchors_.allFinite()) throw NonFiniteError("AnchorSet: non-finite anchor entry");
}

std::vector<Index> Coding::support() const {
    std::vector<Index> idx;
    for (Index j = 0; j < weights.size(); ++j) {
        if (weights(j) != 0.0) idx.push_back(j);
    }
    return idx;
}

void LccConfig::validate() const {
    if (q != 2 && q != 3) throw ConfigError("lcc: q must be 2 or 3, got " + std::to_string(q));
    if (m < 1) throw ConfigError("lcc: m must be positive");
    if (d < 1 || d > m) throw ConfigError("lcc: d must satisfy 1 <= d <= m");
    if (!(l_h >= 0.0) || !(l_q >= 0.0)) throw ConfigError("lcc: l_h and l_q must be nonnegative");
    if (!(coding_tol > 0.0) || !(anchor_tol > 0.0)) throw ConfigError("lcc: tolerances must be positive");
    if (max_outer_iters < 0 || max_coding_sweeps < 1) throw ConfigError("lcc: invalid iteration limits");
}

Vector reconstruct(const Coding& coding, const AnchorSet& anchors) {
    require_dim(coding.size(), anchors.m(), "reconstruct: coding length");
    return anchors.matrix() * coding.weights;
}

double coding_objective(const Eigen::Ref<const Vector>& h, const Coding& coding, const AnchorSet& anchors,
                        const LccConfig& config) {
    require_dim(h.size(), anchors.d_b(), "coding_objective: point");
    require_dim(coding.size(), anchors.m(), "coding_objective: coding length");
    double penalty = 0.0;
    for (Index j = 0; j < anchors.m(); ++j) {
        const double g = coding.weights(j);
        if (g != 0.0) penalty += std::abs(g) * pow_q((anchors.anchor(j) - h).norm(), config.q);
    }
    return 2.0 * config.l_h * (h - anchors.matrix() * coding.weights).norm() + config.l_q * penalty;
}

std::vector<Index> nearest_anchors(const Eigen::Ref<const Vector>& h, const AnchorSet& anchors, Index d) {
    require_dim(h.size(), anchors.d_b(), "nearest_anchors: point");
    d = std::clamp<Index>(d, 0, anchors.m());
    const Vector dist = (anchors.matrix().colwise() - h).colwise().squaredNorm().transpose();
    std::vector<Index> idx(static_cast<std::size_t>(anchors.m()));
    std::iota(idx.begin(), idx.end(), Index{0});
    std::partial_sort(idx.begin(), idx.begin() + d, idx.end(), [&](Index a, Index b) {
        return dist(a) < dist(b) || (dist(a) == dist(b) && a < b);
    });
    idx.resize(static_cast<std::size_t>(d));
    return idx;
}

Coding solve_coding(const Eigen::Ref<const Vector>& h, const AnchorSet& anchors, const LccConfig& config,
                    const Coding* warm_start) {
    require_dim(h.size(), anchors.d_b(), "solve_coding: point");
    if (!h.allFinite()) throw NonFiniteError("solve_coding: non-finite point");
    const Matrix& V = anchors.matrix();
    const Index m = anchors.m();

    const std::vector<Index> active = nearest_anchors(h, anchors, std::min(config.d, m));
    Vector gamma;
    if (warm_start != nullptr) {
        require_dim(warm_start->size(), m, "solve_coding: warm start length");
        const double s = warm_start->sum();
        if (std::abs(s) < kMinCodingSum) throw DegenerateCodingError("solve_coding: warm start sums to ~0");
        gamma = warm_start->weights / s;
        Vector outside = gamma;
        for (Index j : active) outside(j) = 0.0;
        if ((outside.array() != 0.0).any()) gamma = Coding::one_hot(m, active.front()).weights;
    } else {
        gamma = Coding::one_hot(m, active.front()).weights;
    }
    if (m == 1 || active.size() == 1) return Coding(gamma);

    Vector penalty(m);
    for (Index j = 0; j < m; ++j) penalty(j) = config.l_q * pow_q((V.col(j) - h).norm(), config.q);

    Coding best(gamma);
    double best_obj = coding_objective(h, best, anchors, config);
    Vector residual = h - V * gamma;
    double smooth_prev = smoothed_objective(residual, gamma, penalty, config.l_h);
    const double a = 2.0 * config.l_h;

    for (int sweep = 0; sweep < config.max_coding_sweeps; ++sweep) {
        Index pivot = active.front();
        for (Index j : active)
            if (std::abs(gamma(j)) > std::abs(gamma(pivot))) pivot = j;
        for (Index i : active) {
            if (i == pivot) continue;
            // Move mass t from the pivot to coordinate i; the sum stays fixed.
            const Vector u = V.col(i) - V.col(pivot);
            const double alpha = u.squaredNorm();
            const double beta = residual.dot(u);
            const double rho2 = residual.squaredNorm();
            PairProblem prob{};
            prob.a = a;
            prob.alpha = alpha;
            prob.c = alpha > 0.0 ? beta / alpha : 0.0;
            prob.s0 = (alpha > 0.0 ? std::max(0.0, rho2 - beta * beta / alpha) : rho2) + kSmoothing;
            prob.l1 = penalty(i);
            prob.k1 = -gamma(i);
            prob.l2 = penalty(pivot);
            prob.k2 = gamma(pivot);
            const double t = prob.argmin();
            if (t != 0.0) {
                gamma(i) += t;
                gamma(pivot) -= t;
                residual -= t * u;
            }
        }

        const double s = gamma.sum();
        if (!std::isfinite(s) || std::abs(s) < kMinCodingSum) {
            throw DegenerateCodingError("solve_coding: normalization divisor " + std::to_string(s));
        }
        gamma /= s;
        residual = h - V * gamma;

        const Coding current(gamma);
        const double obj = coding_objective(h, current, anchors, config);
        if (obj < best_obj) {
            best_obj = obj;
            best = current;
        }
        const double smooth = smoothed_objective(residual, gamma, penalty, config.l_h);
        if (smooth_prev - smooth < config.coding_tol * std::max(1.0, smooth_prev)) break;
        smooth_prev = smooth;
    }
    return best;
}

double lcc_objective(const Matrix& points, const std::vector<Coding>& codings, const AnchorSet& anchors,
                     const LccConfig& config) {
    require_dim(static_cast<Index>(codings.size()), points.cols(), "lcc_objective: coding count");
    if (points.cols() == 0) return 0.0;
    double total = 0.0;
    for (Index i = 0; i < points.cols(); ++i) {
        total += coding_objective(points.col(i), codings[static_cast<std::size_t>(i)], anchors, config);
    }
    return total / static_cast<double>(points.cols());
}

double localization_measure(const Matrix& points, const std::vector<Coding>& codings, const AnchorSet& anchors,
                            const LccConfig& config) {
    require_dim(static_cast<Index>(codings.size()), points.cols(), "localization_measure: coding count");
    require_dim(points.rows(), anchors.d_b(), "localization_measure: point");
    if (points.cols() == 0) return 0.0;
    double total = 0.0;
    for (Index i = 0; i < points.cols(); ++i) {
        const Coding& c = codings[static_cast<std::size_t>(i)];
        const Vector r = reconstruct(c, anchors);
        double local = 0.0;
        for (Index j = 0; j < anchors.m(); ++j) {
            if (c.weights(j) != 0.0) local += std::abs(c.weights(j)) * pow_q((anchors.anchor(j) - r).norm(), config.q);
        }
        total += 2.0 * config.l_h * (points.col(i) - r).norm() + config.l_q * local;
    }
    return total / static_cast<double>(points.cols());
}

AnchorSet init_anchors(const Matrix& points, const LccConfig& config) {
    config.validate();
    const Index n = points.cols();
    if (n == 0) throw InsufficientDataError("init_anchors: no points");
    if (n < config.m && !config.fill_missing_anchors) {
        throw InsufficientDataError("init_anchors: " + std::to_string(n) + " points for " +
                                    std::to_string(config.m) + " anchors");
    }
    Rng rng(config.seed);
    const Index seeded = std::min(n, config.m);
    Matrix anchors(points.rows(), config.m);

    // k-means++: each new center is drawn with probability proportional to
    // the squared distance to the closest center chosen so far.
    Vector dist2 = Vector::Constant(n, std::numeric_limits<double>::infinity());
    Index chosen = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    for (Index k = 0; k < seeded; ++k) {
        anchors.col(k) = points.col(chosen);
        if (k + 1 == seeded) break;
        for (Index i = 0; i < n; ++i) dist2(i) = std::min(dist2(i), (points.col(i) - anchors.col(k)).squaredNorm());
        const double total = dist2.sum();
        if (!(total > 0.0)) {
            chosen = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            continue;
        }
        const double target = rng.uniform() * total;
        double acc = 0.0;
        chosen = n - 1;
        for (Index i = 0; i < n; ++i) {
            acc += dist2(i);
            if (acc > target && dist2(i) > 0.0) {
                chosen = i;
                break;
            }
        }
        while (dist2(chosen) == 0.0 && chosen > 0) --chosen;
    }

    if (seeded < config.m) {
        const Vector mean = points.rowwise().mean();
        const double var = (points.colwise() - mean).squaredNorm() / static_cast<double>(n * points.rows());
        const double scale = 1e-3 * (var > 0.0 ? std::sqrt(var) : 1.0);
        for (Index k = seeded; k < config.m; ++k) {
            const Index src = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
            for (Index r = 0; r < points.rows(); ++r) anchors(r, k) = points(r, src) + scale * rng.normal();
        }
    }
    return AnchorSet(std::move(anchors));
}

namespace {

// Weighted least-squares anchor update. The reconstruction term is replaced
// by its quadratic majorizer at the current anchors; for q == 3 the per-pair
// weights |gamma| ||v - h|| are frozen. A small proximal term keeps unused
// anchors in place and the system positive definite.
Matrix anchor_update(const Matrix& points, const std::vector<Coding>& codings, const Matrix& V0,
                     const LccConfig& config) {
    const Index m = V0.cols();
    Matrix gram = Matrix::Zero(m, m);
    Matrix rhs = Matrix::Zero(V0.rows(), m);
    Vector diag = Vector::Zero(m);
    for (Index i = 0; i < points.cols(); ++i) {
        const Vector& g = codings[static_cast<std::size_t>(i)].weights;
        const auto h = points.col(i);
        const double err2 = (h - V0 * g).squaredNorm();
        const double a = config.l_h / std::sqrt(err2 + kSmoothing);
        gram.noalias() += a * g * g.transpose();
        rhs.noalias() += a * h * g.transpose();
        for (Index j = 0; j < m; ++j) {
            if (g(j) == 0.0) continue;
            double b = config.l_q * std::abs(g(j));
            if (config.q == 3) b *= (V0.col(j) - h).norm();
            diag(j) += b;
            rhs.col(j) += b * h;
        }
    }
    gram.diagonal() += diag;
    const double mu = 1e-9 * std::max(gram.trace() / static_cast<double>(m), 1e-3);
    gram.diagonal().array() += mu;
    rhs += mu * V0;
    return gram.ldlt().solve(rhs.transpose()).transpose();
}

}  // namespace

LccFit learn_anchors(const Matrix& points, const AnchorSet& initial, const LccConfig& config) {
    config.validate();
    if (points.cols() == 0) throw InsufficientDataError("learn_anchors: no points");
    require_dim(points.rows(), initial.d_b(), "learn_anchors: point");
    require_dim(initial.m(), config.m, "learn_anchors: anchor count");
    if (!points.allFinite()) throw NonFiniteError("learn_anchors: non-finite point");

    LccFit fit{initial, {}, {}};
    fit.codings.reserve(static_cast<std::size_t>(points.cols()));
    for (Index i = 0; i < points.cols(); ++i) {
        fit.codings.push_back(Coding::one_hot(config.m, nearest_anchor(points.col(i), initial.matrix())));
    }
    double prev = lcc_objective(points, fit.codings, fit.anchors, config);
    fit.objective_history.push_back(prev);

    for (int iter = 0; iter < config.max_outer_iters; ++iter) {
        for (Index i = 0; i < points.cols(); ++i) {
            auto& c = fit.codings[static_cast<std::size_t>(i)];
            Coding next = solve_coding(points.col(i), fit.anchors, config, &c);
            // A coding whose support left the neighborhood restarts from one-hot;
            // keep the old one if the restart did worse.
            if (coding_objective(points.col(i), next, fit.anchors, config) <=
                coding_objective(points.col(i), c, fit.anchors, config)) {
                c = std::move(next);
            }
        }
        const double after_coding = lcc_objective(points, fit.codings, fit.anchors, config);

        const Matrix& V0 = fit.anchors.matrix();
        const Matrix target = anchor_update(points, fit.codings, V0, config);
        double obj = after_coding;
        if (target.allFinite()) {
            // Backtrack toward the current anchors until the objective does not increase.
            double step = 1.0;
            for (int k = 0; k < 40; ++k, step *= 0.5) {
                AnchorSet trial(V0 + step * (target - V0));
                const double val = lcc_objective(points, fit.codings, trial, config);
                if (val <= after_coding) {
                    fit.anchors = std::move(trial);
                    obj = val;
                    break;
                }
            }
        }

        fit.objective_history.push_back(obj);
        const bool converged = std::abs(obj - prev) / std::max(1.0, prev) < config.anchor_tol;
        prev = obj;
        if (converged) break;
    }
    return fit;
}

LccFit learn_anchors(const Matrix& points, const LccConfig& config) {
    return learn_anchors(points, init_anchors(points, config), config);
}

}  // namespace lcc
