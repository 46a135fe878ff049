#pragma once

#include "lcc/lcc_core.hpp"
#include "lcc/neural/mlp.hpp"
#include "lcc/rng.hpp"

#include <concepts>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace lcc {

/// A map with an exact Jacobian and smoothness constants valid on a declared domain.
template <typename G>
concept SmoothMap = requires(const G& g, const Vector& x) {
    { g.value(x) } -> std::convertible_to<Vector>;
    { g.jacobian(x) } -> std::convertible_to<Matrix>;
    { g.l_h() } -> std::convertible_to<double>;
    { g.l_g() } -> std::convertible_to<double>;
    { g.l_nu() } -> std::convertible_to<double>;
};

/// G_k(x) = 1/2 x^T Q_k x + a_k^T x + b_k with symmetric Q_k; affine when Q is empty.
/// The constants hold on the ball of radius `radius` around the origin:
///   L_h  = ||A||_2 + radius * sqrt(sum_k ||Q_k||_2^2)
///   L_G  = 1/2 sqrt(sum_k ||Q_k||_2^2)
///   L_nu = 0 (constant Hessian)
class SmoothTestGenerator {
public:
    static SmoothTestGenerator affine(Matrix a, Vector b, double radius);
    static SmoothTestGenerator quadratic(std::vector<Matrix> q, Matrix a, Vector b, double radius);
    /// Gaussian entries; Q_k symmetrized.
    static SmoothTestGenerator random_quadratic(Index in_dim, Index out_dim, double radius, Rng& rng);
    static SmoothTestGenerator random_affine(Index in_dim, Index out_dim, double radius, Rng& rng);

    Vector value(const Vector& x) const;
    Matrix jacobian(const Vector& x) const;

    double l_h() const noexcept { return l_h_; }
    double l_g() const noexcept { return l_g_; }
    double l_nu() const noexcept { return 0.0; }
    double radius() const noexcept { return radius_; }
    bool is_affine() const noexcept { return q_.empty(); }
    Index in_dim() const { return a_.cols(); }
    Index out_dim() const { return a_.rows(); }

private:
    SmoothTestGenerator(std::vector<Matrix> q, Matrix a, Vector b, double radius);

    std::vector<Matrix> q_;
    Matrix a_;
    Vector b_;
    double radius_ = 1.0;
    double l_h_ = 0.0;
    double l_g_ = 0.0;
};

struct BoundGap {
    double lhs = 0.0;
    double rhs = 0.0;

    double margin() const { return rhs - lhs; }
    bool holds(double tol = 1e-10) const { return lhs <= rhs + tol; }
};

/// ||G(r) - sum_v gamma_v G(v)||  vs  2 L_h ||h - r|| + L_G sum_v |gamma_v| ||v - r||^2,  r = V gamma.
template <SmoothMap G>
BoundGap lemma1_gap(const G& gen, const Coding& coding, const AnchorSet& anchors, const Vector& h) {
    const Vector r = reconstruct(coding, anchors);
    require_dim(h.size(), anchors.d_b(), "lemma1_gap: point");
    Vector mix = Vector::Zero(gen.value(r).size());
    double local = 0.0;
    for (Index j = 0; j < anchors.m(); ++j) {
        const double g = coding.weights(j);
        if (g == 0.0) continue;
        const Vector v = anchors.anchor(j);
        mix += g * gen.value(v);
        local += std::abs(g) * (v - r).squaredNorm();
    }
    return {(gen.value(r) - mix).norm(), 2.0 * gen.l_h() * (h - r).norm() + gen.l_g() * local};
}

/// ||G(r) - sum_v gamma_v (G(v) + 1/2 J(v)(h - v))||  vs  2 L_h ||h - r|| + L_nu sum_v |gamma_v| ||v - r||^3.
template <SmoothMap G>
BoundGap lemma2_gap(const G& gen, const Coding& coding, const AnchorSet& anchors, const Vector& h) {
    const Vector r = reconstruct(coding, anchors);
    require_dim(h.size(), anchors.d_b(), "lemma2_gap: point");
    Vector mix = Vector::Zero(gen.value(r).size());
    double local = 0.0;
    for (Index j = 0; j < anchors.m(); ++j) {
        const double g = coding.weights(j);
        if (g == 0.0) continue;
        const Vector v = anchors.anchor(j);
        mix += g * (gen.value(v) + 0.5 * gen.jacobian(v) * (h - v));
        local += std::abs(g) * std::pow((v - r).norm(), 3);
    }
    return {(gen.value(r) - mix).norm(), 2.0 * gen.l_h() * (h - r).norm() + gen.l_nu() * local};
}

struct LipschitzEstimate {
    double l_h = 0.0;
    double l_g = 0.0;
    double l_nu = 0.0;
};

using MapFn = std::function<Vector(const Vector&)>;
using JacobianFn = std::function<Matrix(const Vector&)>;

/// Uniform draw from the ball of the given radius.
Vector sample_ball(Index dim, double radius, Rng& rng);

/// Running maxima of the three smoothness ratios over n_pairs point pairs drawn
/// uniformly from the ball. Pairs are drawn sequentially from one stream, so a
/// larger n_pairs extends the sample and the estimates never decrease.
LipschitzEstimate estimate_lipschitz(const MapFn& f, const JacobianFn& jac, Index dim, double radius, int n_pairs,
                                     std::uint64_t seed);
LipschitzEstimate estimate_lipschitz(const nn::Mlp& net, double radius, int n_pairs, std::uint64_t seed);

struct BoundCase {
    std::string id;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

enum class BoundKind { lemma1_quadratic, lemma1_affine, lemma2_quadratic };

/// Random (generator, anchors, coding, h) instances: anchors in the unit ball,
/// h = r(h) + a perturbation of radius <= 0.5, constants declared on radius 1.5.
/// Lemma-2 codings are nonnegative; lemma-1 sweeps also include mixed-sign codings.
std::vector<BoundCase> bound_sweep(BoundKind kind, int n_cases, std::uint64_t seed, double tol = 1e-10);

}  // namespace lcc
