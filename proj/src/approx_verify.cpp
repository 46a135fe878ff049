#include "lcc/approx_verify.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace lcc {

namespace {

double spectral_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

}  // namespace

SmoothTestGenerator::SmoothTestGenerator(std::vector<Matrix> q, Matrix a, Vector b, double radius)
    : q_(std::move(q)), a_(std::move(a)), b_(std::move(b)), radius_(radius) {
    require_dim(b_.size(), a_.rows(), "SmoothTestGenerator: offset");
    if (!q_.empty()) require_dim(static_cast<Index>(q_.size()), a_.rows(), "SmoothTestGenerator: Hessian count");
    double hess2 = 0.0;
    for (Matrix& qk : q_) {
        if (qk.rows() != a_.cols() || qk.cols() != a_.cols()) throw DimensionError("SmoothTestGenerator: Hessian shape");
        qk = 0.5 * (qk + qk.transpose()).eval();
        const double s = spectral_norm(qk);
        hess2 += s * s;
    }
    l_h_ = spectral_norm(a_) + radius_ * std::sqrt(hess2);
    l_g_ = 0.5 * std::sqrt(hess2);
}

SmoothTestGenerator SmoothTestGenerator::affine(Matrix a, Vector b, double radius) {
    return SmoothTestGenerator({}, std::move(a), std::move(b), radius);
}

SmoothTestGenerator SmoothTestGenerator::quadratic(std::vector<Matrix> q, Matrix a, Vector b, double radius) {
    return SmoothTestGenerator(std::move(q), std::move(a), std::move(b), radius);
}

namespace {

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng) {
    Matrix m(rows, cols);
    for (Index j = 0; j < cols; ++j) {
        for (Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
    }
    return m;
}

}  // namespace

SmoothTestGenerator SmoothTestGenerator::random_quadratic(Index in_dim, Index out_dim, double radius, Rng& rng) {
    std::vector<Matrix> q;
    for (Index k = 0; k < out_dim; ++k) q.push_back(gaussian_matrix(in_dim, in_dim, rng));
    Matrix a = gaussian_matrix(out_dim, in_dim, rng);
    Vector b = gaussian_matrix(out_dim, 1, rng);
    return quadratic(std::move(q), std::move(a), std::move(b), radius);
}

SmoothTestGenerator SmoothTestGenerator::random_affine(Index in_dim, Index out_dim, double radius, Rng& rng) {
    Matrix a = gaussian_matrix(out_dim, in_dim, rng);
    Vector b = gaussian_matrix(out_dim, 1, rng);
    return affine(std::move(a), std::move(b), radius);
}

Vector SmoothTestGenerator::value(const Vector& x) const {
    require_dim(x.size(), in_dim(), "SmoothTestGenerator: input");
    Vector y = a_ * x + b_;
    for (std::size_t k = 0; k < q_.size(); ++k) y(static_cast<Index>(k)) += 0.5 * x.dot(q_[k] * x);
    return y;
}

Matrix SmoothTestGenerator::jacobian(const Vector& x) const {
    require_dim(x.size(), in_dim(), "SmoothTestGenerator: input");
    Matrix j = a_;
    for (std::size_t k = 0; k < q_.size(); ++k) j.row(static_cast<Index>(k)) += (q_[k] * x).transpose();
    return j;
}

Vector sample_ball(Index dim, double radius, Rng& rng) {
    Vector dir(dim);
    double n2 = 0.0;
    do {
        for (Index i = 0; i < dim; ++i) dir(i) = rng.normal();
        n2 = dir.squaredNorm();
    } while (n2 == 0.0);
    const double r = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(dim));
    return dir * (r / std::sqrt(n2));
}

LipschitzEstimate estimate_lipschitz(const MapFn& f, const JacobianFn& jac, Index dim, double radius, int n_pairs,
                                     std::uint64_t seed) {
    if (n_pairs < 1) throw ConfigError("estimate_lipschitz: n_pairs must be >= 1");
    Rng rng(seed);
    LipschitzEstimate est;
    for (int k = 0; k < n_pairs; ++k) {
        const Vector x = sample_ball(dim, radius, rng);
        const Vector xp = sample_ball(dim, radius, rng);
        const Vector d = xp - x;
        const double dn = d.norm();
        if (dn == 0.0) continue;
        const Vector fx = f(x);
        const Vector fxp = f(xp);
        const Matrix jx = jac(x);
        const Matrix jxp = jac(xp);
        est.l_h = std::max(est.l_h, (jx * d).norm() / dn);
        est.l_g = std::max(est.l_g, (fxp - fx - jx * d).norm() / (dn * dn));
        est.l_nu = std::max(est.l_nu, (fxp - fx - 0.5 * (jxp + jx) * d).norm() / (dn * dn * dn));
    }
    return est;
}

LipschitzEstimate estimate_lipschitz(const nn::Mlp& net, double radius, int n_pairs, std::uint64_t seed) {
    return estimate_lipschitz([&](const Vector& x) { return nn::forward(net, x); },
                              [&](const Vector& x) { return nn::input_jacobian(net, x); }, net.in_dim(), radius,
                              n_pairs, seed);
}

std::vector<BoundCase> bound_sweep(BoundKind kind, int n_cases, std::uint64_t seed, double tol) {
    constexpr double kDomainRadius = 1.5;
    Rng rng(seed);
    std::vector<BoundCase> cases;
    cases.reserve(static_cast<std::size_t>(std::max(n_cases, 0)));
    const char* prefix = kind == BoundKind::lemma1_quadratic ? "lemma1-quadratic"
                         : kind == BoundKind::lemma1_affine  ? "lemma1-affine"
                                                             : "lemma2-quadratic";
    for (int c = 0; c < n_cases; ++c) {
        const Index d_b = 1 + static_cast<Index>(rng.below(4));
        const Index out = 1 + static_cast<Index>(rng.below(3));
        const Index m = 2 + static_cast<Index>(rng.below(7));
        const SmoothTestGenerator gen = kind == BoundKind::lemma1_affine
                                            ? SmoothTestGenerator::random_affine(d_b, out, kDomainRadius, rng)
                                            : SmoothTestGenerator::random_quadratic(d_b, out, kDomainRadius, rng);
        Matrix V(d_b, m);
        for (Index j = 0; j < m; ++j) V.col(j) = sample_ball(d_b, 1.0, rng);
        const AnchorSet anchors(V);

        // Support of random size; weights either on the simplex or of mixed sign.
        const Index support = 1 + static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
        const bool mixed_sign = kind != BoundKind::lemma2_quadratic && rng.below(2) == 1;
        Vector w = Vector::Zero(m);
        double s = 0.0;
        do {
            w.setZero();
            for (Index k = 0; k < support; ++k) {
                const Index j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
                w(j) += mixed_sign ? rng.normal() : -std::log1p(-rng.uniform());
            }
            s = w.sum();
        } while (std::abs(s) < 0.1);
        const Coding coding(w / s);

        const Vector h = reconstruct(coding, anchors) + sample_ball(d_b, 0.5, rng);
        const BoundGap gap = kind == BoundKind::lemma2_quadratic ? lemma2_gap(gen, coding, anchors, h)
                                                                 : lemma1_gap(gen, coding, anchors, h);
        const bool pass = kind == BoundKind::lemma1_affine ? gap.lhs <= 1e-12 : gap.holds(tol);
        cases.push_back({std::string(prefix) + "-" + std::to_string(c), gap.lhs, gap.rhs, pass});
    }
    return cases;
}

}  // namespace lcc
