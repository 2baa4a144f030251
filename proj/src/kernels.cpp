#include "compop/kernels.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "compop/errors.hpp"
#include "compop/zeta.hpp"

namespace compop {

PointSequence::PointSequence(std::vector<Complex> pts, KernelDomain d)
    : points(std::move(pts)), domain(d) {
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (d == KernelDomain::disc) {
            if (std::abs(points[i]) >= 1.0)
                throw std::invalid_argument("PointSequence: disc points must satisfy |z| < 1");
        } else {
            if (points[i].real() <= 0.5)
                throw std::invalid_argument("PointSequence: half-plane points need Re s > 1/2");
        }
        for (std::size_t j = 0; j < i; ++j)
            if (points[i] == points[j])
                throw std::invalid_argument("PointSequence: points must be distinct");
    }
}

PointSequence PointSequence::shifted(double theta) const {
    if (domain == KernelDomain::disc)
        throw std::invalid_argument("PointSequence::shifted: half-plane domains only");
    PointSequence out;
    out.domain = domain;
    out.points = points;
    for (auto& s : out.points) s += theta;
    return out;
}

PointSequence PointSequence::height_capped(double R) const {
    PointSequence out;
    out.domain = domain;
    for (Complex s : points)
        if (std::abs(s.imag()) <= R) out.points.push_back(s);
    return out;
}

Complex kernel_value(KernelDomain domain, Complex s, Complex w) {
    switch (domain) {
        case KernelDomain::zeta_halfplane:
            return zeta(s + std::conj(w));
        case KernelDomain::classical_halfplane:
            return 1.0 / (s + std::conj(w) - 1.0);
        case KernelDomain::disc:
            return 1.0 / (1.0 - s * std::conj(w));
    }
    throw std::logic_error("kernel_value: unknown domain");
}

GramSystem gram(const PointSequence& S) {
    const int n = int(S.size());
    if (n < 1) throw std::invalid_argument("gram: empty sequence");
    GramSystem g;
    g.G.resize(n, n);
    for (int j = 0; j < n; ++j) {
        for (int k = 0; k <= j; ++k) {
            Complex v = kernel_value(S.domain, S.points[std::size_t(j)], S.points[std::size_t(k)]);
            g.G(j, k) = v;
            g.G(k, j) = std::conj(v);
        }
    }
    Eigen::VectorXd d(n);
    for (int j = 0; j < n; ++j) d(j) = 1.0 / std::sqrt(g.G(j, j).real());
    g.G_normalized = d.asDiagonal() * g.G * d.asDiagonal();
    // enforce exact unit diagonal against rounding
    for (int j = 0; j < n; ++j) g.G_normalized(j, j) = 1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(g.G_normalized);
    if (eig.info() != Eigen::Success) throw NumericalError("gram: eigensolver failed");
    g.lambda_min = eig.eigenvalues()(0);
    g.lambda_max = eig.eigenvalues()(n - 1);

    double min_dist = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < j; ++k)
            min_dist = std::min(min_dist,
                                std::abs(S.points[std::size_t(j)] - S.points[std::size_t(k)]));
    g.conditioning_warning = (n > 1 && min_dist < 1e-8) || g.lambda_min < 1e-13 * g.lambda_max;
    return g;
}

double carleson_const_h2(const PointSequence& S) { return gram(S).lambda_max; }

double interp_const_h2(const PointSequence& S) {
    GramSystem g = gram(S);
    if (g.lambda_min <= 1e-13 * g.lambda_max)
        throw NumericalError("interp_const_h2: sequence not interpolating at this precision");
    return 1.0 / std::sqrt(g.lambda_min);
}

double lemma41_bound(double theta, double p, double carleson_h2_or_mass) {
    if (!(theta > 0.5)) throw std::domain_error("lemma41_bound: theta > 1/2 required");
    if (!(p >= 1.0)) throw std::domain_error("lemma41_bound: p >= 1 required");
    if (carleson_h2_or_mass < 0.0) throw std::domain_error("lemma41_bound: negative input");
    if (p >= 2.0)
        return std::pow(zeta(2.0 * theta), (p - 2.0) / p) * carleson_h2_or_mass;
    return zeta(2.0 * theta) * carleson_h2_or_mass;
}

double lemma42_bound(double theta, double delta, int n, double p, double m2_shifted) {
    if (!(theta > 0.5)) throw std::domain_error("lemma42_bound: theta > 1/2 required");
    if (!(delta > 0.0)) throw std::domain_error("lemma42_bound: delta > 0 required");
    if (n < 1) throw std::domain_error("lemma42_bound: n >= 1 required");
    if (!(p >= 1.0)) throw std::domain_error("lemma42_bound: p >= 1 required");
    const double mn = std::min(2.0, p);
    double zr = zeta(1.0 + 2.0 * delta) / zeta(1.0 + 2.0 * (delta + theta));
    return std::pow(zeta(2.0 * theta), 1.0 / mn) * std::pow(zr, 1.0 / mn) *
           std::pow(double(n), 1.0 / mn - 1.0 / p) * std::pow(m2_shifted, 2.0 / mn);
}

H1SquaringResult h1_interp_by_squaring(const PointSequence& S,
                                       const std::vector<Complex>& targets,
                                       std::uint64_t freq_cap, const McOptions& mc) {
    if (S.domain != KernelDomain::zeta_halfplane)
        throw std::invalid_argument("h1_interp_by_squaring: zeta-kernel sequences only");
    if (targets.size() != S.size())
        throw std::invalid_argument("h1_interp_by_squaring: target/point count mismatch");
    if (freq_cap < 1) throw std::invalid_argument("h1_interp_by_squaring: cap must be >= 1");

    const int n = int(S.size());
    GramSystem g = gram(S);
    if (g.lambda_min <= 1e-13 * g.lambda_max)
        throw NumericalError("h1_interp_by_squaring: singular Gram system");

    Eigen::VectorXcd rhs(n);
    for (int j = 0; j < n; ++j) rhs(j) = std::sqrt(targets[std::size_t(j)]);
    Eigen::VectorXcd c = g.G.ldlt().solve(rhs);

    H1SquaringResult out;
    // g(s) = sum_j c_j K(s, s_j) truncated: coefficient at m is
    // sum_j c_j m^{-conj(s_j)}.
    for (std::uint64_t m = 1; m <= freq_cap; ++m) {
        Complex coeff = 0.0;
        double lm = std::log(double(m));
        for (int j = 0; j < n; ++j)
            coeff += c(j) * std::exp(-std::conj(S.points[std::size_t(j)]) * lm);
        if (coeff != Complex(0.0)) out.g.set(m, coeff);
    }
    out.f = multiply_exact(out.g, out.g);

    for (int j = 0; j < n; ++j) {
        Complex fv = evaluate(out.f, S.points[std::size_t(j)]);
        out.max_node_residual =
            std::max(out.max_node_residual, std::abs(fv - targets[std::size_t(j)]));
    }

    // ||f||_1 = ||g^2||_1 = ||g||_2^2 exactly; MC samples it anyway
    McMoment m1 = mc_abs_power_mean(out.g, 2.0, mc);
    out.h1_norm_mc = m1.mean;
    out.h1_se = m1.se;
    double l2sq = 0.0;
    for (const auto& [k, v] : out.g.terms()) l2sq += std::norm(v);
    out.h1_exact = l2sq;

    double m2 = 1.0 / std::sqrt(g.lambda_min);
    double wsum = 0.0;
    for (int j = 0; j < n; ++j)
        wsum += std::abs(targets[std::size_t(j)]) /
                zeta(2.0 * S.points[std::size_t(j)].real());
    out.bound = m2 * m2 * wsum;
    return out;
}

double blaschke_separation(const PointSequence& S) {
    if (S.domain == KernelDomain::disc)
        throw std::invalid_argument("blaschke_separation: half-plane sequences only");
    const std::size_t n = S.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
        double prod = 1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k == j) continue;
            Complex sj = S.points[j], sk = S.points[k];
            prod *= std::abs((sj - sk) / (sj + std::conj(sk) - 1.0));
        }
        best = std::min(best, prod);
    }
    return n == 0 ? 0.0 : best;
}

double m_hinfty_surrogate(double separation) {
    if (!(separation > 0.0)) throw std::domain_error("m_hinfty_surrogate: separation must be > 0");
    const double e = std::exp(1.0);
    return (2.0 * e + 4.0 * e * std::abs(std::log(separation))) / separation;
}

LowerBoundResult lower_bound_general(LowerBoundVariant variant, const LowerBoundInputs& in) {
    if (!(in.p >= 1.0)) throw std::invalid_argument("lower_bound_general: p >= 1 required");
    LowerBoundResult out;
    std::size_t n = 0;
    double inf_ratio = std::numeric_limits<double>::infinity();

    if (variant == LowerBoundVariant::thm92) {
        n = in.Z.size();
        if (n == 0 || in.omegaZ.size() != n)
            throw std::invalid_argument("lower_bound_general: Z / omega(Z) length mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            double num = 1.0 - std::norm(in.Z[j]);
            double den = 1.0 - std::norm(in.omegaZ[j]);
            if (!(num > 0.0 && den > 0.0))
                throw std::invalid_argument("lower_bound_general: points must lie inside the disc");
            inf_ratio = std::min(inf_ratio, num / den);
        }
    } else {
        n = in.S.size();
        if (n == 0 || in.S_pre.size() != n)
            throw std::invalid_argument("lower_bound_general: S / S' length mismatch");
        if (in.symbol) {
            for (std::size_t j = 0; j < n; ++j)
                if (std::abs(in.symbol->eval(in.S_pre[j]) - in.S[j]) > 1e-8)
                    throw std::invalid_argument(
                        "lower_bound_general: non-preimage pair at index " + std::to_string(j));
        }
        for (std::size_t j = 0; j < n; ++j) {
            double num = zeta(2.0 * in.S[j].real());
            double den = zeta(2.0 * in.S_pre[j].real());
            inf_ratio = std::min(inf_ratio, num / den);
        }
    }

    const double mn = std::min(2.0, in.p);
    out.n_factor = std::pow(double(n), -(1.0 / mn - 1.0 / in.p));
    out.inf_ratio = inf_ratio;
    out.value = in.constant.value * out.n_factor * (1.0 / in.interpolation.value) *
                std::pow(in.carleson.value, -1.0 / in.p) * std::pow(inf_ratio, 1.0 / in.p);
    out.provenance = {"constant: " + in.constant.provenance,
                      "interpolation: " + in.interpolation.provenance,
                      "carleson: " + in.carleson.provenance, "ratio: computed"};
    return out;
}

} // namespace compop
