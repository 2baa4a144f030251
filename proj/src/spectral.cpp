#include "compop/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "compop/detail/multiprec.hpp"
#include "compop/errors.hpp"
#include "compop/zeta.hpp"

namespace compop {

namespace {

void sort_modulus_descending(std::vector<Complex>& v) {
    std::stable_sort(v.begin(), v.end(), [](Complex a, Complex b) {
        double ma = std::abs(a), mb = std::abs(b);
        if (ma != mb) return ma > mb;
        return std::arg(a) < std::arg(b);
    });
}

bool structurally_triangular(const Eigen::MatrixXcd& A) {
    for (int j = 1; j < A.cols(); ++j)
        for (int i = 0; i < j && i < A.rows(); ++i)
            if (A(i, j) != Complex(0.0)) return false;
    return true;
}

} // namespace

SingularSpectrum singular_values_of(const Eigen::MatrixXcd& A) {
    SingularSpectrum out;
    out.N = int(A.cols());
    const int small_dim = int(std::min(A.rows(), A.cols()));
    if (small_dim <= 512) {
        // JacobiSVD wants rows >= cols; singular values are adjoint-invariant
        Eigen::MatrixXcd B = A.rows() >= A.cols() ? A : Eigen::MatrixXcd(A.adjoint());
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(B);
        out.values.assign(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
    } else {
        // Hermitian Gram route on the smaller side
        Eigen::MatrixXcd G = A.rows() <= A.cols() ? Eigen::MatrixXcd(A * A.adjoint())
                                                  : Eigen::MatrixXcd(A.adjoint() * A);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(G);
        if (eig.info() != Eigen::Success)
            throw NumericalError("singular_values_of: Hermitian eigensolver failed");
        auto ev = eig.eigenvalues();
        out.values.resize(std::size_t(ev.size()));
        for (int i = 0; i < ev.size(); ++i)
            out.values[std::size_t(ev.size() - 1 - i)] = std::sqrt(std::max(0.0, ev(i)));
    }
    return out;
}

SingularSpectrum approx_numbers_h2(const TruncatedOperator& op) {
    SingularSpectrum s = singular_values_of(op.mat);
    s.N = op.cols;
    s.M = op.row_cap;
    return s;
}

EigenSpectrum eigenvalues(const TruncatedOperator& op) {
    Eigen::MatrixXcd A = op.square_section();
    EigenSpectrum out;
    out.N = int(A.cols());
    out.values.reserve(std::size_t(A.cols()));
    if (structurally_triangular(A)) {
        for (int i = 0; i < A.cols(); ++i) out.values.push_back(A(i, i));
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(A, /*computeEigenvectors=*/false);
        if (eig.info() != Eigen::Success)
            throw NumericalError("eigenvalues: eigensolver failed");
        for (int i = 0; i < A.cols(); ++i) out.values.push_back(eig.eigenvalues()(i));
    }
    sort_modulus_descending(out.values);
    return out;
}

EigenSpectrum eigenvalues_extended(const Symbol& sym, int N, std::uint64_t M, bool refine,
                                   int refine_count) {
    SectionMatrix sec = lattice_section(sym, N, M);
    const int d = int(sec.mat.rows());
    EigenSpectrum out;
    out.N = N;

    std::vector<Complex> vals;
    if (structurally_triangular(sec.mat)) {
        for (int i = 0; i < d; ++i) vals.push_back(sec.mat(i, i));
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> eig(sec.mat, /*computeEigenvectors=*/true);
        if (eig.info() != Eigen::Success)
            throw NumericalError("eigenvalues_extended: eigensolver failed");
        vals.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + d);
        if (refine) {
            using detail::Cplx;
            using detail::Dense;
            using R = detail::mp50;
            Dense<R> B(d, d);
            for (int j = 0; j < d; ++j)
                for (int i = 0; i < d; ++i) B(i, j) = Cplx<R>::from(sec.mat(i, j));
            std::vector<int> order(static_cast<std::size_t>(d));
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](int a, int b) {
                return std::abs(vals[std::size_t(a)]) > std::abs(vals[std::size_t(b)]);
            });
            int count = std::min(refine_count, d);
            for (int t = 0; t < count; ++t) {
                int idx = order[std::size_t(t)];
                Cplx<R> lam = Cplx<R>::from(vals[std::size_t(idx)]);
                std::vector<Cplx<R>> v(static_cast<std::size_t>(d));
                for (int i = 0; i < d; ++i)
                    v[std::size_t(i)] = Cplx<R>::from(eig.eigenvectors()(i, idx));
                detail::refine_eigenpair(B, lam, v, 5);
                vals[std::size_t(idx)] = lam.to_double();
            }
        }
    }
    // deflated part contributes zero eigenvalues; pad/trim to N
    sort_modulus_descending(vals);
    vals.resize(std::size_t(N), Complex(0.0));
    out.values = std::move(vals);
    return out;
}

SpectrumPrediction predict_spectrum(const Symbol& sym, int k) {
    SpectrumPrediction pred;
    if (sym.c0 == 0) {
        FixedPointResult fp = fixed_point(sym);
        Complex lam = 1.0;
        for (int j = 0; j < k; ++j) {
            pred.values.push_back(lam);
            lam *= fp.phi_prime;
        }
    } else if (sym.c0 == 1) {
        Complex c1 = sym.psi.coeff(1);
        for (int j = 1; j <= k; ++j)
            pred.values.push_back(std::exp(-c1 * std::log(double(j))));
    } else {
        pred.out_of_theorem = true;
        pred.values.push_back(1.0);
        for (int j = 1; j < k; ++j) pred.values.push_back(0.0);
    }
    sort_modulus_descending(pred.values);
    return pred;
}

double compare_spectrum(const EigenSpectrum& computed, const Symbol& sym, int k) {
    if (k > int(computed.values.size()))
        throw std::invalid_argument("compare_spectrum: k exceeds available eigenvalues");
    SpectrumPrediction pred = predict_spectrum(sym, k);
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
        Complex p = pred.values[std::size_t(j)];
        Complex c = computed.values[std::size_t(j)];
        double dev = std::abs(c - p);
        if (std::abs(p) > 0.0) dev /= std::abs(p);
        worst = std::max(worst, dev);
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Decay fitting
// ---------------------------------------------------------------------------

namespace {

ModelFit linear_fit(const std::string& name, const std::vector<double>& x,
                    const std::vector<double>& y) {
    ModelFit m;
    m.name = name;
    const std::size_t n = x.size();
    if (n < 3) return m;
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    double mx = sx / double(n), my = sy / double(n);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) return m;
    m.slope = sxy / sxx;
    m.intercept = my - m.slope * mx;
    m.rss = std::max(0.0, syy - m.slope * sxy);
    m.r2 = syy > 0.0 ? 1.0 - m.rss / syy : (m.rss == 0.0 ? 1.0 : 0.0);
    const double k = 3.0; // slope, intercept, variance
    double nn = double(n);
    m.aicc = nn * std::log(std::max(m.rss, 1e-300) / nn) + 2.0 * k;
    if (nn - k - 1.0 > 0.0) m.aicc += 2.0 * k * (k + 1.0) / (nn - k - 1.0);
    m.valid = true;
    return m;
}

} // namespace

DecayFitReport fit_decay(const std::vector<double>& values, int lo, int hi) {
    if (lo < 1 || hi > int(values.size()) || hi - lo + 1 < 5)
        throw std::invalid_argument("fit_decay: need a window of at least 5 values");
    std::vector<double> ns, logy;
    for (int n = lo; n <= hi; ++n) {
        double v = values[std::size_t(n - 1)];
        if (!(v > 0.0)) throw std::invalid_argument("fit_decay: values must be positive");
        ns.push_back(double(n));
        logy.push_back(std::log(v));
    }
    auto transform = [&](const char* which) {
        std::vector<double> x;
        x.reserve(ns.size());
        for (double n : ns) {
            if (std::string(which) == "n") x.push_back(n);
            else if (std::string(which) == "logn") x.push_back(std::log(n));
            else if (std::string(which) == "lognlogn") x.push_back(std::log(n * std::log(n)));
            else x.push_back(std::sqrt(n));
        }
        return x;
    };

    DecayFitReport rep;
    rep.lo = lo;
    rep.hi = hi;
    rep.models.push_back(linear_fit("geometric", transform("n"), logy));
    rep.models.push_back(linear_fit("power", transform("logn"), logy));
    if (lo >= 2) rep.models.push_back(linear_fit("power-log", transform("lognlogn"), logy));
    rep.models.push_back(linear_fit("stretched", transform("sqrtn"), logy));

    const ModelFit* best = nullptr;
    for (const auto& m : rep.models)
        if (m.valid && (!best || m.aicc < best->aicc)) best = &m;
    if (!best) throw NumericalError("fit_decay: no valid model");
    rep.selected = best->name;
    rep.param = -best->slope;
    rep.amplitude = std::exp(best->intercept);
    rep.r2 = best->r2;

    std::vector<double> x = transform(best->name == "geometric"  ? "n"
                                      : best->name == "power"    ? "logn"
                                      : best->name == "power-log" ? "lognlogn"
                                                                  : "sqrtn");
    for (std::size_t i = 0; i < x.size(); ++i)
        rep.residuals.push_back(logy[i] - (best->intercept + best->slope * x[i]));
    return rep;
}

// ---------------------------------------------------------------------------
// Weyl / Pietsch
// ---------------------------------------------------------------------------

WeylPietschReport weyl_pietsch_check(const EigenSpectrum& eigs, const SingularSpectrum& approx,
                                     double r) {
    WeylPietschReport rep;
    rep.worst_margin = std::numeric_limits<double>::infinity();
    const int L = int(std::min(eigs.values.size(), approx.values.size()));
    for (int n = 1; 2 * n <= L; ++n) {
        double lhs = std::abs(eigs.values[std::size_t(2 * n - 1)]);
        double logsum = 0.0;
        bool zero = false;
        for (int j = 1; j <= n; ++j) {
            double a = approx.values[std::size_t(j - 1)];
            if (a <= 0.0) {
                zero = true;
                break;
            }
            logsum += std::log(a);
        }
        double rhs = zero ? 0.0 : std::exp(1.0 + logsum / double(n));
        ++rep.checks;
        if (lhs > rhs) {
            rep.pietsch_all_pass = false;
            rep.worst_margin = std::min(rep.worst_margin, rhs / std::max(lhs, 1e-300));
            rep.worst_n = n;
        } else if (lhs > 0.0) {
            double margin = rhs / lhs;
            if (margin < rep.worst_margin) {
                rep.worst_margin = margin;
                rep.worst_n = n;
            }
        }
    }
    double num = 0.0, den = 0.0;
    for (const auto& l : eigs.values) num += std::pow(std::abs(l), r);
    for (double a : approx.values) den += std::pow(a, r);
    rep.weyl_ratio = den > 0.0 ? std::pow(num, 1.0 / r) / std::pow(den, 1.0 / r) : 0.0;
    return rep;
}

// ---------------------------------------------------------------------------
// Constructive bounds
// ---------------------------------------------------------------------------

double bernstein_lower_c1(const TruncatedOperator& op, int n) {
    if (op.basis != BasisTag::dirichlet)
        throw std::invalid_argument("bernstein_lower_c1: dirichlet basis required");
    if (op.symbol.c0 < 1) throw std::invalid_argument("bernstein_lower_c1: requires c0 >= 1");
    if (n < 1) throw std::invalid_argument("bernstein_lower_c1: n must be >= 1");
    if (nth_prime(n) > std::uint64_t(op.cols))
        throw std::invalid_argument("bernstein_lower_c1: prime p_n exceeds column range");

    std::vector<int> rows;
    for (int r = 0; r < int(op.row_freqs.size()); ++r)
        if (omega(op.row_freqs[std::size_t(r)]) == op.symbol.c0) rows.push_back(r);
    if (rows.empty()) throw std::invalid_argument("bernstein_lower_c1: no Omega=c0 rows in range");

    Eigen::MatrixXcd block(int(rows.size()), n);
    for (int j = 0; j < n; ++j) {
        int col = int(nth_prime(j + 1)) - 1;
        for (int i = 0; i < int(rows.size()); ++i)
            block(i, j) = op.mat(rows[std::size_t(i)], col);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(block.rows() >= block.cols()
                                               ? block
                                               : Eigen::MatrixXcd(block.adjoint()));
    return svd.singularValues()(svd.singularValues().size() - 1);
}

double gelfand_upper_part_a(double r, double theta, double p, int n) {
    if (!(r > 0.0 && r < 1.0)) throw std::domain_error("gelfand_upper_part_a: need 0 < r < 1");
    if (!(theta > 0.5)) throw std::domain_error("gelfand_upper_part_a: need theta > 1/2");
    if (!(p >= 1.0)) throw std::domain_error("gelfand_upper_part_a: need p >= 1");
    if (n < 1) throw std::domain_error("gelfand_upper_part_a: need n >= 1");
    return 2.0 * std::sqrt(double(n)) * std::pow(r, double(n - 1)) *
           std::pow(zeta(0.5 + theta), 1.0 / p);
}

// ---------------------------------------------------------------------------
// Dyadic exponent-lattice assembly (frequencies 2^l, l unconstrained by the
// 64-bit range) and quad-precision singular values.
// ---------------------------------------------------------------------------

namespace {

template <class R>
detail::Dense<R> dyadic_matrix(const Symbol& sym, int N, int Lmax, double threshold) {
    using detail::Cplx;
    if (sym.c0 != 0)
        throw std::invalid_argument("dyadic_singular_values: requires c0 = 0");
    // psi frequencies must be powers of two
    std::vector<std::pair<int, Complex>> dyadic; // (k, c_k) for frequency 2^k, k >= 1
    Complex c1 = 0.0;
    for (const auto& [f, c] : sym.psi.terms()) {
        if (f == 1) {
            c1 = c;
            continue;
        }
        std::uint64_t v = f;
        int k = 0;
        while (v > 1 && (v & 1) == 0) {
            v >>= 1;
            ++k;
        }
        if (v != 1)
            throw std::invalid_argument("dyadic_singular_values: psi frequency " +
                                        std::to_string(f) + " is not a power of two");
        dyadic.emplace_back(k, c);
    }

    // columns as maps exponent -> coefficient, transposed into (Lmax+1) x N
    detail::Dense<R> A(Lmax + 1, N);
    std::vector<Cplx<R>> col(static_cast<std::size_t>(Lmax) + 1);
    std::vector<Cplx<R>> fac(static_cast<std::size_t>(Lmax) + 1);
    std::vector<Cplx<R>> nxt(static_cast<std::size_t>(Lmax) + 1);
    const R thr = R(threshold);
    for (int m = 1; m <= N; ++m) {
        const R lm = log(R(m));
        for (auto& c : col) c = Cplx<R>{R(0), R(0)};
        // m^{-c1}
        {
            Cplx<R> e = Cplx<R>::from(-c1);
            R mag = exp(e.re * lm);
            R ang = e.im * lm;
            col[0] = Cplx<R>{mag * cos(ang), mag * sin(ang)};
        }
        for (const auto& [k, ck] : dyadic) {
            // factor: sum_l (-c_k log m)^l / l! at exponent k*l
            for (auto& c : fac) c = Cplx<R>{R(0), R(0)};
            Cplx<R> x = Cplx<R>::from(-ck);
            x.re = x.re * lm;
            x.im = x.im * lm;
            Cplx<R> term{R(1), R(0)};
            int l = 0;
            while (true) {
                if (l * k <= Lmax) fac[std::size_t(l * k)] += term;
                ++l;
                term = (R(1) / R(l)) * (term * x);
                using std::sqrt;
                if (sqrt(norm2(term)) < thr || l * k > Lmax) break;
            }
            // col *= fac on the exponent lattice
            for (auto& c : nxt) c = Cplx<R>{R(0), R(0)};
            for (int e1 = 0; e1 <= Lmax; ++e1) {
                if (col[std::size_t(e1)].re == R(0) && col[std::size_t(e1)].im == R(0)) continue;
                for (int e2 = 0; e1 + e2 <= Lmax; e2 += k) {
                    const Cplx<R>& f2 = fac[std::size_t(e2)];
                    if (f2.re == R(0) && f2.im == R(0)) continue;
                    nxt[std::size_t(e1 + e2)] += col[std::size_t(e1)] * f2;
                }
            }
            std::swap(col, nxt);
        }
        for (int l = 0; l <= Lmax; ++l) A(l, m - 1) = col[std::size_t(l)];
    }
    return A;
}

} // namespace

SingularSpectrum dyadic_singular_values(const Symbol& sym, int N, int Lmax, Precision prec,
                                        double term_threshold) {
    SingularSpectrum out;
    out.N = N;
    out.M = std::uint64_t(Lmax);
    if (prec == Precision::double_prec) {
        if (term_threshold == 0.0) term_threshold = 1e-20;
        detail::Dense<double> A = dyadic_matrix<double>(sym, N, Lmax, term_threshold);
        // transpose so rows >= cols for the one-sided sweep
        detail::Dense<double> At(A.cols, A.rows);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) At(j, i) = conj(A(i, j));
        detail::Dense<double>& W = A.rows >= A.cols ? A : At;
        std::vector<double> sv = detail::jacobi_singular_values(W);
        out.values = sv;
    } else {
        if (term_threshold == 0.0) term_threshold = 1e-40;
        using R = detail::quad;
        detail::Dense<R> A = dyadic_matrix<R>(sym, N, Lmax, term_threshold);
        detail::Dense<R> At(A.cols, A.rows);
        for (int i = 0; i < A.rows; ++i)
            for (int j = 0; j < A.cols; ++j) At(j, i) = conj(A(i, j));
        detail::Dense<R>& W = A.rows >= A.cols ? A : At;
        std::vector<R> sv = detail::jacobi_singular_values(W);
        out.values.reserve(sv.size());
        for (const auto& v : sv) out.values.push_back(double(v));
    }
    return out;
}

} // namespace compop
