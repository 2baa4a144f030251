#pragma once

// Small self-contained complex arithmetic and dense kernels templated on the
// real scalar, so the same code runs in double and in boost multiprecision
// floats. Needed where truncated spectra fall below double epsilon: graded
// composition-operator matrices have honest singular values down to 1e-30.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace compop::detail {

using quad = boost::multiprecision::cpp_bin_float_quad;
using mp50 = boost::multiprecision::cpp_bin_float_50;

template <class R>
struct Cplx {
    R re{}, im{};
    Cplx() = default;
    Cplx(R r, R i) : re(std::move(r)), im(std::move(i)) {}
    explicit Cplx(R r) : re(std::move(r)), im(R(0)) {}
    static Cplx from(std::complex<double> z) { return Cplx(R(z.real()), R(z.imag())); }
    std::complex<double> to_double() const { return {double(re), double(im)}; }
};

template <class R> Cplx<R> operator+(const Cplx<R>& a, const Cplx<R>& b) {
    return {a.re + b.re, a.im + b.im};
}
template <class R> Cplx<R> operator-(const Cplx<R>& a, const Cplx<R>& b) {
    return {a.re - b.re, a.im - b.im};
}
template <class R> Cplx<R> operator*(const Cplx<R>& a, const Cplx<R>& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
template <class R> Cplx<R> operator*(const R& a, const Cplx<R>& b) {
    return {a * b.re, a * b.im};
}
template <class R> Cplx<R> operator/(const Cplx<R>& a, const Cplx<R>& b) {
    R d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
template <class R> Cplx<R>& operator+=(Cplx<R>& a, const Cplx<R>& b) {
    a.re += b.re;
    a.im += b.im;
    return a;
}
template <class R> Cplx<R>& operator-=(Cplx<R>& a, const Cplx<R>& b) {
    a.re -= b.re;
    a.im -= b.im;
    return a;
}
template <class R> Cplx<R> conj(const Cplx<R>& a) { return {a.re, -a.im}; }
template <class R> R norm2(const Cplx<R>& a) { return a.re * a.re + a.im * a.im; }
template <class R> R abs_c(const Cplx<R>& a) {
    using std::sqrt;
    return sqrt(norm2(a));
}

// Column-major dense matrix
template <class R>
struct Dense {
    int rows = 0, cols = 0;
    std::vector<Cplx<R>> a;
    Dense() = default;
    Dense(int r, int c) : rows(r), cols(c), a(std::size_t(r) * std::size_t(c)) {}
    Cplx<R>& operator()(int i, int j) { return a[std::size_t(j) * rows + i]; }
    const Cplx<R>& operator()(int i, int j) const { return a[std::size_t(j) * rows + i]; }
};

// ---------------------------------------------------------------------------
// One-sided (Hestenes) Jacobi SVD: orthogonalizes the columns of A in place
// and returns the singular values, descending. Requires rows >= cols for
// efficiency (transpose first otherwise; singular values are shared).
// Small singular values come out with absolute accuracy ~ eps(R) * ||A||.
// ---------------------------------------------------------------------------
template <class R>
std::vector<R> jacobi_singular_values(Dense<R>& A, int max_sweeps = 60) {
    using std::abs;
    using std::sqrt;
    const int m = A.rows, n = A.cols;
    const R eps = std::numeric_limits<R>::epsilon();
    const R tol2 = R(64) * eps * eps;

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                R alpha(0), beta(0);
                Cplx<R> gamma{R(0), R(0)};
                const Cplx<R>* cp = &A(0, p);
                const Cplx<R>* cq = &A(0, q);
                for (int i = 0; i < m; ++i) {
                    alpha += norm2(cp[i]);
                    beta += norm2(cq[i]);
                    gamma += conj(cp[i]) * cq[i];
                }
                R g2 = norm2(gamma);
                if (g2 <= tol2 * alpha * beta) continue;
                rotated = true;
                R g = sqrt(g2);
                Cplx<R> u{gamma.re / g, gamma.im / g};
                R tau = (beta - alpha) / (R(2) * g);
                R t = (tau >= R(0) ? R(1) : R(-1)) / (abs(tau) + sqrt(R(1) + tau * tau));
                R c = R(1) / sqrt(R(1) + t * t);
                R s = c * t;
                Cplx<R>* wp = &A(0, p);
                Cplx<R>* wq = &A(0, q);
                Cplx<R> ubar = conj(u);
                for (int i = 0; i < m; ++i) {
                    Cplx<R> ap = wp[i], aq = wq[i];
                    wp[i] = c * ap - s * (ubar * aq);
                    wq[i] = s * (u * ap) + c * aq;
                }
            }
        }
        if (!rotated) break;
    }
    std::vector<R> sv(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        R s2(0);
        for (int i = 0; i < m; ++i) s2 += norm2(A(i, j));
        sv[std::size_t(j)] = sqrt(s2);
    }
    std::sort(sv.begin(), sv.end(), [](const R& x, const R& y) { return x > y; });
    return sv;
}

// ---------------------------------------------------------------------------
// LU solve with partial pivoting (by |.|^2), in place.
// ---------------------------------------------------------------------------
template <class R>
void lu_solve(Dense<R> A, std::vector<Cplx<R>>& b) {
    const int n = A.rows;
    if (A.cols != n || int(b.size()) != n) throw std::invalid_argument("lu_solve: shape");
    std::vector<int> piv(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        int imax = k;
        R best = norm2(A(k, k));
        for (int i = k + 1; i < n; ++i) {
            R v = norm2(A(i, k));
            if (v > best) {
                best = v;
                imax = i;
            }
        }
        if (best == R(0)) throw std::runtime_error("lu_solve: singular matrix");
        piv[std::size_t(k)] = imax;
        if (imax != k) {
            for (int j = 0; j < n; ++j) std::swap(A(k, j), A(imax, j));
            std::swap(b[std::size_t(k)], b[std::size_t(imax)]);
        }
        Cplx<R> pivval = A(k, k);
        for (int i = k + 1; i < n; ++i) {
            Cplx<R> f = A(i, k) / pivval;
            A(i, k) = f;
            if (!(f.re == R(0) && f.im == R(0))) {
                for (int j = k + 1; j < n; ++j) A(i, j) -= f * A(k, j);
                b[std::size_t(i)] -= f * b[std::size_t(k)];
            }
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        Cplx<R> s = b[std::size_t(i)];
        for (int j = i + 1; j < n; ++j) s -= A(i, j) * b[std::size_t(j)];
        b[std::size_t(i)] = s / A(i, i);
    }
}

// ---------------------------------------------------------------------------
// Bordered-Newton refinement of a simple eigenpair: solves
//   (B - lambda I) v = 0,  v[i0] = 1
// starting from a double-precision estimate. Quadratic convergence; a few
// iterations give eigenvalues accurate to ~eps(R) * kappa.
// ---------------------------------------------------------------------------
template <class R>
void refine_eigenpair(const Dense<R>& B, Cplx<R>& lambda, std::vector<Cplx<R>>& v,
                      int iterations = 4) {
    const int d = B.rows;
    int i0 = 0;
    R best = norm2(v[0]);
    for (int i = 1; i < d; ++i) {
        R w = norm2(v[std::size_t(i)]);
        if (w > best) {
            best = w;
            i0 = i;
        }
    }
    Cplx<R> pivot = v[std::size_t(i0)];
    for (auto& x : v) x = x / pivot;

    for (int it = 0; it < iterations; ++it) {
        Dense<R> J(d + 1, d + 1);
        std::vector<Cplx<R>> rhs(static_cast<std::size_t>(d) + 1);
        for (int j = 0; j < d; ++j)
            for (int i = 0; i < d; ++i) J(i, j) = B(i, j);
        for (int i = 0; i < d; ++i) {
            J(i, i) -= lambda;
            J(i, d) = Cplx<R>(R(0)) - v[std::size_t(i)];
            J(d, i) = Cplx<R>(R(0));
        }
        J(d, i0) = Cplx<R>(R(1));
        J(d, d) = Cplx<R>(R(0));
        for (int i = 0; i < d; ++i) {
            Cplx<R> r{R(0), R(0)};
            for (int j = 0; j < d; ++j) r += B(i, j) * v[std::size_t(j)];
            r -= lambda * v[std::size_t(i)];
            rhs[std::size_t(i)] = Cplx<R>(R(0)) - r;
        }
        rhs[std::size_t(d)] = Cplx<R>(R(0));
        lu_solve(J, rhs);
        for (int i = 0; i < d; ++i) v[std::size_t(i)] += rhs[std::size_t(i)];
        lambda += rhs[std::size_t(d)];
    }
}

} // namespace compop::detail
