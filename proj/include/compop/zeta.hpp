#pragma once

#include <complex>

namespace compop {

// Riemann zeta on Re s > 1 by direct summation plus an Euler-Maclaurin
// tail correction:
//
//   zeta(s) = sum_{n<M} n^{-s} + M^{1-s}/(s-1) + M^{-s}/2
//           + sum_{k=1}^{K} B_{2k}/(2k)! * s(s+1)...(s+2k-2) * M^{-s-2k+1}
//
// With M = 10^4 and K = 4 the first omitted term is below 1e-40 for all
// real x >= 1.01, so the result is limited by double rounding only.
// The complex overload serves reproducing-kernel Gram matrices
// zeta(s_j + conj(s_k)); accuracy degrades slowly with |Im s| (the
// rising factorial grows like |s|^9) but stays far below 1e-12 for the
// heights used at desk scale.
class ZetaEvaluator {
public:
    explicit ZetaEvaluator(int cutoff = 10000, int order = 4)
        : cutoff_(cutoff), order_(order) {}

    double operator()(double x) const;
    std::complex<double> operator()(std::complex<double> s) const;

    int cutoff() const { return cutoff_; }
    int order() const { return order_; }

private:
    int cutoff_;
    int order_;
};

// Shared default-configuration evaluator.
const ZetaEvaluator& default_zeta();

inline double zeta(double x) { return default_zeta()(x); }
inline std::complex<double> zeta(std::complex<double> s) { return default_zeta()(s); }

// Norm of the point-evaluation functional on H^p at s with Re s > 1/2:
// ||delta_s|| = zeta(2 Re s)^{1/p}  (Cole-Gamelin).
double point_eval_norm(std::complex<double> s, double p);

} // namespace compop
