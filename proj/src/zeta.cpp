#include "compop/zeta.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace compop {

namespace {

// B_2, B_4, B_6, B_8
constexpr double kBernoulli[4] = {1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0};

// (2k)! for k = 1..4
constexpr double kFact2k[4] = {2.0, 24.0, 720.0, 40320.0};

const std::vector<double>& log_table(int n) {
    static std::vector<double> logs = [] {
        std::vector<double> v(10001);
        for (int i = 1; i <= 10000; ++i) v[i] = std::log(double(i));
        return v;
    }();
    if (n <= 10000) return logs;
    throw std::invalid_argument("zeta: cutoff above precomputed table");
}

} // namespace

double ZetaEvaluator::operator()(double x) const {
    if (!(x > 1.0)) throw std::domain_error("zeta: requires x > 1");
    const int M = cutoff_;
    // ascending terms summed smallest-first
    double sum = 0.0;
    for (int n = M - 1; n >= 1; --n) sum += std::pow(double(n), -x);
    const double Mx = std::pow(double(M), -x);
    double value = sum + double(M) * Mx / (x - 1.0) + 0.5 * Mx;
    double rising = x; // x (x+1) ... (x+2k-2)
    double Mpow = Mx / double(M); // M^{-x-2k+1}, starts at M^{-x-1}
    for (int k = 1; k <= order_ && k <= 4; ++k) {
        value += kBernoulli[k - 1] / kFact2k[k - 1] * rising * Mpow;
        // advance to next k: multiply rising by (x+2k-1)(x+2k)
        rising *= (x + 2.0 * k - 1.0) * (x + 2.0 * k);
        Mpow /= double(M) * double(M);
    }
    return value;
}

std::complex<double> ZetaEvaluator::operator()(std::complex<double> s) const {
    if (!(s.real() > 1.0)) throw std::domain_error("zeta: requires Re s > 1");
    const int M = cutoff_;
    const auto& logs = log_table(M);
    std::complex<double> sum = 0.0;
    for (int n = M - 1; n >= 2; --n) sum += std::exp(-s * logs[n]);
    sum += 1.0;
    const std::complex<double> Mx = std::exp(-s * logs[M]);
    std::complex<double> value = sum + double(M) * Mx / (s - 1.0) + 0.5 * Mx;
    std::complex<double> rising = s;
    std::complex<double> Mpow = Mx / double(M);
    for (int k = 1; k <= order_ && k <= 4; ++k) {
        value += kBernoulli[k - 1] / kFact2k[k - 1] * rising * Mpow;
        rising *= (s + (2.0 * k - 1.0)) * (s + (2.0 * k));
        Mpow /= double(M) * double(M);
    }
    return value;
}

const ZetaEvaluator& default_zeta() {
    static ZetaEvaluator z;
    return z;
}

double point_eval_norm(std::complex<double> s, double p) {
    if (!(s.real() > 0.5)) throw std::domain_error("point_eval_norm: requires Re s > 1/2");
    if (!(p >= 1.0)) throw std::domain_error("point_eval_norm: requires p >= 1");
    return std::pow(zeta(2.0 * s.real()), 1.0 / p);
}

} // namespace compop
