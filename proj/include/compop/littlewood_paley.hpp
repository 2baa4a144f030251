#pragma once

#include <vector>

#include "compop/dirichlet.hpp"

namespace compop {

// ---------------------------------------------------------------------------
// Numerical evaluation of the Littlewood-Paley functional
//   |b_1|^p + int int int sigma |f_chi(s)|^{p-2} |f_chi'(s)|^2 dmu(t) dsigma dm(chi)
// and of the vertical-translate norm identity
//   ||f||_p^p mu(R) = int int |f_chi(it)|^p dmu(t) dm(chi).
//
// mu is a probability measure on R; both built-in choices are exact for the
// chi-average because translating chi by (p_j^{-it}) preserves Haar measure.
// ---------------------------------------------------------------------------
enum class MeasureKind { uniform01, two_point };

struct LpSpec {
    MeasureKind mu = MeasureKind::uniform01;
    double sigma_min = 1e-4;   // geometric grid starts here (plus a [0, sigma_min] cell)
    double sigma_max = 0.0;    // 0: chosen from coefficient decay
    int sigma_count = 100;     // geometric grid cells
    std::uint64_t samples = 500;
    std::uint64_t seed = 1;
    double p = 2.0;
    double floor_eps = 1e-8;   // |f| floor for p < 2
    double floor_eps_alt = 1e-6; // second floor, sensitivity report
    int workers = 1;
};

struct LpResult {
    double value = 0.0;
    double std_error = 0.0;     // MC standard error across characters
    double tail_bound = 0.0;    // sigma-tail estimate from coefficient decay
    double value_alt_floor = 0.0; // p < 2 only: value at the alternative floor
    double sigma_max_used = 0.0;
};

LpResult lp_functional(const DirichletPolynomial& f, const LpSpec& spec);

struct ComparabilityReport {
    double min_ratio = 0.0;
    double max_ratio = 0.0;
    std::vector<double> ratios; // lp_functional / ||f||_p^p per corpus entry
};

ComparabilityReport comparability_ratio(const std::vector<DirichletPolynomial>& corpus,
                                        double p, const LpSpec& spec);

struct MeasureNormResult {
    double value = 0.0;     // the estimated H^p norm
    double std_error = 0.0; // delta-method se
    double pth_mean = 0.0;
    double pth_se = 0.0;
};

MeasureNormResult norm_via_measure(const DirichletPolynomial& f, double p, MeasureKind mu,
                                   std::uint64_t samples, std::uint64_t seed);

} // namespace compop
