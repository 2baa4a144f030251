#pragma once

#include <string>
#include <vector>

#include "compop/truncated_operator.hpp"

namespace compop {

// ---------------------------------------------------------------------------
// Spectra
// ---------------------------------------------------------------------------
struct SingularSpectrum {
    std::vector<double> values; // nonincreasing
    int N = 0;
    std::uint64_t M = 0;
};

struct EigenSpectrum {
    std::vector<Complex> values; // sorted by modulus descending, ties by argument
    int N = 0;
};

// Singular values (= approximation numbers at p = 2) of the truncated matrix.
// JacobiSVD when the small dimension is modest, Gram eigenvalues otherwise.
SingularSpectrum approx_numbers_h2(const TruncatedOperator& op);
SingularSpectrum singular_values_of(const Eigen::MatrixXcd& A);

// Eigenvalues of the square section over frequencies 1..N (exact diagonal
// read-off when the section is structurally triangular).
EigenSpectrum eigenvalues(const TruncatedOperator& op);

// Eigenvalues of the deflated lattice section (all active frequencies of the
// (N, M) truncation). With refine = true, the leading eigenpairs are polished
// by bordered Newton iteration in 50-digit arithmetic, so deviations are
// truncation-driven rather than eigensolver-driven.
EigenSpectrum eigenvalues_extended(const Symbol& sym, int N, std::uint64_t M,
                                   bool refine = true, int refine_count = 12);

// Predicted spectrum by Theorem-of-compact-spectra shape: c0 = 0 gives
// {phi'(alpha)^{k-1}}, c0 = 1 gives {k^{-c1}}, c0 >= 2 gives {1, 0, 0, ...}
// (flagged: outside the two-parameter theorem).
struct SpectrumPrediction {
    std::vector<Complex> values;
    bool out_of_theorem = false;
};
SpectrumPrediction predict_spectrum(const Symbol& sym, int k);

// Max relative deviation over the first k values after modulus-descending
// alignment; absolute deviation where the prediction vanishes.
double compare_spectrum(const EigenSpectrum& computed, const Symbol& sym, int k);

// ---------------------------------------------------------------------------
// Decay-model fitting on log a_n against n, log n, log(n log n), sqrt n.
// All models share the parameter count, so AICc ranking reduces to R^2,
// but the scores are reported anyway.
// ---------------------------------------------------------------------------
struct ModelFit {
    std::string name;      // geometric | power | power-log | stretched
    double slope = 0.0;    // in transformed coordinates
    double intercept = 0.0;
    double r2 = 0.0;
    double rss = 0.0;
    double aicc = 0.0;
    bool valid = false;
};

struct DecayFitReport {
    std::string selected;
    double param = 0.0;     // geometric: rate log(1/delta); power: A;
                            // power-log: gamma; stretched: b
    double amplitude = 0.0; // exp(intercept)
    double r2 = 0.0;
    std::vector<ModelFit> models;
    std::vector<double> residuals; // transformed residuals of the selected model
    int lo = 0, hi = 0;            // fitted index window (1-based, inclusive)
};

DecayFitReport fit_decay(const std::vector<double>& values, int lo, int hi);

// ---------------------------------------------------------------------------
// Weyl / Pietsch inequality checks on matched truncations.
// ---------------------------------------------------------------------------
struct WeylPietschReport {
    bool pietsch_all_pass = true;
    double worst_margin = 0.0; // min over n of rhs/|lambda_{2n}| (>= 1 means pass)
    int worst_n = 0;
    int checks = 0;
    double weyl_ratio = 0.0;   // ||lambda||_r / ||a||_r (empirical c_r)
};

WeylPietschReport weyl_pietsch_check(const EigenSpectrum& eigs, const SingularSpectrum& approx,
                                     double r);

// ---------------------------------------------------------------------------
// Constructive bounds
// ---------------------------------------------------------------------------

// Smallest singular value of the block with columns p_1..p_n and rows with
// Omega(freq) = c0; a lower bound for the Bernstein number b_n at p = 2.
double bernstein_lower_c1(const TruncatedOperator& op, int n);

// Closed-form upper bound 2 sqrt(n) r^{n-1} zeta(1/2+theta)^{1/p}.
double gelfand_upper_part_a(double r, double theta, double p, int n);

// ---------------------------------------------------------------------------
// Extended-precision path for dyadic symbols (all psi frequencies powers of
// two). Rows live on the exponent lattice l = 0..Lmax (frequency 2^l,
// unconstrained by 64-bit range), columns are 1..N. Quad precision resolves
// singular values far below double epsilon.
// ---------------------------------------------------------------------------
enum class Precision { double_prec, quad_prec };

SingularSpectrum dyadic_singular_values(const Symbol& sym, int N, int Lmax,
                                        Precision prec = Precision::double_prec,
                                        double term_threshold = 0.0 /* 0: per precision */);

} // namespace compop
