#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "compop/dirichlet.hpp"
#include "compop/symbols.hpp"

namespace compop {

// ---------------------------------------------------------------------------
// Finite point sequences with their reproducing kernel:
//   zeta_halfplane      : K(s, w) = zeta(s + conj(w))      on C_{1/2}
//   classical_halfplane : K(s, w) = 1 / (s + conj(w) - 1)  on C_{1/2}
//   disc                : K(z, w) = 1 / (1 - z conj(w))    on D
// ---------------------------------------------------------------------------
enum class KernelDomain { zeta_halfplane, classical_halfplane, disc };

struct PointSequence {
    std::vector<Complex> points;
    KernelDomain domain = KernelDomain::zeta_halfplane;

    PointSequence() = default;
    PointSequence(std::vector<Complex> pts, KernelDomain d);

    PointSequence shifted(double theta) const;      // S + theta (half-plane domains)
    PointSequence height_capped(double R) const;    // S_R = {|Im s_j| <= R}
    std::size_t size() const { return points.size(); }
};

Complex kernel_value(KernelDomain domain, Complex s, Complex w);

// ---------------------------------------------------------------------------
// Gram systems: G_{jk} = K(s_j, s_k), normalized variant with unit diagonal.
// For finite sets at p = 2, lambda_max of the normalized Gram is the Carleson
// constant of mu_S and lambda_min^{-1/2} the interpolation constant.
// ---------------------------------------------------------------------------
struct GramSystem {
    Eigen::MatrixXcd G;
    Eigen::MatrixXcd G_normalized;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    bool conditioning_warning = false;
};

GramSystem gram(const PointSequence& S);

double carleson_const_h2(const PointSequence& S);
double interp_const_h2(const PointSequence& S);

// ---------------------------------------------------------------------------
// Right-hand sides of the section-4 lemmas, evaluated as printed.
// ---------------------------------------------------------------------------

// Lemma 4.1: measures supported in closed C_theta.
//   p >= 2 : zeta(2 theta)^{(p-2)/p} * carleson_h2
//   p <  2 : zeta(2 theta) * total_mass
double lemma41_bound(double theta, double p, double carleson_h2_or_mass);

// Lemma 4.2: interpolation constant transfer from S + theta.
//   zeta(2t)^{1/min(2,p)} (zeta(1+2d)/zeta(1+2(d+t)))^{1/min(2,p)}
//     n^{1/min(2,p)-1/p} M_{H^2}(S+theta)^{2/min(2,p)}
double lemma42_bound(double theta, double delta, int n, double p, double m2_shifted);

// ---------------------------------------------------------------------------
// H^1 interpolation by squaring: solve g(s_j) = sqrt(a_j) minimal-norm in the
// kernel span, truncate g at the frequency cap, set f = g^2. The H^1 norm of
// f is sampled by Monte Carlo; the reported bound is
// M_{H^2}(S)^2 * sum |a_j| / zeta(2 sigma_j). Truncating g only shrinks its
// H^2 norm, so the bound applies to the truncated interpolant as well; the
// price is the node residual, which is reported rather than hidden.
// ---------------------------------------------------------------------------
struct H1SquaringResult {
    DirichletPolynomial g;      // truncated H^2 interpolant of sqrt targets
    DirichletPolynomial f;      // g^2 (exact product)
    double h1_norm_mc = 0.0;    // MC estimate of ||f||_1
    double h1_se = 0.0;
    double h1_exact = 0.0;      // ||g_trunc||_2^2 (equals ||f||_1 exactly)
    double bound = 0.0;
    double max_node_residual = 0.0; // max_j |f(s_j) - a_j|
};

H1SquaringResult h1_interp_by_squaring(const PointSequence& S,
                                       const std::vector<Complex>& targets,
                                       std::uint64_t freq_cap, const McOptions& mc);

// ---------------------------------------------------------------------------
// Uniform separation constant of the Blaschke product of S in C_{1/2}:
// delta(S) = inf_j prod_{k != j} |(s_j - s_k) / (s_j + conj(s_k) - 1)|.
// ---------------------------------------------------------------------------
double blaschke_separation(const PointSequence& S);

// Classical upper surrogate for M_{H^infty}(S): (2e + 4e |log d|) / d.
double m_hinfty_surrogate(double separation);

// ---------------------------------------------------------------------------
// Printed right-hand sides of the general lower bounds. Unknown constants
// (rho_p, c) default to 1 and are flagged. Every input carries a provenance
// label so reports can distinguish computed values from surrogates.
// ---------------------------------------------------------------------------
struct Tagged {
    double value = 0.0;
    std::string provenance; // "computed" | "surrogate" | "default-constant"
};

enum class LowerBoundVariant { thm61, thm62, thm92 };

struct LowerBoundInputs {
    double p = 2.0;
    Tagged interpolation;          // M_{H^infty}(S), M_{H^p}(S) or M_{H^p}(Phi(Z))
    Tagged carleson;               // ||mu_{S'}||_C or disc Carleson of mu_Z
    Tagged constant{1.0, "default-constant"}; // rho_p or c

    // half-plane variants: pairs with phi(s'_j) = s_j
    std::vector<Complex> S, S_pre;
    const Symbol* symbol = nullptr; // if set, preimage pairs are validated

    // disc variant: Z and omega(Z)
    std::vector<Complex> Z, omegaZ;
};

struct LowerBoundResult {
    double value = 0.0;
    double inf_ratio = 0.0; // the zeta-ratio or disc-ratio infimum
    double n_factor = 0.0;
    std::vector<std::string> provenance;
};

LowerBoundResult lower_bound_general(LowerBoundVariant variant, const LowerBoundInputs& in);

} // namespace compop
