#pragma once

#include <optional>
#include <string>

#include "compop/dirichlet.hpp"
#include "compop/power_series.hpp"

namespace compop {

// ---------------------------------------------------------------------------
// Gordon-Hedenmalm symbols phi(s) = c0 s + psi(s) with c0 a nonnegative
// integer and psi a (finite) Dirichlet polynomial. Class membership is only
// ever checked heuristically by sampling; construction enforces the shape
// invariants.
// ---------------------------------------------------------------------------
struct Symbol {
    int c0 = 0;
    DirichletPolynomial psi;

    Complex eval(Complex s) const { return double(c0) * s + evaluate(psi, s); }
    Complex derivative(Complex s) const { return double(c0) + evaluate(psi, s, 1); }
    bool psi_constant() const;
};

Symbol make_shift(double A);                              // phi(s) = s + A
Symbol make_affine(Complex a, Complex c, std::uint64_t q); // phi(s) = a + c q^{-s}
Symbol make_custom(int c0, DirichletPolynomial psi);      // validated

// ---------------------------------------------------------------------------
// Sampled mapping-property check on the vertical line Re s = epsilon.
// ---------------------------------------------------------------------------
struct GridSpec {
    double epsilon = 0.01;
    double height = 50.0;
    int count = 401;
};

enum class Verdict { pass, heuristic_pass, fail };

struct MapCheckReport {
    Verdict verdict = Verdict::fail;
    double margin = 0.0;      // sampled min Re psi minus the threshold (0 or 1/2)
    Complex worst_point;      // grid point attaining the minimum
    GridSpec grid;
    bool exact = false;       // true when psi is constant (no sampling needed)
    bool passed() const { return verdict != Verdict::fail; }
};

MapCheckReport check_class_g(const Symbol& sym, const GridSpec& grid = {});

// ---------------------------------------------------------------------------
// Fixed point of a c0 = 0 symbol in C_{1/2} by Newton iteration from
// psi(+infinity) = c_1.
// ---------------------------------------------------------------------------
struct FixedPointResult {
    Complex alpha;
    double residual = 0.0; // |phi(alpha) - alpha|
    int iterations = 0;
    Complex phi_prime;     // phi'(alpha)
};

FixedPointResult fixed_point(const Symbol& sym);

// ---------------------------------------------------------------------------
// Analytic self-maps of the unit disc used by the transference pipeline.
// Taylor coefficients come from elementary power-series composition; lens
// maps use lambda_theta(z) = ((1+z)^t - (1-z)^t) / ((1+z)^t + (1-z)^t).
// ---------------------------------------------------------------------------
class DiscMap {
public:
    enum class Family { identity, scalar, lens, moebius };

    static DiscMap identity();
    static DiscMap scalar(Complex a);             // z -> a z, |a| <= 1
    static DiscMap lens(double theta);            // theta in (0, 1]
    static DiscMap moebius(Complex a, Complex b, Complex c, Complex d); // (az+b)/(cz+d)

    Family family() const { return family_; }
    std::string family_name() const;

    Complex eval(Complex z) const;
    series::Series taylor(std::size_t order) const;

    // Distance of the image closure to -1 where known in closed form;
    // otherwise a boundary-sampled value (flagged by the bool).
    std::pair<double, bool> dist_to_minus_one() const;
    // Sampled min of |1 + omega(z)| on |z| = rho.
    double sampled_pole_margin(double rho, int samples = 1024) const;

    double lens_theta() const { return theta_; }
    Complex scalar_a() const { return a_; }

private:
    DiscMap() = default;
    Family family_ = Family::identity;
    Complex a_;               // scalar
    double theta_ = 1.0;      // lens
    Complex ma_, mb_, mc_, md_; // moebius
};

// ---------------------------------------------------------------------------
// Transference phi = T o omega o I with I(s) = 2^{-s} and
//   T0(z)    = 1/2 + (1-z)/(1+z)
//   T_eps(z) = 1/2 + ((1-z)/(1+z))^{1-eps}
// The Taylor series of T o omega at 0, truncated at order K, becomes a
// c0 = 0 symbol with frequencies 2^0 .. 2^K.
// ---------------------------------------------------------------------------
struct TransferMap {
    bool is_t0 = true;
    double eps = 0.0; // used when !is_t0
    static TransferMap T0() { return {true, 0.0}; }
    static TransferMap Teps(double eps);
};

struct TransferResult {
    Symbol symbol;
    series::Series taylor;   // coefficients of T o omega, order 0..K
    double tail_bound = 0.0; // Cauchy tail estimate at the reporting radius
    double tail_radius = 0.0;
};

TransferResult transfer_symbol(const DiscMap& omega, const TransferMap& T, int K,
                               double pole_tolerance = 1e-9);

// ---------------------------------------------------------------------------
// Nevanlinna counting function for symbols declared univalent:
// N_phi(s) = Re phi^{-1}(s) when s is in phi(C_0), else 0.
// ---------------------------------------------------------------------------
struct NevanlinnaResult {
    double value = 0.0;
    bool in_image = false; // false means "outside image (numerical)"
    Complex preimage;
};

struct InverseSolverSpec {
    int max_iterations = 100;
    double tolerance = 1e-10;
    std::optional<Complex> start;
};

NevanlinnaResult nevanlinna_counting(const Symbol& sym, Complex s,
                                     const InverseSolverSpec& spec = {});

// ---------------------------------------------------------------------------
// Report for the compactness criterion (c0 >= 1): Im psi bounded and
// N_phi(s) = o(Re s) as Re s -> 0+, both sampled.
// ---------------------------------------------------------------------------
struct CompactnessReport {
    double im_bound = 0.0;                  // sampled sup |Im psi|
    std::vector<double> sigmas;             // grid Re s decreasing to 0
    std::vector<double> ratio_trace;        // N_phi(sigma)/sigma along the grid
    bool satisfied = false;                 // heuristic verdict
};

struct CompactnessGrid {
    double sigma_max = 1.0;
    double sigma_min = 1e-4;
    int count = 12;
    double height = 20.0;   // for the Im psi sweep
    int height_count = 201;
};

CompactnessReport compactness_criterion(const Symbol& sym, const CompactnessGrid& grid = {});

} // namespace compop
