#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace compop {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Dirichlet polynomials: finite maps  n >= 1  ->  b_n  representing
// f(s) = sum b_n n^{-s}. Stored sparsely in an ordered map so iteration
// (and therefore serialization) is deterministic.
// ---------------------------------------------------------------------------
class DirichletPolynomial {
public:
    DirichletPolynomial() = default;

    void set(std::uint64_t n, Complex c);
    void add(std::uint64_t n, Complex c);
    Complex coeff(std::uint64_t n) const;

    // Largest stored frequency; 1 for the zero polynomial.
    std::uint64_t max_freq() const;

    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    const std::map<std::uint64_t, Complex>& terms() const { return terms_; }

    // Remove coefficients with |b_n| <= eps.
    void trim(double eps = 0.0);

    double l1() const;
    double l2() const;

    friend bool operator==(const DirichletPolynomial&, const DirichletPolynomial&) = default;

private:
    std::map<std::uint64_t, Complex> terms_;
};

DirichletPolynomial dirichlet_monomial(std::uint64_t n, Complex c = 1.0);

// ---------------------------------------------------------------------------
// Bohr index: prime factorization n = prod p_j^{alpha_j} with
// Omega(n) = sum alpha_j. Factorizations are memoized because assembly
// factors the same frequencies over and over.
// ---------------------------------------------------------------------------
struct BohrIndex {
    std::vector<std::pair<std::uint64_t, int>> factors; // (prime, exponent), primes ascending
    int omega = 0;
};

const BohrIndex& bohr_index(std::uint64_t n);
int omega(std::uint64_t n);

// First n primes / primes up to a bound.
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);
std::uint64_t nth_prime(int n); // 1-based: nth_prime(1) == 2

// ---------------------------------------------------------------------------
// Character samples: unimodular values at the first m primes, defining a
// completely multiplicative chi on the integers they cover. A point of
// the infinite polytorus, kept only as far as it is needed.
// ---------------------------------------------------------------------------
struct CharacterSample {
    std::uint64_t seed = 0;
    std::vector<Complex> values; // values[j] at the (j+1)-th prime

    // chi(n); throws std::invalid_argument naming the first uncovered prime.
    Complex chi(std::uint64_t n) const;
    bool covers(std::uint64_t n) const;
};

// Uniform Haar sample over the first m primes.
CharacterSample sample_character(int m, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Evaluation and elementary transformations
// ---------------------------------------------------------------------------

// f^{(order)}(s) = sum b_n (-log n)^order n^{-s};  order <= 4.
Complex evaluate(const DirichletPolynomial& f, Complex s, int order = 0);

// b_n -> b_n n^{-theta} chi(n); chi == nullptr applies the shift only.
DirichletPolynomial shift_twist(const DirichletPolynomial& f, double theta,
                                const CharacterSample* chi = nullptr);

struct MultiplyResult {
    DirichletPolynomial product;
    double discarded_mass = 0.0; // l1 mass of coefficients beyond the cap
};

// Dirichlet convolution, frequencies above cap discarded (cap = 0 means exact).
MultiplyResult multiply(const DirichletPolynomial& f, const DirichletPolynomial& g,
                        std::uint64_t cap);
DirichletPolynomial multiply_exact(const DirichletPolynomial& f, const DirichletPolynomial& g);

// ---------------------------------------------------------------------------
// Norms
// ---------------------------------------------------------------------------
enum class NormMethod { coeff_l2, even_convolution, monte_carlo };

struct McOptions {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 1;
    int workers = 1;
};

struct NormEstimate {
    double value = 0.0;       // the norm itself
    double std_error = 0.0;   // delta-method standard error of `value` (0 if exact)
    double pth_mean = 0.0;    // sampled (or exact) mean of |F|^p
    double pth_se = 0.0;      // standard error of pth_mean
    double p = 2.0;
    bool exact = true;
    std::uint64_t seed = 0;
    int workers = 1;
};

// H^p norm of f.
//   coeff_l2        : p == 2, exact l2 of coefficients.
//   even_convolution: p == 2k, exact via ||f^k||_2^2 = ||f||_{2k}^{2k}.
//   monte_carlo     : any p >= 1, Haar sampling over the primes present.
// Deterministic given (seed, workers); worker substreams merge by summation.
NormEstimate norm(const DirichletPolynomial& f, double p, NormMethod method,
                  const McOptions& mc = {});

// Convenience: exact when p is an even integer, Monte Carlo otherwise.
NormEstimate norm_auto(const DirichletPolynomial& f, double p, const McOptions& mc = {});

// ---------------------------------------------------------------------------
// Shared Monte Carlo engine: mean and standard error of X(chi) = |F(chi)|^p
// where F is the Bohr lift of f evaluated at a random character, optionally
// with an extra vertical rotation n^{-i t}, t drawn per sample from a
// caller-supplied distribution (used by the Littlewood-Paley module).
// ---------------------------------------------------------------------------
struct McMoment {
    double mean = 0.0;
    double se = 0.0;
    std::uint64_t samples = 0;
};

McMoment mc_abs_power_mean(const DirichletPolynomial& f, double p, const McOptions& mc);

} // namespace compop
