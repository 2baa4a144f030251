#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "compop/dirichlet.hpp"
#include "compop/symbols.hpp"

namespace compop {

// ---------------------------------------------------------------------------
// Truncated matrix of a composition operator. Column j (1-based frequency)
// holds the Dirichlet coefficients of C_phi(j^{-s}); rows are the union of
// frequencies <= M actually hit by some column, kept sorted. For the disc
// basis, column j holds the Taylor coefficients of omega^j and rows are
// monomial orders 0..rows-1.
// ---------------------------------------------------------------------------
enum class BasisTag { dirichlet, disc_monomial };

struct TruncatedOperator {
    Eigen::MatrixXcd mat;                 // active_rows x cols
    std::vector<std::uint64_t> row_freqs; // dirichlet basis: frequency per row
    int cols = 0;                         // dirichlet: frequencies 1..cols
    std::uint64_t row_cap = 0;            // M
    std::vector<double> col_tails;        // per-column discarded-mass audit
    BasisTag basis = BasisTag::dirichlet;
    Symbol symbol;                        // dirichlet basis only

    // Square section over frequencies 1..min(cols, largest row <= cols).
    Eigen::MatrixXcd square_section() const;
};

struct AssembleOptions {
    double term_threshold = 1e-16;     // expansion cutoff per exponential factor
    std::uint64_t guard_entries = 16'000'000; // dense resource guard
};

// Coefficients of n^{-phi(s)} truncated to frequencies <= M, with the
// discarded l1 mass. Expansion of the exponential factors runs per psi
// frequency j >= 2 until the term magnitude falls below the threshold.
struct ComposeResult {
    DirichletPolynomial poly;
    double tail = 0.0;
};

ComposeResult compose_basis_element(const Symbol& sym, std::uint64_t n, std::uint64_t M,
                                    double term_threshold = 1e-16);

TruncatedOperator assemble(const Symbol& sym, int N, std::uint64_t M,
                           const AssembleOptions& opts = {});

// Default row cap: N^{c0} times the deepest expansion reach, bounded by
// what fits in 64 bits.
std::uint64_t default_row_cap(const Symbol& sym, int N);

// Disc-basis operator for omega: columns 0..N, rows 0..rows_order.
// Tail audit per column: l2 mass of orders (rows_order, rows_order+64].
TruncatedOperator assemble_disc(const DiscMap& omega, int N, int rows_order = -1);

// ---------------------------------------------------------------------------
// Square compression of C_phi onto span{ r^{-s} : r in freqs } with
// structurally-zero rows (and their columns) deflated away. The deflated
// part contributes only zero eigenvalues.
// ---------------------------------------------------------------------------
struct SectionMatrix {
    std::vector<std::uint64_t> freqs;
    Eigen::MatrixXcd mat;
    int deflated = 0; // number of structurally-zero rows removed
};

SectionMatrix lattice_section(const Symbol& sym, int N, std::uint64_t M,
                              const AssembleOptions& opts = {});

// ---------------------------------------------------------------------------
// Concrete operator gadgets
// ---------------------------------------------------------------------------

// Keep frequencies with Omega(n) = k.
DirichletPolynomial project_omega(const DirichletPolynomial& f, int k);

// Keep frequencies <= N.
DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N);

// Trapezoid multiplier b_n -> b_n Lambda(log n / log N) where Lambda is the
// even trapezoid with nodes 1 -+ 1/N, plus the l1 norm of its kernel.
double saksman_lambda(double x, std::uint64_t N);

struct SaksmanResult {
    DirichletPolynomial poly;
    double kernel_l1 = 0.0;
    double kernel_l1_error = 0.0;
};

SaksmanResult saksman_multiplier(const DirichletPolynomial& f, std::uint64_t N);

struct KernelL1 {
    double value = 0.0;
    double error = 0.0;
};
KernelL1 saksman_kernel_l1(std::uint64_t N);

// b_n -> lambda_n b_n for n >= N (zero below); lambda given on [N, max_freq].
// Returns the transformed polynomial and the bound 2 C lambda_N ||f||_p.
struct ContractionResult {
    DirichletPolynomial poly;
    double bound = 0.0;
    NormEstimate norm_f;
};

ContractionResult contraction_multiplier(const DirichletPolynomial& f,
                                         const std::vector<double>& lambda, std::uint64_t N,
                                         double basis_constant, double p,
                                         const McOptions& mc = {});

// Both sides of the Bohr-lift pullback identity
// ||C_phi f||_p^p = int |f(Phi*(chi))|^p dm for bounded-image c0 = 0 symbols.
struct PullbackReport {
    double lhs_norm = 0.0;     // ||C_phi f||_p (exact for even p, MC otherwise)
    double lhs_pth = 0.0;      // p-th power
    double lhs_se = 0.0;       // se of lhs_pth (0 when exact)
    double rhs_mean = 0.0;     // MC mean of |f(Phi*(chi))|^p
    double rhs_se = 0.0;
    double sigmas = 0.0;       // |lhs_pth - rhs_mean| in combined standard errors
};

PullbackReport verify_bohr_pullback(const Symbol& sym, const DirichletPolynomial& f, double p,
                                    const McOptions& mc, std::uint64_t compose_cap = 1'000'000);

} // namespace compop
