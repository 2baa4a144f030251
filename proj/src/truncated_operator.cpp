#include "compop/truncated_operator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

#include "compop/errors.hpp"

namespace compop {

Eigen::MatrixXcd TruncatedOperator::square_section() const {
    if (basis == BasisTag::disc_monomial) {
        int n = std::min<int>(int(mat.rows()), int(mat.cols()));
        return mat.topLeftCorner(n, n);
    }
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(cols, cols);
    for (int r = 0; r < int(row_freqs.size()); ++r) {
        if (row_freqs[std::size_t(r)] > std::uint64_t(cols)) continue;
        out.row(int(row_freqs[std::size_t(r)]) - 1) = mat.row(r).leftCols(cols);
    }
    return out;
}

namespace {

// n^c for complex exponent via exp(c log n)
Complex cpow(double n, Complex c) { return std::exp(c * std::log(n)); }

bool mul_fits(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
    return a <= cap / b;
}

} // namespace

ComposeResult compose_basis_element(const Symbol& sym, std::uint64_t n, std::uint64_t M,
                                    double term_threshold) {
    if (n < 1) throw std::invalid_argument("compose_basis_element: n must be >= 1");
    if (M < 1) throw std::invalid_argument("compose_basis_element: M must be >= 1");

    // leading frequency n^{c0}
    std::uint64_t base = 1;
    for (int i = 0; i < sym.c0; ++i) {
        if (!mul_fits(base, n, M))
            throw std::invalid_argument("compose_basis_element: M too small for n^{c0}");
        base *= n;
    }

    const double ln_n = std::log(double(n));
    ComposeResult res;
    res.poly.set(base, cpow(double(n), -sym.psi.coeff(1)));

    for (const auto& [j, cj] : sym.psi.terms()) {
        if (j < 2) continue;
        Complex x = cj * ln_n;
        if (x == Complex(0.0)) continue;

        // factor series: sum_l (-x)^l / l! at frequencies j^l
        DirichletPolynomial factor;
        Complex term = 1.0;
        std::uint64_t freq = 1;
        double kept_abs = 0.0;
        int l = 0;
        bool freq_overflow = false;
        while (true) {
            factor.add(freq, term);
            kept_abs += std::abs(term);
            ++l;
            term *= -x / double(l);
            if (std::abs(term) < term_threshold) break;
            if (!mul_fits(freq, j, M)) {
                freq_overflow = true;
                break;
            }
            freq *= j;
        }
        // remaining factor mass (either below threshold or beyond M)
        double factor_tail = std::exp(std::abs(x)) - kept_abs;
        if (factor_tail > 0.0) res.tail += factor_tail * res.poly.l1();
        (void)freq_overflow;

        MultiplyResult mr = multiply(res.poly, factor, M);
        res.tail += mr.discarded_mass;
        res.poly = std::move(mr.product);
    }
    return res;
}

std::uint64_t default_row_cap(const Symbol& sym, int N) {
    // deepest expansion order: largest l with |c_j log N|^l / l! >= 1e-16
    double xmax = 0.0;
    std::uint64_t jmax = 1;
    for (const auto& [j, cj] : sym.psi.terms()) {
        if (j < 2) continue;
        xmax = std::max(xmax, std::abs(cj) * std::log(double(N)));
        jmax = std::max(jmax, j);
    }
    if (jmax == 1) {
        // psi constant: diagonal-ish, rows = N^{c0}
        std::uint64_t cap = 1;
        for (int i = 0; i < std::max(sym.c0, 1); ++i) {
            if (cap > UINT64_MAX / std::uint64_t(N)) return UINT64_MAX;
            cap *= std::uint64_t(N);
        }
        return cap;
    }
    int L = 1;
    double term = 1.0;
    while (term >= 1e-16 && L < 200) {
        ++L;
        term *= xmax / double(L);
    }
    long double cap = 1.0L;
    for (int i = 0; i < sym.c0; ++i) cap *= (long double)(N);
    for (int i = 0; i < L; ++i) {
        cap *= (long double)(jmax);
        if (cap > (long double)(UINT64_MAX) / 2.0L) return UINT64_MAX / 2;
    }
    return std::uint64_t(cap);
}

TruncatedOperator assemble(const Symbol& sym, int N, std::uint64_t M,
                           const AssembleOptions& opts) {
    if (N < 1) throw std::invalid_argument("assemble: N must be >= 1");
    std::vector<ComposeResult> cols;
    cols.reserve(std::size_t(N));
    std::set<std::uint64_t> active;
    for (int n = 1; n <= N; ++n) {
        cols.push_back(compose_basis_element(sym, std::uint64_t(n), M, opts.term_threshold));
        for (const auto& [f, c] : cols.back().poly.terms()) active.insert(f);
    }
    if (active.size() * std::size_t(N) > opts.guard_entries)
        throw ResourceLimitError("assemble: dense matrix exceeds resource guard (" +
                                 std::to_string(active.size()) + " x " + std::to_string(N) + ")");

    TruncatedOperator op;
    op.symbol = sym;
    op.cols = N;
    op.row_cap = M;
    op.row_freqs.assign(active.begin(), active.end());
    op.mat = Eigen::MatrixXcd::Zero(int(active.size()), N);
    std::map<std::uint64_t, int> row_of;
    for (int r = 0; r < int(op.row_freqs.size()); ++r) row_of[op.row_freqs[std::size_t(r)]] = r;
    for (int n = 1; n <= N; ++n) {
        for (const auto& [f, c] : cols[std::size_t(n - 1)].poly.terms())
            op.mat(row_of[f], n - 1) = c;
        op.col_tails.push_back(cols[std::size_t(n - 1)].tail);
    }
    return op;
}

TruncatedOperator assemble_disc(const DiscMap& omega, int N, int rows_order) {
    if (N < 1) throw std::invalid_argument("assemble_disc: N must be >= 1");
    if (rows_order < 0) rows_order = N;
    const int audit = 64;
    const std::size_t full = std::size_t(rows_order) + audit;

    TruncatedOperator op;
    op.basis = BasisTag::disc_monomial;
    op.cols = N + 1;
    op.row_cap = std::uint64_t(rows_order);
    op.mat = Eigen::MatrixXcd::Zero(rows_order + 1, N + 1);

    series::Series om = omega.taylor(full);
    series::Series cur(full + 1, 0.0);
    cur[0] = 1.0;
    for (int j = 0; j <= N; ++j) {
        if (j > 0) cur = series::mul(cur, om, full);
        for (int r = 0; r <= rows_order; ++r) op.mat(r, j) = cur[std::size_t(r)];
        double w = 0.0;
        for (std::size_t r = std::size_t(rows_order) + 1; r <= full; ++r) w += std::norm(cur[r]);
        op.col_tails.push_back(std::sqrt(w));
    }
    return op;
}

SectionMatrix lattice_section(const Symbol& sym, int N, std::uint64_t M,
                              const AssembleOptions& opts) {
    // pass 1: active rows of the (N, M) assembly
    std::set<std::uint64_t> sigma;
    for (int n = 1; n <= N; ++n) sigma.insert(std::uint64_t(n));
    std::map<std::uint64_t, DirichletPolynomial> columns;
    for (int n = 1; n <= N; ++n) {
        ComposeResult cr = compose_basis_element(sym, std::uint64_t(n), M, opts.term_threshold);
        for (const auto& [f, c] : cr.poly.terms()) sigma.insert(f);
        columns.emplace(std::uint64_t(n), std::move(cr.poly));
    }
    // pass 2: columns for the extra frequencies
    for (std::uint64_t f : sigma) {
        if (columns.count(f)) continue;
        columns.emplace(f, compose_basis_element(sym, f, M, opts.term_threshold).poly);
    }
    // deflate structurally-zero rows (drop the matching column too)
    std::set<std::uint64_t> nonzero_rows;
    for (const auto& [n, col] : columns)
        for (const auto& [f, c] : col.terms())
            if (sigma.count(f)) nonzero_rows.insert(f);

    SectionMatrix sec;
    sec.deflated = int(sigma.size() - nonzero_rows.size());
    sec.freqs.assign(nonzero_rows.begin(), nonzero_rows.end());
    const int d = int(sec.freqs.size());
    if (std::size_t(d) * std::size_t(d) > opts.guard_entries)
        throw ResourceLimitError("lattice_section: exceeds resource guard");
    std::map<std::uint64_t, int> row_of;
    for (int r = 0; r < d; ++r) row_of[sec.freqs[std::size_t(r)]] = r;
    sec.mat = Eigen::MatrixXcd::Zero(d, d);
    for (int cidx = 0; cidx < d; ++cidx) {
        const DirichletPolynomial& col = columns.at(sec.freqs[std::size_t(cidx)]);
        for (const auto& [f, c] : col.terms()) {
            auto it = row_of.find(f);
            if (it != row_of.end()) sec.mat(it->second, cidx) = c;
        }
    }
    return sec;
}

// ---------------------------------------------------------------------------
// Gadgets
// ---------------------------------------------------------------------------

DirichletPolynomial project_omega(const DirichletPolynomial& f, int k) {
    if (k < 0) throw std::invalid_argument("project_omega: k must be >= 0");
    DirichletPolynomial out;
    for (const auto& [n, c] : f.terms())
        if (omega(n) == k) out.set(n, c);
    return out;
}

DirichletPolynomial partial_sum(const DirichletPolynomial& f, std::uint64_t N) {
    if (N < 1) throw std::invalid_argument("partial_sum: N must be >= 1");
    DirichletPolynomial out;
    for (const auto& [n, c] : f.terms()) {
        if (n > N) break;
        out.set(n, c);
    }
    return out;
}

double saksman_lambda(double x, std::uint64_t N) {
    double ax = std::abs(x);
    double lo = 1.0 - 1.0 / double(N), hi = 1.0 + 1.0 / double(N);
    if (ax <= lo) return 1.0;
    if (ax >= hi) return 0.0;
    return 0.5 * double(N) * (hi - ax);
}

KernelL1 saksman_kernel_l1(std::uint64_t N) {
    if (N < 2) throw std::invalid_argument("saksman_kernel_l1: N must be >= 2");
    // ||psi||_1 = (1/pi) int_0^inf (N/2) |sin v sin(v/N)| / v^2 dv,
    // integrated per half-period of sin v with 15-point Gauss-Legendre,
    // far tail estimated by equidistribution of both factors.
    static const double gx[15] = {
        -0.98799251802048543, -0.93727339240070590, -0.84820658341042722,
        -0.72441773136017005, -0.57097217260853885, -0.39415134707756337,
        -0.20119409399743452, 0.0,                  0.20119409399743452,
        0.39415134707756337,  0.57097217260853885,  0.72441773136017005,
        0.84820658341042722,  0.93727339240070590,  0.98799251802048543};
    static const double gw[15] = {
        0.03075324199611727, 0.07036604748810812, 0.10715922046717194,
        0.13957067792615431, 0.16626920581699392, 0.18616100001556221,
        0.19843148532711158, 0.20257824192556127, 0.19843148532711158,
        0.18616100001556221, 0.16626920581699392, 0.13957067792615431,
        0.10715922046717194, 0.07036604748810812, 0.03075324199611727};

    const double Nd = double(N);
    const std::uint64_t chunks = 10 * N;
    double total = 0.0;
    for (std::uint64_t k = 0; k < chunks; ++k) {
        double a = double(k) * M_PI, b = a + M_PI;
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        double acc = 0.0;
        for (int i = 0; i < 15; ++i) {
            double v = mid + half * gx[i];
            double g = (v == 0.0) ? 0.5
                                  : 0.5 * Nd * std::abs(std::sin(v) * std::sin(v / Nd)) / (v * v);
            acc += gw[i] * g;
        }
        total += acc * half;
    }
    const double V = double(chunks) * M_PI;
    const double tail = 0.5 * Nd * (4.0 / (M_PI * M_PI)) / V;
    KernelL1 out;
    out.value = (total + tail) / M_PI;
    out.error = 0.3 * tail / M_PI + 1e-12 * out.value;
    return out;
}

SaksmanResult saksman_multiplier(const DirichletPolynomial& f, std::uint64_t N) {
    if (N < 2) throw std::invalid_argument("saksman_multiplier: N must be >= 2");
    SaksmanResult out;
    const double logN = std::log(double(N));
    for (const auto& [n, c] : f.terms()) {
        double lam = saksman_lambda(std::log(double(n)) / logN, N);
        if (lam != 0.0) out.poly.set(n, c * lam);
    }
    KernelL1 k = saksman_kernel_l1(N);
    out.kernel_l1 = k.value;
    out.kernel_l1_error = k.error;
    return out;
}

ContractionResult contraction_multiplier(const DirichletPolynomial& f,
                                         const std::vector<double>& lambda, std::uint64_t N,
                                         double basis_constant, double p, const McOptions& mc) {
    if (N < 1) throw std::invalid_argument("contraction_multiplier: N must be >= 1");
    for (std::size_t i = 1; i < lambda.size(); ++i)
        if (lambda[i] > lambda[i - 1] + 1e-15)
            throw std::invalid_argument("contraction_multiplier: lambda not nonincreasing");
    for (double l : lambda)
        if (l < 0.0) throw std::invalid_argument("contraction_multiplier: lambda negative");

    ContractionResult out;
    for (const auto& [n, c] : f.terms()) {
        if (n < N) continue;
        std::size_t idx = std::size_t(n - N);
        if (idx >= lambda.size())
            throw std::invalid_argument("contraction_multiplier: lambda too short for frequency " +
                                        std::to_string(n));
        if (lambda[idx] != 0.0) out.poly.set(n, c * lambda[idx]);
    }
    out.norm_f = norm_auto(f, p, mc);
    double lamN = lambda.empty() ? 0.0 : lambda[0];
    out.bound = 2.0 * basis_constant * lamN * out.norm_f.value;
    return out;
}

PullbackReport verify_bohr_pullback(const Symbol& sym, const DirichletPolynomial& f, double p,
                                    const McOptions& mc, std::uint64_t compose_cap) {
    if (sym.c0 != 0) throw std::invalid_argument("verify_bohr_pullback: requires c0 = 0");
    MapCheckReport chk = check_class_g(sym);
    if (!chk.passed())
        throw NumericalError("verify_bohr_pullback: image margin check failed (heuristic)");

    // lhs: the composed polynomial C_phi f
    DirichletPolynomial composed;
    for (const auto& [m, c] : f.terms()) {
        ComposeResult cr = compose_basis_element(sym, m, compose_cap);
        for (const auto& [k, v] : cr.poly.terms()) composed.add(k, c * v);
    }
    PullbackReport rep;
    NormEstimate lhs = norm_auto(composed, p, mc);
    rep.lhs_norm = lhs.value;
    rep.lhs_pth = lhs.exact ? std::pow(lhs.value, p) : lhs.pth_mean;
    rep.lhs_se = lhs.exact ? 0.0 : lhs.pth_se;

    // rhs: MC average of |f(Phi*(chi))|^p, Phi*(chi) = sum c_n chi(n)
    std::vector<std::uint64_t> primes;
    for (const auto& [n, c] : sym.psi.terms())
        for (const auto& [q, e] : bohr_index(n).factors)
            if (std::find(primes.begin(), primes.end(), q) == primes.end()) primes.push_back(q);
    std::sort(primes.begin(), primes.end());
    int m_primes = 0;
    for (std::size_t i = 0; i < primes.size(); ++i)
        while (nth_prime(m_primes + 1) <= primes[i]) ++m_primes;

    std::mt19937_64 rng(mc.seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < mc.samples; ++i) {
        CharacterSample cs;
        cs.values.reserve(std::size_t(m_primes));
        for (int j = 0; j < m_primes; ++j) {
            double th = unif(rng);
            cs.values.emplace_back(std::cos(th), std::sin(th));
        }
        Complex w = 0.0;
        for (const auto& [n, c] : sym.psi.terms()) w += c * cs.chi(n);
        Complex val = evaluate(f, w);
        double x = std::pow(std::norm(val), 0.5 * p);
        s1 += x;
        s2 += x * x;
    }
    rep.rhs_mean = s1 / double(mc.samples);
    double var = std::max(0.0, s2 / double(mc.samples) - rep.rhs_mean * rep.rhs_mean);
    rep.rhs_se = mc.samples > 1 ? std::sqrt(var / double(mc.samples - 1)) : 0.0;

    double denom = std::sqrt(rep.rhs_se * rep.rhs_se + rep.lhs_se * rep.lhs_se);
    rep.sigmas = denom > 0.0 ? std::abs(rep.lhs_pth - rep.rhs_mean) / denom : 0.0;
    return rep;
}

} // namespace compop
