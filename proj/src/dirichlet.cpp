#include "compop/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <random>
#include <shared_mutex>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace compop {

// ---------------------------------------------------------------------------
// DirichletPolynomial
// ---------------------------------------------------------------------------

void DirichletPolynomial::set(std::uint64_t n, Complex c) {
    if (n < 1) throw std::invalid_argument("DirichletPolynomial: frequency must be >= 1");
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw std::invalid_argument("DirichletPolynomial: coefficient must be finite");
    if (c == Complex(0.0)) {
        terms_.erase(n);
    } else {
        terms_[n] = c;
    }
}

void DirichletPolynomial::add(std::uint64_t n, Complex c) { set(n, coeff(n) + c); }

Complex DirichletPolynomial::coeff(std::uint64_t n) const {
    auto it = terms_.find(n);
    return it == terms_.end() ? Complex(0.0) : it->second;
}

std::uint64_t DirichletPolynomial::max_freq() const {
    return terms_.empty() ? 1 : terms_.rbegin()->first;
}

void DirichletPolynomial::trim(double eps) {
    for (auto it = terms_.begin(); it != terms_.end();) {
        if (std::abs(it->second) <= eps)
            it = terms_.erase(it);
        else
            ++it;
    }
}

double DirichletPolynomial::l1() const {
    double s = 0.0;
    for (const auto& [n, c] : terms_) s += std::abs(c);
    return s;
}

double DirichletPolynomial::l2() const {
    double s = 0.0;
    for (const auto& [n, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
}

DirichletPolynomial dirichlet_monomial(std::uint64_t n, Complex c) {
    DirichletPolynomial f;
    f.set(n, c);
    return f;
}

// ---------------------------------------------------------------------------
// Factorization with memoization
// ---------------------------------------------------------------------------

namespace {

BohrIndex factorize(std::uint64_t n) {
    BohrIndex b;
    for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) {
                n /= p;
                ++e;
            }
            b.factors.emplace_back(p, e);
            b.omega += e;
        }
    }
    if (n > 1) {
        b.factors.emplace_back(n, 1);
        b.omega += 1;
    }
    return b;
}

} // namespace

const BohrIndex& bohr_index(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("bohr_index: n must be >= 1");
    static std::unordered_map<std::uint64_t, BohrIndex> cache;
    static std::shared_mutex mtx;
    {
        std::shared_lock lock(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
    }
    BohrIndex b = factorize(n);
    std::unique_lock lock(mtx);
    return cache.emplace(n, std::move(b)).first->second;
}

int omega(std::uint64_t n) { return bohr_index(n).omega; }

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
    std::vector<std::uint64_t> out;
    if (bound < 2) return out;
    std::vector<bool> sieve(bound + 1, true);
    for (std::uint64_t i = 2; i <= bound; ++i) {
        if (sieve[i]) {
            out.push_back(i);
            for (std::uint64_t j = i * i; j <= bound; j += i) sieve[j] = false;
        }
    }
    return out;
}

std::uint64_t nth_prime(int n) {
    if (n < 1) throw std::invalid_argument("nth_prime: n must be >= 1");
    static std::vector<std::uint64_t> primes;
    static std::mutex mtx;
    std::lock_guard lock(mtx);
    std::uint64_t bound = 64;
    while (int(primes.size()) < n) {
        bound *= 2;
        primes = primes_up_to(bound);
    }
    return primes[std::size_t(n) - 1];
}

// ---------------------------------------------------------------------------
// Characters
// ---------------------------------------------------------------------------

Complex CharacterSample::chi(std::uint64_t n) const {
    const BohrIndex& b = bohr_index(n);
    Complex out = 1.0;
    for (const auto& [p, e] : b.factors) {
        // index of p among the primes we carry
        std::size_t idx = 0;
        bool found = false;
        for (; idx < values.size(); ++idx) {
            if (nth_prime(int(idx) + 1) == p) {
                found = true;
                break;
            }
            if (nth_prime(int(idx) + 1) > p) break;
        }
        if (!found)
            throw std::invalid_argument("CharacterSample: prime " + std::to_string(p) +
                                        " not covered");
        Complex z = values[idx];
        for (int k = 0; k < e; ++k) out *= z;
    }
    return out;
}

bool CharacterSample::covers(std::uint64_t n) const {
    const BohrIndex& b = bohr_index(n);
    if (b.factors.empty()) return true;
    std::uint64_t largest = b.factors.back().first;
    return !values.empty() && nth_prime(int(values.size())) >= largest;
}

CharacterSample sample_character(int m, std::uint64_t seed) {
    CharacterSample cs;
    cs.seed = seed;
    cs.values.reserve(std::size_t(m));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    for (int j = 0; j < m; ++j) {
        double th = unif(rng);
        cs.values.emplace_back(std::cos(th), std::sin(th));
    }
    return cs;
}

// ---------------------------------------------------------------------------
// Evaluation / shift / twist / multiply
// ---------------------------------------------------------------------------

Complex evaluate(const DirichletPolynomial& f, Complex s, int order) {
    if (order < 0 || order > 4)
        throw std::invalid_argument("evaluate: order must be in [0, 4]");
    Complex out = 0.0;
    for (const auto& [n, c] : f.terms()) {
        double ln = std::log(double(n));
        double w = 1.0;
        for (int k = 0; k < order; ++k) w *= -ln;
        out += c * w * std::exp(-s * ln);
    }
    return out;
}

DirichletPolynomial shift_twist(const DirichletPolynomial& f, double theta,
                                const CharacterSample* chi) {
    DirichletPolynomial out;
    for (const auto& [n, c] : f.terms()) {
        Complex v = c * std::pow(double(n), -theta);
        if (chi) v *= chi->chi(n);
        out.set(n, v);
    }
    return out;
}

MultiplyResult multiply(const DirichletPolynomial& f, const DirichletPolynomial& g,
                        std::uint64_t cap) {
    MultiplyResult r;
    std::map<std::uint64_t, Complex> over;
    for (const auto& [m, a] : f.terms()) {
        for (const auto& [n, b] : g.terms()) {
            if (m > UINT64_MAX / n) {
                // not representable; count it as discarded regardless of cap
                r.discarded_mass += std::abs(a * b);
                continue;
            }
            std::uint64_t k = m * n;
            if (cap && k > cap) {
                over[k] += a * b;
            } else {
                r.product.add(k, a * b);
            }
        }
    }
    for (const auto& [k, c] : over) r.discarded_mass += std::abs(c);
    return r;
}

DirichletPolynomial multiply_exact(const DirichletPolynomial& f, const DirichletPolynomial& g) {
    MultiplyResult r = multiply(f, g, 0);
    return std::move(r.product);
}

// ---------------------------------------------------------------------------
// Monte Carlo norm machinery
// ---------------------------------------------------------------------------

namespace {

struct TermView {
    std::vector<std::pair<int, int>> prime_exponents; // (prime index 0-based, exponent)
    Complex coeff;
};

// splitmix64 step, used to derive worker substreams
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t w) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (w + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// |z|^p with a fast path for small even integer p
double abs_pow(Complex z, double p) {
    double n2 = std::norm(z);
    if (p == 2.0) return n2;
    if (p == 4.0) return n2 * n2;
    if (p == 6.0) return n2 * n2 * n2;
    if (p == 1.0) return std::sqrt(n2);
    return std::pow(n2, 0.5 * p);
}

} // namespace

McMoment mc_abs_power_mean(const DirichletPolynomial& f, double p, const McOptions& mc) {
    if (mc.samples < 1) throw std::invalid_argument("monte carlo: samples must be >= 1");
    if (mc.workers < 1) throw std::invalid_argument("monte carlo: workers must be >= 1");

    // collect prime support and term factorizations once
    std::vector<std::uint64_t> primes;
    for (const auto& [n, c] : f.terms()) {
        for (const auto& [q, e] : bohr_index(n).factors) {
            if (std::find(primes.begin(), primes.end(), q) == primes.end()) primes.push_back(q);
        }
    }
    std::sort(primes.begin(), primes.end());
    std::vector<TermView> terms;
    terms.reserve(f.size());
    for (const auto& [n, c] : f.terms()) {
        TermView tv;
        tv.coeff = c;
        for (const auto& [q, e] : bohr_index(n).factors) {
            int idx = int(std::lower_bound(primes.begin(), primes.end(), q) - primes.begin());
            tv.prime_exponents.emplace_back(idx, e);
        }
        terms.push_back(std::move(tv));
    }

    const int W = mc.workers;
    std::vector<double> sums(std::size_t(W), 0.0), sums2(std::size_t(W), 0.0);
    std::vector<std::uint64_t> counts(std::size_t(W), 0);

    auto run_worker = [&](int w) {
        std::uint64_t nloc = mc.samples / std::uint64_t(W) +
                             (std::uint64_t(w) < mc.samples % std::uint64_t(W) ? 1 : 0);
        std::mt19937_64 rng(mix_seed(mc.seed, std::uint64_t(w)));
        std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
        std::vector<Complex> z(primes.size());
        double s1 = 0.0, s2 = 0.0;
        for (std::uint64_t i = 0; i < nloc; ++i) {
            for (auto& zj : z) {
                double th = unif(rng);
                zj = Complex(std::cos(th), std::sin(th));
            }
            Complex F = 0.0;
            for (const auto& tv : terms) {
                Complex chi = tv.coeff;
                for (const auto& [idx, e] : tv.prime_exponents) {
                    Complex base = z[std::size_t(idx)];
                    for (int k = 0; k < e; ++k) chi *= base;
                }
                F += chi;
            }
            double x = abs_pow(F, p);
            s1 += x;
            s2 += x * x;
        }
        sums[std::size_t(w)] = s1;
        sums2[std::size_t(w)] = s2;
        counts[std::size_t(w)] = nloc;
    };

    if (W == 1) {
        run_worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(std::size_t(W));
        for (int w = 0; w < W; ++w) pool.emplace_back(run_worker, w);
        for (auto& t : pool) t.join();
    }

    double s1 = 0.0, s2 = 0.0;
    std::uint64_t cnt = 0;
    for (int w = 0; w < W; ++w) {
        s1 += sums[std::size_t(w)];
        s2 += sums2[std::size_t(w)];
        cnt += counts[std::size_t(w)];
    }
    McMoment m;
    m.samples = cnt;
    m.mean = s1 / double(cnt);
    double var = std::max(0.0, s2 / double(cnt) - m.mean * m.mean);
    m.se = cnt > 1 ? std::sqrt(var / double(cnt - 1)) : 0.0;
    return m;
}

NormEstimate norm(const DirichletPolynomial& f, double p, NormMethod method,
                  const McOptions& mc) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm: requires p >= 1");
    NormEstimate est;
    est.p = p;
    switch (method) {
        case NormMethod::coeff_l2: {
            if (p != 2.0)
                throw std::invalid_argument("norm: coeff-l2 requires p == 2");
            est.value = f.l2();
            est.pth_mean = est.value * est.value;
            est.exact = true;
            return est;
        }
        case NormMethod::even_convolution: {
            double kd = p / 2.0;
            int k = int(std::lround(kd));
            if (k < 1 || std::abs(kd - double(k)) > 1e-12)
                throw std::invalid_argument("norm: even-convolution requires p = 2k, integer k >= 1");
            DirichletPolynomial pw = dirichlet_monomial(1, 1.0);
            for (int i = 0; i < k; ++i) pw = multiply_exact(pw, f);
            double l2sq = 0.0;
            for (const auto& [n, c] : pw.terms()) l2sq += std::norm(c);
            est.value = std::pow(l2sq, 1.0 / (2.0 * k));
            est.pth_mean = l2sq;
            est.exact = true;
            return est;
        }
        case NormMethod::monte_carlo: {
            McMoment m = mc_abs_power_mean(f, p, mc);
            est.pth_mean = m.mean;
            est.pth_se = m.se;
            est.value = std::pow(m.mean, 1.0 / p);
            // delta method: d(m^{1/p})/dm = m^{1/p-1}/p
            est.std_error = m.mean > 0.0 ? m.se * std::pow(m.mean, 1.0 / p - 1.0) / p : m.se;
            est.exact = false;
            est.seed = mc.seed;
            est.workers = mc.workers;
            return est;
        }
    }
    throw std::logic_error("norm: unknown method");
}

NormEstimate norm_auto(const DirichletPolynomial& f, double p, const McOptions& mc) {
    if (p == 2.0) return norm(f, p, NormMethod::coeff_l2);
    double kd = p / 2.0;
    int k = int(std::lround(kd));
    if (k >= 1 && std::abs(kd - double(k)) < 1e-12)
        return norm(f, p, NormMethod::even_convolution);
    return norm(f, p, NormMethod::monte_carlo, mc);
}

} // namespace compop
