#include "compop/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace compop {

namespace {

// 4-point Gauss-Legendre on [-1, 1]
const double kGx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                       0.8611363115940526};
const double kGw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                       0.3478548451374538};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t w) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (w + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

struct TermData {
    double logn;
    Complex coeff;
    std::vector<std::pair<int, int>> prime_exponents;
};

struct Prepared {
    std::vector<std::uint64_t> primes;
    std::vector<TermData> terms; // frequencies >= 2 only
    Complex b1;
};

Prepared prepare(const DirichletPolynomial& f) {
    Prepared pr;
    pr.b1 = f.coeff(1);
    for (const auto& [n, c] : f.terms()) {
        if (n < 2) continue;
        for (const auto& [q, e] : bohr_index(n).factors)
            if (std::find(pr.primes.begin(), pr.primes.end(), q) == pr.primes.end())
                pr.primes.push_back(q);
    }
    std::sort(pr.primes.begin(), pr.primes.end());
    for (const auto& [n, c] : f.terms()) {
        if (n < 2) continue;
        TermData td;
        td.logn = std::log(double(n));
        td.coeff = c;
        for (const auto& [q, e] : bohr_index(n).factors) {
            int idx =
                int(std::lower_bound(pr.primes.begin(), pr.primes.end(), q) - pr.primes.begin());
            td.prime_exponents.emplace_back(idx, e);
        }
        pr.terms.push_back(std::move(td));
    }
    return pr;
}

double draw_t(MeasureKind mu, std::mt19937_64& rng) {
    if (mu == MeasureKind::uniform01) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        return u(rng);
    }
    std::uniform_int_distribution<int> b(0, 1);
    return double(b(rng));
}

} // namespace

LpResult lp_functional(const DirichletPolynomial& f, const LpSpec& spec) {
    if (!(spec.p >= 1.0)) throw std::invalid_argument("lp_functional: p >= 1 required");
    if (spec.samples < 1) throw std::invalid_argument("lp_functional: samples >= 1 required");
    if (spec.sigma_count < 2) throw std::invalid_argument("lp_functional: sigma_count >= 2");

    Prepared pr = prepare(f);
    LpResult out;
    const double p = spec.p;

    if (pr.terms.empty()) {
        out.value = std::pow(std::abs(pr.b1), p);
        return out;
    }

    // sigma_max from coefficient decay: integrand <= sigma * Dp * C^2 n2^{-2 sigma}
    double n2 = 2.0;
    for (const auto& [n, c] : f.terms())
        if (n >= 2) {
            n2 = double(n);
            break;
        }
    double C = 0.0, D = std::abs(pr.b1);
    for (const auto& td : pr.terms) {
        C += std::abs(td.coeff) * td.logn;
        D += std::abs(td.coeff);
    }
    double Dp = p >= 2.0 ? std::pow(D, p - 2.0) : std::pow(spec.floor_eps, p - 2.0);
    double sigma_max = spec.sigma_max;
    if (sigma_max <= 0.0) {
        sigma_max = 10.0;
        const double l2 = 2.0 * std::log(n2);
        auto tail = [&](double sm) {
            return (sm / l2 + 1.0 / (l2 * l2)) * std::exp(-sm * l2) * C * C * Dp;
        };
        while (sigma_max < 80.0 && tail(sigma_max) > 1e-14) sigma_max += 5.0;
        out.tail_bound = tail(sigma_max);
    }
    out.sigma_max_used = sigma_max;

    // sigma grid: [0, sigma_min] then geometric cells up to sigma_max
    std::vector<double> edges;
    edges.push_back(0.0);
    double ratio = std::pow(sigma_max / spec.sigma_min, 1.0 / double(spec.sigma_count));
    double e = spec.sigma_min;
    for (int i = 0; i <= spec.sigma_count; ++i) {
        edges.push_back(std::min(e, sigma_max));
        e *= ratio;
    }
    // quadrature nodes and weights
    std::vector<double> nodes, weights;
    for (std::size_t c = 0; c + 1 < edges.size(); ++c) {
        double a = edges[c], b = edges[c + 1];
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (int i = 0; i < 4; ++i) {
            nodes.push_back(mid + half * kGx[i]);
            weights.push_back(half * kGw[i]);
        }
    }
    const std::size_t Q = nodes.size();
    const std::size_t T = pr.terms.size();
    // W[q*T + t] = n_t^{-sigma_q}
    std::vector<double> W(Q * T);
    for (std::size_t q = 0; q < Q; ++q)
        for (std::size_t t = 0; t < T; ++t)
            W[q * T + t] = std::exp(-nodes[q] * pr.terms[t].logn);

    const int workers = std::max(1, spec.workers);
    std::vector<double> s1(std::size_t(workers), 0.0), s2(std::size_t(workers), 0.0),
        s1alt(std::size_t(workers), 0.0);
    std::vector<std::uint64_t> cnt(std::size_t(workers), 0);

    auto run = [&](int w) {
        std::uint64_t nloc = spec.samples / std::uint64_t(workers) +
                             (std::uint64_t(w) < spec.samples % std::uint64_t(workers) ? 1 : 0);
        std::mt19937_64 rng(mix_seed(spec.seed, std::uint64_t(w)));
        std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
        std::vector<Complex> z(pr.primes.size());
        std::vector<Complex> tw(T); // twisted coefficients b_n chi(n) n^{-it}
        double a1 = 0.0, a2 = 0.0, a1alt = 0.0;
        for (std::uint64_t i = 0; i < nloc; ++i) {
            for (auto& zj : z) {
                double th = unif(rng);
                zj = Complex(std::cos(th), std::sin(th));
            }
            double t = draw_t(spec.mu, rng);
            for (std::size_t k = 0; k < T; ++k) {
                Complex chi = pr.terms[k].coeff;
                for (const auto& [idx, e2] : pr.terms[k].prime_exponents) {
                    Complex base = z[std::size_t(idx)];
                    for (int r = 0; r < e2; ++r) chi *= base;
                }
                double ang = -t * pr.terms[k].logn;
                chi *= Complex(std::cos(ang), std::sin(ang));
                tw[k] = chi;
            }
            double integral = 0.0, integral_alt = 0.0;
            for (std::size_t q = 0; q < Q; ++q) {
                Complex F = pr.b1, Fp = 0.0;
                const double* wrow = &W[q * T];
                for (std::size_t k = 0; k < T; ++k) {
                    Complex v = tw[k] * wrow[k];
                    F += v;
                    Fp += v * (-pr.terms[k].logn);
                }
                double f2 = std::norm(Fp);
                double g;
                if (p == 2.0) {
                    g = f2;
                } else if (p > 2.0) {
                    g = std::pow(std::norm(F), 0.5 * (p - 2.0)) * f2;
                } else {
                    double af = std::max(std::sqrt(std::norm(F)), spec.floor_eps);
                    g = std::pow(af, p - 2.0) * f2;
                    double af2 = std::max(std::sqrt(std::norm(F)), spec.floor_eps_alt);
                    integral_alt += weights[q] * nodes[q] * std::pow(af2, p - 2.0) * f2;
                }
                integral += weights[q] * nodes[q] * g;
            }
            a1 += integral;
            a2 += integral * integral;
            a1alt += integral_alt;
        }
        s1[std::size_t(w)] = a1;
        s2[std::size_t(w)] = a2;
        s1alt[std::size_t(w)] = a1alt;
        cnt[std::size_t(w)] = nloc;
    };

    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
        for (auto& th : pool) th.join();
    }
    double t1 = 0.0, t2 = 0.0, t1alt = 0.0;
    std::uint64_t n = 0;
    for (int w = 0; w < workers; ++w) {
        t1 += s1[std::size_t(w)];
        t2 += s2[std::size_t(w)];
        t1alt += s1alt[std::size_t(w)];
        n += cnt[std::size_t(w)];
    }
    double mean = t1 / double(n);
    double var = std::max(0.0, t2 / double(n) - mean * mean);
    out.value = std::pow(std::abs(pr.b1), p) + mean;
    out.std_error = n > 1 ? std::sqrt(var / double(n - 1)) : 0.0;
    if (p < 2.0) out.value_alt_floor = std::pow(std::abs(pr.b1), p) + t1alt / double(n);
    return out;
}

ComparabilityReport comparability_ratio(const std::vector<DirichletPolynomial>& corpus, double p,
                                        const LpSpec& spec0) {
    ComparabilityReport rep;
    rep.min_ratio = std::numeric_limits<double>::infinity();
    rep.max_ratio = 0.0;
    LpSpec spec = spec0;
    spec.p = p;
    std::uint64_t i = 0;
    for (const auto& f : corpus) {
        spec.seed = mix_seed(spec0.seed, 1000 + i);
        LpResult lp = lp_functional(f, spec);
        McOptions mc;
        mc.samples = std::max<std::uint64_t>(spec.samples * 20, 20000);
        mc.seed = mix_seed(spec0.seed, 5000 + i);
        NormEstimate nrm = norm_auto(f, p, mc);
        double denom = std::pow(nrm.value, p);
        if (denom <= 0.0) throw std::invalid_argument("comparability_ratio: zero norm in corpus");
        double ratio = lp.value / denom;
        rep.ratios.push_back(ratio);
        rep.min_ratio = std::min(rep.min_ratio, ratio);
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        ++i;
    }
    return rep;
}

MeasureNormResult norm_via_measure(const DirichletPolynomial& f, double p, MeasureKind mu,
                                   std::uint64_t samples, std::uint64_t seed) {
    if (!(p >= 1.0)) throw std::invalid_argument("norm_via_measure: p >= 1 required");
    Prepared pr = prepare(f);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 2.0 * M_PI);
    std::vector<Complex> z(pr.primes.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        for (auto& zj : z) {
            double th = unif(rng);
            zj = Complex(std::cos(th), std::sin(th));
        }
        double t = draw_t(mu, rng);
        Complex F = pr.b1;
        for (const auto& td : pr.terms) {
            Complex chi = td.coeff;
            for (const auto& [idx, e] : td.prime_exponents) {
                Complex base = z[std::size_t(idx)];
                for (int r = 0; r < e; ++r) chi *= base;
            }
            double ang = -t * td.logn;
            F += chi * Complex(std::cos(ang), std::sin(ang));
        }
        double x = std::pow(std::norm(F), 0.5 * p);
        s1 += x;
        s2 += x * x;
    }
    MeasureNormResult out;
    out.pth_mean = s1 / double(samples);
    double var = std::max(0.0, s2 / double(samples) - out.pth_mean * out.pth_mean);
    out.pth_se = samples > 1 ? std::sqrt(var / double(samples - 1)) : 0.0;
    out.value = std::pow(out.pth_mean, 1.0 / p);
    out.std_error =
        out.pth_mean > 0.0 ? out.pth_se * std::pow(out.pth_mean, 1.0 / p - 1.0) / p : out.pth_se;
    return out;
}

} // namespace compop
