#include "compop/symbols.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "compop/errors.hpp"

namespace compop {

bool Symbol::psi_constant() const {
    if (psi.empty()) return true;
    return psi.size() == 1 && psi.terms().begin()->first == 1;
}

namespace {

void validate_symbol(const Symbol& sym) {
    if (sym.c0 < 0) throw std::invalid_argument("Symbol: c0 must be >= 0");
    if (sym.c0 == 0) {
        if (sym.psi.empty())
            throw std::invalid_argument("Symbol: c0 = 0 requires nonzero psi");
        if (sym.psi_constant() && sym.psi.coeff(1).real() <= 0.5)
            throw std::invalid_argument(
                "Symbol: constant psi with c0 = 0 requires Re c1 > 1/2");
    }
}

} // namespace

Symbol make_shift(double A) {
    Symbol s;
    s.c0 = 1;
    if (A != 0.0) s.psi.set(1, A);
    return s;
}

Symbol make_affine(Complex a, Complex c, std::uint64_t q) {
    if (q < 2) throw std::invalid_argument("make_affine: q must be a frequency >= 2");
    Symbol s;
    s.c0 = 0;
    s.psi.set(1, a);
    s.psi.set(q, c);
    validate_symbol(s);
    return s;
}

Symbol make_custom(int c0, DirichletPolynomial psi) {
    Symbol s;
    s.c0 = c0;
    s.psi = std::move(psi);
    validate_symbol(s);
    return s;
}

MapCheckReport check_class_g(const Symbol& sym, const GridSpec& grid) {
    if (grid.count < 1) throw std::invalid_argument("check_class_g: empty grid");
    if (grid.epsilon <= 0.0) throw std::invalid_argument("check_class_g: epsilon must be > 0");
    MapCheckReport rep;
    rep.grid = grid;
    const double threshold = sym.c0 == 0 ? 0.5 : 0.0;

    if (sym.psi.empty()) {
        // psi identically zero: admissible exactly when c0 >= 1
        rep.exact = true;
        rep.margin = std::numeric_limits<double>::infinity();
        rep.verdict = sym.c0 >= 1 ? Verdict::pass : Verdict::fail;
        rep.worst_point = Complex(grid.epsilon, 0.0);
        return rep;
    }
    if (sym.psi_constant()) {
        rep.exact = true;
        rep.margin = sym.psi.coeff(1).real() - threshold;
        rep.verdict = rep.margin > 0.0 ? Verdict::pass : Verdict::fail;
        rep.worst_point = Complex(grid.epsilon, 0.0);
        return rep;
    }

    double min_re = std::numeric_limits<double>::infinity();
    Complex worst;
    for (int i = 0; i < grid.count; ++i) {
        double t = grid.count == 1
                       ? 0.0
                       : -grid.height + 2.0 * grid.height * double(i) / double(grid.count - 1);
        Complex s(grid.epsilon, t);
        double re = evaluate(sym.psi, s).real();
        if (re < min_re) {
            min_re = re;
            worst = s;
        }
    }
    rep.margin = min_re - threshold;
    rep.worst_point = worst;
    rep.verdict = rep.margin > 1e-9 ? Verdict::heuristic_pass : Verdict::fail;
    return rep;
}

FixedPointResult fixed_point(const Symbol& sym) {
    if (sym.c0 != 0) throw std::invalid_argument("fixed_point: requires c0 = 0");
    FixedPointResult r;
    Complex alpha = sym.psi.coeff(1); // psi(+infinity)
    for (int it = 0; it < 200; ++it) {
        Complex val = evaluate(sym.psi, alpha) - alpha;
        r.residual = std::abs(val);
        r.iterations = it;
        if (r.residual <= 1e-12) break;
        Complex deriv = evaluate(sym.psi, alpha, 1) - 1.0;
        if (std::abs(deriv) < 1e-14)
            throw NumericalError("fixed_point: Newton derivative vanished");
        alpha -= val / deriv;
    }
    if (r.residual > 1e-12)
        throw NumericalError("fixed_point: no convergence in 200 iterations");
    if (alpha.real() <= 0.5)
        throw NumericalError("fixed_point: fixed point escaped C_{1/2}");
    r.alpha = alpha;
    r.phi_prime = evaluate(sym.psi, alpha, 1);
    return r;
}

// ---------------------------------------------------------------------------
// DiscMap
// ---------------------------------------------------------------------------

DiscMap DiscMap::identity() {
    DiscMap m;
    m.family_ = Family::identity;
    return m;
}

DiscMap DiscMap::scalar(Complex a) {
    if (std::abs(a) > 1.0 + 1e-12)
        throw std::invalid_argument("DiscMap::scalar: |a| must be <= 1");
    DiscMap m;
    m.family_ = Family::scalar;
    m.a_ = a;
    return m;
}

DiscMap DiscMap::lens(double theta) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("DiscMap::lens: theta must be in (0, 1]");
    DiscMap m;
    m.family_ = Family::lens;
    m.theta_ = theta;
    return m;
}

DiscMap DiscMap::moebius(Complex a, Complex b, Complex c, Complex d) {
    if (std::abs(a * d - b * c) < 1e-14)
        throw std::invalid_argument("DiscMap::moebius: degenerate map");
    DiscMap m;
    m.family_ = Family::moebius;
    m.ma_ = a;
    m.mb_ = b;
    m.mc_ = c;
    m.md_ = d;
    if (std::abs(c) > 0.0 && std::abs(d / c) <= 1.0 + 1e-12)
        throw std::invalid_argument("DiscMap::moebius: pole inside the closed disc");
    // self-map validation by boundary sampling
    for (int i = 0; i < 512; ++i) {
        double th = 2.0 * M_PI * double(i) / 512.0;
        if (std::abs(m.eval(std::polar(1.0, th))) > 1.0 + 1e-10)
            throw std::invalid_argument("DiscMap::moebius: not a self-map of the disc");
    }
    return m;
}

std::string DiscMap::family_name() const {
    switch (family_) {
        case Family::identity: return "identity";
        case Family::scalar: return "scalar";
        case Family::lens: return "lens";
        case Family::moebius: return "moebius";
    }
    return "?";
}

Complex DiscMap::eval(Complex z) const {
    switch (family_) {
        case Family::identity:
            return z;
        case Family::scalar:
            return a_ * z;
        case Family::lens: {
            Complex p = std::pow(1.0 + z, theta_);
            Complex q = std::pow(1.0 - z, theta_);
            return (p - q) / (p + q);
        }
        case Family::moebius:
            return (ma_ * z + mb_) / (mc_ * z + md_);
    }
    return z;
}

series::Series DiscMap::taylor(std::size_t order) const {
    using series::Series;
    switch (family_) {
        case Family::identity: {
            Series s(order + 1, 0.0);
            if (order >= 1) s[1] = 1.0;
            return s;
        }
        case Family::scalar: {
            Series s(order + 1, 0.0);
            if (order >= 1) s[1] = a_;
            return s;
        }
        case Family::lens: {
            Series p = series::binomial_pow(theta_, +1, order);
            Series q = series::binomial_pow(theta_, -1, order);
            Series num(order + 1), den(order + 1);
            for (std::size_t k = 0; k <= order; ++k) {
                num[k] = p[k] - q[k];
                den[k] = p[k] + q[k];
            }
            return series::div(num, den, order);
        }
        case Family::moebius: {
            // (a z + b) / (c z + d)
            Series num{mb_, ma_}, den{md_, mc_};
            return series::div(num, den, order);
        }
    }
    return {};
}

std::pair<double, bool> DiscMap::dist_to_minus_one() const {
    switch (family_) {
        case Family::identity: return {0.0, true};
        case Family::scalar: return {1.0 - std::abs(a_), true};
        case Family::lens: return {0.0, true}; // lens maps fix -1
        case Family::moebius: return {sampled_pole_margin(1.0), false};
    }
    return {0.0, false};
}

double DiscMap::sampled_pole_margin(double rho, int samples) const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double th = 2.0 * M_PI * double(i) / double(samples);
        m = std::min(m, std::abs(1.0 + eval(std::polar(rho, th))));
    }
    return m;
}

// ---------------------------------------------------------------------------
// Transference
// ---------------------------------------------------------------------------

TransferMap TransferMap::Teps(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("TransferMap::Teps: eps must be in (0, 1)");
    return {false, eps};
}

TransferResult transfer_symbol(const DiscMap& omega, const TransferMap& T, int K,
                               double pole_tolerance) {
    if (K < 1) throw std::invalid_argument("transfer_symbol: K must be >= 1");
    const std::size_t order = std::size_t(K);

    series::Series om = omega.taylor(order);
    series::Series one(order + 1, 0.0);
    one[0] = 1.0;
    series::Series u = one, v = one;
    for (std::size_t k = 0; k <= order; ++k) {
        u[k] -= om[k];
        v[k] += om[k];
    }
    if (std::abs(v[0]) < pole_tolerance)
        throw NumericalError("transfer_symbol: omega(0) too close to the pole of T");

    series::Series w = series::div(u, v, order);
    series::Series h;
    if (T.is_t0) {
        h = w;
    } else {
        if (std::abs(w[0]) < 1e-12)
            throw NumericalError("transfer_symbol: branch point at omega(0)");
        series::Series lw = series::log(w, order);
        for (auto& c : lw) c *= (1.0 - T.eps);
        h = series::exp(lw, order);
    }
    h[0] += 0.5;

    TransferResult res;
    res.taylor = h;
    res.symbol.c0 = 0;
    std::uint64_t freq = 1;
    for (std::size_t k = 0; k <= order; ++k) {
        if (std::abs(h[k]) > 0.0) res.symbol.psi.set(freq, h[k]);
        if (k < order) freq *= 2;
    }

    // Cauchy tail estimate reported for the half-plane Re s >= 1/4,
    // i.e. |z| <= r = 2^{-1/4}, sampling |T o omega| on |z| = rho.
    const double r = std::pow(2.0, -0.25);
    const double rho = 0.5 * (1.0 + r);
    double M = 0.0;
    for (int i = 0; i < 720; ++i) {
        Complex z = std::polar(rho, 2.0 * M_PI * double(i) / 720.0);
        Complex wz = (1.0 - omega.eval(z)) / (1.0 + omega.eval(z));
        Complex hz = T.is_t0 ? wz : std::pow(wz, 1.0 - T.eps);
        M = std::max(M, std::abs(0.5 + hz));
    }
    const double q = r / rho;
    res.tail_bound = M * std::pow(q, double(K + 1)) / (1.0 - q);
    res.tail_radius = r;
    return res;
}

// ---------------------------------------------------------------------------
// Nevanlinna counting and compactness
// ---------------------------------------------------------------------------

NevanlinnaResult nevanlinna_counting(const Symbol& sym, Complex s,
                                     const InverseSolverSpec& spec) {
    NevanlinnaResult out;
    Complex w = spec.start.value_or((s - evaluate(sym.psi, s)) /
                                    double(std::max(sym.c0, 1)));
    bool converged = false;
    for (int it = 0; it < spec.max_iterations; ++it) {
        Complex val = sym.eval(w) - s;
        if (std::abs(val) <= spec.tolerance) {
            converged = true;
            break;
        }
        Complex deriv = sym.derivative(w);
        if (std::abs(deriv) < 1e-14 || !std::isfinite(w.real()) || !std::isfinite(w.imag()))
            break;
        w -= val / deriv;
    }
    if (converged && w.real() > 0.0) {
        out.value = w.real();
        out.in_image = true;
        out.preimage = w;
    }
    return out;
}

CompactnessReport compactness_criterion(const Symbol& sym, const CompactnessGrid& grid) {
    if (sym.c0 < 1) throw std::invalid_argument("compactness_criterion: requires c0 >= 1");
    CompactnessReport rep;

    // sampled sup |Im psi| on the line Re s = sigma_min
    for (int i = 0; i < grid.height_count; ++i) {
        double t = grid.height_count == 1
                       ? 0.0
                       : -grid.height +
                             2.0 * grid.height * double(i) / double(grid.height_count - 1);
        rep.im_bound =
            std::max(rep.im_bound, std::abs(evaluate(sym.psi, Complex(grid.sigma_min, t)).imag()));
    }

    double ratio_factor =
        std::pow(grid.sigma_min / grid.sigma_max, 1.0 / double(std::max(grid.count - 1, 1)));
    double sigma = grid.sigma_max;
    for (int i = 0; i < grid.count; ++i) {
        NevanlinnaResult nv = nevanlinna_counting(sym, Complex(sigma, 0.0));
        rep.sigmas.push_back(sigma);
        rep.ratio_trace.push_back(nv.value / sigma);
        sigma *= ratio_factor;
    }

    bool nonincreasing = true;
    for (std::size_t i = 1; i < rep.ratio_trace.size(); ++i)
        if (rep.ratio_trace[i] > rep.ratio_trace[i - 1] + 1e-12) nonincreasing = false;
    double first = rep.ratio_trace.empty() ? 0.0 : rep.ratio_trace.front();
    double last = rep.ratio_trace.empty() ? 0.0 : rep.ratio_trace.back();
    rep.satisfied = nonincreasing && last <= std::max(0.1 * first, 1e-9);
    return rep;
}

} // namespace compop
