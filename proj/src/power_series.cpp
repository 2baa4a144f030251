#include "compop/power_series.hpp"

#include <cmath>
#include <stdexcept>

namespace compop::series {

using C = std::complex<double>;

Series mul(const Series& a, const Series& b, std::size_t order) {
    Series out(order + 1, C(0.0));
    for (std::size_t i = 0; i < a.size() && i <= order; ++i) {
        if (a[i] == C(0.0)) continue;
        std::size_t jmax = std::min(order - i, b.size() ? b.size() - 1 : 0);
        for (std::size_t j = 0; j <= jmax && j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

Series div(const Series& a, const Series& b, std::size_t order) {
    if (b.empty() || b[0] == C(0.0)) throw std::invalid_argument("series::div: b(0) == 0");
    Series out(order + 1, C(0.0));
    auto get = [](const Series& s, std::size_t k) { return k < s.size() ? s[k] : C(0.0); };
    out[0] = get(a, 0) / b[0];
    for (std::size_t k = 1; k <= order; ++k) {
        C s = get(a, k);
        for (std::size_t j = 1; j <= k; ++j) s -= get(b, j) * out[k - j];
        out[k] = s / b[0];
    }
    return out;
}

Series log(const Series& a, std::size_t order) {
    if (a.empty() || a[0] == C(0.0)) throw std::invalid_argument("series::log: a(0) == 0");
    auto get = [](const Series& s, std::size_t k) { return k < s.size() ? s[k] : C(0.0); };
    // a = exp(L): k a_k = sum_{j=1}^{k} j L_j a_{k-j}, solve for L_k
    Series out(order + 1, C(0.0));
    out[0] = std::log(a[0]);
    for (std::size_t k = 1; k <= order; ++k) {
        C s = double(k) * get(a, k);
        for (std::size_t j = 1; j < k; ++j) s -= double(j) * out[j] * get(a, k - j);
        out[k] = s / (double(k) * a[0]);
    }
    return out;
}

Series exp(const Series& a, std::size_t order) {
    auto get = [](const Series& s, std::size_t k) { return k < s.size() ? s[k] : C(0.0); };
    Series out(order + 1, C(0.0));
    out[0] = std::exp(get(a, 0));
    for (std::size_t k = 1; k <= order; ++k) {
        C s = 0.0;
        for (std::size_t j = 1; j <= k; ++j) s += double(j) * get(a, j) * out[k - j];
        out[k] = s / double(k);
    }
    return out;
}

Series binomial_pow(double theta, int sign, std::size_t order) {
    Series out(order + 1, C(0.0));
    out[0] = 1.0;
    for (std::size_t k = 1; k <= order; ++k)
        out[k] = out[k - 1] * ((theta - double(k - 1)) / double(k)) * double(sign);
    return out;
}

C eval(const Series& a, C z) {
    C out = 0.0;
    for (std::size_t k = a.size(); k-- > 0;) out = out * z + a[k];
    return out;
}

} // namespace compop::series
