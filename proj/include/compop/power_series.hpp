#pragma once

#include <complex>
#include <vector>

namespace compop {

// Formal power series on the disc, coefficients in order 0..N.
// All operations truncate at the shorter relevant order.
namespace series {

using Series = std::vector<std::complex<double>>;

Series mul(const Series& a, const Series& b, std::size_t order);
// a/b with b[0] != 0
Series div(const Series& a, const Series& b, std::size_t order);
// log a with a[0] != 0 (principal branch at the constant term)
Series log(const Series& a, std::size_t order);
// exp a
Series exp(const Series& a, std::size_t order);
// (1 + sign z)^theta
Series binomial_pow(double theta, int sign, std::size_t order);

std::complex<double> eval(const Series& a, std::complex<double> z);

} // namespace series

} // namespace compop
