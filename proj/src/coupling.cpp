#include "wgscatter/coupling.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace wgscatter {
namespace {

using constants::pi;

constexpr double kQuadratureAbsTolerance = 1e-12;

bool near_square(double chi_value, int m) {
  const double target = static_cast<double>(m) * m;
  return std::abs(chi_value * chi_value - target) <
         kRemovableSingularityTolerance * std::max(1.0, target);
}

void check_modes(int n, int n2) {
  if (n < 1 || n2 < 1)
    throw ConfigError("coupling mode indices must be >= 1");
}

} // namespace

Complex coupling_element_quadrature(int n, int n2, CouplingSign sign,
                                    double chi_value) {
  check_modes(n, n2);
  namespace quad = boost::math::quadrature;
  const double s = sign_value(sign);
  const double theta = s * pi * chi_value;
  const double fn = n * pi;
  const double fn2 = n2 * pi;

  double err_re = 0.0;
  double err_im = 0.0;
  const double re = quad::gauss_kronrod<double, 61>::integrate(
      [&](double u) {
        return 2.0 * std::sin(fn * u) * std::sin(fn2 * u) * std::cos(theta * u);
      },
      0.0, 1.0, 15, 1e-13, &err_re);
  const double im = quad::gauss_kronrod<double, 61>::integrate(
      [&](double u) {
        return 2.0 * std::sin(fn * u) * std::sin(fn2 * u) * std::sin(theta * u);
      },
      0.0, 1.0, 15, 1e-13, &err_im);
  if (err_re > kQuadratureAbsTolerance || err_im > kQuadratureAbsTolerance)
    throw NumericalError("coupling quadrature did not converge for (n=" +
                         std::to_string(n) + ", n'=" + std::to_string(n2) +
                         ", chi=" + std::to_string(chi_value) + ")");
  return {re, im};
}

Complex coupling_element_closed(int n, int n2, CouplingSign sign,
                                double chi_value) {
  check_modes(n, n2);
  const int diff = std::abs(n2 - n);
  const int sum = n + n2;
  if (near_square(chi_value, diff) || near_square(chi_value, sum))
    return coupling_element_quadrature(n, n2, sign, chi_value);

  const double s = sign_value(sign);
  const double x = pi * chi_value;

  // 1 - (-1)^{n+n'} exp(i s pi chi), with the phase reduced about the nearest
  // integer m so that the factor keeps full relative accuracy close to zero.
  const double m = std::nearbyint(chi_value);
  const double delta = chi_value - m;
  const bool same_parity = ((sum + static_cast<long long>(m)) % 2) == 0;
  const double c = std::cos(pi * delta);
  const double sn = s * std::sin(pi * delta);
  Complex bracket;
  if (same_parity) {
    const double half = std::sin(0.5 * pi * delta);
    bracket = {2.0 * half * half, -sn};
  } else {
    bracket = {1.0 + c, sn};
  }

  const double d_diff = pi * pi * (chi_value - diff) * (chi_value + diff);
  const double d_sum = pi * pi * (chi_value - sum) * (chi_value + sum);
  // Same denominator combination for both signs, so (C+)* = C-.
  const double factor = 1.0 / d_diff - 1.0 / d_sum;
  return Complex(0.0, s * x) * bracket * factor;
}

Complex coupling_first_order(int n, int n2, CouplingSign sign,
                             double chi_value) {
  check_modes(n, n2);
  const double s = sign_value(sign);
  if (n == n2)
    return {1.0, s * pi * chi_value / 2.0};
  const double parity = ((n + n2) % 2 == 0) ? 0.0 : 2.0;
  const double d = static_cast<double>(n) * n - static_cast<double>(n2) * n2;
  return {0.0, -s * 4.0 * n * n2 * parity * chi_value / (d * d * pi)};
}

CouplingMatrices coupling_matrices(int N, double chi_value) {
  if (N < 1)
    throw ConfigError("coupling matrices need N >= 1");
  CouplingMatrices m;
  m.chi = chi_value;
  m.c_plus.resize(N, N);
  m.c_minus.resize(N, N);
  for (int i = 0; i < N; ++i) {
    for (int j = i; j < N; ++j) {
      const Complex cp =
          coupling_element_closed(i + 1, j + 1, CouplingSign::plus, chi_value);
      m.c_plus(i, j) = cp;
      m.c_plus(j, i) = cp;
      m.c_minus(i, j) = std::conj(cp);
      m.c_minus(j, i) = std::conj(cp);
    }
  }
  return m;
}

} // namespace wgscatter
