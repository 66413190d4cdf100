#include "zerocross/specfun.hpp"

#include <cmath>
#include <stdexcept>

namespace zerocross::specfun {

namespace {
constexpr double kSqrt2 = 1.41421356237309504880168872420969808;
constexpr double kLog2Pi = 1.83787706640934548356065947281123527;
// exp() overflows just above 709; keep a margin for downstream products.
constexpr double kKummerOverflowGuard = 690.0;
}  // namespace

double erf(double x) {
  if (std::isnan(x)) throw std::domain_error("specfun: erf of NaN");
  return std::erf(x);
}

double erfc(double x) {
  if (std::isnan(x)) throw std::domain_error("specfun: erfc of NaN");
  return std::erfc(x);
}

double gauss_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double gauss_pdf(double x) { return std::exp(-0.5 * x * x - 0.5 * kLog2Pi); }

double log_gauss_cdf(double x) {
  if (x > -30.0) return std::log(gauss_cdf(x));
  // Asymptotic tail: Phi(x) ~ phi(x)/(-x) (1 - 1/x^2 + 3/x^4 - ...).
  const double z = -x;
  return -0.5 * z * z - std::log(z) - 0.5 * kLog2Pi +
         std::log1p(-1.0 / (z * z) + 3.0 / (z * z * z * z));
}

namespace {

// Direct series for x >= 0: all terms positive, term ratio
// (m + 1/2) x / (m + 1)^2.
double kummer_series_nonneg(double x) {
  double term = 1.0;
  double sum = 1.0;
  for (int m = 0; m < 100000; ++m) {
    term *= (m + 0.5) * x / ((m + 1.0) * (m + 1.0));
    sum += term;
    if (term < 1e-16 * sum && m > x) return sum;
  }
  return sum;
}

}  // namespace

double kummer_half_one(double x) {
  if (!std::isfinite(x)) throw std::domain_error("specfun: kummer_half_one of non-finite x");
  if (std::abs(x) > kKummerOverflowGuard) {
    throw std::overflow_error("specfun: kummer_half_one argument beyond overflow guard");
  }
  if (x >= 0.0) return kummer_series_nonneg(x);
  // Negative arguments through the Kummer transformation
  // 1F1(1/2;1;x) = e^x 1F1(1/2;1;-x): the alternating series cancels
  // catastrophically, the transformed one does not.
  return std::exp(x) * kummer_series_nonneg(-x);
}

double central_binomial_weight(int m) {
  if (m < 0) throw std::domain_error("specfun: central_binomial_weight needs m >= 0");
  double w = 1.0;
  for (int j = 1; j <= m; ++j) {
    w *= (2.0 * j - 1.0) / (2.0 * j);
  }
  return w;
}

double gamma_lower_regularized(int m, double x) {
  if (m < 1) throw std::domain_error("specfun: gamma_lower_regularized needs m >= 1");
  if (x < 0.0) throw std::domain_error("specfun: gamma_lower_regularized needs x >= 0");
  if (x == 0.0) return 0.0;
  if (x < m + 10.0) {
    // Poisson tail sum_{k>=m} e^-x x^k / k!, first term through logs.
    double term = std::exp(m * std::log(x) - x - std::lgamma(m + 1.0));
    double sum = term;
    for (int k = m; k < m + 10000; ++k) {
      term *= x / (k + 1.0);
      sum += term;
      if (term < 1e-18 * sum) break;
    }
    return sum;
  }
  // Large x: the complement head sum is short and the result is near 1.
  double term = std::exp(-x);
  double head = term;
  for (int k = 1; k < m; ++k) {
    term *= x / k;
    head += term;
  }
  return 1.0 - head;
}

}  // namespace zerocross::specfun
