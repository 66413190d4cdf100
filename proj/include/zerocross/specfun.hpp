#pragma once

namespace zerocross::specfun {

/// Error function (2/sqrt(pi)) * int_0^x exp(-w^2) dw. Odd, |result| <= 1.
double erf(double x);

/// Complement 1 - erf(x), accurate for large x.
double erfc(double x);

/// Standard normal CDF.
double gauss_cdf(double x);

/// log of the standard normal CDF, stable far into the left tail.
double log_gauss_cdf(double x);

/// Standard normal density.
double gauss_pdf(double x);

/// Confluent hypergeometric 1F1(1/2; 1; x) = sum_m Gamma(m+1/2) x^m / (sqrt(pi) m!^2).
/// Strictly positive, increasing. Throws std::overflow_error when exp(x)
/// would overflow (|x| guard ~ 690).
double kummer_half_one(double x);

/// C(2m, m) / 2^(2m), computed as an exact iterative product.
double central_binomial_weight(int m);

/// Regularized lower incomplete gamma P(m, x) = gamma(m, x)/Gamma(m) for
/// integer m >= 1, i.e. the Poisson tail P(Pois(x) >= m). Stable for small x.
double gamma_lower_regularized(int m, double x);

}  // namespace zerocross::specfun
