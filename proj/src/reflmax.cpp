#include "zerocross/reflmax.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zerocross/quad.hpp"
#include "zerocross/specfun.hpp"

namespace zerocross::reflmax {

namespace {

void check_box(const DriftClock& clock, const BarrierBox& box) {
  validate(clock, "reflmax");
  if (!(box.alpha < 0.0) || !(box.beta > 0.0)) {
    throw std::domain_error("reflmax: barriers must satisfy alpha < 0 < beta");
  }
}

// Phi(hi) - Phi(lo), reflected into the accurate tail when both args are
// deep in the right tail.
double normal_prob_interval(double lo, double hi) {
  if (lo + hi > 0.0) {
    return specfun::gauss_cdf(-lo) - specfun::gauss_cdf(-hi);
  }
  return specfun::gauss_cdf(hi) - specfun::gauss_cdf(lo);
}

// charge * prob without overflowing on the intermediate exponential.
double charged_prob(double log_charge, double prob) {
  if (prob <= 0.0) return 0.0;
  if (log_charge < 600.0) return std::exp(log_charge) * prob;
  return std::exp(log_charge + std::log(prob));
}

double log_2cosh(double x) {
  const double ax = std::abs(x);
  return ax + std::log1p(std::exp(-2.0 * ax));
}

// Eigenfunction route for P(max|B^mu| < beta): the driftless absorbing
// density on (-beta, beta) tilted by e^{mu y - mu^2 t/2} and integrated in
// closed form. Converges fast exactly where the image series does not
// (beta small against sqrt(t)).
double max_abs_cdf_eigen(double mu, double t, double beta,
                         const SeriesBudget& budget) {
  const double lam = kPi * kPi * t / (8.0 * beta * beta);
  const double pref =
      std::exp(-0.5 * mu * mu * t + log_2cosh(mu * beta)) / beta;
  double sum = 0.0;
  for (int j = 0; j < budget.max_terms; ++j) {
    const int n = 2 * j + 1;
    const double k = n * kPi / (2.0 * beta);
    const double term =
        (j % 2 == 0 ? 1.0 : -1.0) * k / (mu * mu + k * k) *
        std::exp(-lam * n * n);
    sum += term;
    if (std::abs(term) <= budget.tail_tol * std::max(std::abs(sum), 1e-3)) {
      return std::clamp(pref * sum, 0.0, 1.0);
    }
  }
  throw SeriesBudgetError(
      "reflmax: eigen series did not converge within max_terms");
}

}  // namespace

double two_barrier_density(const DriftClock& clock, const BarrierBox& box,
                           double y, const SeriesBudget& budget,
                           ImageWeights weights) {
  check_box(clock, box);
  if (!(y > box.alpha) || !(y < box.beta)) {
    throw std::domain_error("reflmax: y must lie inside (alpha, beta)");
  }
  const double t = clock.t;
  const double mu = clock.mu;
  const double delta = box.beta - box.alpha;
  const double inv2t = 0.5 / t;
  const double norm = 1.0 / std::sqrt(2.0 * kPi * t);

  double sum = 0.0;
  double peak = 0.0;
  bool converged = false;
  for (int k = 0; k < budget.max_terms; ++k) {
    double biggest = 0.0;
    for (const int sgn : {+1, -1}) {
      if (k == 0 && sgn < 0) continue;
      const double shift = 2.0 * sgn * k * delta;
      const double g1 = std::exp(-(y - shift) * (y - shift) * inv2t);
      const double g2 =
          std::exp(-(y - shift - 2.0 * box.alpha) * (y - shift - 2.0 * box.alpha) * inv2t);
      double term = g1 - g2;
      if (weights == ImageWeights::AsPrinted) {
        term *= std::exp(mu * (y - shift) - 0.5 * mu * mu * t);
      }
      sum += term;
      biggest = std::max({biggest, g1, g2});
      peak = std::max(peak, biggest);
    }
    // Terms decay like exp(-2 k^2 delta^2 / t): stop once both images are
    // negligible against the partial sum (or the interior scale when the
    // sum itself cancels near a barrier).
    if (k >= 1 && biggest <= budget.tail_tol * std::max(std::abs(sum), peak)) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw SeriesBudgetError(
        "reflmax: image series did not meet the tail tolerance within max_terms");
  }
  if (weights == ImageWeights::Girsanov) {
    sum *= std::exp(mu * y - 0.5 * mu * mu * t);
  }
  return norm * sum;
}

double two_barrier_mass(const DriftClock& clock, const BarrierBox& box,
                        const SeriesBudget& budget, ImageWeights weights) {
  check_box(clock, box);
  const double t = clock.t;
  const double mu = clock.mu;
  const double sqt = std::sqrt(t);
  const double delta = box.beta - box.alpha;

  double sum = 0.0;
  double peak = 0.0;
  for (int k = 0; k < budget.max_terms; ++k) {
    double biggest = 0.0;
    for (const int sgn : {+1, -1}) {
      if (k == 0 && sgn < 0) continue;
      const double x1 = 2.0 * sgn * k * delta;
      const double x2 = x1 + 2.0 * box.alpha;
      const double p1 = normal_prob_interval((box.alpha - x1 - mu * t) / sqt,
                                             (box.beta - x1 - mu * t) / sqt);
      const double p2 = normal_prob_interval((box.alpha - x2 - mu * t) / sqt,
                                             (box.beta - x2 - mu * t) / sqt);
      double term;
      if (weights == ImageWeights::Girsanov) {
        term = charged_prob(mu * x1, p1) - charged_prob(mu * x2, p2);
      } else {
        term = p1 - charged_prob(2.0 * mu * box.alpha, p2);
      }
      sum += term;
      biggest = std::max(biggest, std::abs(term));
    }
    peak = std::max(peak, biggest);
    if (k >= 1 && biggest <= budget.tail_tol * std::max(std::abs(sum), peak)) {
      return std::clamp(sum, 0.0, 1.0);
    }
  }
  throw SeriesBudgetError(
      "reflmax: image series did not meet the tail tolerance within max_terms");
}

double max_abs_cdf(const DriftClock& clock, double beta,
                   const SeriesBudget& budget, ImageWeights weights) {
  validate(clock, "reflmax");
  if (!(beta > 0.0)) throw std::domain_error("reflmax: beta must be positive");
  const double t = clock.t;
  const double mu = clock.mu;
  if (weights == ImageWeights::Girsanov && beta < 0.8 * std::sqrt(t)) {
    return max_abs_cdf_eigen(mu, t, beta, budget);
  }
  const double sqt = std::sqrt(t);
  double sum = 0.0;
  double peak = 0.0;
  for (int k = 0; k < budget.max_terms; ++k) {
    double biggest = 0.0;
    for (const int sgn : {+1, -1}) {
      if (k == 0 && sgn < 0) continue;
      const int r = sgn * k;
      const double prob =
          normal_prob_interval((-beta - 2.0 * beta * r - mu * t) / sqt,
                               (beta - 2.0 * beta * r - mu * t) / sqt);
      double term;
      if (weights == ImageWeights::Girsanov) {
        term = charged_prob(2.0 * mu * beta * r, prob);
      } else {
        term = (r % 2 == 0) ? prob : charged_prob(-2.0 * mu * beta, prob);
      }
      if (k % 2 == 1) term = -term;
      sum += term;
      biggest = std::max(biggest, std::abs(term));
    }
    peak = std::max(peak, biggest);
    if (k >= 1 && biggest <= budget.tail_tol * std::max(std::abs(sum), peak)) {
      return std::clamp(sum, 0.0, 1.0);
    }
  }
  throw SeriesBudgetError(
      "reflmax: image series did not meet the tail tolerance within max_terms");
}

double max_onesided_cdf(const DriftClock& clock, double beta, double y0) {
  validate(clock, "reflmax");
  if (!(y0 < beta)) throw std::domain_error("reflmax: requires y0 < beta");
  const double t = clock.t;
  const double mu = clock.mu;
  const double sqt = std::sqrt(t);
  const double d = beta - y0;
  const double direct = specfun::gauss_cdf((d - mu * t) / sqt);
  const double x = 2.0 * mu * d;
  double reflected;
  if (x < 600.0) {
    reflected = std::exp(x) * specfun::gauss_cdf((-d - mu * t) / sqt);
  } else {
    reflected = std::exp(x + specfun::log_gauss_cdf((-d - mu * t) / sqt));
  }
  return std::clamp(direct - reflected, 0.0, 1.0);
}

double max_onesided_cdf_fpt(const DriftClock& clock, double beta, double y0) {
  validate(clock, "reflmax");
  if (!(y0 < beta)) throw std::domain_error("reflmax: requires y0 < beta");
  const double t = clock.t;
  const double mu = clock.mu;
  const double d = beta - y0;
  const double passage = quad::integrate_adaptive(
      [=](double s) {
        return d * std::exp(-(d - mu * s) * (d - mu * s) / (2.0 * s)) /
               std::sqrt(2.0 * kPi * s * s * s);
      },
      0.0, t);
  return std::clamp(1.0 - passage, 0.0, 1.0);
}

double bridge_max_abs_cdf(double t, double beta, const SeriesBudget& budget) {
  if (!(t > 0.0)) throw std::domain_error("reflmax: t must be positive");
  if (!(beta > 0.0)) throw std::domain_error("reflmax: beta must be positive");
  const double x = 2.0 * beta * beta / t;
  double sum = 1.0;
  for (int r = 1; r <= budget.max_terms; ++r) {
    const double term = 2.0 * (r % 2 == 0 ? 1.0 : -1.0) *
                        std::exp(-x * static_cast<double>(r) * r);
    sum += term;
    if (std::abs(term) <= budget.tail_tol) return std::clamp(sum, 0.0, 1.0);
  }
  throw SeriesBudgetError(
      "reflmax: Kolmogorov-Smirnov series did not converge within max_terms");
}

double bridge_max_abs_cdf_ratio(const DriftClock& clock, double beta,
                                const SeriesBudget& budget) {
  validate(clock, "reflmax");
  if (!(beta > 0.0)) throw std::domain_error("reflmax: beta must be positive");
  const double density =
      two_barrier_density(clock, BarrierBox{-beta, beta}, 0.0, budget);
  const double free_density = std::exp(-0.5 * clock.mu * clock.mu * clock.t) /
                              std::sqrt(2.0 * kPi * clock.t);
  return std::clamp(density / free_density, 0.0, 1.0);
}

}  // namespace zerocross::reflmax
