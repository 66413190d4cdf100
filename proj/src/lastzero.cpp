#include "zerocross/lastzero.hpp"

#include <cmath>
#include <stdexcept>

#include "zerocross/specfun.hpp"

namespace zerocross::lastzero {

namespace {

void check_a_in_support(const DriftClock& clock, double a, bool allow_t) {
  validate(clock, "lastzero");
  if (!(a > 0.0) || a > clock.t || (!allow_t && a == clock.t)) {
    throw std::domain_error("lastzero: a outside the support (0, t)");
  }
}

// Upper integration limit for int_0^Y exp(-k y^2) h(y) dy with |h| <= 1:
// beyond y_cut the integrand is below 1e-18, so the discarded tail is
// bounded by (pi/2) * 1e-18, well under every budget in use.
double cut_y(double k, double y_upper) {
  if (k <= 0.0) return y_upper;
  return std::min(y_upper, std::sqrt(42.0 / k) + 1.0);
}

}  // namespace

double last_zero_survival(const DriftClock& clock, double a,
                          const QuadratureBudget& budget) {
  check_a_in_support(clock, a, /*allow_t=*/true);
  if (a == clock.t) return 0.0;
  const double big_y = std::sqrt((clock.t - a) / a);
  const double k = 0.5 * clock.mu * clock.mu * a;
  const double upper = cut_y(k, big_y);
  const double integral = quad::integrate_adaptive(
      [k](double y) { return std::exp(-k * (1.0 + y * y)) / (1.0 + y * y); },
      0.0, upper, budget);
  return (2.0 / kPi) * integral;
}

double last_zero_cdf(const DriftClock& clock, double a, CdfForm form,
                     const QuadratureBudget& budget) {
  check_a_in_support(clock, a, /*allow_t=*/true);
  if (a == clock.t) return 1.0;
  const double mu2 = clock.mu * clock.mu;
  switch (form) {
    case CdfForm::YIntegral:
      return 1.0 - last_zero_survival(clock, a, budget);
    case CdfForm::SIntegral: {
      // 1 - (1/pi) int_0^{t-a} sqrt(a/s) e^{-mu^2 (a+s)/2} / (a+s) ds
      const double sqa = std::sqrt(a);
      const double integral = quad::integrate_left_sqrt_singular(
          [=](double s) {
            return sqa * std::exp(-0.5 * mu2 * (a + s)) / (a + s);
          },
          0.0, clock.t - a, budget);
      return 1.0 - integral / kPi;
    }
    case CdfForm::Angular: {
      // 1 - (2/pi) e^{-mu^2 a/2} int_0^{arctan sqrt((t-a)/a)} e^{-mu^2 a tan^2(th)/2} dth
      const double k = 0.5 * mu2 * a;
      const double theta_max = std::atan(std::sqrt((clock.t - a) / a));
      const double integral = quad::integrate_adaptive(
          [k](double th) {
            const double u = std::tan(th);
            return std::exp(-k * u * u);
          },
          0.0, theta_max, budget);
      return 1.0 - (2.0 / kPi) * std::exp(-k) * integral;
    }
  }
  throw std::logic_error("lastzero: unknown cdf form");
}

double last_zero_pdf(const DriftClock& clock, double a, PdfForm form,
                     const QuadratureBudget& budget) {
  check_a_in_support(clock, a, /*allow_t=*/false);
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  const double arcsine_term =
      std::exp(-0.5 * mu2 * t) / (kPi * std::sqrt(a * (t - a)));
  if (mu2 == 0.0) return arcsine_term;
  switch (form) {
    case PdfForm::YIntegral: {
      const double k = 0.5 * mu2 * a;
      const double big_y = std::sqrt((t - a) / a);
      const double upper = cut_y(k, big_y);
      const double integral = quad::integrate_adaptive(
          [k](double y) { return std::exp(-k * (1.0 + y * y)); }, 0.0, upper,
          budget);
      return arcsine_term + (mu2 / kPi) * integral;
    }
    case PdfForm::SIntegral: {
      // (mu^2 / 2pi) int_a^t e^{-mu^2 y/2} / sqrt(a (y - a)) dy
      const double integral = quad::integrate_left_sqrt_singular(
          [mu2](double y) { return std::exp(-0.5 * mu2 * y); }, a, t, budget);
      return arcsine_term + mu2 * integral / (2.0 * kPi * std::sqrt(a));
    }
    case PdfForm::ErfForm: {
      // erf antiderivative of the s-integral: exact, used by compositions.
      const double amu = std::abs(clock.mu);
      return arcsine_term + amu * std::exp(-0.5 * mu2 * a) *
                                specfun::erf(amu * std::sqrt(0.5 * (t - a))) /
                                std::sqrt(2.0 * kPi * a);
    }
  }
  throw std::logic_error("lastzero: unknown pdf form");
}

double last_zero_moment(const DriftClock& clock, int m) {
  validate(clock, "lastzero");
  if (m < 1) throw std::domain_error("lastzero: moment order must be >= 1");
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  if (mu2 == 0.0) {
    // Removable singularity: the integral is t^m / m exactly.
    return specfun::central_binomial_weight(m) * std::pow(t, m);
  }
  const double x = 0.5 * mu2 * t;
  if (m == 1) return -std::expm1(-x) / mu2;
  // E T^m = (2m-1)!! mu^{-2m} P(m, mu^2 t / 2); log space for robustness.
  double log_dfact = 0.0;
  for (int j = 1; j <= m; ++j) log_dfact += std::log(2.0 * j - 1.0);
  const double q = specfun::gamma_lower_regularized(m, x);
  return std::exp(log_dfact - m * std::log(mu2) + std::log(q));
}

double last_zero_mgf(const DriftClock& clock, double gamma,
                     const QuadratureBudget& budget) {
  validate(clock, "lastzero");
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  double value = std::exp(-0.5 * mu2 * t) * specfun::kummer_half_one(gamma * t);
  if (mu2 != 0.0) {
    value += 0.5 * mu2 *
             quad::integrate_adaptive(
                 [=](double a) {
                   return std::exp(-0.5 * mu2 * a) *
                          specfun::kummer_half_one(gamma * a);
                 },
                 0.0, t, budget);
  }
  return value;
}

double last_zero_cdf_infinite_horizon(double mu, double a) {
  if (mu == 0.0) {
    throw std::domain_error(
        "lastzero: no infinite-horizon limit law for mu = 0");
  }
  if (!(a > 0.0)) throw std::domain_error("lastzero: a must be positive");
  return specfun::erf(std::abs(mu) * std::sqrt(0.5 * a));
}

SmallMuApprox last_zero_small_mu(const DriftClock& clock, double a) {
  check_a_in_support(clock, a, /*allow_t=*/false);
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  SmallMuApprox out;
  out.pdf = (1.0 + 0.5 * mu2 * (t - 2.0 * a)) /
            (kPi * std::sqrt(a * (t - a)));
  // First-order CDF term (mu^2/pi) sqrt(a(t-a)): the integral of the pdf
  // expansion above, using int_0^a (t-2s)/sqrt(s(t-s)) ds = 2 sqrt(a(t-a)).
  out.cdf = (2.0 / kPi) * std::asin(std::sqrt(a / t)) +
            mu2 / kPi * std::sqrt(a * (t - a));
  return out;
}

MixtureWeight mixture_weight(const DriftClock& clock, double w) {
  check_a_in_support(clock, w, /*allow_t=*/true);
  const double mu2 = clock.mu * clock.mu;
  MixtureWeight out;
  out.density = 0.5 * mu2 * std::exp(-0.5 * mu2 * w);
  out.atom_at_t = std::exp(-0.5 * mu2 * clock.t);
  return out;
}

}  // namespace zerocross::lastzero
