#include "zerocross/jointlaw.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "zerocross/specfun.hpp"

namespace zerocross::jointlaw {

namespace {

void check_wedge(const DriftClock& clock, double a, double b) {
  validate(clock, "jointlaw");
  if (!(a > 0.0) || !(a < clock.t) || !(b > clock.t)) {
    throw std::domain_error("jointlaw: requires 0 < a < t < b");
  }
}

// The conditional laws given {T_{0,t} = a} share the bracket denominator
//   D = 1 + N erf(|mu| sqrt((t-a)/2)),  N = sqrt(pi/2) |mu| sqrt(t-a) e^{mu^2 (t-a)/2},
// and the no-return mass is N / D. log(N) is what can overflow.
double log_never_numerator(double mu, double t, double a) {
  const double amu = std::abs(mu);
  const double d = t - a;
  return std::log(std::sqrt(0.5 * kPi) * amu * std::sqrt(d)) +
         0.5 * mu * mu * d;
}

double erf_factor(double mu, double t, double a) {
  return specfun::erf(std::abs(mu) * std::sqrt(0.5 * (t - a)));
}

}  // namespace

double joint_survival(const DriftClock& clock, double a, double b,
                      const QuadratureBudget& budget) {
  validate(clock, "jointlaw");
  if (!(a > 0.0) || !(a < clock.t) || !(b >= clock.t)) {
    throw std::domain_error("jointlaw: requires 0 < a < t <= b");
  }
  const double mu2 = clock.mu * clock.mu;
  if (std::isinf(b)) {
    // P(no zero in [a, infinity)) = erf(|mu| sqrt(a/2)).
    return specfun::erf(std::abs(clock.mu) * std::sqrt(0.5 * a));
  }
  // 1 - (2/pi) int_0^{sqrt((b-a)/a)} e^{-mu^2 a (1+y^2)/2} / (1+y^2) dy,
  // i.e. the last-zero law on horizon b.
  const double k = 0.5 * mu2 * a;
  const double big_y = std::sqrt((b - a) / a);
  double upper = big_y;
  if (k > 0.0) upper = std::min(upper, std::sqrt(42.0 / k) + 1.0);
  const double integral = quad::integrate_adaptive(
      [k](double y) { return std::exp(-k * (1.0 + y * y)) / (1.0 + y * y); },
      0.0, upper, budget);
  return 1.0 - (2.0 / kPi) * integral;
}

double joint_pdf(const DriftClock& clock, double a, double b) {
  check_wedge(clock, a, b);
  const double mu2 = clock.mu * clock.mu;
  const double d = b - a;
  return std::exp(-0.5 * mu2 * b) / (2.0 * kPi * std::sqrt(a * d * d * d));
}

double joint_return_tail(const DriftClock& clock, double a, double b_lo) {
  validate(clock, "jointlaw");
  if (!(a > 0.0) || !(b_lo > a)) {
    throw std::domain_error("jointlaw: tail requires 0 < a < b_lo");
  }
  // int_{b_lo}^inf e^{-mu^2 b/2} / (2 pi sqrt(a (b-a)^3)) db with z = b - a:
  // int_z0^inf z^{-3/2} e^{-cz} dz = 2 e^{-c z0}/sqrt(z0) - 2 sqrt(pi c) erfc(sqrt(c z0)).
  const double c = 0.5 * clock.mu * clock.mu;
  const double z0 = b_lo - a;
  const double inner = 2.0 * std::exp(-c * z0) / std::sqrt(z0) -
                       2.0 * std::sqrt(kPi * c) *
                           specfun::erfc(std::sqrt(c * z0));
  return std::exp(-c * a) * inner / (2.0 * kPi * std::sqrt(a));
}

double return_time_pdf(const DriftClock& clock, double b) {
  validate(clock, "jointlaw");
  if (!(b > clock.t)) throw std::domain_error("jointlaw: requires b > t");
  const double mu2 = clock.mu * clock.mu;
  return std::exp(-0.5 * mu2 * b) * std::sqrt(clock.t / (b - clock.t)) /
         (kPi * b);
}

double p_never_return(const DriftClock& clock) {
  validate(clock, "jointlaw");
  return specfun::erf(std::abs(clock.mu) * std::sqrt(0.5 * clock.t));
}

double cond_last_given_return_pdf(double t, double a, double b) {
  if (!(t > 0.0) || !(a > 0.0) || !(a < t) || !(b > t)) {
    throw std::domain_error("jointlaw: requires 0 < a < t < b");
  }
  const double d = b - a;
  return 0.5 * b / std::sqrt(a * t) * std::sqrt((b - t) / (d * d * d));
}

double cond_return_given_last_pdf(const DriftClock& clock, double a,
                                  double b) {
  check_wedge(clock, a, b);
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  const double d = b - a;
  const double base = 0.5 * std::sqrt((t - a) / (d * d * d));
  if (clock.mu == 0.0) return base;
  const double log_n = log_never_numerator(clock.mu, t, a);
  const double ef = erf_factor(clock.mu, t, a);
  if (log_n < 650.0) {
    const double n = std::exp(log_n);
    return base * std::exp(-0.5 * mu2 * (b - t)) / (1.0 + n * ef);
  }
  // N overflows a double; 1 + N erf == N erf to machine precision.
  return std::exp(std::log(base) - 0.5 * mu2 * (b - t) - log_n -
                  std::log(ef));
}

double p_never_return_given_last(const DriftClock& clock, double a) {
  validate(clock, "jointlaw");
  if (!(a > 0.0) || !(a < clock.t)) {
    throw std::domain_error("jointlaw: requires 0 < a < t");
  }
  if (clock.mu == 0.0) return 0.0;
  const double log_n = log_never_numerator(clock.mu, clock.t, a);
  const double ef = erf_factor(clock.mu, clock.t, a);
  if (log_n < 650.0) {
    const double n = std::exp(log_n);
    return n / (1.0 + n * ef);
  }
  return 1.0 / (std::exp(-log_n) + ef);
}

double last_zero_no_return_density(double mu, double a) {
  if (!(a > 0.0)) throw std::domain_error("jointlaw: requires a > 0");
  return std::abs(mu) * std::exp(-0.5 * mu * mu * a) /
         std::sqrt(2.0 * kPi * a);
}

double straddle_length_pdf(const DriftClock& clock, double w) {
  validate(clock, "jointlaw");
  if (!(w > 0.0)) throw std::domain_error("jointlaw: requires w > 0");
  const double mu2 = clock.mu * clock.mu;
  const double t = clock.t;
  const double lo = std::max(0.0, t - w);
  // int_lo^t e^{-mu^2 a/2} / sqrt(a) da in closed form.
  double inner;
  if (clock.mu == 0.0) {
    inner = 2.0 * (std::sqrt(t) - std::sqrt(lo));
  } else {
    const double amu = std::abs(clock.mu);
    inner = std::sqrt(2.0 * kPi) / amu *
            (specfun::erf(amu * std::sqrt(0.5 * t)) -
             specfun::erf(amu * std::sqrt(0.5 * lo)));
  }
  return std::exp(-0.5 * mu2 * w) / (2.0 * kPi * std::sqrt(w * w * w)) * inner;
}

}  // namespace zerocross::jointlaw
