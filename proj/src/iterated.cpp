#include "zerocross/iterated.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "zerocross/lastzero.hpp"
#include "zerocross/specfun.hpp"

namespace zerocross::iterated {

namespace {

// Scale past which the inner-max law has saturated: 1 - F(w*) < 1e-15-ish,
// so the survival integrand beyond contributes less than 1e-13 in total.
double saturation_scale(double inner_mu, double t, HorizonKind kind) {
  const double spread = 8.6 * std::sqrt(t);
  if (kind == HorizonKind::AbsMax) return std::abs(inner_mu) * t + spread;
  return std::max(0.0, inner_mu * t) + spread;
}

double iter_cdf_impl(double mu1, double inner_mu, double t, double a,
                     HorizonKind kind, const quad::QuadratureBudget& qbudget,
                     const SeriesBudget& sbudget) {
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  if (!(a > 0.0)) throw std::domain_error("iterated: a must be positive");
  const double w_star = saturation_scale(inner_mu, t, kind);
  if (a >= w_star) return 1.0;

  const DriftClock inner{inner_mu, t};
  const auto inner_cdf = [&](double w) {
    if (kind == HorizonKind::AbsMax) {
      return reflmax::max_abs_cdf(inner, w, sbudget);
    }
    return reflmax::max_onesided_cdf(inner, w, 0.0);
  };

  // Survival form of the law: with w = a(1 + y^2),
  //   P(T < a) = 1 - (2/pi) int_0^inf e^{-mu^2 a (1+y^2)/2}
  //                           P(horizon >= a(1+y^2)) / (1+y^2) dy,
  // algebraically identical to the erf-plus-integral composition but exact
  // to truncate: the integrand beyond y* is below 1 - F(w*).
  const double k = 0.5 * mu1 * mu1 * a;
  double upper = std::sqrt(w_star / a - 1.0);
  if (k > 0.0) upper = std::min(upper, std::sqrt(42.0 / k) + 1.0);
  const double integral = quad::integrate_adaptive(
      [&](double y) {
        const double w = a * (1.0 + y * y);
        return std::exp(-k * (1.0 + y * y)) * (1.0 - inner_cdf(w)) /
               (1.0 + y * y);
      },
      0.0, upper, qbudget);
  return std::clamp(1.0 - (2.0 / kPi) * integral, 0.0, 1.0);
}

double arcsine_pdf(double a, double t) {
  return 1.0 / (kPi * std::sqrt(a * (t - a)));
}

// Inner evaluations nested inside another adaptive pass must be quieter
// than the outer tolerance, or their noise stalls the outer error estimate.
quad::QuadratureBudget inner_budget(const quad::QuadratureBudget& b) {
  quad::QuadratureBudget inner = b;
  inner.abs_tol = std::max(b.abs_tol * 1e-2, 1e-14);
  inner.rel_tol = std::max(b.rel_tol * 1e-2, 1e-14);
  return inner;
}

// Driftless two-fold density, the inner kernel of the n = 3 case.
double twofold_pdf(double a, double t, const quad::QuadratureBudget& budget) {
  return quad::integrate_both_sqrt_singular(
      [&](double w) { return 1.0 / (kPi * kPi * std::sqrt(a * w)); }, a, t,
      budget);
}

}  // namespace

void validate(const NestedSpec& spec) {
  if (spec.depth < 1) throw std::domain_error("iterated: depth must be >= 1");
  if (static_cast<int>(spec.drifts.size()) != spec.depth) {
    throw std::domain_error("iterated: need exactly one drift per motion");
  }
  if (!(spec.t > 0.0)) throw std::domain_error("iterated: t must be positive");
}

double iterated_bm_pdf(double mu1, double mu2, double t, double x,
                       const QuadratureBudget& budget) {
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  // Inner factor bounds the tail: beyond S the Gaussian weights of |B_2(t)|
  // contribute less than 2 Phi(-12) / sqrt(2 pi S) < 1e-32.
  const double cutoff = std::abs(mu2) * t + 12.0 * std::sqrt(t);
  const double inv2t = 0.5 / t;
  const double norm_t = 1.0 / std::sqrt(2.0 * kPi * t);
  // sqrt(s) * integrand is smooth, so the left-singular substitution covers
  // both the x = 0 case (true 1/sqrt(s) singularity) and x != 0.
  return quad::integrate_left_sqrt_singular(
      [=](double s) {
        const double outer = std::exp(-(x - mu1 * s) * (x - mu1 * s) / (2.0 * s)) /
                             std::sqrt(2.0 * kPi);
        const double inner =
            std::exp(-(s - mu2 * t) * (s - mu2 * t) * inv2t) +
            std::exp(-(s + mu2 * t) * (s + mu2 * t) * inv2t);
        return outer * inner * norm_t;
      },
      0.0, cutoff, budget);
}

double iter_last_zero_cdf(double mu, double t, double a,
                          const QuadratureBudget& qbudget,
                          const SeriesBudget& sbudget) {
  return iter_cdf_impl(mu, 0.0, t, a, HorizonKind::AbsMax, qbudget, sbudget);
}

double iter_last_zero_cdf_drifted_inner(double mu1, double mu2, double t,
                                        double a, HorizonKind kind,
                                        const QuadratureBudget& qbudget,
                                        const SeriesBudget& sbudget) {
  return iter_cdf_impl(mu1, mu2, t, a, kind, qbudget, sbudget);
}

double nested_last_zero_cdf(double mu1, double mu2, double t, double a,
                            const QuadratureBudget& budget) {
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  if (!(a > 0.0) || a > t) {
    throw std::domain_error("iterated: requires 0 < a <= t");
  }
  if (a == t) return 1.0;
  const DriftClock outer_clock{mu2, t};
  const double mu1sq = mu1 * mu1;
  const auto inner = inner_budget(budget);
  const auto g = [&](double w) {
    return std::exp(-0.5 * mu1sq * w) *
           lastzero::last_zero_survival(outer_clock, w, inner) / w;
  };
  // 1 - (sqrt(a)/pi) int_a^t e^{-mu1^2 w/2} P(T2 >= w) / (w sqrt(w - a)) dw;
  // the survival factor has a sqrt(t - w) cusp, so the upper half is
  // integrated in the variable v = sqrt(t - w).
  const double mid = 0.5 * (a + t);
  const double left = quad::integrate_left_sqrt_singular(g, a, mid, budget);
  const double right = 2.0 * quad::integrate_adaptive(
                                 [&](double v) {
                                   const double w = t - v * v;
                                   return v * g(w) / std::sqrt(w - a);
                                 },
                                 0.0, std::sqrt(t - mid), budget);
  const double integral = left + right;
  return std::clamp(1.0 - std::sqrt(a) / kPi * integral, 0.0, 1.0);
}

double nested_last_zero_pdf(double mu1, double mu2, double t, double a,
                            const QuadratureBudget& budget) {
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  if (!(a > 0.0) || !(a < t)) {
    throw std::domain_error("iterated: requires 0 < a < t");
  }
  // int_a^t f_{T(mu1, w)}(a) f_{T(mu2, t)}(w) dw, inverse-sqrt singular at
  // both ends; the erf form of the densities keeps the inner evaluations
  // exact and cheap.
  return quad::integrate_both_sqrt_singular(
      [&](double w) {
        const double pdf1 = lastzero::last_zero_pdf(
            DriftClock{mu1, w}, a, lastzero::PdfForm::ErfForm);
        const double pdf2 = lastzero::last_zero_pdf(
            DriftClock{mu2, t}, w, lastzero::PdfForm::ErfForm);
        return pdf1 * pdf2 * std::sqrt((w - a) * (t - w));
      },
      a, t, budget);
}

double nfold_last_zero_pdf(int n, double t, double a,
                           const QuadratureBudget& budget) {
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  if (!(a > 0.0) || !(a < t)) {
    throw std::domain_error("iterated: requires 0 < a < t");
  }
  switch (n) {
    case 1:
      return arcsine_pdf(a, t);
    case 2:
      return twofold_pdf(a, t, budget);
    case 3: {
      const auto inner = inner_budget(budget);
      return quad::integrate_left_sqrt_singular(
                 [&](double w) { return twofold_pdf(w, t, inner); }, a, t,
                 budget) /
             (kPi * std::sqrt(a));
    }
    default:
      throw std::domain_error(
          "iterated: analytic n-fold density is limited to n <= 3; use the "
          "Monte Carlo route beyond that");
  }
}

double nfold_moment(int n, int m, double t) {
  if (n < 1 || m < 1) throw std::domain_error("iterated: requires n, m >= 1");
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  return std::pow(specfun::central_binomial_weight(m), n) * std::pow(t, m);
}

double nfold_mgf(int n, double t, double alpha) {
  if (n < 1) throw std::domain_error("iterated: requires n >= 1");
  if (!(t > 0.0)) throw std::domain_error("iterated: t must be positive");
  // sum_m (alpha t / 4^n)^m (2m)!^n / (m!)^{2n+1}: the 4^{-mn} factor is
  // forced by the n-fold moments (C(2m,m)/4^m)^n t^m.
  const double x = alpha * t / std::pow(4.0, n);
  double term = 1.0;
  double sum = 1.0;
  for (int m = 0; m < 500; ++m) {
    double ratio = x / std::pow(m + 1.0, 2.0 * n + 1.0);
    ratio *= std::pow((2.0 * m + 1.0) * (2.0 * m + 2.0), n);
    term *= ratio;
    sum += term;
    if (!std::isfinite(sum)) break;
    if (std::abs(term) <= 1e-14 * std::abs(sum)) return sum;
  }
  throw SeriesBudgetError(
      "iterated: n-fold MGF series failed the relative-term criterion within "
      "500 terms");
}

}  // namespace zerocross::iterated
