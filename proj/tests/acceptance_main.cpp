// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Monte Carlo experiments run at paths 2e5, dt 1e-4, fixed seed.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "zerocross/iterated.hpp"
#include "zerocross/jointlaw.hpp"
#include "zerocross/lastzero.hpp"
#include "zerocross/mcoracle.hpp"
#include "zerocross/quad.hpp"
#include "zerocross/reflmax.hpp"
#include "zerocross/selftest.hpp"
#include "zerocross/specfun.hpp"

namespace lz = zerocross::lastzero;
namespace jl = zerocross::jointlaw;
namespace rm = zerocross::reflmax;
namespace it = zerocross::iterated;
namespace mc = zerocross::mcoracle;
namespace sf = zerocross::specfun;
namespace q = zerocross::quad;
using zerocross::DriftClock;
using zerocross::kPi;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
  if (!pass) ++g_failures;
  std::printf("%s  %2d. %-28s %s\n", pass ? "PASS" : "FAIL", index, name,
              detail.c_str());
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

mc::McConfig acceptance_cfg() {
  mc::McConfig cfg;
  cfg.paths = 200000;
  cfg.dt = 1e-4;
  cfg.seed = zerocross::kDefaultSeed;
  cfg.shards = 8;
  cfg.bridge_correction = true;
  return cfg;
}

// 1. arcsine reduction at mu = 0, 20 points per horizon, 1e-10
void criterion_1() {
  double worst = 0.0;
  for (double t : {0.5, 1.0, 4.0}) {
    for (int i = 1; i <= 20; ++i) {
      const double a = t * i / 21.0;
      const double want = 2.0 / kPi * std::asin(std::sqrt(a / t));
      worst = std::max(worst, std::abs(lz::last_zero_cdf({0.0, t}, a) - want));
    }
  }
  report(1, "arcsine-reduction", worst <= 1e-10, "max_err=" + fmt(worst));
}

// 2. the three CDF forms and two density forms agree pairwise to 1e-8
void criterion_2() {
  double worst = 0.0;
  for (double mu : {0.0, 0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 4.0}) {
      for (int i = 1; i <= 20; ++i) {
        const double a = t * i / 21.0;
        const DriftClock c{mu, t};
        const double fy = lz::last_zero_cdf(c, a, lz::CdfForm::YIntegral);
        const double fs = lz::last_zero_cdf(c, a, lz::CdfForm::SIntegral);
        const double fa = lz::last_zero_cdf(c, a, lz::CdfForm::Angular);
        const double py = lz::last_zero_pdf(c, a, lz::PdfForm::YIntegral);
        const double ps = lz::last_zero_pdf(c, a, lz::PdfForm::SIntegral);
        worst = std::max({worst, std::abs(fy - fs), std::abs(fy - fa),
                          std::abs(fs - fa), std::abs(py - ps)});
      }
    }
  }
  report(2, "form-equivalence", worst <= 1e-8, "max_err=" + fmt(worst));
}

// 3. normalizations of the marginal, nested, and iterated densities
void criterion_3() {
  double worst_marginal = 0.0;
  for (double mu : {0.0, 0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 4.0}) {
      const double mass = q::integrate_both_sqrt_singular(
          [&](double a) {
            return lz::last_zero_pdf({mu, t}, a, lz::PdfForm::ErfForm) *
                   std::sqrt(a * (t - a));
          },
          0.0, t);
      worst_marginal = std::max(worst_marginal, std::abs(mass - 1.0));
    }
  }
  // nested density: the log-edged head below eps goes through the
  // composition law exactly, the bulk through the density itself
  q::QuadratureBudget outer;
  outer.abs_tol = 1e-8;
  outer.rel_tol = 1e-8;
  const double eps = 1e-4;
  const double mu1 = 1.0, mu2 = 0.5, t = 1.0;
  const double head =
      lz::last_zero_cdf({mu2, t}, eps) +
      q::integrate_right_sqrt_singular(
          [&](double w) {
            return lz::last_zero_pdf({mu2, t}, w, lz::PdfForm::ErfForm) *
                   lz::last_zero_cdf({mu1, w}, eps) * std::sqrt(t - w);
          },
          eps, t, outer);
  const double mid = 0.5 * (eps + t);
  const double nested_mass =
      head +
      q::integrate_adaptive(
          [&](double u) {
            return 2.0 * u * it::nested_last_zero_pdf(mu1, mu2, t, u * u);
          },
          std::sqrt(eps), std::sqrt(mid), outer) +
      q::integrate_right_sqrt_singular(
          [&](double a) {
            return it::nested_last_zero_pdf(mu1, mu2, t, a) *
                   std::sqrt(t - a);
          },
          mid, t, outer);
  const double iter_mass = q::integrate_adaptive(
      [](double x) { return it::iterated_bm_pdf(1.0, 0.5, 1.0, x); }, -14.0,
      16.0);
  const bool pass = worst_marginal <= 1e-8 &&
                    std::abs(nested_mass - 1.0) <= 1e-6 &&
                    std::abs(iter_mass - 1.0) <= 1e-7;
  report(3, "normalization", pass,
         "marginal=" + fmt(worst_marginal) +
             " nested=" + fmt(std::abs(nested_mass - 1.0)) +
             " iterated=" + fmt(std::abs(iter_mass - 1.0)));
}

// 4. moments: quadrature cross-check, closed-form mean, strict shrinkage
void criterion_4() {
  double worst_quad = 0.0;
  for (int m = 1; m <= 4; ++m) {
    const DriftClock c{1.0, 1.0};
    const double by_quad = q::integrate_both_sqrt_singular(
        [&](double a) {
          return std::pow(a, m) *
                 lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm) *
                 std::sqrt(a * (1.0 - a));
        },
        0.0, 1.0);
    worst_quad =
        std::max(worst_quad, std::abs(by_quad - lz::last_zero_moment(c, m)));
  }
  double worst_mean = 0.0;
  for (double mu : {0.3, 1.0, 2.5}) {
    for (double t : {0.5, 2.0}) {
      const double want = -std::expm1(-0.5 * mu * mu * t) / (mu * mu);
      worst_mean = std::max(
          worst_mean, std::abs(lz::last_zero_moment({mu, t}, 1) - want));
    }
  }
  bool shrink = true;
  for (int m = 1; m <= 6; ++m) {
    for (double mu : {0.5, 1.0, 3.0}) {
      if (!(lz::last_zero_moment({mu, 1.0}, m) <
            lz::last_zero_moment({0.0, 1.0}, m))) {
        shrink = false;
      }
    }
  }
  const bool pass = worst_quad <= 1e-6 && worst_mean <= 1e-12 && shrink;
  report(4, "moments", pass,
         "quad=" + fmt(worst_quad) + " mean=" + fmt(worst_mean) +
             (shrink ? " shrinkage=strict" : " shrinkage=VIOLATED"));
}

// 5. MGF against the truncated moment series; n-fold MGF against Kummer
void criterion_5() {
  double worst_series = 0.0;
  for (double gamma : {-1.0, -0.5, 0.5, 1.0}) {
    const DriftClock c{1.0, 1.0};
    double series = 1.0;
    double factorial = 1.0;
    for (int m = 1; m <= 30; ++m) {
      factorial *= m;
      series += std::pow(gamma, m) * lz::last_zero_moment(c, m) / factorial;
    }
    worst_series =
        std::max(worst_series, std::abs(lz::last_zero_mgf(c, gamma) - series));
  }
  double worst_kummer = 0.0;
  for (double x : {0.25, 1.0, 3.0}) {
    worst_kummer = std::max(worst_kummer,
                            std::abs(it::nfold_mgf(1, 1.0, x) -
                                     sf::kummer_half_one(x)));
  }
  const bool pass = worst_series <= 1e-8 && worst_kummer <= 1e-12;
  report(5, "mgf", pass,
         "series=" + fmt(worst_series) + " kummer=" + fmt(worst_kummer));
}

// 6. joint-law bookkeeping: total mass, marginal identity, conditional
// normalization and its minimum at a = b/4 by golden section
void criterion_6() {
  const DriftClock c{1.0, 1.0};
  const double total = q::integrate_both_sqrt_singular(
      [&](double a) {
        return (jl::joint_return_tail(c, a, c.t) +
                jl::last_zero_no_return_density(c.mu, a)) *
               std::sqrt(a * (c.t - a));
      },
      0.0, c.t);
  double worst_marginal = 0.0;
  for (double a : {0.2, 0.5, 0.8}) {
    worst_marginal = std::max(
        worst_marginal,
        std::abs(jl::joint_return_tail(c, a, c.t) +
                 jl::last_zero_no_return_density(c.mu, a) -
                 lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm)));
  }
  const double cond_mass = q::integrate_both_sqrt_singular(
      [](double a) {
        return jl::cond_last_given_return_pdf(1.0, a, 2.0) *
               std::sqrt(a * (1.0 - a));
      },
      0.0, 1.0);

  // golden-section minimum of the conditional density at t = 1, b = 3
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.05, hi = 0.95;
  while (hi - lo > 1e-8) {
    const double x1 = hi - gr * (hi - lo);
    const double x2 = lo + gr * (hi - lo);
    if (jl::cond_last_given_return_pdf(1.0, x1, 3.0) <
        jl::cond_last_given_return_pdf(1.0, x2, 3.0)) {
      hi = x2;
    } else {
      lo = x1;
    }
  }
  const double argmin = 0.5 * (lo + hi);

  const bool pass = std::abs(total - 1.0) <= 1e-7 && worst_marginal <= 1e-7 &&
                    std::abs(cond_mass - 1.0) <= 1e-10 &&
                    std::abs(argmin - 0.75) <= 1e-6;
  report(6, "joint-bookkeeping", pass,
         "mass=" + fmt(std::abs(total - 1.0)) +
             " marginal=" + fmt(worst_marginal) +
             " cond=" + fmt(std::abs(cond_mass - 1.0)) +
             " argmin=" + fmt(argmin));
}

// 7. Gamma limit adjudication: rate mu^2/2, not the printed mu^2/4
void criterion_7() {
  double worst = 0.0;
  double printed_gap = 1.0;
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    const double got = lz::last_zero_cdf({1.0, 1e4}, a);
    worst = std::max(worst, std::abs(got - sf::erf(std::sqrt(0.5 * a))));
    if (a == 2.0) {
      printed_gap = std::abs(got - sf::erf(std::sqrt(a) / 2.0));
    }
  }
  const bool pass = worst <= 1e-3 && printed_gap > 0.05;
  report(7, "gamma-limit", pass,
         "err=" + fmt(worst) + " printed_gap=" + fmt(printed_gap));
}

struct McResults {
  std::vector<double> maxabs_mu1;  // reused by criterion 9(b)
  double maxabs_se_at_1 = 0.0;
  double maxabs_val_at_1 = 0.0;
};

// 8. Monte Carlo agreement at the acceptance configuration
void criterion_8(McResults& shared) {
  const auto cfg = acceptance_cfg();
  bool pass = true;
  std::string detail;

  {  // last-zero CDF, mu = 1, 10 points
    const auto samples = mc::sample_last_zero(1.0, 1.0, cfg, 0);
    double worst = 0.0;
    for (int i = 1; i <= 10; ++i) {
      const double a = i / 11.0;
      const auto est = mc::estimate_cdf_at(samples, a);
      const double want = lz::last_zero_cdf({1.0, 1.0}, a);
      worst = std::max(worst, std::abs(est.value - want) / est.std_error);
    }
    pass = pass && worst <= 3.0;
    detail += "lastzero_z=" + fmt(worst);
  }

  {  // max|B| CDF for mu in {0, 1}, 5 points, grid bias allowance
    const double bias = 1.2 * std::sqrt(cfg.dt);
    for (double mu : {0.0, 1.0}) {
      const auto samples = mc::sample_max_abs(mu, 1.0, cfg, 0);
      double worst = 0.0;
      for (double beta : {0.6, 0.9, 1.2, 1.5, 2.0}) {
        const auto est = mc::estimate_cdf_at(samples, beta);
        const double want = rm::max_abs_cdf({mu, 1.0}, beta);
        worst = std::max(worst, (std::abs(est.value - want) - bias) /
                                    (3.0 * est.std_error));
      }
      pass = pass && worst <= 1.0;
      detail += (mu == 0.0 ? " maxabs0=" : " maxabs1=") + fmt(worst);
      if (mu == 1.0) {
        shared.maxabs_mu1 = samples;
        const auto at1 = mc::estimate_cdf_at(samples, 1.0);
        shared.maxabs_se_at_1 = at1.std_error;
        shared.maxabs_val_at_1 = at1.value;
      }
    }
  }

  {  // iterated composition, 5 points
    const auto samples = mc::sample_iterated_last_zero(1.0, 1.0, cfg, 0);
    double worst = 0.0;
    for (double a : {0.2, 0.5, 0.9, 1.4, 2.2}) {
      const auto est = mc::estimate_cdf_at(samples, a);
      const double want = it::iter_last_zero_cdf(1.0, 1.0, a);
      worst = std::max(worst, std::abs(est.value - want) / est.std_error);
    }
    pass = pass && worst <= 3.0;
    detail += " iter_z=" + fmt(worst);
  }

  {  // nested means and second moments, n <= 3, driftless
    double worst = 0.0;
    for (int n = 1; n <= 3; ++n) {
      it::NestedSpec spec{n, std::vector<double>(n, 0.0), 1.0};
      const auto samples = mc::sample_nested(spec, cfg, 0);
      const auto mean = mc::estimate_mean(samples);
      const auto m2 = mc::estimate_moment(samples, 2);
      worst = std::max(
          worst, std::abs(mean.value - it::nfold_moment(n, 1, 1.0)) /
                     mean.std_error);
      worst = std::max(worst, std::abs(m2.value - it::nfold_moment(n, 2, 1.0)) /
                                  m2.std_error);
    }
    pass = pass && worst <= 3.0;
    detail += " nested_z=" + fmt(worst);
  }

  report(8, "mc-agreement", pass, detail);
}

// 9. adjudication experiments for the corrected laws
void criterion_9(const McResults& shared) {
  bool pass = true;
  std::string detail;

  {  // (a) censored return at mu = 1, t = 2: erf(1), printed form rejected
    auto cfg = acceptance_cfg();
    cfg.dt = 0.01;  // bridge correction keeps crossing detection exact
    const auto returns =
        mc::sample_first_return_after(1.0, 2.0, 50.0, cfg, 0);
    const auto cens = mc::estimate_censored_fraction(returns);
    const double corrected = sf::erf(1.0);
    const double printed = sf::erf(1.0 / std::sqrt(2.0 * 2.0));
    const double z_corr = std::abs(cens.value - corrected) / cens.std_error;
    const double z_printed = std::abs(cens.value - printed) / cens.std_error;
    pass = pass && z_corr <= 3.0 && z_printed > 10.0;
    detail += "return_z=" + fmt(z_corr) + " printed_z=" + fmt(z_printed);
  }

  {  // (b) max-abs adjudication from the criterion-8 samples
    const double bias = 1.2 * std::sqrt(acceptance_cfg().dt);
    const double corrected = rm::max_abs_cdf({1.0, 1.0}, 1.0);
    const double printed =
        rm::max_abs_cdf({1.0, 1.0}, 1.0, {}, rm::ImageWeights::AsPrinted);
    const double err_corr = std::abs(shared.maxabs_val_at_1 - corrected);
    const double err_printed = std::abs(shared.maxabs_val_at_1 - printed);
    pass = pass && err_corr <= 3.0 * shared.maxabs_se_at_1 + bias &&
           err_printed > 10.0 * shared.maxabs_se_at_1;
    detail += " maxabs_err=" + fmt(err_corr) +
              " printed_err=" + fmt(err_printed);
  }

  {  // (c) bridge ratio: mu-invariant and equal to the KS series
    double worst = 0.0;
    const double ks = rm::bridge_max_abs_cdf(1.0, 1.0);
    for (double mu : {0.0, 0.7, 1.5}) {
      worst = std::max(
          worst, std::abs(rm::bridge_max_abs_cdf_ratio({mu, 1.0}, 1.0) - ks));
    }
    // independent alternating-series oracle with remainder bound
    double oracle = 1.0;
    for (int r = 1; r < 60; ++r) {
      const double term =
          2.0 * ((r % 2 == 0) ? 1.0 : -1.0) * std::exp(-2.0 * r * r);
      oracle += term;
      if (std::abs(term) < 1e-18) break;
    }
    pass = pass && worst <= 1e-8 && std::abs(ks - oracle) <= 1e-10 &&
           std::abs(oracle - 0.7300) < 1e-4;
    detail += " bridge_mu_err=" + fmt(worst) +
              " ks_oracle_err=" + fmt(std::abs(ks - oracle));
  }

  report(9, "adjudication", pass, detail);
}

// 10. two full self-test runs with the same seed are byte-identical
void criterion_10() {
  std::ostringstream first, second;
  const int fail1 = zerocross::selftest::run(zerocross::selftest::Suite::Full,
                                             zerocross::kDefaultSeed, 0, first);
  const int fail2 = zerocross::selftest::run(zerocross::selftest::Suite::Full,
                                             zerocross::kDefaultSeed, 0,
                                             second);
  const bool identical = first.str() == second.str();
  const bool pass = identical && fail1 == 0 && fail2 == 0;
  report(10, "determinism", pass,
         std::string(identical ? "byte-identical" : "REPORTS DIFFER") +
             " selftest_failures=" + fmt(fail1));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  McResults shared;
  criterion_8(shared);
  criterion_9(shared);
  criterion_10();
  const double sec =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  std::printf("%d/10 criteria passed in %.0f s\n", 10 - g_failures, sec);
  return g_failures == 0 ? 0 : 1;
}
