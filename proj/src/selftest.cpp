#include "zerocross/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "zerocross/iterated.hpp"
#include "zerocross/jointlaw.hpp"
#include "zerocross/lastzero.hpp"
#include "zerocross/mcoracle.hpp"
#include "zerocross/quad.hpp"
#include "zerocross/reflmax.hpp"
#include "zerocross/specfun.hpp"

namespace zerocross::selftest {

namespace {

namespace lz = lastzero;
namespace jl = jointlaw;
namespace rm = reflmax;
namespace it = iterated;
namespace mc = mcoracle;
namespace sf = specfun;

struct Reporter {
  std::ostream& out;
  int failures = 0;

  void row(const std::string& name, double err, double tol) {
    const bool ok = err <= tol;
    if (!ok) ++failures;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-4s %-34s err=%.3g tol=%.3g\n",
                  ok ? "ok" : "FAIL", name.c_str(), err, tol);
    out << buf;
  }
};

double rel_or_abs_err(double got, double want) {
  return std::abs(got - want);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * i / (n - 1.0);
  }
  return out;
}

void analytic_checks(Reporter& rep, bool full) {
  const std::vector<double> mus = full ? std::vector<double>{0.0, 0.5, 1.0, 2.0}
                                       : std::vector<double>{0.0, 1.0};
  const std::vector<double> ts =
      full ? std::vector<double>{0.5, 1.0, 4.0} : std::vector<double>{1.0};
  const int npts = full ? 20 : 6;

  {  // arcsine reduction at mu = 0
    double err = 0.0;
    for (double t : ts) {
      for (double a : linspace(t / 21.0, t * 20.0 / 21.0, npts)) {
        const double got = lz::last_zero_cdf({0.0, t}, a);
        const double want = 2.0 / kPi * std::asin(std::sqrt(a / t));
        err = std::max(err, rel_or_abs_err(got, want));
      }
    }
    rep.row("arcsine-reduction", err, 1e-10);
  }

  {  // three CDF forms and two+one pdf forms agree
    double cdf_err = 0.0, pdf_err = 0.0;
    for (double mu : mus) {
      for (double t : ts) {
        for (double a : linspace(t / 21.0, t * 20.0 / 21.0, npts)) {
          const DriftClock c{mu, t};
          const double fy = lz::last_zero_cdf(c, a, lz::CdfForm::YIntegral);
          const double fs = lz::last_zero_cdf(c, a, lz::CdfForm::SIntegral);
          const double fa = lz::last_zero_cdf(c, a, lz::CdfForm::Angular);
          cdf_err = std::max({cdf_err, std::abs(fy - fs), std::abs(fy - fa),
                              std::abs(fs - fa)});
          const double py = lz::last_zero_pdf(c, a, lz::PdfForm::YIntegral);
          const double ps = lz::last_zero_pdf(c, a, lz::PdfForm::SIntegral);
          const double pe = lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm);
          pdf_err = std::max({pdf_err, std::abs(py - ps), std::abs(py - pe)});
        }
      }
    }
    rep.row("cdf-form-equivalence", cdf_err, 1e-8);
    rep.row("pdf-form-equivalence", pdf_err, 1e-8);
  }

  {  // plus/minus mu produce bitwise identical laws
    double err = 0.0;
    const DriftClock pos{1.25, 1.0}, neg{-1.25, 1.0};
    if (lz::last_zero_cdf(pos, 0.4) != lz::last_zero_cdf(neg, 0.4)) err = 1.0;
    if (lz::last_zero_pdf(pos, 0.4) != lz::last_zero_pdf(neg, 0.4)) err = 1.0;
    if (lz::last_zero_moment(pos, 3) != lz::last_zero_moment(neg, 3)) err = 1.0;
    rep.row("sign-invariance", err, 0.0);
  }

  {  // pdf integrates to one
    double err = 0.0;
    for (double mu : mus) {
      for (double t : ts) {
        const double mass = quad::integrate_both_sqrt_singular(
            [&](double a) {
              return lz::last_zero_pdf({mu, t}, a, lz::PdfForm::ErfForm) *
                     std::sqrt(a * (t - a));
            },
            0.0, t);
        err = std::max(err, std::abs(mass - 1.0));
      }
    }
    rep.row("pdf-normalization", err, 1e-8);
  }

  {  // centered difference of the CDF reproduces the pdf
    const DriftClock c{1.0, 1.0};
    const double h = 1e-5;
    const double fd =
        (lz::last_zero_cdf(c, 0.3 + h) - lz::last_zero_cdf(c, 0.3 - h)) /
        (2.0 * h);
    rep.row("cdf-pdf-derivative", std::abs(fd - lz::last_zero_pdf(c, 0.3)),
            1e-5);
  }

  {  // closed-form mean and the moment shrinkage inequality
    double err = 0.0;
    for (double mu : {0.5, 1.0, 2.0}) {
      const DriftClock c{mu, 1.0};
      const double want = -std::expm1(-0.5 * mu * mu) / (mu * mu);
      err = std::max(err, std::abs(lz::last_zero_moment(c, 1) - want));
    }
    rep.row("moment-mean-identity", err, 1e-12);
    double shrink = 0.0;
    for (int m = 1; m <= 6; ++m) {
      const double drifted = lz::last_zero_moment({1.0, 1.0}, m);
      const double driftless = lz::last_zero_moment({0.0, 1.0}, m);
      if (drifted >= driftless) shrink = 1.0;
    }
    rep.row("moment-shrinkage", shrink, 0.0);
  }

  {  // moments against quadrature of a^m pdf
    double err = 0.0;
    const int mmax = full ? 4 : 2;
    for (int m = 1; m <= mmax; ++m) {
      const DriftClock c{1.0, 1.0};
      const double by_quad = quad::integrate_both_sqrt_singular(
          [&](double a) {
            return std::pow(a, m) *
                   lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm) *
                   std::sqrt(a * (1.0 - a));
          },
          0.0, 1.0);
      err = std::max(err, std::abs(by_quad - lz::last_zero_moment(c, m)));
    }
    rep.row("moment-vs-quadrature", err, 1e-6);
  }

  {  // MGF against the truncated moment series and the Kummer identity
    const DriftClock c{1.0, 1.0};
    double series = 1.0;
    double factorial = 1.0;
    const double gamma = 0.7;
    for (int m = 1; m <= 25; ++m) {
      factorial *= m;
      series += std::pow(gamma, m) * lz::last_zero_moment(c, m) / factorial;
    }
    rep.row("mgf-moment-duality",
            std::abs(lz::last_zero_mgf(c, gamma) - series), 1e-8);
    rep.row("mgf-kummer-identity",
            std::abs(it::nfold_mgf(1, 1.0, 1.0) - sf::kummer_half_one(1.0)),
            1e-12);
  }

  {  // Kummer series against quadrature of the integral representation
    double err = 0.0;
    for (double x : {-30.0, -5.0, 1.0, 10.0, 30.0}) {
      const double by_quad =
          quad::integrate_both_sqrt_singular(
              [x](double s) { return std::exp(x * s); }, 0.0, 1.0) /
          kPi;
      err = std::max(err,
                     std::abs(by_quad - sf::kummer_half_one(x)) /
                         sf::kummer_half_one(x));
    }
    rep.row("kummer-dual-route", err, 1e-9);
  }

  {  // Gamma limit law at a long horizon
    double err = 0.0;
    for (double a : {0.5, 1.0, 2.0, 4.0}) {
      err = std::max(err, std::abs(lz::last_zero_cdf({1.0, 1e4}, a) -
                                   lz::last_zero_cdf_infinite_horizon(1.0, a)));
    }
    rep.row("gamma-limit", err, 1e-3);
  }

  {  // mixture reconstruction of the density
    const DriftClock c{1.0, 1.0};
    const double a = 0.4;
    const double atom = lz::mixture_weight(c, c.t).atom_at_t;
    const double reconstructed =
        atom / (kPi * std::sqrt(a * (c.t - a))) +
        quad::integrate_left_sqrt_singular(
            [&](double w) {
              return lz::mixture_weight(c, w).density /
                     (kPi * std::sqrt(a));
            },
            a, c.t);
    rep.row("mixture-reconstruction",
            std::abs(reconstructed - lz::last_zero_pdf(c, a)), 1e-8);
  }

  {  // small-mu expansion against the exact law
    const DriftClock c{0.1, 1.0};
    const auto approx = lz::last_zero_small_mu(c, 0.3);
    rep.row("small-mu-cdf",
            std::abs(approx.cdf - lz::last_zero_cdf(c, 0.3)), 1e-4);
  }

  {  // joint law bookkeeping
    const DriftClock c{1.0, 1.0};
    double err = 0.0;
    for (double a : {0.25, 0.5, 0.75}) {
      const double lhs = jl::joint_return_tail(c, a, c.t) +
                         jl::last_zero_no_return_density(c.mu, a);
      err = std::max(err,
                     std::abs(lhs - lz::last_zero_pdf(c, a,
                                                      lz::PdfForm::ErfForm)));
    }
    rep.row("joint-marginal-identity", err, 1e-7);

    const double mass =
        quad::integrate_both_sqrt_singular(
            [&](double a) {
              return (jl::joint_return_tail(c, a, c.t) +
                      jl::last_zero_no_return_density(c.mu, a)) *
                     std::sqrt(a * (c.t - a));
            },
            0.0, c.t);
    rep.row("joint-total-mass", std::abs(mass - 1.0), 1e-7);

    const double cond_mass = quad::integrate_both_sqrt_singular(
        [&](double a) {
          return jl::cond_last_given_return_pdf(1.0, a, 2.0) *
                 std::sqrt(a * (1.0 - a));
        },
        0.0, 1.0);
    rep.row("cond-a-normalization", std::abs(cond_mass - 1.0), 1e-10);

    const double a0 = 0.5;
    const double ret_mass = quad::integrate_half_line(
        [&](double b) { return jl::cond_return_given_last_pdf(c, a0, b); },
        c.t + 1e-300);
    rep.row("cond-b-normalization",
            std::abs(ret_mass + jl::p_never_return_given_last(c, a0) - 1.0),
            1e-8);

    const DriftClock c2{1.0, 2.0};
    const double no_ret = quad::integrate_left_sqrt_singular(
        [&](double a) {
          return jl::last_zero_no_return_density(c2.mu, a) * std::sqrt(a);
        },
        0.0, c2.t);
    rep.row("never-return-consistency",
            std::abs(no_ret - jl::p_never_return(c2)), 1e-10);

    // straddle density as a marginal of the joint law (w < t case)
    const double w = 0.6;
    const double by_joint = quad::integrate_adaptive(
        [&](double a) { return jl::joint_pdf(c, a, a + w); }, c.t - w, c.t);
    rep.row("straddle-consistency",
            std::abs(by_joint - jl::straddle_length_pdf(c, w)), 1e-8);

    // the drift-free conditional is the ratio of two mu-dependent laws
    double mu_free_err = 0.0;
    for (double b : {1.5, 2.0, 3.0}) {
      const double r0 = jl::joint_pdf({0.0, 1.0}, 0.4, b) /
                        jl::return_time_pdf({0.0, 1.0}, b);
      const double r2 = jl::joint_pdf({2.0, 1.0}, 0.4, b) /
                        jl::return_time_pdf({2.0, 1.0}, b);
      mu_free_err = std::max(mu_free_err, std::abs(r0 - r2));
    }
    rep.row("cond-a-drift-free", mu_free_err, 1e-10);
  }

  {  // reflection module cross-checks
    double err = 0.0;
    for (double mu : {0.0, 1.0}) {
      const DriftClock c{mu, 1.0};
      err = std::max(err, std::abs(rm::max_abs_cdf(c, 1.3) -
                                   rm::two_barrier_mass(c, {-1.3, 1.3})));
    }
    rep.row("maxabs-vs-barrier-mass", err, 1e-12);

    const double at = 0.8 * std::sqrt(1.0);
    rep.row("maxabs-route-crossover",
            std::abs(rm::max_abs_cdf({1.0, 1.0}, at - 1e-9) -
                     rm::max_abs_cdf({1.0, 1.0}, at + 1e-9)),
            1e-8);

    double os_err = 0.0;
    for (double mu : {0.0, 0.5}) {
      const DriftClock c{mu, 1.0};
      os_err = std::max(os_err, std::abs(rm::max_onesided_cdf(c, 1.0) -
                                         rm::max_onesided_cdf_fpt(c, 1.0)));
    }
    rep.row("onesided-dual-route", os_err, 1e-8);

    const DriftClock c{1.0, 1.0};
    const rm::BarrierBox box{-1.0, 1.0};
    const double interior = rm::two_barrier_density(c, box, 0.3);
    const double at_edge = rm::two_barrier_density(c, box, 1.0 - 1e-12);
    rep.row("barrier-boundary-vanishing", std::abs(at_edge) / interior, 1e-10);

    double bridge_err = 0.0;
    const double ks = rm::bridge_max_abs_cdf(1.0, 1.0);
    for (double mu : {0.0, 0.7, 1.5}) {
      bridge_err = std::max(
          bridge_err,
          std::abs(rm::bridge_max_abs_cdf_ratio({mu, 1.0}, 1.0) - ks));
    }
    rep.row("bridge-mu-invariance", bridge_err, 1e-8);

    const double wide = rm::two_barrier_mass({0.5, 1.0}, {-10.0, 1.0});
    rep.row("single-barrier-limit",
            std::abs(wide - rm::max_onesided_cdf({0.5, 1.0}, 1.0)), 1e-6);
  }

  {  // iterated laws
    rep.row("iter-limit-low", it::iter_last_zero_cdf(1.0, 1.0, 1e-6), 1e-2);
    rep.row("iter-limit-high",
            1.0 - it::iter_last_zero_cdf(1.0, 1.0, 1e3), 1e-6);

    // survival form against the split erf + integral composition
    const double mu = 0.7, a = 0.4;
    const double direct =
        sf::erf(mu * std::sqrt(0.5 * a)) +
        std::sqrt(a) / kPi *
            (quad::integrate_left_sqrt_singular(
                 [&](double w) {
                   return std::exp(-0.5 * mu * mu * w) *
                          rm::max_abs_cdf({0.0, 1.0}, w) / w;
                 },
                 a, a + 1.0) +
             quad::integrate_half_line(
                 [&](double w) {
                   return std::exp(-0.5 * mu * mu * w) *
                          rm::max_abs_cdf({0.0, 1.0}, w) /
                          (w * std::sqrt(w - a));
                 },
                 a + 1.0));
    rep.row("iter-dual-route",
            std::abs(direct - it::iter_last_zero_cdf(mu, 1.0, a)), 1e-7);
    rep.row("iter-drifted-inner-reduction",
            std::abs(it::iter_last_zero_cdf_drifted_inner(
                         mu, 0.0, 1.0, a, it::HorizonKind::AbsMax) -
                     it::iter_last_zero_cdf(mu, 1.0, a)),
            0.0);

    // nested law against the driftless closed display (kernel singular at
    // w = t only)
    double nested_err = 0.0;
    for (double a0 : {0.25, 0.5, 0.75}) {
      const double oracle =
          2.0 / kPi * std::asin(std::sqrt(a0)) +
          2.0 / (kPi * kPi) *
              quad::integrate_right_sqrt_singular(
                  [&](double w) {
                    return std::asin(std::sqrt(a0 / w)) / std::sqrt(w);
                  },
                  a0, 1.0);
      nested_err = std::max(
          nested_err, std::abs(oracle - it::nested_last_zero_cdf(0, 0, 1, a0)));
    }
    rep.row("nested-mu0-oracle", nested_err, 1e-8);

    // normalizations: the log-edged head below eps goes through the
    // composition law exactly, the bulk through the density itself
    quad::QuadratureBudget outer;
    outer.abs_tol = 1e-8;
    outer.rel_tol = 1e-8;
    const double eps = 1e-4;
    {
      const double mu1 = 1.0, mu2 = 0.5, t = 1.0;
      const double head =
          lz::last_zero_cdf({mu2, t}, eps) +
          quad::integrate_right_sqrt_singular(
              [&](double w) {
                return lz::last_zero_pdf({mu2, t}, w, lz::PdfForm::ErfForm) *
                       lz::last_zero_cdf({mu1, w}, eps) * std::sqrt(t - w);
              },
              eps, t, outer);
      const double mid = 0.5 * (eps + t);
      const double bulk =
          quad::integrate_adaptive(
              [&](double u) {
                return 2.0 * u *
                       it::nested_last_zero_pdf(mu1, mu2, t, u * u);
              },
              std::sqrt(eps), std::sqrt(mid), outer) +
          quad::integrate_right_sqrt_singular(
              [&](double a0) {
                return it::nested_last_zero_pdf(mu1, mu2, t, a0) *
                       std::sqrt(t - a0);
              },
              mid, t, outer);
      rep.row("nested-pdf-normalization", std::abs(head + bulk - 1.0), 1e-6);
    }
    {
      const double head =
          2.0 / kPi * std::asin(std::sqrt(eps)) +
          quad::integrate_right_sqrt_singular(
              [&](double w) {
                return (2.0 / kPi) * std::asin(std::sqrt(eps / w)) *
                       std::sqrt(1.0 - w) / (kPi * std::sqrt(w * (1.0 - w)));
              },
              eps, 1.0, outer);
      const double bulk =
          quad::integrate_adaptive(
              [&](double u) {
                return 2.0 * u * it::nfold_last_zero_pdf(2, 1.0, u * u);
              },
              std::sqrt(eps), std::sqrt(0.5), outer) +
          quad::integrate_right_sqrt_singular(
              [&](double a0) {
                return it::nfold_last_zero_pdf(2, 1.0, a0) *
                       std::sqrt(1.0 - a0);
              },
              0.5, 1.0, outer);
      rep.row("nfold-pdf-normalization", std::abs(head + bulk - 1.0), 1e-6);
    }
    rep.row("nfold-moment-values",
            std::abs(it::nfold_moment(2, 1, 1.0) - 0.25) +
                std::abs(it::nfold_moment(2, 2, 1.0) - 0.140625) +
                std::abs(it::nfold_moment(3, 1, 8.0) - 1.0),
            0.0);

    const double ibm_mass = quad::integrate_adaptive(
        [&](double x) { return it::iterated_bm_pdf(1.0, 0.5, 1.0, x); }, -14.0,
        16.0);
    rep.row("iterated-bm-normalization", std::abs(ibm_mass - 1.0), 1e-7);
  }
}

void mc_checks(Reporter& rep, bool full, std::uint64_t seed, int threads) {
  mc::McConfig cfg;
  cfg.seed = seed;
  cfg.paths = full ? 50000 : 2000;
  cfg.dt = full ? 1e-4 : 5e-3;
  const double zcap = full ? 4.0 : 4.5;

  {  // empirical last-zero CDF against the analytic law
    const auto samples = mc::sample_last_zero(1.0, 1.0, cfg, threads);
    double worst = 0.0;
    for (double a : linspace(0.1, 0.9, full ? 10 : 3)) {
      const auto est = mc::estimate_cdf_at(samples, a);
      const double want = lz::last_zero_cdf({1.0, 1.0}, a);
      worst = std::max(worst,
                       std::abs(est.value - want) / (est.std_error + 1e-12));
    }
    rep.row("mc-lastzero-cdf", worst, zcap);
    const auto mean = mc::estimate_mean(samples);
    rep.row("mc-lastzero-mean",
            std::abs(mean.value - lz::last_zero_moment({1.0, 1.0}, 1)) /
                mean.std_error,
            zcap);
  }

  {  // censored-return experiment (discriminates the never-return law)
    mc::McConfig rcfg = cfg;
    rcfg.dt = 0.01;  // the bridge correction keeps crossing detection exact
    const auto returns =
        mc::sample_first_return_after(1.0, 2.0, 50.0, rcfg, threads);
    const auto censored = mc::estimate_censored_fraction(returns);
    const double want = jl::p_never_return({1.0, 2.0});
    rep.row("mc-never-return",
            std::abs(censored.value - want) / censored.std_error, zcap);
    if (full) {
      // the printed form of the law must be rejected decisively
      const double printed = sf::erf(1.0 / std::sqrt(2.0 * 2.0));
      const double z_printed =
          std::abs(censored.value - printed) / censored.std_error;
      rep.row("mc-never-return-adjudication", z_printed > 10.0 ? 0.0 : 1.0,
              0.0);
    }
  }

  if (full) {
    // max|B| CDF for mu in {0, 1}; grid-max bias allowance 0.012 on top of
    // the Monte Carlo band (O(sqrt(dt)) barrier-crossing bias).
    const double bias = 0.012;
    for (double mu : {0.0, 1.0}) {
      const auto samples = mc::sample_max_abs(mu, 1.0, cfg, threads);
      double worst = 0.0;
      for (double beta : {0.6, 0.9, 1.2, 1.5, 2.0}) {
        const auto est = mc::estimate_cdf_at(samples, beta);
        const double want = rm::max_abs_cdf({mu, 1.0}, beta);
        worst = std::max(worst, (std::abs(est.value - want) - bias) /
                                    (3.0 * est.std_error + 1e-12));
      }
      rep.row(mu == 0.0 ? "mc-maxabs-cdf-mu0" : "mc-maxabs-cdf-mu1", worst,
              1.0);
      if (mu == 1.0) {
        const auto est = mc::estimate_cdf_at(samples, 1.0);
        const double printed = rm::max_abs_cdf({mu, 1.0}, 1.0, {},
                                               rm::ImageWeights::AsPrinted);
        const double gap = std::abs(est.value - printed);
        rep.row("mc-maxabs-adjudication",
                gap > 10.0 * est.std_error + bias ? 0.0 : 1.0, 0.0);
      }
    }

    {  // iterated composition
      const auto samples =
          mc::sample_iterated_last_zero(1.0, 1.0, cfg, threads);
      double worst = 0.0;
      for (double a : {0.2, 0.5, 0.9, 1.4, 2.2}) {
        const auto est = mc::estimate_cdf_at(samples, a);
        const double want = it::iter_last_zero_cdf(1.0, 1.0, a);
        worst = std::max(worst,
                         std::abs(est.value - want) / (est.std_error + 1e-12));
      }
      rep.row("mc-iterated-cdf", worst, zcap);
    }

    {  // nested recursion moments, depth 2 and 3, driftless
      for (int depth : {2, 3}) {
        it::NestedSpec spec{depth, std::vector<double>(depth, 0.0), 1.0};
        const auto samples = mc::sample_nested(spec, cfg, threads);
        const auto mean = mc::estimate_mean(samples);
        const auto m2 = mc::estimate_moment(samples, 2);
        const double zm = std::abs(mean.value - it::nfold_moment(depth, 1, 1.0)) /
                          mean.std_error;
        const double z2 = std::abs(m2.value - it::nfold_moment(depth, 2, 1.0)) /
                          m2.std_error;
        rep.row(depth == 2 ? "mc-nested-depth2" : "mc-nested-depth3",
                std::max(zm, z2), zcap);
      }
    }
  }
}

}  // namespace

int run(Suite suite, std::uint64_t seed, int threads, std::ostream& report) {
  const bool full = suite == Suite::Full;
  report << "zerocross self-test suite=" << (full ? "full" : "quick")
         << " seed=" << seed << "\n";
  Reporter rep{report};
  analytic_checks(rep, full);
  mc_checks(rep, full, seed, threads);
  report << "failures: " << rep.failures << "\n";
  return rep.failures;
}

}  // namespace zerocross::selftest
