#include <doctest.h>

#include <cmath>

#include "zerocross/lastzero.hpp"
#include "zerocross/quad.hpp"
#include "zerocross/specfun.hpp"

namespace lz = zerocross::lastzero;
namespace q = zerocross::quad;
namespace sf = zerocross::specfun;
using zerocross::DriftClock;
using zerocross::kPi;

namespace {

double arcsine_cdf(double a, double t) {
  return 2.0 / kPi * std::asin(std::sqrt(a / t));
}

}  // namespace

TEST_CASE("driftless law reduces to the arcsine law") {
  CHECK(std::abs(lz::last_zero_cdf({0.0, 1.0}, 0.25) - 1.0 / 3.0) < 1e-10);
  CHECK(std::abs(lz::last_zero_cdf({0.0, 1.0}, 0.5) - 0.5) < 1e-12);
  CHECK(lz::last_zero_cdf({0.0, 1.0}, 1.0) == 1.0);
  CHECK(std::abs(lz::last_zero_pdf({0.0, 1.0}, 0.5) - 2.0 / kPi) < 1e-12);
  CHECK(std::abs(lz::last_zero_pdf({0.0, 1.0}, 0.25) -
                 4.0 / (kPi * std::sqrt(3.0))) < 1e-12);
  for (double t : {0.5, 1.0, 4.0}) {
    for (int i = 1; i <= 20; ++i) {
      const double a = t * i / 21.0;
      CHECK(std::abs(lz::last_zero_cdf({0.0, t}, a) - arcsine_cdf(a, t)) <
            1e-10);
    }
  }
}

TEST_CASE("the three CDF forms and the pdf forms agree on the grid") {
  for (double mu : {0.0, 0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 4.0}) {
      for (int i = 1; i <= 10; ++i) {
        const double a = t * i / 11.0;
        const DriftClock c{mu, t};
        const double fy = lz::last_zero_cdf(c, a, lz::CdfForm::YIntegral);
        const double fs = lz::last_zero_cdf(c, a, lz::CdfForm::SIntegral);
        const double fa = lz::last_zero_cdf(c, a, lz::CdfForm::Angular);
        CHECK(std::abs(fy - fs) < 1e-8);
        CHECK(std::abs(fy - fa) < 1e-8);
        const double py = lz::last_zero_pdf(c, a, lz::PdfForm::YIntegral);
        const double ps = lz::last_zero_pdf(c, a, lz::PdfForm::SIntegral);
        const double pe = lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm);
        CHECK(std::abs(py - ps) < 1e-8);
        CHECK(std::abs(py - pe) < 1e-8);
      }
    }
  }
}

TEST_CASE("reference value at mu=1, t=1, a=1/2") {
  // 25-digit quadrature of the y-integral form gives 0.6354600614016981877.
  CHECK(std::abs(lz::last_zero_cdf({1.0, 1.0}, 0.5) - 0.6354600614016982) <
        1e-9);
}

TEST_CASE("density integrates to one and differentiates the CDF") {
  for (double mu : {0.0, 0.5, 1.0, 2.0}) {
    for (double t : {0.5, 1.0, 4.0}) {
      const double mass = q::integrate_both_sqrt_singular(
          [&](double a) {
            return lz::last_zero_pdf({mu, t}, a, lz::PdfForm::ErfForm) *
                   std::sqrt(a * (t - a));
          },
          0.0, t);
      CHECK(std::abs(mass - 1.0) < 1e-8);
    }
  }
  const DriftClock c{1.0, 1.0};
  const double h = 1e-5;
  const double fd =
      (lz::last_zero_cdf(c, 0.3 + h) - lz::last_zero_cdf(c, 0.3 - h)) /
      (2.0 * h);
  CHECK(std::abs(fd - lz::last_zero_pdf(c, 0.3)) < 1e-5);
}

TEST_CASE("drift shifts mass left: CDF grows with |mu|") {
  for (double t : {0.5, 2.0}) {
    for (int i = 1; i <= 8; ++i) {
      const double a = t * i / 9.0;
      double prev = lz::last_zero_cdf({0.0, t}, a);
      for (double mu : {0.5, 1.0, 2.0}) {
        const double v = lz::last_zero_cdf({mu, t}, a);
        CHECK(v > prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("results are bitwise identical under the sign of mu") {
  const DriftClock pos{1.3, 2.0}, neg{-1.3, 2.0};
  CHECK(lz::last_zero_cdf(pos, 0.7) == lz::last_zero_cdf(neg, 0.7));
  CHECK(lz::last_zero_pdf(pos, 0.7) == lz::last_zero_pdf(neg, 0.7));
  CHECK(lz::last_zero_moment(pos, 2) == lz::last_zero_moment(neg, 2));
  CHECK(lz::last_zero_mgf(pos, 0.4) == lz::last_zero_mgf(neg, 0.4));
}

TEST_CASE("moments: closed forms, shrinkage, quadrature") {
  CHECK(std::abs(lz::last_zero_moment({0.0, 1.0}, 1) - 0.5) < 1e-15);
  CHECK(std::abs(lz::last_zero_moment({0.0, 1.0}, 2) - 0.375) < 1e-15);
  const double mu = std::sqrt(2.0);
  CHECK(std::abs(lz::last_zero_moment({mu, 1.0}, 1) -
                 (1.0 - std::exp(-1.0)) / 2.0) < 1e-14);

  for (int m = 1; m <= 4; ++m) {
    const DriftClock c{1.0, 1.0};
    const double by_quad = q::integrate_both_sqrt_singular(
        [&](double a) {
          return std::pow(a, m) *
                 lz::last_zero_pdf(c, a, lz::PdfForm::ErfForm) *
                 std::sqrt(a * (1.0 - a));
        },
        0.0, 1.0);
    CHECK(std::abs(by_quad - lz::last_zero_moment(c, m)) < 1e-6);
  }

  for (int m = 1; m <= 8; ++m) {
    const double driftless = lz::last_zero_moment({0.0, 1.0}, m);
    for (double mu2 : {0.3, 1.0, 3.0}) {
      CHECK(lz::last_zero_moment({mu2, 1.0}, m) < driftless);
    }
    // upper bound C(2m,m) t^m / 4^m
    CHECK(lz::last_zero_moment({0.5, 2.0}, m) <=
          sf::central_binomial_weight(m) * std::pow(2.0, m) + 1e-12);
  }
}

TEST_CASE("MGF: normalization, Kummer reduction, moment duality") {
  CHECK(std::abs(lz::last_zero_mgf({1.0, 1.0}, 0.0) - 1.0) < 1e-12);
  CHECK(std::abs(lz::last_zero_mgf({0.0, 1.0}, 1.0) -
                 sf::kummer_half_one(1.0)) < 1e-12);

  const DriftClock c{1.0, 1.0};
  double series = 1.0;
  double factorial = 1.0;
  for (int m = 1; m <= 25; ++m) {
    factorial *= m;
    series += std::pow(0.7, m) * lz::last_zero_moment(c, m) / factorial;
  }
  CHECK(std::abs(lz::last_zero_mgf(c, 0.7) - series) < 1e-8);

  // duality across a small gamma grid with |gamma| t <= 1
  for (double g : {-1.0, -0.3, 0.3, 1.0}) {
    double acc = 1.0;
    double fact = 1.0;
    for (int m = 1; m <= 30; ++m) {
      fact *= m;
      acc += std::pow(g, m) * lz::last_zero_moment(c, m) / fact;
    }
    CHECK(std::abs(lz::last_zero_mgf(c, g) - acc) < 1e-8);
  }
}

TEST_CASE("infinite-horizon Gamma limit") {
  CHECK(std::abs(lz::last_zero_cdf_infinite_horizon(1.0, 2.0) -
                 sf::erf(1.0)) < 1e-14);
  CHECK(lz::last_zero_cdf_infinite_horizon(1.0, 1e6) ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS((void)lz::last_zero_cdf_infinite_horizon(0.0, 1.0),
                  std::domain_error);

  // implied mean: int_0^inf (1 - F) da = 1/mu^2 = 1 at mu = 1,
  // consistent with the closed-form mean as t -> infinity
  const double implied_mean = q::integrate_half_line(
      [](double a) { return 1.0 - lz::last_zero_cdf_infinite_horizon(1.0, a); },
      0.0);
  CHECK(std::abs(implied_mean - 1.0) < 1e-8);

  // the finite-horizon law converges to it
  for (double a : {0.5, 1.0, 2.0, 4.0}) {
    CHECK(std::abs(lz::last_zero_cdf({1.0, 1e4}, a) -
                   lz::last_zero_cdf_infinite_horizon(1.0, a)) < 1e-3);
  }
}

TEST_CASE("small-mu approximations") {
  const auto exact0 = lz::last_zero_small_mu({0.0, 1.0}, 0.3);
  CHECK(exact0.pdf == doctest::Approx(1.0 / (kPi * std::sqrt(0.3 * 0.7)))
                          .epsilon(1e-14));
  CHECK(exact0.cdf == doctest::Approx(arcsine_cdf(0.3, 1.0)).epsilon(1e-14));

  // correction vanishes at the midpoint
  const auto mid = lz::last_zero_small_mu({0.4, 2.0}, 1.0);
  CHECK(mid.pdf == doctest::Approx(1.0 / kPi).epsilon(1e-14));

  const DriftClock c{0.1, 1.0};
  const auto approx = lz::last_zero_small_mu(c, 0.3);
  CHECK(std::abs(approx.cdf - lz::last_zero_cdf(c, 0.3)) < 1e-4);
  CHECK(std::abs(approx.pdf - lz::last_zero_pdf(c, 0.3)) < 1e-4);
}

TEST_CASE("mixture weight representation") {
  const double mu = std::sqrt(2.0);
  CHECK(std::abs(lz::mixture_weight({mu, 1.0}, 1.0).atom_at_t -
                 std::exp(-1.0)) < 1e-15);
  const auto degenerate = lz::mixture_weight({0.0, 1.0}, 0.5);
  CHECK(degenerate.density == 0.0);
  CHECK(degenerate.atom_at_t == 1.0);

  // the weight normalizes: atom + integral of the density over (0, t)
  const DriftClock c{1.0, 1.0};
  const double mass = q::integrate_adaptive(
      [&](double w) { return lz::mixture_weight(c, w).density; }, 0.0, c.t);
  CHECK(std::abs(mass + lz::mixture_weight(c, c.t).atom_at_t - 1.0) < 1e-12);

  // reconstructed density: E[ arcsine kernel 1{W >= a} ]
  const double a = 0.4;
  const double reconstructed =
      lz::mixture_weight(c, c.t).atom_at_t / (kPi * std::sqrt(a * (c.t - a))) +
      q::integrate_left_sqrt_singular(
          [&](double w) {
            return lz::mixture_weight(c, w).density / (kPi * std::sqrt(a));
          },
          a, c.t);
  CHECK(std::abs(reconstructed - lz::last_zero_pdf(c, a)) < 1e-8);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS((void)lz::last_zero_cdf({1.0, 1.0}, 0.0), std::domain_error);
  CHECK_THROWS_AS((void)lz::last_zero_cdf({1.0, 1.0}, 1.5), std::domain_error);
  CHECK_THROWS_AS((void)lz::last_zero_pdf({1.0, 1.0}, 1.0), std::domain_error);
  CHECK_THROWS_AS((void)lz::last_zero_moment({1.0, 1.0}, 0),
                  std::domain_error);
  CHECK_THROWS_AS((void)lz::last_zero_cdf({1.0, -1.0}, 0.5),
                  std::domain_error);
}
