#pragma once

#include "zerocross/quad.hpp"
#include "zerocross/types.hpp"

namespace zerocross::lastzero {

using quad::QuadratureBudget;

/// The three printed forms of the distribution function. YIntegral (the
/// bounded, analytic integrand) is the default; the others exist for
/// cross-validation.
enum class CdfForm { YIntegral, SIntegral, Angular };

/// The two printed forms of the density, plus the erf antiderivative of the
/// s-integral (exact, used by compositions).
enum class PdfForm { YIntegral, SIntegral, ErfForm };

/// Mixture representation of the law: the last zero-crossing is an
/// exponentially weighted arcsine law with weight W ~ density
/// (mu^2/2) e^{-mu^2 w/2} on (0,t) plus an atom e^{-mu^2 t/2} at t.
struct MixtureWeight {
  double density = 0.0;    // f_W(w), 1/time
  double atom_at_t = 1.0;  // P(W = t)
};

struct SmallMuApprox {
  double pdf = 0.0;
  double cdf = 0.0;
};

/// P(last zero-crossing of B^mu before t >= a): the survival probability,
/// (2/pi) int_0^{sqrt((t-a)/a)} exp(-mu^2 a (1+y^2)/2) / (1+y^2) dy.
/// This is the accurate primitive; the CDF is its complement.
double last_zero_survival(const DriftClock& clock, double a,
                          const QuadratureBudget& budget = {});

/// P(last zero-crossing < a) for 0 < a <= t; a == t returns 1.
double last_zero_cdf(const DriftClock& clock, double a,
                     CdfForm form = CdfForm::YIntegral,
                     const QuadratureBudget& budget = {});

/// Density of the last zero-crossing on 0 < a < t.
double last_zero_pdf(const DriftClock& clock, double a,
                     PdfForm form = PdfForm::YIntegral,
                     const QuadratureBudget& budget = {});

/// m-th moment, m >= 1, in closed form via the lower incomplete gamma.
double last_zero_moment(const DriftClock& clock, int m);

/// E exp(gamma * T): e^{-mu^2 t/2} 1F1(gamma t;1/2,1)
/// + (mu^2/2) int_0^t e^{-mu^2 a/2} 1F1(gamma a;1/2,1) da.
double last_zero_mgf(const DriftClock& clock, double gamma,
                     const QuadratureBudget& budget = {});

/// t -> infinity limit law: Gamma(1/2, rate mu^2/2), CDF erf(|mu| sqrt(a/2)).
/// Requires mu != 0.
double last_zero_cdf_infinite_horizon(double mu, double a);

/// Second-order small-mu approximations of the density and CDF.
SmallMuApprox last_zero_small_mu(const DriftClock& clock, double a);

/// The mixture weight (density at w, atom at t) of the representation above.
MixtureWeight mixture_weight(const DriftClock& clock, double w);

}  // namespace zerocross::lastzero
