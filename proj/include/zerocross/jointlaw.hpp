#pragma once

#include <optional>

#include "zerocross/quad.hpp"
#include "zerocross/types.hpp"

namespace zerocross::jointlaw {

using quad::QuadratureBudget;

/// One observed pair: last zero before t and first return after t.
/// The return is defective under drift; an absent value means "never".
struct ZeroCrossingPair {
  double last_zero = 0.0;
  std::optional<double> first_return{};
};

/// P(T_{0,t} < a, T_{t,0} > b) for 0 < a < t < b; b may be +infinity.
double joint_survival(const DriftClock& clock, double a, double b,
                      const QuadratureBudget& budget = {});

/// Joint density e^{-mu^2 b/2} / (2 pi sqrt(a (b-a)^3)) on 0 < a < t < b.
double joint_pdf(const DriftClock& clock, double a, double b);

/// int_{b_lo}^inf joint_pdf(a, b) db in closed form (erfc antiderivative).
double joint_return_tail(const DriftClock& clock, double a, double b_lo);

/// Marginal density of the first return, e^{-mu^2 b/2} sqrt(t/(b-t)) / (pi b).
double return_time_pdf(const DriftClock& clock, double b);

/// P(T_{t,0} = infinity) = erf(|mu| sqrt(t/2)).
double p_never_return(const DriftClock& clock);

/// Density of T_{0,t} given T_{t,0} = b; drift-free by cancellation.
double cond_last_given_return_pdf(double t, double a, double b);

/// Density of T_{t,0} given T_{0,t} = a (defective; see
/// p_never_return_given_last for the mass at infinity).
double cond_return_given_last_pdf(const DriftClock& clock, double a, double b);

/// P(T_{t,0} = infinity | T_{0,t} = a).
double p_never_return_given_last(const DriftClock& clock, double a);

/// Joint density of {T_{0,t} in da, T_{t,0} = infinity}:
/// |mu| e^{-mu^2 a/2} / sqrt(2 pi a).
double last_zero_no_return_density(double mu, double a);

/// Density of the zero-free interval length T_{t,0} - T_{0,t} straddling t.
double straddle_length_pdf(const DriftClock& clock, double w);

}  // namespace zerocross::jointlaw
