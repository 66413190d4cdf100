#pragma once

#include <vector>

#include "zerocross/quad.hpp"
#include "zerocross/reflmax.hpp"
#include "zerocross/types.hpp"

namespace zerocross::iterated {

using quad::QuadratureBudget;
using reflmax::SeriesBudget;

/// Which functional of the inner motion sets the outer horizon.
enum class HorizonKind { AbsMax, OneSidedMax };

/// Recursively nested zero-crossing times: depth n uses n independent
/// motions, motion n simulated on [0, t], each following motion on
/// [0, previous last zero]. Analytic evaluation is offered for depth <= 3;
/// beyond that only the Monte Carlo route exists.
struct NestedSpec {
  int depth = 1;
  std::vector<double> drifts;  // one drift per motion, outermost first
  double t = 1.0;
};

void validate(const NestedSpec& spec);

/// Density of B_1^{mu1}(|B_2^{mu2}(t)|) at x.
double iterated_bm_pdf(double mu1, double mu2, double t, double x,
                       const QuadratureBudget& budget = {});

/// CDF of the last zero of B_1^mu before max_{z<=t} |B_2(z)| (inner motion
/// driftless).
double iter_last_zero_cdf(double mu, double t, double a,
                          const QuadratureBudget& qbudget = {},
                          const SeriesBudget& sbudget = {});

/// Same with a drifted inner motion; the horizon is max |B_2^{mu2}| or the
/// one-sided max of B_2^{mu2} per `kind`.
double iter_last_zero_cdf_drifted_inner(double mu1, double mu2, double t,
                                        double a,
                                        HorizonKind kind = HorizonKind::AbsMax,
                                        const QuadratureBudget& qbudget = {},
                                        const SeriesBudget& sbudget = {});

/// CDF/density of the last zero of B^{mu1} before the last zero of B^{mu2}
/// before t.
double nested_last_zero_cdf(double mu1, double mu2, double t, double a,
                            const QuadratureBudget& budget = {});
double nested_last_zero_pdf(double mu1, double mu2, double t, double a,
                            const QuadratureBudget& budget = {});

/// Driftless n-fold nested density, n motions (n = 1 is the plain arcsine
/// law, n = 2 the nested law). Analytic for n <= 3.
double nfold_last_zero_pdf(int n, double t, double a,
                           const QuadratureBudget& budget = {});

/// E[(nT)^m] = (C(2m,m)/2^{2m})^n t^m, exact.
double nfold_moment(int n, int m, double t);

/// MGF sum_m (alpha t/4)^m (2m)!^n / (m!)^{2n+1}; for n = 1 equals
/// 1F1(alpha t; 1/2, 1).
double nfold_mgf(int n, double t, double alpha);

}  // namespace zerocross::iterated
