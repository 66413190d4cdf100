#pragma once

#include <chrono>
#include <functional>
#include <optional>

#include "zerocross/errors.hpp"

namespace zerocross::quad {

using Integrand = std::function<double(double)>;

struct QuadratureBudget {
  double abs_tol = 1e-10;
  double rel_tol = 1e-9;
  int max_depth = 40;
  /// Optional cooperative deadline; long-running integrations throw
  /// QuadratureBudgetError once it passes.
  std::optional<std::chrono::steady_clock::time_point> deadline{};
};

/// Adaptive Gauss-Kronrod (G7, K15) with bisection. Returns an estimate of
/// int_lo^hi f within max(abs_tol, rel_tol*|I|); lo == hi returns 0.
/// Throws QuadratureBudgetError when the depth budget is exhausted.
double integrate_adaptive(const Integrand& f, double lo, double hi,
                          const QuadratureBudget& budget = {});

/// int_lo^hi g(s)/sqrt(s - lo) ds, evaluated after the substitution
/// s = lo + u^2 which removes the endpoint singularity.
double integrate_left_sqrt_singular(const Integrand& g, double lo, double hi,
                                    const QuadratureBudget& budget = {});

/// int_lo^hi g(s)/sqrt(hi - s) ds, by reflection onto the left-singular case.
double integrate_right_sqrt_singular(const Integrand& g, double lo, double hi,
                                     const QuadratureBudget& budget = {});

/// int_lo^hi g(s)/sqrt((s - lo)(hi - s)) ds: split at the midpoint, each half
/// handled by the one-sided substitution.
double integrate_both_sqrt_singular(const Integrand& g, double lo, double hi,
                                    const QuadratureBudget& budget = {});

/// int_lo^inf f, mapped onto [0,1) by s = lo + u/(1-u).
double integrate_half_line(const Integrand& f, double lo,
                           const QuadratureBudget& budget = {});

}  // namespace zerocross::quad
