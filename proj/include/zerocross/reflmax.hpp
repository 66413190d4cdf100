#pragma once

#include "zerocross/errors.hpp"
#include "zerocross/types.hpp"

namespace zerocross::reflmax {

/// Two absorbing barriers around the start point 0.
struct BarrierBox {
  double alpha = -1.0;  // lower barrier, < 0
  double beta = 1.0;    // upper barrier, > 0
};

struct SeriesBudget {
  int max_terms = 200;
  double tail_tol = 1e-12;
};

/// Which drift weights to attach to the image charges. Girsanov tilts the
/// whole driftless image density by e^{mu y - mu^2 t/2}; it vanishes at both
/// barriers and yields a drift-free bridge law. AsPrinted applies the
/// per-image weight e^{mu(y - 2k(beta-alpha))} and is kept only for
/// comparison experiments.
enum class ImageWeights { Girsanov, AsPrinted };

/// Density of {B^mu(t) in dy, alpha < min < max < beta} at y in (alpha, beta).
double two_barrier_density(const DriftClock& clock, const BarrierBox& box,
                           double y, const SeriesBudget& budget = {},
                           ImageWeights weights = ImageWeights::Girsanov);

/// P(alpha < min < max < beta): the two-barrier density integrated over y,
/// in closed form via normal CDFs.
double two_barrier_mass(const DriftClock& clock, const BarrierBox& box,
                        const SeriesBudget& budget = {},
                        ImageWeights weights = ImageWeights::Girsanov);

/// P(max_{s<=t} |B^mu(s)| < beta). Alternating image series for wide
/// barriers, eigenfunction series for narrow ones.
double max_abs_cdf(const DriftClock& clock, double beta,
                   const SeriesBudget& budget = {},
                   ImageWeights weights = ImageWeights::Girsanov);

/// P(max_{s<=t} B^mu(s) < beta | B^mu(0) = y0), one-sided reflection formula.
double max_onesided_cdf(const DriftClock& clock, double beta, double y0 = 0.0);

/// First-passage-time route to the same probability:
/// 1 - int_0^t (beta-y0) e^{-(beta-y0-mu s)^2/(2s)} / sqrt(2 pi s^3) ds.
double max_onesided_cdf_fpt(const DriftClock& clock, double beta,
                            double y0 = 0.0);

/// P(max |bridge| < beta) = sum_r (-1)^r e^{-2 beta^2 r^2 / t}
/// (Kolmogorov-Smirnov series); drift-free.
double bridge_max_abs_cdf(double t, double beta,
                          const SeriesBudget& budget = {});

/// Same law obtained as two_barrier_density(mu, y=0) over the free density
/// of B^mu(t) at 0. Must not depend on mu.
double bridge_max_abs_cdf_ratio(const DriftClock& clock, double beta,
                                const SeriesBudget& budget = {});

}  // namespace zerocross::reflmax
