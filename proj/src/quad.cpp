#include "zerocross/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace zerocross::quad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK dqk15).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double value = 0.0;
  double err = 0.0;
};

Piece gk15(const Integrand& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kronrod = kWgk[7] * fc;
  double gauss = kWg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double x = h * kXgk[j];
    const double fsum = f(c - x) + f(c + x);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  if (!std::isfinite(kronrod)) {
    throw std::domain_error("quad: integrand returned a non-finite value");
  }
  return {kronrod, std::abs(kronrod - gauss)};
}

struct Accum {
  double value = 0.0;
  double err = 0.0;
};

void refine(const Integrand& f, double lo, double hi, double tol, int depth,
            const QuadratureBudget& budget, Accum& acc) {
  if (budget.deadline &&
      std::chrono::steady_clock::now() > *budget.deadline) {
    throw QuadratureBudgetError("quad: cooperative deadline exceeded",
                                acc.value, acc.err);
  }
  const Piece p = gk15(f, lo, hi);
  if (p.err <= tol || depth >= budget.max_depth) {
    acc.value += p.value;
    acc.err += p.err;
    return;
  }
  const double mid = 0.5 * (lo + hi);
  refine(f, lo, mid, 0.5 * tol, depth + 1, budget, acc);
  refine(f, mid, hi, 0.5 * tol, depth + 1, budget, acc);
}

}  // namespace

double integrate_adaptive(const Integrand& f, double lo, double hi,
                          const QuadratureBudget& budget) {
  if (!(budget.abs_tol > 0.0) || !(budget.rel_tol > 0.0) ||
      budget.max_depth < 1) {
    throw std::invalid_argument("quad: malformed budget");
  }
  if (!(lo <= hi)) throw std::domain_error("quad: requires lo <= hi");
  if (lo == hi) return 0.0;

  const Piece whole = gk15(f, lo, hi);
  const double tol =
      std::max(budget.abs_tol, budget.rel_tol * std::abs(whole.value));
  Accum acc;
  refine(f, lo, hi, tol, 0, budget, acc);
  const double final_tol =
      std::max(budget.abs_tol, budget.rel_tol * std::abs(acc.value));
  if (acc.err > final_tol) {
    throw QuadratureBudgetError(
        "quad: subdivision budget exhausted before reaching tolerance",
        acc.value, acc.err);
  }
  return acc.value;
}

double integrate_left_sqrt_singular(const Integrand& g, double lo, double hi,
                                    const QuadratureBudget& budget) {
  if (!(lo <= hi)) throw std::domain_error("quad: requires lo <= hi");
  if (lo == hi) return 0.0;
  // s = lo + u^2: int g(s)/sqrt(s-lo) ds = 2 int_0^sqrt(hi-lo) g(lo+u^2) du.
  const double span = std::sqrt(hi - lo);
  return 2.0 * integrate_adaptive([&](double u) { return g(lo + u * u); },
                                  0.0, span, budget);
}

double integrate_right_sqrt_singular(const Integrand& g, double lo, double hi,
                                     const QuadratureBudget& budget) {
  if (!(lo <= hi)) throw std::domain_error("quad: requires lo <= hi");
  if (lo == hi) return 0.0;
  const double span = std::sqrt(hi - lo);
  return 2.0 * integrate_adaptive([&](double u) { return g(hi - u * u); },
                                  0.0, span, budget);
}

double integrate_both_sqrt_singular(const Integrand& g, double lo, double hi,
                                    const QuadratureBudget& budget) {
  if (!(lo <= hi)) throw std::domain_error("quad: requires lo <= hi");
  if (lo == hi) return 0.0;
  const double mid = 0.5 * (lo + hi);
  const double left = integrate_left_sqrt_singular(
      [&](double s) { return g(s) / std::sqrt(hi - s); }, lo, mid, budget);
  const double right = integrate_right_sqrt_singular(
      [&](double s) { return g(s) / std::sqrt(s - lo); }, mid, hi, budget);
  return left + right;
}

double integrate_half_line(const Integrand& f, double lo,
                           const QuadratureBudget& budget) {
  // s = lo + u/(1-u), ds = du/(1-u)^2. The integrand must decay fast enough
  // that the mapped values vanish as u -> 1; Kronrod nodes never touch u = 1.
  return integrate_adaptive(
      [&](double u) {
        const double om = 1.0 - u;
        const double s = lo + u / om;
        return f(s) / (om * om);
      },
      0.0, 1.0, budget);
}

}  // namespace zerocross::quad
