#include "zerocross/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zerocross/errors.hpp"
#include "zerocross/iterated.hpp"
#include "zerocross/jointlaw.hpp"
#include "zerocross/lastzero.hpp"
#include "zerocross/mcoracle.hpp"
#include "zerocross/quad.hpp"
#include "zerocross/reflmax.hpp"
#include "zerocross/selftest.hpp"
#include "zerocross/specfun.hpp"

namespace zerocross::cli {

namespace {

namespace lz = lastzero;
namespace jl = jointlaw;
namespace rm = reflmax;
namespace it = iterated;
namespace mc = mcoracle;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Cell {
  bool is_number = true;
  double number = 0.0;
  std::string text;
};

Cell num(double v) { return {true, v, {}}; }
Cell txt(std::string s) { return {false, 0.0, std::move(s)}; }
Cell verdict(bool pass) { return txt(pass ? "PASS" : "FAIL"); }

struct Table {
  std::string command;
  std::vector<std::pair<std::string, Cell>> params;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

void emit(const Table& table, const std::string& format, std::ostream& out) {
  if (format == "json") {
    nlohmann::json doc;
    doc["command"] = table.command;
    doc["params"] = nlohmann::json::object();
    for (const auto& [name, cell] : table.params) {
      if (cell.is_number) {
        doc["params"][name] = cell.number;
      } else {
        doc["params"][name] = cell.text;
      }
    }
    doc["columns"] = table.columns;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
      nlohmann::json jrow = nlohmann::json::array();
      for (const auto& cell : row) {
        if (cell.is_number) {
          jrow.push_back(cell.number);
        } else {
          jrow.push_back(cell.text);
        }
      }
      doc["rows"].push_back(std::move(jrow));
    }
    out << doc.dump() << "\n";
    return;
  }
  out << "# command: " << table.command << "\n# params:";
  for (const auto& [name, cell] : table.params) {
    out << ' ' << name << '='
        << (cell.is_number ? fmt17(cell.number) : cell.text);
  }
  out << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out << (i ? "," : "") << table.columns[i];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << (i ? "," : "")
          << (row[i].is_number ? fmt17(row[i].number) : row[i].text);
    }
    out << "\n";
  }
}

/// "lo:hi:n" with both endpoints included.
std::vector<double> parse_grid(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  int n = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1) {
    throw std::invalid_argument("cli: grid must be lo:hi:n with n >= 1");
  }
  if (n == 1) return {lo};
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1.0);
  return out;
}

struct Ctx {
  double mu = 0.0, mu2 = 0.0, t = 1.0;
  double a = kUnset, b = kUnset, beta = kUnset, alpha = kUnset, x = kUnset,
         gamma = kUnset, w = kUnset;
  std::string a_grid, b_grid, beta_grid, x_grid, gamma_grid, w_grid;
  int n = 1, m = 1;
  double tol = 0.0;
  long long paths = 200000;
  double dt = 1e-4;
  double horizon = 50.0;
  std::uint64_t seed = kDefaultSeed;
  int shards = 8;
  int threads = 0;
  bool printed = false;
  std::string form = "y";
  std::string horizon_kind = "abs";
  std::string format = "csv";
  std::string suite = "quick";
  std::string suite_pos;
  std::string dump_samples;

  std::vector<std::string> argv;
  std::ostream* out = nullptr;
  std::ostream* err = nullptr;
  int exit_code = 0;

  quad::QuadratureBudget budget() const {
    quad::QuadratureBudget b;
    if (tol > 0.0) {
      b.abs_tol = tol;
      b.rel_tol = tol;
    }
    return b;
  }

  mc::McConfig mc_config() const {
    mc::McConfig cfg;
    cfg.paths = paths;
    cfg.dt = dt;
    cfg.seed = seed;
    cfg.shards = shards;
    return cfg;
  }

  std::vector<double> sweep(const std::string& grid, double single,
                            const char* flag) const {
    if (!grid.empty()) return parse_grid(grid);
    if (std::isnan(single)) {
      throw std::invalid_argument(std::string("cli: need --") + flag +
                                  " or --" + flag + "-grid");
    }
    return {single};
  }

  std::string echo() const {
    std::string s = "zerocross";
    for (const auto& arg : argv) s += " " + arg;
    return s;
  }

  Table table(std::vector<std::pair<std::string, Cell>> params,
              std::vector<std::string> columns) const {
    return Table{echo(), std::move(params), std::move(columns), {}};
  }

  void print(const Table& t) const { emit(t, format, *out); }
};

void add_output_flags(CLI::App* cmd, Ctx& ctx) {
  cmd->add_option("--format", ctx.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--tol", ctx.tol, "Quadrature tolerance override");
}

void add_mc_flags(CLI::App* cmd, Ctx& ctx) {
  cmd->add_option("--paths", ctx.paths, "Number of simulated paths");
  cmd->add_option("--dt", ctx.dt, "Simulation time step");
  cmd->add_option("--seed", ctx.seed, "RNG seed");
  cmd->add_option("--shards", ctx.shards, "Independent RNG shards");
  cmd->add_option("--threads", ctx.threads, "Worker thread cap (0 = auto)");
  cmd->add_option("--dump-samples", ctx.dump_samples,
                  "Write raw samples to this CSV file");
}

void dump_if_requested(const Ctx& ctx, const std::vector<double>& samples) {
  if (ctx.dump_samples.empty()) return;
  std::ofstream f(ctx.dump_samples);
  if (!f) throw std::invalid_argument("cli: cannot open --dump-samples file");
  mc::write_samples_csv(f, samples);
}

void dump_if_requested(const Ctx& ctx,
                       const std::vector<std::optional<double>>& samples) {
  if (ctx.dump_samples.empty()) return;
  std::ofstream f(ctx.dump_samples);
  if (!f) throw std::invalid_argument("cli: cannot open --dump-samples file");
  mc::write_samples_csv(f, samples);
}

// ---------------------------------------------------------------- lastzero

void setup_lastzero(CLI::App& app, Ctx& ctx) {
  auto* group = app.add_subcommand("lastzero",
                                   "Marginal law of the last zero-crossing");
  group->require_subcommand(1);

  auto add_clock = [&](CLI::App* cmd) {
    cmd->add_option("--mu", ctx.mu, "Drift");
    cmd->add_option("--t", ctx.t, "Horizon");
  };

  auto* cdf = group->add_subcommand("cdf", "Distribution function");
  add_clock(cdf);
  cdf->add_option("--a", ctx.a, "Evaluation time");
  cdf->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  cdf->add_option("--form", ctx.form, "y | s | angular");
  add_output_flags(cdf, ctx);
  cdf->callback([&ctx] {
    lz::CdfForm form = lz::CdfForm::YIntegral;
    if (ctx.form == "s") form = lz::CdfForm::SIntegral;
    else if (ctx.form == "angular") form = lz::CdfForm::Angular;
    else if (ctx.form != "y") throw std::invalid_argument("cli: bad --form");
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)},
                        {"form", txt(ctx.form)}},
                       {"a", "cdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a), num(lz::last_zero_cdf({ctx.mu, ctx.t}, a, form,
                                         ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* pdf = group->add_subcommand("pdf", "Density");
  add_clock(pdf);
  pdf->add_option("--a", ctx.a, "Evaluation time");
  pdf->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  pdf->add_option("--form", ctx.form, "y | s | erf");
  add_output_flags(pdf, ctx);
  pdf->callback([&ctx] {
    lz::PdfForm form = lz::PdfForm::YIntegral;
    if (ctx.form == "s") form = lz::PdfForm::SIntegral;
    else if (ctx.form == "erf") form = lz::PdfForm::ErfForm;
    else if (ctx.form != "y") throw std::invalid_argument("cli: bad --form");
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)},
                        {"form", txt(ctx.form)}},
                       {"a", "pdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a), num(lz::last_zero_pdf({ctx.mu, ctx.t}, a, form,
                                         ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* moment = group->add_subcommand("moment", "Integer moments");
  add_clock(moment);
  moment->add_option("--m", ctx.m, "Moment order")->required();
  add_output_flags(moment, ctx);
  moment->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}},
                       {"m", "moment"});
    t.rows.push_back({num(ctx.m),
                      num(lz::last_zero_moment({ctx.mu, ctx.t}, ctx.m))});
    ctx.print(t);
  });

  auto* mgf = group->add_subcommand("mgf", "Moment generating function");
  add_clock(mgf);
  mgf->add_option("--gamma", ctx.gamma, "MGF argument");
  mgf->add_option("--gamma-grid", ctx.gamma_grid, "Sweep lo:hi:n");
  add_output_flags(mgf, ctx);
  mgf->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}},
                       {"gamma", "mgf"});
    for (double g : ctx.sweep(ctx.gamma_grid, ctx.gamma, "gamma")) {
      t.rows.push_back(
          {num(g), num(lz::last_zero_mgf({ctx.mu, ctx.t}, g, ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* limit = group->add_subcommand("limit", "t -> infinity Gamma law");
  limit->add_option("--mu", ctx.mu, "Drift (nonzero)");
  limit->add_option("--a", ctx.a, "Evaluation time");
  limit->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  add_output_flags(limit, ctx);
  limit->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}}, {"a", "cdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a), num(lz::last_zero_cdf_infinite_horizon(ctx.mu, a))});
    }
    ctx.print(t);
  });
}

// ---------------------------------------------------------------- jointlaw

void setup_joint(CLI::App& app, Ctx& ctx) {
  auto* group = app.add_subcommand(
      "joint", "Joint law of the last zero before t and first return after");
  group->require_subcommand(1);

  auto add_clock = [&](CLI::App* cmd) {
    cmd->add_option("--mu", ctx.mu, "Drift");
    cmd->add_option("--t", ctx.t, "Horizon");
  };

  auto* survival = group->add_subcommand("survival", "P(T0 < a, T+ > b)");
  add_clock(survival);
  survival->add_option("--a", ctx.a)->required();
  survival->add_option("--b", ctx.b, "Return bound (inf allowed)");
  survival->add_option("--b-grid", ctx.b_grid, "Sweep lo:hi:n");
  add_output_flags(survival, ctx);
  survival->callback([&ctx] {
    auto t = ctx.table(
        {{"mu", num(ctx.mu)}, {"t", num(ctx.t)}, {"a", num(ctx.a)}},
        {"b", "survival"});
    for (double b : ctx.sweep(ctx.b_grid, ctx.b, "b")) {
      t.rows.push_back({num(b), num(jl::joint_survival({ctx.mu, ctx.t}, ctx.a,
                                                       b, ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* pdf = group->add_subcommand("pdf", "Joint density at (a, b)");
  add_clock(pdf);
  pdf->add_option("--a", ctx.a)->required();
  pdf->add_option("--b", ctx.b);
  pdf->add_option("--b-grid", ctx.b_grid, "Sweep lo:hi:n");
  add_output_flags(pdf, ctx);
  pdf->callback([&ctx] {
    auto t = ctx.table(
        {{"mu", num(ctx.mu)}, {"t", num(ctx.t)}, {"a", num(ctx.a)}},
        {"b", "pdf"});
    for (double b : ctx.sweep(ctx.b_grid, ctx.b, "b")) {
      t.rows.push_back({num(b), num(jl::joint_pdf({ctx.mu, ctx.t}, ctx.a, b))});
    }
    ctx.print(t);
  });

  auto* ret = group->add_subcommand("return-pdf", "Marginal return density");
  add_clock(ret);
  ret->add_option("--b", ctx.b);
  ret->add_option("--b-grid", ctx.b_grid, "Sweep lo:hi:n");
  add_output_flags(ret, ctx);
  ret->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}}, {"b", "pdf"});
    for (double b : ctx.sweep(ctx.b_grid, ctx.b, "b")) {
      t.rows.push_back({num(b), num(jl::return_time_pdf({ctx.mu, ctx.t}, b))});
    }
    ctx.print(t);
  });

  auto* never = group->add_subcommand(
      "never", "No-return probability (conditional when --a is given)");
  add_clock(never);
  never->add_option("--a", ctx.a, "Condition on T0 = a");
  add_output_flags(never, ctx);
  never->callback([&ctx] {
    if (std::isnan(ctx.a)) {
      auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}},
                         {"p_never_return"});
      t.rows.push_back({num(jl::p_never_return({ctx.mu, ctx.t}))});
      ctx.print(t);
    } else {
      auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}},
                         {"a", "p_never_return_given_last"});
      t.rows.push_back(
          {num(ctx.a),
           num(jl::p_never_return_given_last({ctx.mu, ctx.t}, ctx.a))});
      ctx.print(t);
    }
  });

  auto* cond_a = group->add_subcommand(
      "cond-a", "Density of T0 given the return time (drift-free)");
  cond_a->add_option("--t", ctx.t, "Horizon");
  cond_a->add_option("--a", ctx.a);
  cond_a->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  cond_a->add_option("--b", ctx.b)->required();
  add_output_flags(cond_a, ctx);
  cond_a->callback([&ctx] {
    auto t = ctx.table({{"t", num(ctx.t)}, {"b", num(ctx.b)}}, {"a", "pdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a), num(jl::cond_last_given_return_pdf(ctx.t, a, ctx.b))});
    }
    ctx.print(t);
  });

  auto* cond_b = group->add_subcommand(
      "cond-b", "Density of the return time given T0 = a");
  add_clock(cond_b);
  cond_b->add_option("--a", ctx.a)->required();
  cond_b->add_option("--b", ctx.b);
  cond_b->add_option("--b-grid", ctx.b_grid, "Sweep lo:hi:n");
  add_output_flags(cond_b, ctx);
  cond_b->callback([&ctx] {
    auto t = ctx.table(
        {{"mu", num(ctx.mu)}, {"t", num(ctx.t)}, {"a", num(ctx.a)}},
        {"b", "pdf"});
    for (double b : ctx.sweep(ctx.b_grid, ctx.b, "b")) {
      t.rows.push_back(
          {num(b),
           num(jl::cond_return_given_last_pdf({ctx.mu, ctx.t}, ctx.a, b))});
    }
    ctx.print(t);
  });

  auto* straddle =
      group->add_subcommand("straddle", "Zero-free straddle interval length");
  add_clock(straddle);
  straddle->add_option("--w", ctx.w);
  straddle->add_option("--w-grid", ctx.w_grid, "Sweep lo:hi:n");
  add_output_flags(straddle, ctx);
  straddle->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}}, {"w", "pdf"});
    for (double w : ctx.sweep(ctx.w_grid, ctx.w, "w")) {
      t.rows.push_back(
          {num(w), num(jl::straddle_length_pdf({ctx.mu, ctx.t}, w))});
    }
    ctx.print(t);
  });
}

// ----------------------------------------------------------------- reflmax

void setup_reflmax(CLI::App& app, Ctx& ctx) {
  auto* group =
      app.add_subcommand("reflmax", "Barrier and running-maximum laws");
  group->require_subcommand(1);

  auto add_clock = [&](CLI::App* cmd) {
    cmd->add_option("--mu", ctx.mu, "Drift");
    cmd->add_option("--t", ctx.t, "Horizon");
  };

  auto* triple = group->add_subcommand(
      "triple", "Two-barrier density of (B, max, min) at --x");
  add_clock(triple);
  triple->add_option("--alpha", ctx.alpha, "Lower barrier")->required();
  triple->add_option("--beta", ctx.beta, "Upper barrier")->required();
  triple->add_option("--x", ctx.x, "Endpoint value");
  triple->add_option("--x-grid", ctx.x_grid, "Sweep lo:hi:n");
  triple->add_flag("--printed", ctx.printed,
                   "Use the per-image drift weights kept for comparison");
  add_output_flags(triple, ctx);
  triple->callback([&ctx] {
    const auto weights = ctx.printed ? rm::ImageWeights::AsPrinted
                                     : rm::ImageWeights::Girsanov;
    auto t = ctx.table({{"mu", num(ctx.mu)},
                        {"t", num(ctx.t)},
                        {"alpha", num(ctx.alpha)},
                        {"beta", num(ctx.beta)}},
                       {"x", "density"});
    for (double x : ctx.sweep(ctx.x_grid, ctx.x, "x")) {
      t.rows.push_back(
          {num(x), num(rm::two_barrier_density({ctx.mu, ctx.t},
                                               {ctx.alpha, ctx.beta}, x, {},
                                               weights))});
    }
    ctx.print(t);
  });

  auto* maxabs = group->add_subcommand("maxabs", "CDF of max |B^mu|");
  add_clock(maxabs);
  maxabs->add_option("--beta", ctx.beta);
  maxabs->add_option("--beta-grid", ctx.beta_grid, "Sweep lo:hi:n");
  maxabs->add_flag("--printed", ctx.printed,
                   "Use the f(r) weights kept for comparison");
  add_output_flags(maxabs, ctx);
  maxabs->callback([&ctx] {
    const auto weights = ctx.printed ? rm::ImageWeights::AsPrinted
                                     : rm::ImageWeights::Girsanov;
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)}},
                       {"beta", "cdf"});
    for (double beta : ctx.sweep(ctx.beta_grid, ctx.beta, "beta")) {
      t.rows.push_back(
          {num(beta),
           num(rm::max_abs_cdf({ctx.mu, ctx.t}, beta, {}, weights))});
    }
    ctx.print(t);
  });

  auto* onesided = group->add_subcommand("onesided", "CDF of max B^mu");
  add_clock(onesided);
  onesided->add_option("--beta", ctx.beta);
  onesided->add_option("--beta-grid", ctx.beta_grid, "Sweep lo:hi:n");
  onesided->add_option("--x", ctx.x, "Start point y0 (default 0)");
  add_output_flags(onesided, ctx);
  onesided->callback([&ctx] {
    const double y0 = std::isnan(ctx.x) ? 0.0 : ctx.x;
    auto t = ctx.table(
        {{"mu", num(ctx.mu)}, {"t", num(ctx.t)}, {"y0", num(y0)}},
        {"beta", "cdf"});
    for (double beta : ctx.sweep(ctx.beta_grid, ctx.beta, "beta")) {
      t.rows.push_back(
          {num(beta), num(rm::max_onesided_cdf({ctx.mu, ctx.t}, beta, y0))});
    }
    ctx.print(t);
  });

  auto* bridge =
      group->add_subcommand("bridge", "CDF of max |bridge| (KS series)");
  bridge->add_option("--t", ctx.t, "Horizon");
  bridge->add_option("--beta", ctx.beta);
  bridge->add_option("--beta-grid", ctx.beta_grid, "Sweep lo:hi:n");
  bridge->add_option("--mu", ctx.mu,
                     "Also tabulate the mu-tilted ratio route");
  add_output_flags(bridge, ctx);
  bridge->callback([&ctx] {
    auto t = ctx.table({{"t", num(ctx.t)}, {"mu", num(ctx.mu)}},
                       {"beta", "cdf", "ratio_route"});
    for (double beta : ctx.sweep(ctx.beta_grid, ctx.beta, "beta")) {
      t.rows.push_back(
          {num(beta), num(rm::bridge_max_abs_cdf(ctx.t, beta)),
           num(rm::bridge_max_abs_cdf_ratio({ctx.mu, ctx.t}, beta))});
    }
    ctx.print(t);
  });
}

// ---------------------------------------------------------------- iterated

void setup_iter(CLI::App& app, Ctx& ctx) {
  auto* group = app.add_subcommand("iter", "Iterated and nested laws");
  group->require_subcommand(1);

  auto* pdf = group->add_subcommand("pdf", "Iterated Brownian motion density");
  pdf->add_option("--mu", ctx.mu, "Outer drift");
  pdf->add_option("--mu2", ctx.mu2, "Inner drift");
  pdf->add_option("--t", ctx.t, "Horizon");
  pdf->add_option("--x", ctx.x);
  pdf->add_option("--x-grid", ctx.x_grid, "Sweep lo:hi:n");
  add_output_flags(pdf, ctx);
  pdf->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"mu2", num(ctx.mu2)},
                        {"t", num(ctx.t)}},
                       {"x", "pdf"});
    for (double x : ctx.sweep(ctx.x_grid, ctx.x, "x")) {
      t.rows.push_back({num(x), num(it::iterated_bm_pdf(ctx.mu, ctx.mu2, ctx.t,
                                                        x, ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* lastzero_cmd = group->add_subcommand(
      "lastzero", "Last zero of the outer motion before the inner max span");
  lastzero_cmd->add_option("--mu", ctx.mu, "Outer drift");
  lastzero_cmd->add_option("--mu2", ctx.mu2, "Inner drift (default 0)");
  lastzero_cmd->add_option("--t", ctx.t, "Horizon");
  lastzero_cmd->add_option("--a", ctx.a);
  lastzero_cmd->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  lastzero_cmd->add_option("--horizon-kind", ctx.horizon_kind,
                           "abs | onesided");
  add_output_flags(lastzero_cmd, ctx);
  lastzero_cmd->callback([&ctx] {
    it::HorizonKind kind = it::HorizonKind::AbsMax;
    if (ctx.horizon_kind == "onesided") kind = it::HorizonKind::OneSidedMax;
    else if (ctx.horizon_kind != "abs") {
      throw std::invalid_argument("cli: bad --horizon-kind");
    }
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"mu2", num(ctx.mu2)},
                        {"t", num(ctx.t)}, {"horizon_kind", txt(ctx.horizon_kind)}},
                       {"a", "cdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a), num(it::iter_last_zero_cdf_drifted_inner(
                       ctx.mu, ctx.mu2, ctx.t, a, kind, ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* nested = group->add_subcommand(
      "nested", "Last zero before another motion's last zero");
  nested->add_option("--mu", ctx.mu, "Outer drift");
  nested->add_option("--mu2", ctx.mu2, "Horizon-motion drift");
  nested->add_option("--t", ctx.t, "Horizon");
  nested->add_option("--a", ctx.a);
  nested->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  add_output_flags(nested, ctx);
  nested->callback([&ctx] {
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"mu2", num(ctx.mu2)},
                        {"t", num(ctx.t)}},
                       {"a", "cdf", "pdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back(
          {num(a),
           num(it::nested_last_zero_cdf(ctx.mu, ctx.mu2, ctx.t, a,
                                        ctx.budget())),
           num(it::nested_last_zero_pdf(ctx.mu, ctx.mu2, ctx.t, a,
                                        ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* nfold_pdf = group->add_subcommand("nfold-pdf",
                                          "Driftless n-fold nested density");
  nfold_pdf->add_option("--n", ctx.n, "Number of motions")->required();
  nfold_pdf->add_option("--t", ctx.t, "Horizon");
  nfold_pdf->add_option("--a", ctx.a);
  nfold_pdf->add_option("--a-grid", ctx.a_grid, "Sweep lo:hi:n");
  add_output_flags(nfold_pdf, ctx);
  nfold_pdf->callback([&ctx] {
    auto t = ctx.table({{"n", num(ctx.n)}, {"t", num(ctx.t)}}, {"a", "pdf"});
    for (double a : ctx.sweep(ctx.a_grid, ctx.a, "a")) {
      t.rows.push_back({num(a), num(it::nfold_last_zero_pdf(ctx.n, ctx.t, a,
                                                            ctx.budget()))});
    }
    ctx.print(t);
  });

  auto* nfold_moment = group->add_subcommand("nfold-moment",
                                             "Exact n-fold moments");
  nfold_moment->add_option("--n", ctx.n, "Number of motions")->required();
  nfold_moment->add_option("--m", ctx.m, "Moment order")->required();
  nfold_moment->add_option("--t", ctx.t, "Horizon");
  add_output_flags(nfold_moment, ctx);
  nfold_moment->callback([&ctx] {
    auto t = ctx.table({{"n", num(ctx.n)}, {"t", num(ctx.t)}},
                       {"m", "moment"});
    t.rows.push_back(
        {num(ctx.m), num(it::nfold_moment(ctx.n, ctx.m, ctx.t))});
    ctx.print(t);
  });

  auto* nfold_mgf = group->add_subcommand("nfold-mgf", "n-fold MGF series");
  nfold_mgf->add_option("--n", ctx.n, "Number of motions")->required();
  nfold_mgf->add_option("--t", ctx.t, "Horizon");
  nfold_mgf->add_option("--gamma", ctx.gamma, "MGF argument");
  nfold_mgf->add_option("--gamma-grid", ctx.gamma_grid, "Sweep lo:hi:n");
  add_output_flags(nfold_mgf, ctx);
  nfold_mgf->callback([&ctx] {
    auto t = ctx.table({{"n", num(ctx.n)}, {"t", num(ctx.t)}},
                       {"gamma", "mgf"});
    for (double g : ctx.sweep(ctx.gamma_grid, ctx.gamma, "gamma")) {
      t.rows.push_back({num(g), num(it::nfold_mgf(ctx.n, ctx.t, g))});
    }
    ctx.print(t);
  });
}

// ---------------------------------------------------------------------- mc

void setup_mc(CLI::App& app, Ctx& ctx) {
  auto* group = app.add_subcommand("mc", "Monte Carlo oracle experiments");
  group->require_subcommand(1);

  auto add_clock = [&](CLI::App* cmd) {
    cmd->add_option("--mu", ctx.mu, "Drift");
    cmd->add_option("--t", ctx.t, "Horizon");
  };

  auto* lz_cmd = group->add_subcommand(
      "lastzero", "Empirical last-zero CDF against the analytic law");
  add_clock(lz_cmd);
  lz_cmd->add_option("--a-grid", ctx.a_grid, "Comparison grid lo:hi:n");
  add_mc_flags(lz_cmd, ctx);
  add_output_flags(lz_cmd, ctx);
  lz_cmd->callback([&ctx] {
    const auto samples =
        mc::sample_last_zero(ctx.mu, ctx.t, ctx.mc_config(), ctx.threads);
    dump_if_requested(ctx, samples);
    const std::string grid = ctx.a_grid.empty()
                                 ? fmt17(0.1 * ctx.t) + ":" +
                                       fmt17(0.9 * ctx.t) + ":9"
                                 : ctx.a_grid;
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)},
                        {"paths", num(static_cast<double>(ctx.paths))},
                        {"dt", num(ctx.dt)},
                        {"seed", num(static_cast<double>(ctx.seed))}},
                       {"a", "analytic", "mc", "std_error", "z", "verdict"});
    for (double a : parse_grid(grid)) {
      const auto est = mc::estimate_cdf_at(samples, a);
      const double want = lz::last_zero_cdf({ctx.mu, ctx.t}, a);
      const double z = (est.value - want) / (est.std_error + 1e-300);
      t.rows.push_back({num(a), num(want), num(est.value),
                        num(est.std_error), num(z),
                        verdict(std::abs(z) <= 3.0)});
    }
    ctx.print(t);
  });

  auto* ret_cmd = group->add_subcommand(
      "return", "Censored first-return experiment against the no-return law");
  add_clock(ret_cmd);
  ret_cmd->add_option("--horizon", ctx.horizon, "Censoring horizon");
  add_mc_flags(ret_cmd, ctx);
  add_output_flags(ret_cmd, ctx);
  ret_cmd->callback([&ctx] {
    const auto samples = mc::sample_first_return_after(
        ctx.mu, ctx.t, ctx.horizon, ctx.mc_config(), ctx.threads);
    dump_if_requested(ctx, samples);
    const auto censored = mc::estimate_censored_fraction(samples);
    const double want = jl::p_never_return({ctx.mu, ctx.t});
    const double z = (censored.value - want) / (censored.std_error + 1e-300);
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)},
                        {"horizon", num(ctx.horizon)},
                        {"paths", num(static_cast<double>(ctx.paths))},
                        {"dt", num(ctx.dt)},
                        {"seed", num(static_cast<double>(ctx.seed))}},
                       {"quantity", "analytic", "mc", "std_error", "z",
                        "verdict"});
    t.rows.push_back({txt("censored_fraction"), num(want), num(censored.value),
                      num(censored.std_error), num(z),
                      verdict(std::abs(z) <= 3.0)});
    ctx.print(t);
  });

  auto* maxabs_cmd = group->add_subcommand(
      "maxabs", "Empirical max-|B| CDF against the image series");
  add_clock(maxabs_cmd);
  maxabs_cmd->add_option("--beta-grid", ctx.beta_grid, "Comparison grid");
  add_mc_flags(maxabs_cmd, ctx);
  add_output_flags(maxabs_cmd, ctx);
  maxabs_cmd->callback([&ctx] {
    const auto samples =
        mc::sample_max_abs(ctx.mu, ctx.t, ctx.mc_config(), ctx.threads);
    dump_if_requested(ctx, samples);
    const std::string grid =
        ctx.beta_grid.empty() ? "0.6:2:5" : ctx.beta_grid;
    // grid-resolution maxima are biased low by O(sqrt(dt))
    const double bias = 1.2 * std::sqrt(ctx.dt);
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"t", num(ctx.t)},
                        {"paths", num(static_cast<double>(ctx.paths))},
                        {"dt", num(ctx.dt)},
                        {"seed", num(static_cast<double>(ctx.seed))}},
                       {"beta", "analytic", "mc", "std_error", "z", "verdict"});
    for (double beta : parse_grid(grid)) {
      const auto est = mc::estimate_cdf_at(samples, beta);
      const double want = rm::max_abs_cdf({ctx.mu, ctx.t}, beta);
      const double z = (est.value - want) / (est.std_error + 1e-300);
      const bool pass =
          std::abs(est.value - want) <= 3.0 * est.std_error + bias;
      t.rows.push_back({num(beta), num(want), num(est.value),
                        num(est.std_error), num(z), verdict(pass)});
    }
    ctx.print(t);
  });

  auto* nested_cmd =
      group->add_subcommand("nested", "Nested recursion moments");
  nested_cmd->add_option("--n", ctx.n, "Depth (number of motions)")
      ->required();
  nested_cmd->add_option("--mu", ctx.mu, "Drift applied to every motion");
  nested_cmd->add_option("--t", ctx.t, "Horizon");
  add_mc_flags(nested_cmd, ctx);
  add_output_flags(nested_cmd, ctx);
  nested_cmd->callback([&ctx] {
    it::NestedSpec spec{ctx.n, std::vector<double>(ctx.n, ctx.mu), ctx.t};
    const auto samples =
        mc::sample_nested(spec, ctx.mc_config(), ctx.threads);
    dump_if_requested(ctx, samples);
    auto t = ctx.table({{"n", num(ctx.n)}, {"mu", num(ctx.mu)},
                        {"t", num(ctx.t)},
                        {"paths", num(static_cast<double>(ctx.paths))},
                        {"dt", num(ctx.dt)},
                        {"seed", num(static_cast<double>(ctx.seed))}},
                       {"moment", "analytic", "mc", "std_error", "z",
                        "verdict"});
    for (int m : {1, 2}) {
      const auto est = mc::estimate_moment(samples, m);
      if (ctx.mu == 0.0) {
        const double want = it::nfold_moment(ctx.n, m, ctx.t);
        const double z = (est.value - want) / (est.std_error + 1e-300);
        t.rows.push_back({num(m), num(want), num(est.value),
                          num(est.std_error), num(z),
                          verdict(std::abs(z) <= 3.0)});
      } else {
        t.rows.push_back({num(m), txt(""), num(est.value),
                          num(est.std_error), txt(""), txt("")});
      }
    }
    ctx.print(t);
  });

  auto* iter_cmd = group->add_subcommand(
      "iterated", "Iterated-composition CDF against the analytic law");
  iter_cmd->add_option("--mu", ctx.mu, "Outer drift");
  iter_cmd->add_option("--mu2", ctx.mu2, "Inner drift (default 0)");
  iter_cmd->add_option("--t", ctx.t, "Horizon");
  iter_cmd->add_option("--a-grid", ctx.a_grid, "Comparison grid");
  iter_cmd->add_option("--horizon-kind", ctx.horizon_kind, "abs | onesided");
  add_mc_flags(iter_cmd, ctx);
  add_output_flags(iter_cmd, ctx);
  iter_cmd->callback([&ctx] {
    it::HorizonKind kind = it::HorizonKind::AbsMax;
    if (ctx.horizon_kind == "onesided") kind = it::HorizonKind::OneSidedMax;
    const auto samples = mc::sample_iterated_last_zero(
        ctx.mu, ctx.t, ctx.mc_config(), ctx.threads, ctx.mu2, kind);
    dump_if_requested(ctx, samples);
    const std::string grid = ctx.a_grid.empty() ? "0.2:2.2:5" : ctx.a_grid;
    auto t = ctx.table({{"mu", num(ctx.mu)}, {"mu2", num(ctx.mu2)},
                        {"t", num(ctx.t)},
                        {"paths", num(static_cast<double>(ctx.paths))},
                        {"dt", num(ctx.dt)},
                        {"seed", num(static_cast<double>(ctx.seed))}},
                       {"a", "analytic", "mc", "std_error", "z", "verdict"});
    for (double a : parse_grid(grid)) {
      const auto est = mc::estimate_cdf_at(samples, a);
      const double want = it::iter_last_zero_cdf_drifted_inner(
          ctx.mu, ctx.mu2, ctx.t, a, kind);
      const double z = (est.value - want) / (est.std_error + 1e-300);
      t.rows.push_back({num(a), num(want), num(est.value),
                        num(est.std_error), num(z),
                        verdict(std::abs(z) <= 3.0)});
    }
    ctx.print(t);
  });
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
  CLI::App app{"Closed-form and Monte Carlo laws of Brownian zero-crossings"};
  app.name("zerocross");
  app.require_subcommand(1);

  Ctx ctx;
  ctx.argv = args;
  ctx.out = &out;
  ctx.err = &err;

  setup_lastzero(app, ctx);
  setup_joint(app, ctx);
  setup_reflmax(app, ctx);
  setup_iter(app, ctx);
  setup_mc(app, ctx);

  auto* selftest_cmd = app.add_subcommand(
      "selftest", "Run the analytic-vs-MC verification suite");
  selftest_cmd->add_option("--suite", ctx.suite, "quick | full");
  selftest_cmd->add_option("which", ctx.suite_pos, "quick | full");
  selftest_cmd->add_option("--seed", ctx.seed, "RNG seed");
  selftest_cmd->add_option("--threads", ctx.threads, "Worker thread cap");
  selftest_cmd->callback([&ctx] {
    std::string which = ctx.suite_pos.empty() ? ctx.suite : ctx.suite_pos;
    selftest::Suite suite;
    if (which == "quick") suite = selftest::Suite::Quick;
    else if (which == "full") suite = selftest::Suite::Full;
    else throw std::invalid_argument("cli: suite must be quick or full");
    const int failures =
        selftest::run(suite, ctx.seed, ctx.threads, *ctx.out);
    ctx.exit_code = failures == 0 ? 0 : 1;
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    err << app.help();
    return 2;
  } catch (const QuadratureBudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const SeriesBudgetError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::overflow_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return ctx.exit_code;
}

}  // namespace zerocross::cli
