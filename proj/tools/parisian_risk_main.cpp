// parisian-risk: evaluate Parisian-ruin quantities for spectrally negative
// Levy insurance risk models, or estimate them by simulation.
//
// Exit codes: 0 success, 1 validation/runtime failure, 2 config or parse
// error, 3 domain-precondition violation.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parisian/gerber_shiu.hpp"
#include "parisian/levy_model.hpp"
#include "parisian/simulator.hpp"
#include "parisian/validation.hpp"

namespace {

using nlohmann::json;
using namespace parisian;

struct GridSpec {
  double lo = 0.0, hi = 0.0;
  int n = 1;
};

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char colon1 = 0, colon2 = 0;
  std::istringstream is(text);
  if (!(is >> g.lo >> colon1 >> g.hi >> colon2 >> g.n) || colon1 != ':' || colon2 != ':' ||
      g.n < 1) {
    throw std::invalid_argument("grid '" + text + "': expected lo:hi:n with n >= 1");
  }
  return g;
}

std::pair<double, double> parse_bin(const std::string& text) {
  double lo = 0.0, hi = 0.0;
  char colon = 0;
  std::istringstream is(text);
  if (!(is >> lo >> colon >> hi) || colon != ':') {
    throw std::invalid_argument("bin '" + text + "': expected lo:hi");
  }
  return {lo, hi};
}

std::vector<double> grid_points(const GridSpec& g) {
  std::vector<double> pts;
  if (g.n == 1) {
    pts.push_back(g.lo);
    return pts;
  }
  for (int i = 0; i < g.n; ++i) {
    pts.push_back(g.lo + (g.hi - g.lo) * double(i) / double(g.n - 1));
  }
  return pts;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

LevyModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

class Output {
 public:
  Output(const std::string& path, bool jsonl) : jsonl_(jsonl) {
    if (!path.empty() && path != "-") {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
  bool jsonl() const { return jsonl_; }

  void header(const std::vector<std::string>& cols) {
    if (jsonl_) return;
    for (std::size_t i = 0; i < cols.size(); ++i) {
      stream() << (i ? "," : "") << cols[i];
    }
    stream() << "\n";
  }
  void row(const std::vector<std::pair<std::string, double>>& fields) {
    if (jsonl_) {
      json j;
      for (const auto& [k, v] : fields) j[k] = v;
      stream() << j.dump() << "\n";
    } else {
      for (std::size_t i = 0; i < fields.size(); ++i) {
        stream() << (i ? "," : "") << fmt(fields[i].second);
      }
      stream() << "\n";
    }
  }

 private:
  std::ofstream file_;
  bool jsonl_;
};

json record_from_estimate(const std::string& estimator, const LevyModel& model, const json& params,
                          const Estimate& e, const SimConfig& cfg) {
  json rec;
  rec["estimator"] = estimator;
  rec["model"] = json::parse(model_to_json(model));
  rec["params"] = params;
  rec["n"] = e.n;
  rec["mean"] = e.mean;
  rec["se"] = e.std_error;
  rec["ci95"] = {e.ci95.first, e.ci95.second};
  rec["scheme"] = cfg.scheme == Scheme::EventDriven ? "event" : "euler";
  rec["dt"] = cfg.dt;
  rec["epsilon"] = cfg.epsilon;
  rec["seed"] = cfg.seed;
  rec["horizon"] = cfg.horizon;
  if (e.zero_events) rec["zero_events"] = true;
  return rec;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parisian ruin with exponential implementation delays for spectrally negative "
               "Levy insurance risk processes"};
  app.require_subcommand(1);

  std::string model_path, out_path, format = "csv";
  double theta = 0.0, q = 1.0, a = 0.0, b = 0.0, x = 0.0, y = 0.0, lambda = 0.0;
  bool have_a = false, have_b = false;
  std::string y_grid_text, x_grid_text, kind = "auto";
  long long n_paths = 10000;
  double dt = 1e-4, epsilon = 0.0, horizon = 100.0;
  std::uint64_t seed = 1;
  std::string scheme = "event", penalty_kind = "one";
  std::string y_bin_text;
  std::uint64_t validate_seed = 12345;
  double tol_scale = 1.0;

  auto add_common = [&](CLI::App* cmd, bool needs_model = true) {
    if (needs_model) cmd->add_option("--model", model_path, "model JSON file")->required();
    cmd->add_option("--format", format, "csv|jsonl")->check(CLI::IsMember({"csv", "jsonl"}));
    cmd->add_option("--out", out_path, "output file (default stdout)");
  };

  CLI::App* ruin = app.add_subcommand("ruin-prob", "P_x(tau_q < infinity)");
  add_common(ruin);
  ruin->add_option("--q", q, "delay clock rate")->required();
  ruin->add_option("--x", x, "initial surplus");
  ruin->add_option("--x-grid", x_grid_text, "lo:hi:n grid over x");

  CLI::App* density = app.add_subcommand("density", "Gerber-Shiu density over a y-grid");
  add_common(density);
  density->add_option("--theta", theta, "discount rate");
  density->add_option("--q", q, "delay clock rate")->required();
  auto* aopt = density->add_option("--a", a, "lower barrier depth (level -a)");
  auto* bopt = density->add_option("--b", b, "upper exit level");
  density->add_option("--x", x, "initial surplus")->required();
  density->add_option("--y", y, "single deficit coordinate");
  density->add_option("--y-grid", y_grid_text, "lo:hi:n grid over y");
  density->add_option("--kind", kind, "two-sided|lower|upper|unrestricted|auto")
      ->check(CLI::IsMember({"two-sided", "lower", "upper", "unrestricted", "auto"}));

  CLI::App* lap = app.add_subcommand("laplace-ruin", "E_x[e^{-theta tau_q}; tau_q < tau_b^+]");
  add_common(lap);
  lap->add_option("--theta", theta, "discount rate");
  lap->add_option("--q", q, "delay clock rate")->required();
  lap->add_option("--b", b, "upper exit level")->required();
  lap->add_option("--x", x, "initial surplus")->required();

  CLI::App* pen = app.add_subcommand("penalty",
                                     "E_x[e^{-theta tau_q + lambda X_{tau_q}}; tau_q < tau_b^+]");
  add_common(pen);
  pen->add_option("--theta", theta, "discount rate");
  pen->add_option("--q", q, "delay clock rate")->required();
  pen->add_option("--lambda", lambda, "penalty exponent")->required();
  pen->add_option("--b", b, "upper exit level")->required();
  pen->add_option("--x", x, "initial surplus")->required();

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimate via path simulation");
  add_common(sim);
  sim->add_option("--theta", theta, "discount rate");
  sim->add_option("--q", q, "delay clock rate")->required();
  sim->add_option("--x", x, "initial surplus");
  auto* sim_a = sim->add_option("--a", a, "lower barrier depth (omit for none)");
  auto* sim_b = sim->add_option("--b", b, "upper exit level (omit for none)");
  sim->add_option("--lambda", lambda, "penalty exponent (penalty=exp)");
  sim->add_option("--penalty", penalty_kind, "one|exp|indicator")
      ->check(CLI::IsMember({"one", "exp", "indicator"}));
  sim->add_option("--y-bin", y_bin_text, "lo:hi deficit bin (penalty=indicator)");
  sim->add_option("--paths", n_paths, "number of paths");
  sim->add_option("--dt", dt, "Euler grid step");
  sim->add_option("--epsilon", epsilon, "excursion depth arming the clock");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--horizon", horizon, "time truncation");
  sim->add_option("--scheme", scheme, "event|euler")->check(CLI::IsMember({"event", "euler"}));

  CLI::App* val = app.add_subcommand("validate", "run the formula-vs-simulation check suite");
  add_common(val, false);
  val->add_option("--seed", validate_seed, "seed for the Monte Carlo checks");
  val->add_option("--tol-scale", tol_scale,
                  "tolerance multiplier (exploration only; != 1 watermarks the output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    app.exit(e);
    return 2;
  }

  try {
    const bool jsonl = format == "jsonl";

    if (ruin->parsed()) {
      const LevyModel model = load_model(model_path);
      Output out(out_path, jsonl);
      out.header({"x", "q", "prob"});
      std::vector<double> xs = x_grid_text.empty() ? std::vector<double>{x}
                                                   : grid_points(parse_grid(x_grid_text));
      for (double xi : xs) {
        out.row({{"x", xi}, {"q", q}, {"prob", parisian_ruin_prob(model, q, xi)}});
      }
      return 0;
    }

    if (density->parsed()) {
      const LevyModel model = load_model(model_path);
      have_a = aopt->count() > 0;
      have_b = bopt->count() > 0;
      std::string k = kind;
      if (k == "auto") {
        k = have_a && have_b ? "two-sided" : have_a ? "lower" : have_b ? "upper" : "unrestricted";
      }
      ParisianEvaluator ev(model, theta, q);
      auto density_at = [&](double yy) {
        if (k == "two-sided") return ev.density_two_sided(a, b, x, yy);
        if (k == "lower") return ev.density_lower(a, x, yy);
        if (k == "upper") return ev.density_upper(b, x, yy);
        return ev.density_unrestricted(x, yy);
      };
      Output out(out_path, jsonl);
      out.header({"y", "value"});
      std::vector<double> ys = y_grid_text.empty() ? std::vector<double>{y}
                                                   : grid_points(parse_grid(y_grid_text));
      for (double yy : ys) out.row({{"y", yy}, {"value", density_at(yy)}});
      return 0;
    }

    if (lap->parsed()) {
      const LevyModel model = load_model(model_path);
      Output out(out_path, jsonl);
      out.header({"x", "theta", "q", "b", "value"});
      out.row({{"x", x},
               {"theta", theta},
               {"q", q},
               {"b", b},
               {"value", laplace_ruin_before_b(model, theta, q, b, x)}});
      return 0;
    }

    if (pen->parsed()) {
      const LevyModel model = load_model(model_path);
      Output out(out_path, jsonl);
      out.header({"x", "theta", "q", "lambda", "b", "value"});
      out.row({{"x", x},
               {"theta", theta},
               {"q", q},
               {"lambda", lambda},
               {"b", b},
               {"value", gs_exponential_penalty(model, theta, q, lambda, b, x)}});
      return 0;
    }

    if (sim->parsed()) {
      const LevyModel model = load_model(model_path);
      SimConfig cfg;
      cfg.scheme = scheme == "event" ? Scheme::EventDriven : Scheme::EulerGrid;
      cfg.dt = dt;
      cfg.epsilon = epsilon;
      cfg.n_paths = n_paths;
      cfg.horizon = horizon;
      cfg.seed = seed;
      cfg.n_workers = env_thread_cap() > 0 ? env_thread_cap() : 1;
      const double aa = sim_a->count() > 0 ? a : kNoBarrier;
      const double bb = sim_b->count() > 0 ? b : kNoBarrier;
      Penalty penalty = Penalty::one();
      if (penalty_kind == "exp") penalty = Penalty::exponential(lambda);
      if (penalty_kind == "indicator") {
        const auto [lo, hi] = parse_bin(y_bin_text);
        penalty = Penalty::indicator(lo, hi);
      }
      const Estimate est = estimate_gs(model, theta, q, x, aa, bb, penalty, cfg);
      Output out(out_path, jsonl);
      if (jsonl) {
        json params;
        params["theta"] = theta;
        params["q"] = q;
        params["x"] = x;
        params["a"] = sim_a->count() > 0 ? json(a) : json();
        params["b"] = sim_b->count() > 0 ? json(b) : json();
        if (penalty_kind == "exp") params["lambda"] = lambda;
        out.stream() << record_from_estimate("gs", model, params, est, cfg).dump() << "\n";
      } else {
        out.header({"n", "mean", "se", "ci_lo", "ci_hi", "dt", "epsilon", "seed", "horizon"});
        out.row({{"n", double(est.n)},
                 {"mean", est.mean},
                 {"se", est.std_error},
                 {"ci_lo", est.ci95.first},
                 {"ci_hi", est.ci95.second},
                 {"dt", cfg.dt},
                 {"epsilon", cfg.epsilon},
                 {"seed", double(cfg.seed)},
                 {"horizon", cfg.horizon}});
      }
      return 0;
    }

    if (val->parsed()) {
      ValidationOptions opts;
      opts.seed = validate_seed;
      opts.tol_scale = tol_scale;
      const ValidationReport report = run_validation(opts);
      Output out(out_path, true);
      out.stream() << report.jsonl;
      for (const auto& c : report.checks) {
        std::cerr << (c.pass ? "PASS" : "FAIL") << " [criterion " << c.criterion << "] " << c.name
                  << " (" << c.detail << "): residual " << c.residual << " tolerance "
                  << c.tolerance << "\n";
      }
      if (report.watermarked) {
        std::cerr << "note: non-default tolerances; output watermarked\n";
      }
      return report.all_pass ? 0 : 1;
    }
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
