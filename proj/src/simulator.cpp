#include "parisian/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace parisian {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

void require(bool cond, const char* what) {
  if (!cond) throw std::domain_error(what);
}

} // namespace

Rng::Rng(std::uint64_t seed) {
  std::uint64_t sm = seed;
  for (auto& s : s_) s = splitmix64(sm);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform01() { return double(next() >> 11) * 0x1.0p-53; }

double Rng::exponential(double rate) {
  if (rate <= 0.0) return kInf;
  return -std::log1p(-uniform01()) / rate;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u;
  do {
    u = uniform01();
  } while (u == 0.0);
  const double v = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u));
  const double ang = 2.0 * std::numbers::pi * v;
  spare_ = r * std::sin(ang);
  have_spare_ = true;
  return r * std::cos(ang);
}

PathRng PathRng::for_path(std::uint64_t seed, std::uint64_t path_index) {
  std::uint64_t base = seed;
  (void)splitmix64(base);
  const std::uint64_t mixed = base ^ (0x9E3779B97F4A7C15ULL * (path_index + 1));
  return PathRng{Rng(mixed), Rng(~mixed)};
}

Penalty Penalty::exponential(double lambda) {
  Penalty p;
  p.kind = Kind::Exponential;
  p.lambda = lambda;
  return p;
}

Penalty Penalty::indicator(double y_lo, double y_hi) {
  Penalty p;
  p.kind = Kind::Indicator;
  p.y_lo = y_lo;
  p.y_hi = y_hi;
  return p;
}

double Penalty::operator()(double y) const {
  switch (kind) {
    case Kind::One: return 1.0;
    case Kind::Exponential: return std::exp(lambda * y);
    case Kind::Indicator: return (y >= y_lo && y <= y_hi) ? 1.0 : 0.0;
  }
  return 0.0;
}

double sample_increment(const LevyModel& model, double dt, Rng& rng) {
  require(dt > 0.0, "dt must be > 0");
  double dx = model.mu * dt;
  if (model.sigma > 0.0) dx += model.sigma * std::sqrt(dt) * rng.normal();
  if (model.jump_rate > 0.0) {
    // Poisson(eta dt) jump count by inversion; dt is small so the loop is
    // short.
    const double mean = model.jump_rate * dt;
    double u = rng.uniform01();
    double p = std::exp(-mean), cum = p;
    int k = 0;
    while (u > cum && k < 10000) {
      ++k;
      p *= mean / k;
      cum += p;
    }
    for (int j = 0; j < k; ++j) dx -= rng.exponential(model.jump_mean_inv);
  }
  return dx;
}

namespace {

RuinOutcome simulate_event_driven(const LevyModel& model, double q, double x0, double a, double b,
                                  const SimConfig& cfg, PathRng& rng) {
  const double c = model.mu;
  const double eta = model.jump_rate;
  const double alpha = model.jump_mean_inv;
  const double eps = cfg.epsilon;
  const double horizon = cfg.horizon;

  double t = 0.0, x = x0;
  bool in_sojourn = false;
  double clock = 0.0;       // pending exponential(q) draw for this sojourn
  double ring_time = kInf;  // absolute ring time once the depth -eps is hit

  auto begin_sojourn = [&]() {
    in_sojourn = true;
    clock = rng.clock.exponential(q);
    ring_time = (x < -eps) ? t + clock : kInf;
  };
  if (x < 0.0) begin_sojourn();

  double next_jump = t + rng.path.exponential(eta);
  auto survived = [&]() {
    return RuinOutcome{OutcomeKind::Survived, horizon, x + c * (horizon - t)};
  };

  for (;;) {
    if (!in_sojourn) {
      const double t_b = std::isfinite(b) ? t + (b - x) / c : kInf;
      if (t_b <= next_jump) {
        if (t_b > horizon) return survived();
        return {OutcomeKind::UpperExit, t_b, b}; // creeps: no overshoot upward
      }
      if (next_jump > horizon) return survived();
      x += c * (next_jump - t);
      t = next_jump;
      x -= rng.path.exponential(alpha);
      next_jump = t + rng.path.exponential(eta);
      if (x < -a) return {OutcomeKind::LowerExit, t, x};
      if (x < 0.0) begin_sojourn();
    } else {
      const double t_ret = t + (0.0 - x) / c;
      const double t_next = std::min(t_ret, next_jump);
      if (ring_time < t_next) {
        if (ring_time > horizon) return survived();
        return {OutcomeKind::ParisianRuin, ring_time, x + c * (ring_time - t)};
      }
      if (t_next > horizon) return survived();
      if (t_ret <= next_jump) {
        t = t_ret;
        x = 0.0;
        in_sojourn = false;
        ring_time = kInf;
      } else {
        x += c * (next_jump - t);
        t = next_jump;
        x -= rng.path.exponential(alpha);
        next_jump = t + rng.path.exponential(eta);
        // a lower exit at this jump wins over arming the clock
        if (x < -a) return {OutcomeKind::LowerExit, t, x};
        if (ring_time == kInf && x < -eps) ring_time = t + clock;
      }
    }
  }
}

RuinOutcome simulate_euler_grid(const LevyModel& model, double q, double x0, double a, double b,
                                const SimConfig& cfg, PathRng& rng) {
  const double dt = cfg.dt;
  const double eps = cfg.epsilon;
  double t = 0.0, x = x0;
  bool in_sojourn = false, armed = false;
  double remaining = 0.0;

  for (;;) {
    if (x >= b) return {OutcomeKind::UpperExit, t, b};
    if (x < -a) return {OutcomeKind::LowerExit, t, x};
    if (x < 0.0) {
      if (!in_sojourn) {
        in_sojourn = true;
        armed = false;
        remaining = rng.clock.exponential(q);
      }
      if (!armed && x < -eps) armed = true;
      if (armed) {
        if (remaining <= dt) {
          // rings inside this grid interval (left endpoint negative)
          return {OutcomeKind::ParisianRuin, t + remaining, x};
        }
        remaining -= dt;
      }
    } else {
      in_sojourn = false;
      armed = false;
    }
    if (t >= cfg.horizon) return {OutcomeKind::Survived, cfg.horizon, x};
    x += sample_increment(model, dt, rng.path);
    t += dt;
  }
}

} // namespace

RuinOutcome simulate_parisian(const LevyModel& model, double q, double x, double a, double b,
                              const SimConfig& cfg, PathRng& rng) {
  require(q > 0.0, "q must be > 0 (exponential delay rate)");
  require(x >= -a && x <= b, "x must lie in [-a, b]");
  require(cfg.horizon > 0.0, "horizon must be > 0");
  require(cfg.epsilon >= 0.0, "epsilon must be >= 0");
  if (cfg.scheme == Scheme::EventDriven) {
    require(model.sigma == 0.0, "EventDriven scheme requires sigma == 0");
    return simulate_event_driven(model, q, x, a, b, cfg, rng);
  }
  require(cfg.dt > 0.0, "dt must be > 0 for EulerGrid");
  return simulate_euler_grid(model, q, x, a, b, cfg, rng);
}

namespace {

struct Accum {
  double sum = 0.0;
  double sumsq = 0.0;
  long long n = 0;
  long long events = 0;

  void add(double v, bool event) {
    sum += v;
    sumsq += v * v;
    n += 1;
    events += event ? 1 : 0;
  }
  void merge(const Accum& o) {
    sum += o.sum;
    sumsq += o.sumsq;
    n += o.n;
    events += o.events;
  }
};

Estimate finalize(const Accum& acc) {
  Estimate e;
  e.n = acc.n;
  e.mean = acc.n > 0 ? acc.sum / double(acc.n) : 0.0;
  if (acc.events == 0) {
    e.zero_events = true;
    e.std_error = 0.0;
    const double upper = acc.n > 0 ? 1.0 - std::pow(0.025, 1.0 / double(acc.n)) : 1.0;
    e.ci95 = {0.0, upper};
    return e;
  }
  const double var = acc.n > 1
                         ? std::max(0.0, (acc.sumsq - double(acc.n) * e.mean * e.mean) /
                                             double(acc.n - 1))
                         : 0.0;
  e.std_error = std::sqrt(var / double(acc.n));
  e.ci95 = {e.mean - 1.96 * e.std_error, e.mean + 1.96 * e.std_error};
  return e;
}

int effective_workers(const SimConfig& cfg, long long n_paths) {
  int w = std::max(1, cfg.n_workers);
  const int cap = env_thread_cap();
  if (cap > 0) w = std::min(w, cap);
  return int(std::min<long long>(w, std::max<long long>(1, n_paths)));
}

// Runs fn(path_index) over [0, n) partitioned into contiguous worker ranges;
// per-worker accumulators are merged in worker order, so the result depends
// only on (seed, n, worker count), not on scheduling.
template <typename F>
Accum run_paths(long long n, int workers, F&& fn) {
  std::vector<Accum> parts(workers);
  if (workers == 1) {
    for (long long i = 0; i < n; ++i) fn(i, parts[0]);
  } else {
    const long long chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    for (int w = 0; w < workers; ++w) {
      threads.emplace_back([&, w]() {
        const long long lo = w * chunk;
        const long long hi = std::min(n, lo + chunk);
        for (long long i = lo; i < hi; ++i) fn(i, parts[w]);
      });
    }
    for (auto& th : threads) th.join();
  }
  Accum total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

} // namespace

Estimate estimate_gs(const LevyModel& model, double theta, double q, double x, double a, double b,
                     const Penalty& penalty, const SimConfig& cfg) {
  require(theta >= 0.0, "theta must be >= 0");
  const int workers = effective_workers(cfg, cfg.n_paths);
  const Accum acc = run_paths(cfg.n_paths, workers, [&](long long i, Accum& out) {
    PathRng rng = PathRng::for_path(cfg.seed, std::uint64_t(i));
    const RuinOutcome o = simulate_parisian(model, q, x, a, b, cfg, rng);
    if (o.kind == OutcomeKind::ParisianRuin) {
      out.add(std::exp(-theta * o.time) * penalty(o.position), true);
    } else {
      out.add(0.0, false);
    }
  });
  return finalize(acc);
}

EpsScanResult epsilon_bias_scan(const LevyModel& model, double q, double x, const SimConfig& cfg,
                                const std::vector<double>& eps_list) {
  require(!eps_list.empty(), "eps_list must not be empty");
  for (std::size_t i = 0; i + 1 < eps_list.size(); ++i) {
    require(eps_list[i] > eps_list[i + 1], "eps_list must be strictly decreasing");
  }
  require(eps_list.back() >= 0.0, "epsilon must be >= 0");

  EpsScanResult result;
  result.epsilons = eps_list;
  const std::size_t n_eps = eps_list.size();
  std::vector<Accum> acc(n_eps);
  std::vector<char> ruined(n_eps);
  for (long long i = 0; i < cfg.n_paths; ++i) {
    for (std::size_t k = 0; k < n_eps; ++k) {
      // identical streams per path across epsilons: common random numbers
      PathRng rng = PathRng::for_path(cfg.seed, std::uint64_t(i));
      SimConfig c = cfg;
      c.epsilon = eps_list[k];
      const RuinOutcome o = simulate_parisian(model, q, x, kNoBarrier, kNoBarrier, c, rng);
      ruined[k] = (o.kind == OutcomeKind::ParisianRuin) ? 1 : 0;
      acc[k].add(ruined[k] ? 1.0 : 0.0, ruined[k] != 0);
    }
    for (std::size_t k = 0; k + 1 < n_eps; ++k) {
      // tau_q^{eps_k} >= tau_q^{eps_{k+1}}: ruin at the larger depth must
      // imply ruin at the smaller one
      if (ruined[k] && !ruined[k + 1]) result.coupling_violations += 1;
    }
  }
  for (const auto& a : acc) result.estimates.push_back(finalize(a));
  return result;
}

Estimate estimate_upper_exit_discount(const LevyModel& model, double q, double x, double a,
                                      const SimConfig& cfg) {
  require(model.sigma == 0.0, "EventDriven estimator requires sigma == 0");
  require(x >= 0.0 && x <= a, "x must lie in [0, a]");
  const double c = model.mu;
  const int workers = effective_workers(cfg, cfg.n_paths);
  const Accum acc = run_paths(cfg.n_paths, workers, [&](long long i, Accum& out) {
    PathRng rng = PathRng::for_path(cfg.seed, std::uint64_t(i));
    double t = 0.0, xx = x;
    double next_jump = t + rng.path.exponential(model.jump_rate);
    for (long long guard = 0; guard < (1LL << 40); ++guard) {
      const double t_a = t + (a - xx) / c;
      if (t_a <= next_jump) {
        out.add(std::exp(-q * t_a), true);
        return;
      }
      xx += c * (next_jump - t);
      t = next_jump;
      xx -= rng.path.exponential(model.jump_mean_inv);
      next_jump = t + rng.path.exponential(model.jump_rate);
      if (xx < 0.0) {
        out.add(0.0, false);
        return;
      }
    }
    throw std::runtime_error("two-sided exit did not terminate");
  });
  return finalize(acc);
}

Estimate estimate_occupation(const LevyModel& model, double q, double x, double a, double y_lo,
                             double y_hi, const SimConfig& cfg) {
  require(model.sigma == 0.0, "EventDriven estimator requires sigma == 0");
  require(x >= 0.0 && x <= a, "x must lie in [0, a]");
  require(y_lo <= y_hi, "y_lo must be <= y_hi");
  const double c = model.mu;
  const int workers = effective_workers(cfg, cfg.n_paths);
  const Accum acc = run_paths(cfg.n_paths, workers, [&](long long i, Accum& out) {
    PathRng rng = PathRng::for_path(cfg.seed, std::uint64_t(i));
    double t = 0.0, xx = x, value = 0.0;
    double next_jump = t + rng.path.exponential(model.jump_rate);
    for (long long guard = 0; guard < (1LL << 40); ++guard) {
      const double t_a = t + (a - xx) / c;
      const double t_end = std::min(t_a, next_jump);
      // discounted time the linear segment spends inside [y_lo, y_hi]
      const double t_enter = std::max(t, t + (y_lo - xx) / c);
      const double t_leave = std::min(t_end, t + (y_hi - xx) / c);
      if (t_leave > t_enter) {
        value += (std::exp(-q * t_enter) - std::exp(-q * t_leave)) / q;
      }
      if (t_a <= next_jump) break; // upper exit
      xx += c * (next_jump - t);
      t = next_jump;
      xx -= rng.path.exponential(model.jump_mean_inv);
      next_jump = t + rng.path.exponential(model.jump_rate);
      if (xx < 0.0) break; // lower exit
    }
    out.add(value, value != 0.0);
  });
  return finalize(acc);
}

Estimate estimate_classical_ruin(const LevyModel& model, double x, const SimConfig& cfg) {
  require(model.sigma == 0.0, "EventDriven estimator requires sigma == 0");
  require(x >= 0.0, "x must be >= 0");
  require(cfg.horizon > 0.0, "horizon must be > 0");
  const double c = model.mu;
  const int workers = effective_workers(cfg, cfg.n_paths);
  const Accum acc = run_paths(cfg.n_paths, workers, [&](long long i, Accum& out) {
    PathRng rng = PathRng::for_path(cfg.seed, std::uint64_t(i));
    double t = 0.0, xx = x;
    for (;;) {
      const double next_jump = t + rng.path.exponential(model.jump_rate);
      if (next_jump > cfg.horizon) {
        out.add(0.0, false);
        return;
      }
      xx += c * (next_jump - t);
      t = next_jump;
      xx -= rng.path.exponential(model.jump_mean_inv);
      if (xx < 0.0) {
        out.add(1.0, true);
        return;
      }
    }
  });
  return finalize(acc);
}

double suggest_horizon(const LevyModel& model, double x, double tail_target) {
  require(tail_target > 0.0 && tail_target < 1.0, "tail_target must be in (0,1)");
  require(net_profit_drift(model) > 0.0, "net profit condition psi'(0+) > 0 violated");

  // psi extends to (-alpha, 0]; psi(-s) < 0 on (0, R) with R the classical
  // adjustment coefficient (positive root of psi(-s) = 0).
  auto psi_neg = [&](double s) { return laplace_exponent_ext(model, -s); };
  double s_hi = model.jump_rate > 0.0 ? model.jump_mean_inv : 1.0;
  if (model.jump_rate == 0.0) {
    while (psi_neg(s_hi) <= 0.0) s_hi *= 2.0;
  } else {
    s_hi = model.jump_mean_inv * (1.0 - 1e-12);
  }
  // bisect for R on (0, s_hi]
  double lo = 0.0, hi = s_hi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (psi_neg(mid) < 0.0) lo = mid;
    else hi = mid;
  }
  const double R = 0.5 * (lo + hi);

  // maximize rate(s) = -psi(-s) on (0, R); -psi(-s) is concave in s
  double gl = 0.0, gr = R;
  const double inv_gold = (std::sqrt(5.0) - 1.0) / 2.0;
  double m1 = gr - inv_gold * (gr - gl), m2 = gl + inv_gold * (gr - gl);
  for (int it = 0; it < 200; ++it) {
    if (-psi_neg(m1) < -psi_neg(m2)) {
      gl = m1;
      m1 = m2;
      m2 = gl + inv_gold * (gr - gl);
    } else {
      gr = m2;
      m2 = m1;
      m1 = gr - inv_gold * (gr - gl);
    }
  }
  const double s_star = 0.5 * (gl + gr);
  const double rate_max = -psi_neg(s_star);
  // two-term bound: P(inf_{t>=T} X_t < 0) <= 2 e^{-rate_eff T} with
  // kappa = rate_max/(R + s*) equalizing the Chernoff and Lundberg parts
  const double rate_eff = R * rate_max / (R + s_star);
  if (!(rate_eff > 0.0)) throw std::runtime_error("horizon bound degenerate");
  (void)x; // x >= 0 only improves the bound; ignored for conservatism
  return std::max(10.0, std::log(2.0 / tail_target) / rate_eff);
}

int env_thread_cap() {
  const char* v = std::getenv("PARISIAN_RISK_THREADS");
  if (v == nullptr || *v == '\0') return 0;
  const long n = std::strtol(v, nullptr, 10);
  return n > 0 ? int(n) : 1;
}

} // namespace parisian
