#ifndef PARISIAN_SIMULATOR_HPP
#define PARISIAN_SIMULATOR_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "parisian/levy_model.hpp"

namespace parisian {

// xoshiro256** with splitmix64 seeding; explicit per-path stream derivation
// keeps every path's draws independent of how paths are partitioned across
// workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  std::uint64_t next();
  double uniform01();            // [0, 1)
  double exponential(double rate); // mean 1/rate; +inf for rate == 0
  double normal();               // standard normal (Box-Muller, cached pair)

 private:
  std::uint64_t s_[4];
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Two independent streams per path: one drives the path (jump times, sizes,
// Gaussian increments), the other the implementation clocks. Keeping the
// clock draws on their own stream makes runs with different excursion
// depths epsilon share the same underlying path (common random numbers).
struct PathRng {
  Rng path;
  Rng clock;
  static PathRng for_path(std::uint64_t seed, std::uint64_t path_index);
};

enum class Scheme { EventDriven, EulerGrid };

struct SimConfig {
  Scheme scheme = Scheme::EventDriven;
  double dt = 1e-4;      // EulerGrid step
  double epsilon = 0.0;  // excursion depth at which the clock starts
  long long n_paths = 10000;
  double horizon = 100.0;
  std::uint64_t seed = 1;
  int n_workers = 1;
};

enum class OutcomeKind { ParisianRuin, UpperExit, LowerExit, Survived };

struct RuinOutcome {
  OutcomeKind kind = OutcomeKind::Survived;
  double time = 0.0;
  double position = 0.0;
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
  long long n = 0;
  std::pair<double, double> ci95{0.0, 0.0};
  // No contributing events: std_error is undefined at 0, so ci95 carries the
  // exact binomial upper bound 1 - 0.025^{1/n} instead.
  bool zero_events = false;
};

struct Penalty {
  enum class Kind { One, Exponential, Indicator };
  Kind kind = Kind::One;
  double lambda = 0.0;
  double y_lo = 0.0, y_hi = 0.0;

  static Penalty one() { return {}; }
  static Penalty exponential(double lambda);
  static Penalty indicator(double y_lo, double y_hi);
  double operator()(double y) const;
};

// One increment of X over dt: mu dt + sigma sqrt(dt) N - compound Poisson
// jumps. Does not validate the model, so degenerate parameter sets (pure
// drift) are allowed.
double sample_increment(const LevyModel& model, double dt, Rng& rng);

// One path started at x in [-a, b], stopped at Parisian ruin, exit above b,
// exit below -a, or the horizon. Pass +inf for an absent barrier.
// EventDriven requires sigma == 0 and solves every crossing time on the
// piecewise-linear path exactly; EulerGrid detects crossings on the grid
// (O(sqrt(dt)) bias in the ruin channel).
RuinOutcome simulate_parisian(const LevyModel& model, double q, double x, double a, double b,
                              const SimConfig& cfg, PathRng& rng);

// Monte Carlo mean of e^{-theta tau_q} penalty(X_{tau_q}) 1{ParisianRuin}.
Estimate estimate_gs(const LevyModel& model, double theta, double q, double x, double a, double b,
                     const Penalty& penalty, const SimConfig& cfg);

struct EpsScanResult {
  std::vector<double> epsilons;
  std::vector<Estimate> estimates; // P(tau_q^eps <= horizon), no barriers
  long long coupling_violations = 0; // paths ruined at a larger eps but not a smaller one
};

// Common-random-numbers scan over decreasing excursion depths.
EpsScanResult epsilon_bias_scan(const LevyModel& model, double q, double x, const SimConfig& cfg,
                                const std::vector<double>& eps_list);

// E_x[e^{-q tau_a^+}; tau_0^- > tau_a^+] for the two-sided exit from [0, a]
// (EventDriven, sigma == 0).
Estimate estimate_upper_exit_discount(const LevyModel& model, double q, double x, double a,
                                      const SimConfig& cfg);

// E_x[int_0^{tau} e^{-qt} 1{X_t in [y_lo, y_hi]} dt], tau the exit from [0,a]
// (EventDriven): the q-resolvent mass of a y-bin.
Estimate estimate_occupation(const LevyModel& model, double q, double x, double a, double y_lo,
                             double y_hi, const SimConfig& cfg);

// P_x(tau_0^- <= horizon) (EventDriven).
Estimate estimate_classical_ruin(const LevyModel& model, double x, const SimConfig& cfg);

// Horizon T such that P(a ruin-type event happens after T) <= tail_target,
// from a two-term Chernoff bound on inf_{t >= T} X_t. Requires the net
// profit condition.
double suggest_horizon(const LevyModel& model, double x, double tail_target);

// Worker cap from PARISIAN_RISK_THREADS (0 when unset).
int env_thread_cap();

constexpr double kNoBarrier = std::numeric_limits<double>::infinity();

} // namespace parisian

#endif
