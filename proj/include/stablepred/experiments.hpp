#ifndef STABLEPRED_EXPERIMENTS_HPP
#define STABLEPRED_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/rng.hpp"
#include "stablepred/sampling.hpp"
#include "stablepred/stable.hpp"
#include "stablepred/verify.hpp"

namespace stablepred {

// Exact rational, only as precise bookkeeping for the lower-bound family
// weights.
struct Fraction {
  long long num = 0;
  long long den = 1;

  Fraction() = default;
  Fraction(long long n, long long d);
  Fraction operator+(const Fraction& o) const;
  Fraction operator-(const Fraction& o) const;
  Fraction operator*(const Fraction& o) const;
  bool operator==(const Fraction& o) const { return num == o.num && den == o.den; }
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

// The adversarial family: X' = {0..d-1}; points below d-1 carry mass
// 4 alpha/(d-1) each, the last point carries 1 - 4 alpha. Targets are drawn
// uniformly from all labelings of X'.
struct LowerBoundFamily {
  int d = 2;
  Fraction alpha{1, 8};

  std::vector<Fraction> weights() const;  // sums to exactly 1
  std::vector<double> weight_doubles() const;
  double threshold_n(double gamma) const;  // n* = (d-1)/(8 gamma alpha)
};

struct LowerBoundCoordinate {
  Point k = 0;
  double mean_flip_sensitivity = 0.0;
  double mean_count = 0.0;      // empirical E[#_S(k)]
  double expected_count = 0.0;  // 4 alpha n / (d-1)
  bool stability_link_ok = true;
};

struct LowerBoundReport {
  int d = 0;
  int n = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  long trials = 0;
  double n_star = 0.0;
  bool below_threshold = false;

  double mean_error = 0.0;
  double stderr_error = 0.0;
  double error_lower_bound = 0.0;  // 2 alpha (1 - 4 gamma alpha n / (d-1))
  bool chain_ok = true;            // mean_error >= bound - 3 sigma

  std::vector<LowerBoundCoordinate> coordinates;
};

// Estimates E_h E_S[L_{D_h}(A(S))] over uniform random targets h, the
// per-coordinate flip sensitivity E|A(S)(k) - A(S^flip(k))(k)|, and the
// empirical occurrence counts, then evaluates the lower-bound inequality
// chain for a learner of nominal stability gamma.
LowerBoundReport lower_bound_experiment(const HypothesisClass& h_all,
                                        const verify::ExactLearnerFn& learner,
                                        const LowerBoundFamily& fam, double gamma, int n,
                                        long trials, Rng& rng);

struct AmplificationReport {
  double base_eps = 0.0;
  int n = 0;
  int n_prime = 0;
  double eta_fraction = 0.0;  // n'/n
  long grid_size = 0;
  double measured_eps = 0.0;
  double bound = 0.0;  // 2 * base_eps * eta (base_eps when eta = 1)
  bool ok = false;
};

// Wraps the exact base_eps-private exponential mechanism (over the class's
// own dichotomies) in uniform n'-of-n subsampling and measures the wrapper's
// exact privacy over the exhaustive neighbor grid.
AmplificationReport amplification_demo(const HypothesisClass& h, double base_eps, int n,
                                       int n_prime);

struct SweepConfig {
  std::vector<int> n_values;
  int n_prime = 2;
  double gamma = 0.5;
  double alpha = 0.25;
  double beta = 0.05;
  long trials = 50;
  long grid_cap = 100000;  // exhaustive certification only below this grid size
  std::uint64_t seed = 1;
};

struct SweepRow {
  int n = 0;
  int d = 0;
  double alpha = 0.0;
  double gamma = 0.0;
  double eps = 0.0;  // NaN for the stable learner
  double excess_err = 0.0;
  double stability_gap = 0.0;  // NaN when the grid is infeasible
  double min_eps = 0.0;        // NaN when the grid is infeasible
  double delta = 0.0;
  std::uint64_t seed = 0;
};

// One row per n: Monte Carlo excess error of A^sta against D plus exhaustive
// stability/privacy measurements where the grid is feasible.
std::vector<SweepRow> sample_complexity_sweep(const HypothesisClass& h,
                                              const SourceDistribution& d,
                                              const SweepConfig& cfg);

std::string sweep_csv_header();
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

}  // namespace stablepred

#endif
