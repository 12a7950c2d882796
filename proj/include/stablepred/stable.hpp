#ifndef STABLEPRED_STABLE_HPP
#define STABLEPRED_STABLE_HPP

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/complexity.hpp"
#include "stablepred/mechanisms.hpp"
#include "stablepred/rng.hpp"

namespace stablepred {

struct StableConfig {
  int n_prime = 1;
  double gamma = 0.5;   // exponential-mechanism privacy parameter
  double alpha = 0.25;  // accuracy target, used by the precondition report
  double beta = 0.05;   // confidence target
};

enum class MixtureMode { Exact, MonteCarlo };

struct MixtureTerm {
  double weight;
  ValueFunction values;
};

// Convex combination of value functions; weights sum to 1 within 1e-12.
struct MixturePredictor {
  std::vector<MixtureTerm> terms;
  MixtureMode mode = MixtureMode::Exact;
  long monte_carlo_draws = 0;

  ValueFunction values(int domain_size) const;
  double value(Point x) const;
};

// h_{S,T}: exact value function of the exponential mechanism over H_T with
// losses on S and privacy parameter mech_eps. T supplies only its points and
// need not be a subset of S.
ValueFunction h_st(const HypothesisClass& h, const LabeledSample& s,
                   std::span<const Point> t_points, double mech_eps);
ValueFunction h_st(const HypothesisClass& h, const LabeledSample& s,
                   const LabeledSample& t, double mech_eps);

// A^sta(S): uniform mixture of h_{S,S_I} over all n'-subsets I. Guarded to
// C(n, n') <= 1e6; beyond that throws TooLargeError advising Monte Carlo mode.
MixturePredictor stable_predict_exact(const HypothesisClass& h, const LabeledSample& s,
                                      const StableConfig& cfg);

// Same predictor with `draws` uniformly sampled subsets instead of the full
// enumeration; each term still carries the exact h_{S,S_I} values.
MixturePredictor stable_predict_monte_carlo(const HypothesisClass& h, const LabeledSample& s,
                                            const StableConfig& cfg, long draws, Rng& rng);

// One draw of the sampled execution: pick I uniformly, sample from the
// exponential mechanism over H_{S_I}, return that hypothesis's label at x.
int stable_predict_sampled(const HypothesisClass& h, const LabeledSample& s,
                           const StableConfig& cfg, Point x, Rng& rng);

struct Precondition {
  std::string name;
  bool satisfied;
  double required;
  double actual;
};

struct PreconditionReport {
  std::vector<Precondition> items;
  bool all_satisfied = true;
};

PreconditionReport stable_preconditions(const HypothesisClass& h, int n,
                                        const StableConfig& cfg,
                                        const SampleSizeScale& scale = {});

struct StabilityReport {
  int domain_size = 0;
  int n = 0;
  StableConfig config;
  PreconditionReport preconditions;
  long grid_size = 0;

  double sup_gap = 0.0;
  double gap_bound = 0.0;  // 3 gamma
  bool stability_ok = false;
  LabeledSample worst_gap_sample;
  LabeledSample worst_gap_neighbor;
  Point worst_gap_point = 0;

  double sup_excess = 0.0;
  double excess_bound = 0.0;  // 3 alpha
  bool excess_ok = false;

  // Largest |optimized - naive-oracle| value over the grid; meaningful only
  // when the certified learner is A^sta itself.
  std::optional<double> naive_max_abs_delta;
};

using ExactLearner = std::function<ValueFunction(const LabeledSample&)>;

// Exhaustive certificate for A^sta over every sample in (X x {0,1})^n and
// every single-index neighbor; includes the independent-oracle cross-check.
StabilityReport stability_certificate(const HypothesisClass& h, int n,
                                      const StableConfig& cfg);

// Same enumeration for an arbitrary exact learner (no oracle cross-check).
StabilityReport stability_certificate_custom(const HypothesisClass& h, int n,
                                             const StableConfig& cfg,
                                             const ExactLearner& learner);

}  // namespace stablepred

#endif
