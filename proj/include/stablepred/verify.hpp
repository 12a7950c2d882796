#ifndef STABLEPRED_VERIFY_HPP
#define STABLEPRED_VERIFY_HPP

#include <functional>
#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/rng.hpp"
#include "stablepred/sampling.hpp"

// Brute-force oracle layer. Everything here recomputes weight and mixture
// arithmetic naively (plain exp, no log-space, no memoization) so it stays an
// independent path from the optimized implementations it checks.
namespace stablepred::verify {

// h <= lambda * g + kappa pointwise over (x, y):
// |lhs(x) - y| <= lambda * |rhs(x) - y| + kappa_add.
struct DominanceClaim {
  ValueFunction lhs;
  ValueFunction rhs;
  double lambda = 1.0;
  double kappa_add = 0.0;
};

struct DominanceResult {
  bool holds = true;
  double worst_margin = 0.0;  // max of |lhs-y| - lambda|rhs-y| - kappa; <= 0 iff holds
  Point worst_x = 0;
  int worst_y = 0;
};

DominanceResult check_dominance(const DominanceClaim& c);

// All samples in (X x {0,1})^n, indexed by a mixed-radix code; neighbors are
// the samples differing in exactly one index.
class NeighborGrid {
 public:
  NeighborGrid(int domain_size, int n);

  long size() const { return size_; }
  int domain_size() const { return domain_size_; }
  int n() const { return n_; }

  LabeledSample decode(long code) const;
  long encode(const LabeledSample& s) const;
  // Codes of all samples differing from `code` in exactly one index.
  std::vector<long> neighbors(long code) const;

 private:
  int domain_size_;
  int n_;
  long size_;
};

using ExactLearnerFn = std::function<ValueFunction(const LabeledSample&)>;
using SampledLearnerFn = std::function<int(Rng&)>;

// sup over neighbor pairs, x, y of Pr[y | S] - Pr[y | S']; exact given exact
// learners. Equals the uniform-stability parameter of the learner.
double sup_stability_gap(const ExactLearnerFn& learner, const NeighborGrid& grid);

// Smallest eps such that Pr[y|S] <= e^eps Pr[y|S'] + delta over the whole
// grid. Cells with Pr[y|S] <= delta are unconstrained; returns +infinity when
// some constrained cell has Pr[y|S'] = 0.
double min_privacy_eps(const ExactLearnerFn& learner, const NeighborGrid& grid,
                       double delta);

struct PredictionLaw {
  double p_hat;
  double ci_halfwidth;  // Wilson, 99%
};

PredictionLaw empirical_prediction_law(const SampledLearnerFn& learner, long trials,
                                       Rng& rng);

// Fraction of sampled S of size n where some h in H has |L_D(h) - L_S(h)| > alpha.
double uniform_convergence_check(const HypothesisClass& h, const SourceDistribution& d,
                                 int n, double alpha, long trials, Rng& rng);

enum class NetSamplingMode { WithReplacement, Distinct };

// Empirical probability that an n'-point draw from D fails to be an
// alpha-net for H. Distinct mode resamples until n' distinct points are
// collected and requires n' <= |support(D)|.
double net_probability_check(const HypothesisClass& h, const SourceDistribution& d,
                             int n_prime, double alpha, long trials, Rng& rng,
                             NetSamplingMode mode = NetSamplingMode::WithReplacement);

// ---- naive reference arithmetic ----

// Plain-arithmetic exponential-mechanism probabilities (no log-sum-exp).
std::vector<double> naive_exp_probabilities(const HypothesisClass& h,
                                            const std::vector<Dichotomy>& dichotomies,
                                            const LabeledSample& s, double eps);

// Naive h_{S,T} of the stable learner.
ValueFunction naive_h_st(const HypothesisClass& h, const LabeledSample& s,
                         std::span<const Point> t_points, double mech_eps);

// Naive A^sta(S): plain average over all subsets.
ValueFunction naive_stable_values(const HypothesisClass& h, const LabeledSample& s,
                                  int n_prime, double gamma);

// Naive main private predictor h_S (per-subset exponential weights over
// dichotomies, soft-majority relabeled sub-learners, no memoization). The
// soft majority is evaluated through the two-exponential form directly.
ValueFunction naive_main_values(const HypothesisClass& h, const LabeledSample& s,
                                int n_prime, double eta, int r, int partition_size);

}  // namespace stablepred::verify

#endif
