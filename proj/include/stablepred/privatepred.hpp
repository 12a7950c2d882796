#ifndef STABLEPRED_PRIVATEPRED_HPP
#define STABLEPRED_PRIVATEPRED_HPP

#include <optional>
#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/complexity.hpp"
#include "stablepred/mechanisms.hpp"
#include "stablepred/stable.hpp"

namespace stablepred {

// Flip conversion: run a stable learner with stability target eps*alpha/2,
// then flip the output with probability alpha.
struct FlipConfig {
  double eps = 0.5;
  double alpha = 0.1;

  double induced_gamma() const { return eps * alpha / 2.0; }
};

// value p -> (1-alpha) p + alpha (1-p); both labels keep probability >= alpha.
double flip_wrap(double base_value, double alpha);
ValueFunction flip_wrap(const ValueFunction& base, double alpha);

// Partitioned soft-majority learner for relabeled (realizable) samples.
struct RealizableConfig {
  int r = 1;               // number of partitions
  int partition_size = 1;  // examples per partition
  double kappa = 0.0;      // total logit scale of the soft majority
  double eps_target = 0.0; // certified per-example privacy, needs 2 kappa / r <= eps_target

  // Paper presets. The first construction uses r = 3 log(1/eps)/eps partitions
  // with scale 3 log(1/eps); the second uses r = 6 eta m log(1/alpha)
  // partitions with scale r/(2 eta m).
  static RealizableConfig log_inv_eps_preset(double eps, int sample_size, int net_size);
  static RealizableConfig eta_m_preset(double eta, int sample_size, double alpha);
};

// Splits s_h into r contiguous blocks of partition_size, learns the canonical
// consistent hypothesis (ERM) per block, aggregates as a soft majority with
// the configured kappa. Throws InsufficientSampleError when the partitions do
// not fit.
SoftMajorityPredictor realizable_learn(const HypothesisClass& h, const LabeledSample& s_h,
                                       const RealizableConfig& cfg);

// Main agnostic private learner.
struct MainConfig {
  int n_prime = 1;
  double eta = 0.5;        // exponential-mechanism temperature (mech eps = 2/(eta n))
  double alpha = 0.25;
  double beta = 0.05;
  double eps = 0.5;        // target privacy
  int r = 1;               // realizable-stage partitions
  int partition_size = 1;  // realizable-stage partition size

  RealizableConfig derived_realizable(int n) const;
};

// h_{S,T} of the main learner: (1/Z) sum_h lambda_h phi_S(h) with
// lambda_h = exp(-L_S(h)/eta) over the dichotomies H_T, phi_S(h) the
// realizable learner retrained on S relabeled by h.
ValueFunction main_h_st(const HypothesisClass& h, const LabeledSample& s,
                        std::span<const Point> t_points, const MainConfig& cfg);

// Exact h_S: uniform outer mixture of main_h_st over all n'-subsets of S.
// phi_S(h) is memoized by the labels of h on S within one call.
MixturePredictor main_private_predict_exact(const HypothesisClass& h,
                                            const LabeledSample& s, const MainConfig& cfg);

// Sampled execution: draw I, draw h from the exponential mechanism with
// privacy 2/(eta n), evaluate phi_S(h)(x), emit a Bernoulli label.
int main_private_predict_sampled(const HypothesisClass& h, const LabeledSample& s,
                                 const MainConfig& cfg, Point x, Rng& rng);

PreconditionReport main_preconditions(const HypothesisClass& h, int n,
                                      const MainConfig& cfg,
                                      const SampleSizeScale& scale = {});

struct FrontierPoint {
  double delta;
  double eps_hat;
};

struct DominanceCheckSummary {
  long checked = 0;
  long skipped = 0;  // swap check: instances failing the eta-net precondition
  bool holds = true;
  double worst_margin = 0.0;
  double factor = 1.0;  // the multiplicative constant checked
};

struct PrivacyReport {
  int domain_size = 0;
  int n = 0;
  MainConfig config;
  PreconditionReport preconditions;
  long grid_size = 0;

  // Smallest eps_hat per delta over the whole neighbor grid.
  std::vector<FrontierPoint> frontier;
  double eps_hat_at_zero = 0.0;

  DominanceCheckSummary fixed_t;  // h_{S,T} <= e^{3/(eta n)} h_{S',T}
  DominanceCheckSummary swap;     // h_{S,S_I} <= 4 e^6 h_{S,S_I'} under the net condition

  double naive_max_abs_delta = 0.0;  // optimized vs naive pipeline agreement
};

// Exhaustive privacy certificate of the main learner over every sample in
// (X x {0,1})^n: the achieved (eps, delta) frontier on a delta grid plus
// exact checks of the two sub-lemma dominance relations.
PrivacyReport privacy_certificate(const HypothesisClass& h, int n, const MainConfig& cfg,
                                  double delta_resolution = 1e-4,
                                  double delta_max = 5e-2);

}  // namespace stablepred

#endif
