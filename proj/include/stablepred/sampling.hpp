#ifndef STABLEPRED_SAMPLING_HPP
#define STABLEPRED_SAMPLING_HPP

#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/rng.hpp"

namespace stablepred {

enum class LabelerKind { Fixed, Agnostic };

// Distribution over X x {0,1}: a point marginal plus a labeler. Fixed labels
// by hypothesis `hypothesis` of the reference class; Agnostic flips that
// label with probability noise_rate.
struct SourceDistribution {
  std::vector<double> point_weights;
  LabelerKind kind = LabelerKind::Fixed;
  long hypothesis = 0;
  double noise_rate = 0.0;

  void validate() const;
  static SourceDistribution uniform_fixed(int domain_size, long hypothesis);
};

LabeledSample sample_dataset(const SourceDistribution& d, const HypothesisClass& h,
                             int n, Rng& rng);

// S^flip(k): flip every label whose point equals k. An involution.
LabeledSample flip_set(const LabeledSample& s, Point k);

// Exact population loss L_D(h) of a hypothesis of the class.
double true_loss(const HypothesisClass& h, long hypothesis, const SourceDistribution& d);

// Exact population loss of a randomized predictor given by its values.
double true_loss(std::span<const double> values, const HypothesisClass& h,
                 const SourceDistribution& d);

double min_true_loss(const HypothesisClass& h, const SourceDistribution& d);

}  // namespace stablepred

#endif
