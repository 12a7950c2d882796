#ifndef STABLEPRED_MECHANISMS_HPP
#define STABLEPRED_MECHANISMS_HPP

#include <vector>

#include "stablepred/classes.hpp"
#include "stablepred/rng.hpp"

namespace stablepred {

// Exponential-mechanism weights over a finite dichotomy set, kept in
// log-space: log_weight[h] = -n * L_S(h) * eps / 2 and log_z is their
// log-sum-exp. The eta-parameterization lambda_h = exp(-L_S(h)/eta) is the
// same mechanism with eps = 2/(eta*n); see eps_from_eta.
struct ExpMechWeights {
  std::vector<Dichotomy> support;
  std::vector<double> losses;      // L_S through each representative
  std::vector<double> log_weight;
  double log_z = 0.0;
  double eps = 0.0;

  std::vector<double> probabilities() const;
};

inline double eps_from_eta(double eta, int n) { return 2.0 / (eta * n); }

// Weights lambda_h = exp(-n L_S(h) eps / 2) for each dichotomy, losses taken
// through the representatives. Throws EmptyClassError on an empty set.
ExpMechWeights exp_mech_distribution(const HypothesisClass& h,
                                     std::vector<Dichotomy> dichotomies,
                                     const LabeledSample& s, double eps);

std::size_t exp_mech_sample_index(const ExpMechWeights& w, Rng& rng);
const Dichotomy& exp_mech_sample(const ExpMechWeights& w, Rng& rng);

// Exact expected loss sum_h (lambda_h / Z) L_S(h).
double exp_mech_expected_loss(const ExpMechWeights& w);

// Sigmoid-of-vote-margin aggregation of full-domain voters:
// value(x) = sigmoid(kappa * (2 vbar(x) - 1)) with vbar the mean vote at x.
// Output is strictly inside (0, 1) for finite kappa.
struct SoftMajorityPredictor {
  std::vector<Dichotomy> voters;  // full-domain label vectors
  double kappa = 0.0;

  double mean_vote(Point x) const;
  double value(Point x) const;
  ValueFunction values(int domain_size) const;
};

double soft_majority_value(const SoftMajorityPredictor& p, Point x);

// Worst multiplicative change of Pr[output = y] over both labels when a
// single voter's ballot at x flips (both achievable flip directions tried).
// Always <= exp(2 * kappa / r).
double soft_majority_single_vote_ratio(const SoftMajorityPredictor& p, Point x);

}  // namespace stablepred

#endif
