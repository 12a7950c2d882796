#include "stablepred/mechanisms.hpp"

#include <algorithm>
#include <cmath>

namespace stablepred {

namespace {

double log_sum_exp(const std::vector<double>& xs) {
  const double m = *std::max_element(xs.begin(), xs.end());
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - m);
  return m + std::log(sum);
}

double sigmoid(double z) {
  // Evaluate through the negative branch only; stable for large |z|.
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

std::vector<double> ExpMechWeights::probabilities() const {
  std::vector<double> out;
  out.reserve(log_weight.size());
  for (double lw : log_weight) out.push_back(std::exp(lw - log_z));
  return out;
}

ExpMechWeights exp_mech_distribution(const HypothesisClass& h,
                                     std::vector<Dichotomy> dichotomies,
                                     const LabeledSample& s, double eps) {
  if (dichotomies.empty()) throw EmptyClassError();
  if (!(eps > 0.0)) throw Error("exponential mechanism eps must be positive");
  ExpMechWeights w;
  w.eps = eps;
  w.support = std::move(dichotomies);
  w.losses.reserve(w.support.size());
  w.log_weight.reserve(w.support.size());
  const double n = static_cast<double>(s.size());
  for (const auto& d : w.support) {
    const double loss = empirical_loss(h, d.representative, s);
    w.losses.push_back(loss);
    w.log_weight.push_back(-n * loss * eps / 2.0);
  }
  w.log_z = log_sum_exp(w.log_weight);
  return w;
}

std::size_t exp_mech_sample_index(const ExpMechWeights& w, Rng& rng) {
  const double u = rng.next_double();
  double cum = 0.0;
  for (std::size_t i = 0; i < w.log_weight.size(); ++i) {
    cum += std::exp(w.log_weight[i] - w.log_z);
    if (u < cum) return i;
  }
  return w.log_weight.size() - 1;  // u landed in the rounding tail
}

const Dichotomy& exp_mech_sample(const ExpMechWeights& w, Rng& rng) {
  return w.support[exp_mech_sample_index(w, rng)];
}

double exp_mech_expected_loss(const ExpMechWeights& w) {
  double out = 0.0;
  for (std::size_t i = 0; i < w.losses.size(); ++i)
    out += std::exp(w.log_weight[i] - w.log_z) * w.losses[i];
  return out;
}

double SoftMajorityPredictor::mean_vote(Point x) const {
  if (voters.empty()) throw EmptyClassError();
  double sum = 0.0;
  for (const auto& v : voters) sum += v.labels[static_cast<std::size_t>(x)];
  return sum / static_cast<double>(voters.size());
}

double SoftMajorityPredictor::value(Point x) const {
  return sigmoid(kappa * (2.0 * mean_vote(x) - 1.0));
}

ValueFunction SoftMajorityPredictor::values(int domain_size) const {
  ValueFunction out(static_cast<std::size_t>(domain_size));
  for (Point x = 0; x < domain_size; ++x) out[static_cast<std::size_t>(x)] = value(x);
  return out;
}

double soft_majority_value(const SoftMajorityPredictor& p, Point x) { return p.value(x); }

double soft_majority_single_vote_ratio(const SoftMajorityPredictor& p, Point x) {
  const double r = static_cast<double>(p.voters.size());
  const double vbar = p.mean_vote(x);
  int ones = 0;
  for (const auto& v : p.voters) ones += v.labels[static_cast<std::size_t>(x)];
  const double base = p.value(x);

  double worst = 1.0;
  auto consider = [&](double vbar_flipped) {
    const double flipped = sigmoid(p.kappa * (2.0 * vbar_flipped - 1.0));
    for (int y = 0; y <= 1; ++y) {
      const double a = y == 1 ? base : 1.0 - base;
      const double b = y == 1 ? flipped : 1.0 - flipped;
      worst = std::max(worst, std::max(a / b, b / a));
    }
  };
  if (ones > 0) consider(vbar - 1.0 / r);                      // a 1-ballot flips to 0
  if (ones < static_cast<int>(p.voters.size())) consider(vbar + 1.0 / r);  // a 0 flips to 1
  return worst;
}

}  // namespace stablepred
