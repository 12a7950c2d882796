#include "stablepred/sampling.hpp"

#include <cmath>

namespace stablepred {

void SourceDistribution::validate() const {
  double total = 0.0;
  for (double w : point_weights) {
    if (w < 0.0) throw BadDistributionError("negative point weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadDistributionError("point weights must sum to 1 within 1e-12");
  if (noise_rate < 0.0 || noise_rate > 0.5)
    throw BadDistributionError("noise_rate must be in [0, 1/2]");
}

SourceDistribution SourceDistribution::uniform_fixed(int domain_size, long hypothesis) {
  SourceDistribution d;
  d.point_weights.assign(static_cast<std::size_t>(domain_size),
                         1.0 / static_cast<double>(domain_size));
  d.kind = LabelerKind::Fixed;
  d.hypothesis = hypothesis;
  return d;
}

LabeledSample sample_dataset(const SourceDistribution& d, const HypothesisClass& h,
                             int n, Rng& rng) {
  d.validate();
  if (static_cast<int>(d.point_weights.size()) != h.domain_size())
    throw BadDistributionError("distribution does not match the class domain");
  LabeledSample s;
  s.examples.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_double();
    double cum = 0.0;
    Point x = h.domain_size() - 1;
    for (Point p = 0; p < h.domain_size(); ++p) {
      cum += d.point_weights[static_cast<std::size_t>(p)];
      if (u < cum) {
        x = p;
        break;
      }
    }
    int y = h.label(d.hypothesis, x);
    if (d.kind == LabelerKind::Agnostic && rng.bernoulli(d.noise_rate)) y = 1 - y;
    s.examples.push_back(LabeledExample{x, y});
  }
  return s;
}

LabeledSample flip_set(const LabeledSample& s, Point k) {
  LabeledSample out = s;
  for (auto& e : out.examples)
    if (e.x == k) e.y = 1 - e.y;
  return out;
}

double true_loss(const HypothesisClass& h, long hypothesis, const SourceDistribution& d) {
  double loss = 0.0;
  for (Point x = 0; x < h.domain_size(); ++x) {
    const double w = d.point_weights[static_cast<std::size_t>(x)];
    if (w == 0.0) continue;
    const int truth = h.label(d.hypothesis, x);
    const int pred = h.label(hypothesis, x);
    const double p_wrong =
        d.kind == LabelerKind::Fixed
            ? (pred == truth ? 0.0 : 1.0)
            : (pred == truth ? d.noise_rate : 1.0 - d.noise_rate);
    loss += w * p_wrong;
  }
  return loss;
}

double true_loss(std::span<const double> values, const HypothesisClass& h,
                 const SourceDistribution& d) {
  double loss = 0.0;
  for (Point x = 0; x < h.domain_size(); ++x) {
    const double w = d.point_weights[static_cast<std::size_t>(x)];
    if (w == 0.0) continue;
    const double truth = static_cast<double>(h.label(d.hypothesis, x));
    const double p = values[static_cast<std::size_t>(x)];
    const double wrong_given_clean = std::abs(p - truth);
    const double p_wrong = d.kind == LabelerKind::Fixed
                               ? wrong_given_clean
                               : (1.0 - d.noise_rate) * wrong_given_clean +
                                     d.noise_rate * (1.0 - wrong_given_clean);
    loss += w * p_wrong;
  }
  return loss;
}

double min_true_loss(const HypothesisClass& h, const SourceDistribution& d) {
  double best = 1.0;
  for (long i = 0; i < h.num_hypotheses(); ++i)
    best = std::min(best, true_loss(h, i, d));
  return best;
}

}  // namespace stablepred
