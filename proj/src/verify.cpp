#include "stablepred/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "stablepred/parallel.hpp"

namespace stablepred::verify {

DominanceResult check_dominance(const DominanceClaim& c) {
  if (c.lhs.size() != c.rhs.size()) throw Error("dominance claim over mismatched domains");
  DominanceResult res;
  res.worst_margin = -std::numeric_limits<double>::infinity();
  for (std::size_t x = 0; x < c.lhs.size(); ++x) {
    for (int y = 0; y <= 1; ++y) {
      const double lhs = std::abs(c.lhs[x] - static_cast<double>(y));
      const double rhs = std::abs(c.rhs[x] - static_cast<double>(y));
      const double margin = lhs - c.lambda * rhs - c.kappa_add;
      if (margin > res.worst_margin) {
        res.worst_margin = margin;
        res.worst_x = static_cast<Point>(x);
        res.worst_y = y;
      }
    }
  }
  res.holds = res.worst_margin <= 1e-12;
  return res;
}

NeighborGrid::NeighborGrid(int domain_size, int n) : domain_size_(domain_size), n_(n) {
  if (domain_size < 1 || n < 1) throw Error("grid requires domain_size, n >= 1");
  const double cells = 2.0 * domain_size;
  const double total = std::pow(cells, n);
  if (total > 1e6) throw TooLargeError("neighbor grid larger than 1e6 samples", total);
  size_ = 1;
  for (int i = 0; i < n; ++i) size_ *= 2L * domain_size;
}

LabeledSample NeighborGrid::decode(long code) const {
  LabeledSample s;
  s.examples.resize(static_cast<std::size_t>(n_));
  const long base = 2L * domain_size_;
  for (int i = 0; i < n_; ++i) {
    const long digit = code % base;
    code /= base;
    s.examples[static_cast<std::size_t>(i)] =
        LabeledExample{static_cast<Point>(digit / 2), static_cast<int>(digit % 2)};
  }
  return s;
}

long NeighborGrid::encode(const LabeledSample& s) const {
  if (s.size() != n_) throw Error("sample size does not match grid");
  const long base = 2L * domain_size_;
  long code = 0;
  for (int i = n_ - 1; i >= 0; --i) {
    const auto& e = s.examples[static_cast<std::size_t>(i)];
    code = code * base + 2L * e.x + e.y;
  }
  return code;
}

std::vector<long> NeighborGrid::neighbors(long code) const {
  const long base = 2L * domain_size_;
  std::vector<long> out;
  out.reserve(static_cast<std::size_t>(n_) * static_cast<std::size_t>(base - 1));
  long stride = 1;
  long rest = code;
  for (int i = 0; i < n_; ++i) {
    const long digit = rest % base;
    rest /= base;
    for (long alt = 0; alt < base; ++alt)
      if (alt != digit) out.push_back(code + (alt - digit) * stride);
    stride *= base;
  }
  return out;
}

namespace {

std::vector<ValueFunction> evaluate_grid(const ExactLearnerFn& learner,
                                         const NeighborGrid& grid) {
  std::vector<ValueFunction> values(static_cast<std::size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t code) {
    values[static_cast<std::size_t>(code)] = learner(grid.decode(code));
  });
  return values;
}

}  // namespace

double sup_stability_gap(const ExactLearnerFn& learner, const NeighborGrid& grid) {
  const auto values = evaluate_grid(learner, grid);
  std::vector<double> worst(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::int64_t code) {
    const auto& vs = values[static_cast<std::size_t>(code)];
    double w = 0.0;
    for (long nb : grid.neighbors(code)) {
      const auto& vt = values[static_cast<std::size_t>(nb)];
      for (std::size_t x = 0; x < vs.size(); ++x)
        w = std::max(w, std::abs(vs[x] - vt[x]));
    }
    worst[static_cast<std::size_t>(code)] = w;
  });
  return *std::max_element(worst.begin(), worst.end());
}

double min_privacy_eps(const ExactLearnerFn& learner, const NeighborGrid& grid,
                       double delta) {
  const auto values = evaluate_grid(learner, grid);
  std::vector<double> worst(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::int64_t code) {
    const auto& vs = values[static_cast<std::size_t>(code)];
    double w = 0.0;
    for (long nb : grid.neighbors(code)) {
      const auto& vt = values[static_cast<std::size_t>(nb)];
      for (std::size_t x = 0; x < vs.size(); ++x) {
        for (int y = 0; y <= 1; ++y) {
          const double p = y == 1 ? vs[x] : 1.0 - vs[x];
          if (p <= delta) continue;  // unconstrained cell
          const double q = y == 1 ? vt[x] : 1.0 - vt[x];
          if (q <= 0.0) {
            w = std::numeric_limits<double>::infinity();
          } else {
            w = std::max(w, std::log((p - delta) / q));
          }
        }
      }
    }
    worst[static_cast<std::size_t>(code)] = w;
  });
  const double eps = *std::max_element(worst.begin(), worst.end());
  return std::max(eps, 0.0);
}

PredictionLaw empirical_prediction_law(const SampledLearnerFn& learner, long trials,
                                       Rng& rng) {
  if (trials < 100) throw Error("empirical_prediction_law requires trials >= 100");
  long ones = 0;
  for (long t = 0; t < trials; ++t) ones += learner(rng);
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(ones) / n;
  const double z = 2.5758293035489004;  // 99.5th normal quantile
  const double z2 = z * z;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / (1.0 + z2 / n);
  return PredictionLaw{p, half};
}

double uniform_convergence_check(const HypothesisClass& h, const SourceDistribution& d,
                                 int n, double alpha, long trials, Rng& rng) {
  d.validate();
  std::vector<double> population;
  for (long i = 0; i < h.num_hypotheses(); ++i) population.push_back(true_loss(h, i, d));
  long failures = 0;
  for (long t = 0; t < trials; ++t) {
    const LabeledSample s = sample_dataset(d, h, n, rng);
    for (long i = 0; i < h.num_hypotheses(); ++i) {
      if (std::abs(population[static_cast<std::size_t>(i)] - empirical_loss(h, i, s)) >
          alpha + 1e-12) {
        ++failures;
        break;
      }
    }
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

double net_probability_check(const HypothesisClass& h, const SourceDistribution& d,
                             int n_prime, double alpha, long trials, Rng& rng,
                             NetSamplingMode mode) {
  d.validate();
  int support = 0;
  for (double w : d.point_weights)
    if (w > 0.0) ++support;
  if (mode == NetSamplingMode::Distinct && n_prime > support)
    throw Error("distinct-mode net draw needs n' <= |support(D)|");

  auto draw_point = [&](Rng& r) {
    const double u = r.next_double();
    double cum = 0.0;
    for (Point p = 0; p < h.domain_size(); ++p) {
      cum += d.point_weights[static_cast<std::size_t>(p)];
      if (u < cum) return p;
    }
    return static_cast<Point>(h.domain_size() - 1);
  };

  long failures = 0;
  for (long t = 0; t < trials; ++t) {
    std::vector<Point> pts;
    if (mode == NetSamplingMode::WithReplacement) {
      for (int i = 0; i < n_prime; ++i) pts.push_back(draw_point(rng));
    } else {
      std::set<Point> seen;
      while (static_cast<int>(seen.size()) < n_prime) seen.insert(draw_point(rng));
      pts.assign(seen.begin(), seen.end());
    }
    if (!is_eps_net(pts, h, d.point_weights, alpha)) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

// ---- naive reference arithmetic ----

std::vector<double> naive_exp_probabilities(const HypothesisClass& h,
                                            const std::vector<Dichotomy>& dichotomies,
                                            const LabeledSample& s, double eps) {
  if (dichotomies.empty()) throw EmptyClassError();
  std::vector<double> weights;
  weights.reserve(dichotomies.size());
  double z = 0.0;
  for (const auto& d : dichotomies) {
    const double w =
        std::exp(-static_cast<double>(s.size()) * empirical_loss(h, d.representative, s) *
                 eps / 2.0);
    weights.push_back(w);
    z += w;
  }
  for (auto& w : weights) w /= z;
  return weights;
}

ValueFunction naive_h_st(const HypothesisClass& h, const LabeledSample& s,
                         std::span<const Point> t_points, double mech_eps) {
  const auto dis = restrict(h, t_points);
  const auto probs = naive_exp_probabilities(h, dis, s, mech_eps);
  ValueFunction out(static_cast<std::size_t>(h.domain_size()), 0.0);
  for (std::size_t i = 0; i < dis.size(); ++i)
    for (Point x = 0; x < h.domain_size(); ++x)
      out[static_cast<std::size_t>(x)] +=
          probs[i] * static_cast<double>(h.label(dis[i].representative, x));
  return out;
}

namespace {

template <typename Fn>
void for_each_index_subset(int n, int k, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

ValueFunction naive_stable_values(const HypothesisClass& h, const LabeledSample& s,
                                  int n_prime, double gamma) {
  ValueFunction acc(static_cast<std::size_t>(h.domain_size()), 0.0);
  long count = 0;
  for_each_index_subset(s.size(), n_prime, [&](const std::vector<int>& idx) {
    std::vector<Point> pts;
    for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
    const auto v = naive_h_st(h, s, pts, gamma);
    for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += v[x];
    ++count;
  });
  for (auto& v : acc) v /= static_cast<double>(count);
  return acc;
}

ValueFunction naive_main_values(const HypothesisClass& h, const LabeledSample& s,
                                int n_prime, double eta, int r, int partition_size) {
  const int n = s.size();
  const double two_eta_n = 2.0 * eta * static_cast<double>(n);

  auto phi = [&](long hypothesis) {
    // Relabel S by the hypothesis, learn one consistent hypothesis per
    // contiguous partition, aggregate through the two-exponential form.
    LabeledSample relabeled = s;
    for (auto& e : relabeled.examples) e.y = h.label(hypothesis, e.x);
    std::vector<long> voters;
    for (int j = 0; j < r; ++j) {
      LabeledSample part;
      part.examples.assign(
          relabeled.examples.begin() + static_cast<std::ptrdiff_t>(j) * partition_size,
          relabeled.examples.begin() + static_cast<std::ptrdiff_t>(j + 1) * partition_size);
      voters.push_back(erm(h, part).representative);
    }
    ValueFunction out(static_cast<std::size_t>(h.domain_size()));
    for (Point x = 0; x < h.domain_size(); ++x) {
      double votes = 0.0;
      for (long v : voters) votes += static_cast<double>(h.label(v, x));
      const double a = std::exp(votes / two_eta_n);
      const double b = std::exp((static_cast<double>(r) - votes) / two_eta_n);
      out[static_cast<std::size_t>(x)] = a / (a + b);
    }
    return out;
  };

  ValueFunction acc(static_cast<std::size_t>(h.domain_size()), 0.0);
  long count = 0;
  for_each_index_subset(n, n_prime, [&](const std::vector<int>& idx) {
    std::vector<Point> pts;
    for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
    const auto dis = restrict(h, pts);
    double z = 0.0;
    ValueFunction mix(static_cast<std::size_t>(h.domain_size()), 0.0);
    for (const auto& d : dis) {
      const double lam = std::exp(-empirical_loss(h, d.representative, s) / eta);
      const auto v = phi(d.representative);
      for (std::size_t x = 0; x < mix.size(); ++x) mix[x] += lam * v[x];
      z += lam;
    }
    for (std::size_t x = 0; x < mix.size(); ++x) acc[x] += mix[x] / z;
    ++count;
  });
  for (auto& v : acc) v /= static_cast<double>(count);
  return acc;
}

}  // namespace stablepred::verify
