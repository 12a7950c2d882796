#include "stablepred/stable.hpp"

#include <algorithm>
#include <cmath>

#include "stablepred/parallel.hpp"
#include "stablepred/verify.hpp"

namespace stablepred {

namespace {

double binom_double(int n, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i)
    out *= static_cast<double>(n - i) / static_cast<double>(i + 1);
  return out;
}

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

void check_stable_config(const LabeledSample& s, const StableConfig& cfg) {
  if (s.size() < 1) throw Error("sample must be non-empty");
  if (cfg.n_prime < 1 || cfg.n_prime > s.size())
    throw Error("n_prime must satisfy 1 <= n' <= n");
  if (!(cfg.gamma > 0.0)) throw Error("gamma must be positive");
}

}  // namespace

ValueFunction MixturePredictor::values(int domain_size) const {
  ValueFunction out(static_cast<std::size_t>(domain_size), 0.0);
  for (const auto& term : terms)
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += term.weight * term.values[x];
  return out;
}

double MixturePredictor::value(Point x) const {
  double out = 0.0;
  for (const auto& term : terms)
    out += term.weight * term.values[static_cast<std::size_t>(x)];
  return out;
}

ValueFunction h_st(const HypothesisClass& h, const LabeledSample& s,
                   std::span<const Point> t_points, double mech_eps) {
  const auto w = exp_mech_distribution(h, restrict(h, t_points), s, mech_eps);
  ValueFunction out(static_cast<std::size_t>(h.domain_size()), 0.0);
  for (std::size_t i = 0; i < w.support.size(); ++i) {
    const double p = std::exp(w.log_weight[i] - w.log_z);
    const long rep = w.support[i].representative;
    for (Point x = 0; x < h.domain_size(); ++x)
      out[static_cast<std::size_t>(x)] += p * static_cast<double>(h.label(rep, x));
  }
  return out;
}

ValueFunction h_st(const HypothesisClass& h, const LabeledSample& s,
                   const LabeledSample& t, double mech_eps) {
  const auto pts = t.points();
  return h_st(h, s, pts, mech_eps);
}

MixturePredictor stable_predict_exact(const HypothesisClass& h, const LabeledSample& s,
                                      const StableConfig& cfg) {
  check_stable_config(s, cfg);
  const double subsets = binom_double(s.size(), cfg.n_prime);
  if (subsets > 1e6)
    throw TooLargeError("C(n, n') exceeds 1e6; use Monte Carlo mode", subsets);

  MixturePredictor out;
  out.mode = MixtureMode::Exact;
  const double weight = 1.0 / subsets;
  for_each_index_subset(s.size(), cfg.n_prime, [&](const std::vector<int>& idx) {
    std::vector<Point> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
    out.terms.push_back(MixtureTerm{weight, h_st(h, s, pts, cfg.gamma)});
  });
  return out;
}

MixturePredictor stable_predict_monte_carlo(const HypothesisClass& h, const LabeledSample& s,
                                            const StableConfig& cfg, long draws, Rng& rng) {
  check_stable_config(s, cfg);
  if (draws < 1) throw Error("Monte Carlo mode needs at least one draw");
  MixturePredictor out;
  out.mode = MixtureMode::MonteCarlo;
  out.monte_carlo_draws = draws;
  const double weight = 1.0 / static_cast<double>(draws);
  for (long t = 0; t < draws; ++t) {
    const auto idx = rng.sample_indices(s.size(), cfg.n_prime);
    std::vector<Point> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
    out.terms.push_back(MixtureTerm{weight, h_st(h, s, pts, cfg.gamma)});
  }
  return out;
}

int stable_predict_sampled(const HypothesisClass& h, const LabeledSample& s,
                           const StableConfig& cfg, Point x, Rng& rng) {
  check_stable_config(s, cfg);
  const auto idx = rng.sample_indices(s.size(), cfg.n_prime);
  std::vector<Point> pts;
  pts.reserve(idx.size());
  for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
  const auto w = exp_mech_distribution(h, restrict(h, pts), s, cfg.gamma);
  const auto& chosen = exp_mech_sample(w, rng);
  return h.label(chosen.representative, x);
}

PreconditionReport stable_preconditions(const HypothesisClass& h, int n,
                                        const StableConfig& cfg,
                                        const SampleSizeScale& scale) {
  PreconditionReport report;
  auto add = [&](std::string name, double actual, double required) {
    const bool ok = actual >= required;
    report.items.push_back(Precondition{std::move(name), ok, required, actual});
    report.all_satisfied = report.all_satisfied && ok;
  };

  add("n' >= N_net(alpha, alpha, d)", cfg.n_prime,
      static_cast<double>(n_net(cfg.alpha, cfg.alpha, h.vc_dim(), scale.net)));

  const int m = std::min(cfg.n_prime, h.domain_size());
  double tau;
  if (h.domain_size() <= 12) {
    tau = static_cast<double>(growth_count(h, m));
  } else {
    tau = static_cast<double>(sauer_bound(h.vc_dim(), m));
  }
  add("n >= N_exp(tau_{n'}(H), gamma, alpha)", n,
      static_cast<double>(n_exp(tau, cfg.gamma, cfg.alpha, scale.exp)));

  add("n >= n'/gamma", n, static_cast<double>(cfg.n_prime) / cfg.gamma);
  return report;
}

namespace {

StabilityReport certificate_engine(const HypothesisClass& h, int n, const StableConfig& cfg,
                                   const ExactLearner& learner, bool naive_check) {
  StabilityReport report;
  report.domain_size = h.domain_size();
  report.n = n;
  report.config = cfg;
  report.preconditions = stable_preconditions(h, n, cfg);
  report.gap_bound = 3.0 * cfg.gamma;
  report.excess_bound = 3.0 * cfg.alpha;

  const verify::NeighborGrid grid(h.domain_size(), n);
  report.grid_size = grid.size();

  std::vector<ValueFunction> values(static_cast<std::size_t>(grid.size()));
  std::vector<double> excess(static_cast<std::size_t>(grid.size()));
  std::vector<double> naive_delta(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::int64_t code) {
    const LabeledSample s = grid.decode(code);
    auto vals = learner(s);
    double best = 1.0;
    for (long i = 0; i < h.num_hypotheses(); ++i)
      best = std::min(best, empirical_loss(h, i, s));
    excess[static_cast<std::size_t>(code)] = empirical_loss(vals, s) - best;
    if (naive_check) {
      const auto naive = verify::naive_stable_values(h, s, cfg.n_prime, cfg.gamma);
      double d = 0.0;
      for (std::size_t x = 0; x < vals.size(); ++x)
        d = std::max(d, std::abs(vals[x] - naive[x]));
      naive_delta[static_cast<std::size_t>(code)] = d;
    }
    values[static_cast<std::size_t>(code)] = std::move(vals);
  });

  struct Worst {
    double gap = -1.0;
    long code = 0;
    long neighbor = 0;
    Point x = 0;
  };
  std::vector<Worst> worst(static_cast<std::size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t code) {
    Worst w;
    const auto& vs = values[static_cast<std::size_t>(code)];
    for (long nb : grid.neighbors(code)) {
      const auto& vt = values[static_cast<std::size_t>(nb)];
      for (std::size_t x = 0; x < vs.size(); ++x) {
        const double gap = std::abs(vs[x] - vt[x]);
        if (gap > w.gap) w = Worst{gap, code, nb, static_cast<Point>(x)};
      }
    }
    worst[static_cast<std::size_t>(code)] = w;
  });

  Worst overall;
  for (const auto& w : worst)
    if (w.gap > overall.gap) overall = w;
  report.sup_gap = std::max(overall.gap, 0.0);
  report.worst_gap_sample = grid.decode(overall.code);
  report.worst_gap_neighbor = grid.decode(overall.neighbor);
  report.worst_gap_point = overall.x;
  report.stability_ok = report.sup_gap <= report.gap_bound + 1e-9;

  report.sup_excess = *std::max_element(excess.begin(), excess.end());
  report.excess_ok = report.sup_excess <= report.excess_bound + 1e-9;

  if (naive_check)
    report.naive_max_abs_delta = *std::max_element(naive_delta.begin(), naive_delta.end());
  return report;
}

}  // namespace

StabilityReport stability_certificate(const HypothesisClass& h, int n,
                                      const StableConfig& cfg) {
  ExactLearner learner = [&](const LabeledSample& s) {
    return stable_predict_exact(h, s, cfg).values(h.domain_size());
  };
  return certificate_engine(h, n, cfg, learner, /*naive_check=*/true);
}

StabilityReport stability_certificate_custom(const HypothesisClass& h, int n,
                                             const StableConfig& cfg,
                                             const ExactLearner& learner) {
  return certificate_engine(h, n, cfg, learner, /*naive_check=*/false);
}

}  // namespace stablepred
