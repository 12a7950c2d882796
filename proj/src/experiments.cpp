#include "stablepred/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "stablepred/mechanisms.hpp"
#include "stablepred/parallel.hpp"

namespace stablepred {

namespace {

long long gcd_ll(long long a, long long b) {
  while (b != 0) {
    const long long t = a % b;
    a = b;
    b = t;
  }
  return a < 0 ? -a : a;
}

}  // namespace

Fraction::Fraction(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw Error("fraction with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = gcd_ll(num == 0 ? den : num, den);
  num /= g;
  den /= g;
}

Fraction Fraction::operator+(const Fraction& o) const {
  return Fraction(num * o.den + o.num * den, den * o.den);
}
Fraction Fraction::operator-(const Fraction& o) const {
  return Fraction(num * o.den - o.num * den, den * o.den);
}
Fraction Fraction::operator*(const Fraction& o) const {
  return Fraction(num * o.num, den * o.den);
}

std::vector<Fraction> LowerBoundFamily::weights() const {
  if (d < 2) throw Error("lower-bound family needs d >= 2");
  const Fraction four_alpha = Fraction(4, 1) * alpha;
  if (four_alpha.num > four_alpha.den) throw Error("family requires alpha <= 1/4");
  std::vector<Fraction> out;
  const Fraction light = four_alpha * Fraction(1, d - 1);
  for (int k = 0; k + 1 < d; ++k) out.push_back(light);
  out.push_back(Fraction(1, 1) - four_alpha);
  return out;
}

std::vector<double> LowerBoundFamily::weight_doubles() const {
  std::vector<double> out;
  for (const auto& f : weights()) out.push_back(f.to_double());
  return out;
}

double LowerBoundFamily::threshold_n(double gamma) const {
  return static_cast<double>(d - 1) / (8.0 * gamma * alpha.to_double());
}

LowerBoundReport lower_bound_experiment(const HypothesisClass& h_all,
                                        const verify::ExactLearnerFn& learner,
                                        const LowerBoundFamily& fam, double gamma, int n,
                                        long trials, Rng& rng) {
  if (h_all.domain_size() != fam.d)
    throw Error("lower-bound experiment expects a class over X' = {0..d-1}");
  if (h_all.num_hypotheses() != (1L << fam.d))
    throw Error("lower-bound experiment expects the full class on X'");

  LowerBoundReport report;
  report.d = fam.d;
  report.n = n;
  report.alpha = fam.alpha.to_double();
  report.gamma = gamma;
  report.trials = trials;
  report.n_star = fam.threshold_n(gamma);
  report.below_threshold = static_cast<double>(n) < report.n_star;

  const auto weights = fam.weight_doubles();
  SourceDistribution d;
  d.point_weights = weights;
  d.kind = LabelerKind::Fixed;

  std::vector<double> errors(static_cast<std::size_t>(trials));
  std::vector<std::vector<double>> sens(
      static_cast<std::size_t>(fam.d - 1),
      std::vector<double>(static_cast<std::size_t>(trials)));
  std::vector<std::vector<double>> counts(
      static_cast<std::size_t>(fam.d - 1),
      std::vector<double>(static_cast<std::size_t>(trials)));

  std::vector<Rng> trial_rngs;
  trial_rngs.reserve(static_cast<std::size_t>(trials));
  for (long t = 0; t < trials; ++t) trial_rngs.push_back(rng.split());

  parallel_for(trials, [&](std::int64_t t) {
    Rng local = trial_rngs[static_cast<std::size_t>(t)];
    SourceDistribution dh = d;
    dh.hypothesis = static_cast<long>(local.next_below(
        static_cast<std::uint64_t>(h_all.num_hypotheses())));
    const LabeledSample s = sample_dataset(dh, h_all, n, local);
    const auto vals = learner(s);
    errors[static_cast<std::size_t>(t)] = true_loss(vals, h_all, dh);
    for (int k = 0; k + 1 < fam.d; ++k) {
      const auto flipped_vals = learner(flip_set(s, k));
      sens[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] =
          std::abs(vals[static_cast<std::size_t>(k)] -
                   flipped_vals[static_cast<std::size_t>(k)]);
      int count = 0;
      for (const auto& e : s.examples)
        if (e.x == k) ++count;
      counts[static_cast<std::size_t>(k)][static_cast<std::size_t>(t)] = count;
    }
  });

  auto mean_of = [](const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  };
  auto stderr_of = [&](const std::vector<double>& xs, double mean) {
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double var = ss / static_cast<double>(xs.size() - 1);
    return std::sqrt(var / static_cast<double>(xs.size()));
  };

  report.mean_error = mean_of(errors);
  report.stderr_error = stderr_of(errors, report.mean_error);
  const double a = report.alpha;
  report.error_lower_bound =
      2.0 * a * (1.0 - 4.0 * gamma * a * static_cast<double>(n) / (fam.d - 1));
  report.chain_ok =
      report.mean_error >= report.error_lower_bound - 3.0 * report.stderr_error;

  for (int k = 0; k + 1 < fam.d; ++k) {
    LowerBoundCoordinate coord;
    coord.k = k;
    coord.mean_flip_sensitivity = mean_of(sens[static_cast<std::size_t>(k)]);
    coord.mean_count = mean_of(counts[static_cast<std::size_t>(k)]);
    coord.expected_count = 4.0 * a * static_cast<double>(n) / (fam.d - 1);
    const double sens_se = stderr_of(sens[static_cast<std::size_t>(k)],
                                     coord.mean_flip_sensitivity);
    coord.stability_link_ok =
        coord.mean_flip_sensitivity <= gamma * coord.mean_count + 3.0 * sens_se;
    report.coordinates.push_back(coord);
  }
  return report;
}

AmplificationReport amplification_demo(const HypothesisClass& h, double base_eps, int n,
                                       int n_prime) {
  if (n_prime < 1 || n_prime > n) throw Error("amplification needs 1 <= n' <= n");
  AmplificationReport report;
  report.base_eps = base_eps;
  report.n = n;
  report.n_prime = n_prime;
  report.eta_fraction = static_cast<double>(n_prime) / static_cast<double>(n);

  std::vector<Point> domain(static_cast<std::size_t>(h.domain_size()));
  for (Point x = 0; x < h.domain_size(); ++x) domain[static_cast<std::size_t>(x)] = x;
  const auto candidates = restrict(h, domain);

  // Base learner: eps-private exponential mechanism over the fixed candidate
  // set, run on its own (subset-sized) sample.
  auto base_values = [&](const LabeledSample& t) {
    const auto w = exp_mech_distribution(h, candidates, t, base_eps);
    ValueFunction out(static_cast<std::size_t>(h.domain_size()), 0.0);
    const auto probs = w.probabilities();
    for (std::size_t i = 0; i < w.support.size(); ++i)
      for (Point x = 0; x < h.domain_size(); ++x)
        out[static_cast<std::size_t>(x)] +=
            probs[i] * static_cast<double>(h.label(w.support[i].representative, x));
    return out;
  };

  verify::ExactLearnerFn wrapper = [&](const LabeledSample& s) {
    ValueFunction acc(static_cast<std::size_t>(h.domain_size()), 0.0);
    long count = 0;
    std::vector<int> idx(static_cast<std::size_t>(n_prime));
    for (int i = 0; i < n_prime; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      LabeledSample sub;
      for (int i : idx) sub.examples.push_back(s.examples[static_cast<std::size_t>(i)]);
      const auto v = base_values(sub);
      for (std::size_t x = 0; x < acc.size(); ++x) acc[x] += v[x];
      ++count;
      int i = n_prime - 1;
      while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - n_prime + i) --i;
      if (i < 0) break;
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n_prime; ++j)
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
    for (auto& v : acc) v /= static_cast<double>(count);
    return acc;
  };

  const verify::NeighborGrid grid(h.domain_size(), n);
  report.grid_size = grid.size();
  report.measured_eps = verify::min_privacy_eps(wrapper, grid, 0.0);
  report.bound = n_prime == n ? base_eps : 2.0 * base_eps * report.eta_fraction;
  report.ok = report.measured_eps <= report.bound + 1e-9;
  return report;
}

std::vector<SweepRow> sample_complexity_sweep(const HypothesisClass& h,
                                              const SourceDistribution& d,
                                              const SweepConfig& cfg) {
  d.validate();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double best = min_true_loss(h, d);
  std::vector<SweepRow> rows;
  Rng rng(cfg.seed);
  for (int n : cfg.n_values) {
    SweepRow row;
    row.n = n;
    row.d = h.vc_dim();
    row.alpha = cfg.alpha;
    row.gamma = cfg.gamma;
    row.eps = nan;
    row.delta = 0.0;
    row.seed = cfg.seed;

    StableConfig scfg{std::min(cfg.n_prime, n), cfg.gamma, cfg.alpha, cfg.beta};
    Rng trial_rng = rng.split();
    double total = 0.0;
    for (long t = 0; t < cfg.trials; ++t) {
      const LabeledSample s = sample_dataset(d, h, n, trial_rng);
      const auto vals = stable_predict_exact(h, s, scfg).values(h.domain_size());
      total += true_loss(vals, h, d) - best;
    }
    row.excess_err = total / static_cast<double>(cfg.trials);

    const double grid_size = std::pow(2.0 * h.domain_size(), n);
    if (grid_size <= static_cast<double>(cfg.grid_cap)) {
      verify::ExactLearnerFn learner = [&](const LabeledSample& s) {
        return stable_predict_exact(h, s, scfg).values(h.domain_size());
      };
      const verify::NeighborGrid grid(h.domain_size(), n);
      row.stability_gap = verify::sup_stability_gap(learner, grid);
      row.min_eps = verify::min_privacy_eps(learner, grid, 0.0);
    } else {
      row.stability_gap = nan;
      row.min_eps = nan;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv_header() {
  return "n,d,alpha,gamma,eps,excess_err,stability_gap,min_eps,delta,seed";
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = sweep_csv_header() + "\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g,%llu\n",
                  r.n, r.d, r.alpha, r.gamma, r.eps, r.excess_err, r.stability_gap,
                  r.min_eps, r.delta, static_cast<unsigned long long>(r.seed));
    out += buf;
  }
  return out;
}

}  // namespace stablepred
