#include "stablepred/privatepred.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stablepred/parallel.hpp"
#include "stablepred/verify.hpp"

namespace stablepred {

double flip_wrap(double base_value, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw Error("flip alpha must be in (0,1)");
  return (1.0 - alpha) * base_value + alpha * (1.0 - base_value);
}

ValueFunction flip_wrap(const ValueFunction& base, double alpha) {
  ValueFunction out;
  out.reserve(base.size());
  for (double v : base) out.push_back(flip_wrap(v, alpha));
  return out;
}

RealizableConfig RealizableConfig::log_inv_eps_preset(double eps, int sample_size,
                                                      int net_size) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw Error("preset needs eps in (0,1)");
  RealizableConfig cfg;
  cfg.r = std::max(1, static_cast<int>(std::ceil(3.0 * std::log(1.0 / eps) / eps)));
  cfg.partition_size = net_size;
  cfg.kappa = 3.0 * std::log(1.0 / eps);
  // One ballot moves the logit by 2 kappa / r = 2 eps at the nominal r; that
  // is the exact per-example privacy this preset certifies.
  cfg.eps_target = 2.0 * eps;
  if (cfg.r * cfg.partition_size > sample_size)
    throw InsufficientSampleError("preset violates m >= r * N_net(alpha, alpha, d)");
  return cfg;
}

RealizableConfig RealizableConfig::eta_m_preset(double eta, int sample_size, double alpha) {
  if (!(eta > 0.0)) throw Error("preset needs eta > 0");
  if (!(alpha > 0.0) || !(alpha < 1.0)) throw Error("preset needs alpha in (0,1)");
  RealizableConfig cfg;
  const double m = static_cast<double>(sample_size);
  cfg.r = std::max(1, static_cast<int>(std::llround(6.0 * eta * m * std::log(1.0 / alpha))));
  cfg.partition_size = sample_size / cfg.r;
  cfg.kappa = static_cast<double>(cfg.r) / (2.0 * eta * m);
  cfg.eps_target = 1.0 / (eta * m);
  if (cfg.partition_size < 1)
    throw InsufficientSampleError("preset violates m >= r partitions of size >= 1");
  return cfg;
}

SoftMajorityPredictor realizable_learn(const HypothesisClass& h, const LabeledSample& s_h,
                                       const RealizableConfig& cfg) {
  if (cfg.r < 1 || cfg.partition_size < 1)
    throw Error("realizable learner needs r >= 1 and partition_size >= 1");
  if (static_cast<long>(cfg.r) * cfg.partition_size > s_h.size())
    throw InsufficientSampleError(
        "r * partition_size exceeds |S_h| (violated condition: n >= N_R(1/(eta n), alpha, d) "
        "partition layout)");
  SoftMajorityPredictor out;
  out.kappa = cfg.kappa;
  out.voters.reserve(static_cast<std::size_t>(cfg.r));
  for (int j = 0; j < cfg.r; ++j) {
    LabeledSample part;
    part.examples.assign(
        s_h.examples.begin() + static_cast<std::ptrdiff_t>(j) * cfg.partition_size,
        s_h.examples.begin() + static_cast<std::ptrdiff_t>(j + 1) * cfg.partition_size);
    out.voters.push_back(erm(h, part));
  }
  return out;
}

RealizableConfig MainConfig::derived_realizable(int n) const {
  RealizableConfig cfg;
  cfg.r = r;
  cfg.partition_size = partition_size;
  cfg.kappa = static_cast<double>(r) / (2.0 * eta * static_cast<double>(n));
  cfg.eps_target = 1.0 / (eta * static_cast<double>(n));
  return cfg;
}

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

// phi_S(h) depends on h only through its labels on the points of S, so one
// table per exact-predict call serves every subset.
class PhiCache {
 public:
  PhiCache(const HypothesisClass& h, const LabeledSample& s, const RealizableConfig& cfg)
      : class_(h), sample_(s), cfg_(cfg) {}

  const ValueFunction& values_for(long hypothesis) {
    auto key = class_.labels_on(hypothesis, sample_points());
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
    LabeledSample relabeled = sample_;
    for (std::size_t i = 0; i < relabeled.examples.size(); ++i)
      relabeled.examples[i].y = key[i];
    const auto predictor = realizable_learn(class_, relabeled, cfg_);
    return table_.emplace(std::move(key), predictor.values(class_.domain_size()))
        .first->second;
  }

 private:
  std::span<const Point> sample_points() {
    if (points_.empty()) points_ = sample_.points();
    return points_;
  }

  const HypothesisClass& class_;
  const LabeledSample& sample_;
  RealizableConfig cfg_;
  std::vector<Point> points_;
  std::map<std::vector<std::uint8_t>, ValueFunction> table_;
};

ValueFunction main_h_st_cached(const HypothesisClass& h, const LabeledSample& s,
                               std::span<const Point> t_points, const MainConfig& cfg,
                               PhiCache& cache) {
  const double mech_eps = eps_from_eta(cfg.eta, s.size());
  const auto w = exp_mech_distribution(h, restrict(h, t_points), s, mech_eps);
  ValueFunction out(static_cast<std::size_t>(h.domain_size()), 0.0);
  for (std::size_t i = 0; i < w.support.size(); ++i) {
    const double p = std::exp(w.log_weight[i] - w.log_z);
    const auto& phi = cache.values_for(w.support[i].representative);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] += p * phi[x];
  }
  return out;
}

void check_main_config(const LabeledSample& s, const MainConfig& cfg) {
  if (s.size() < 1) throw Error("sample must be non-empty");
  if (cfg.n_prime < 1 || cfg.n_prime > s.size())
    throw Error("n_prime must satisfy 1 <= n' <= n");
  if (!(cfg.eta > 0.0)) throw Error("eta must be positive");
}

}  // namespace

ValueFunction main_h_st(const HypothesisClass& h, const LabeledSample& s,
                        std::span<const Point> t_points, const MainConfig& cfg) {
  check_main_config(s, cfg);
  PhiCache cache(h, s, cfg.derived_realizable(s.size()));
  return main_h_st_cached(h, s, t_points, cfg, cache);
}

MixturePredictor main_private_predict_exact(const HypothesisClass& h,
                                            const LabeledSample& s, const MainConfig& cfg) {
  check_main_config(s, cfg);
  const double subsets = binom_double(s.size(), cfg.n_prime);
  if (subsets > 1e6)
    throw TooLargeError("C(n, n') exceeds 1e6; use the sampled mode", subsets);

  PhiCache cache(h, s, cfg.derived_realizable(s.size()));
  MixturePredictor out;
  out.mode = MixtureMode::Exact;
  const double weight = 1.0 / subsets;
  for_each_index_subset(s.size(), cfg.n_prime, [&](const std::vector<int>& idx) {
    std::vector<Point> pts;
    pts.reserve(idx.size());
    for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
    out.terms.push_back(MixtureTerm{weight, main_h_st_cached(h, s, pts, cfg, cache)});
  });
  return out;
}

int main_private_predict_sampled(const HypothesisClass& h, const LabeledSample& s,
                                 const MainConfig& cfg, Point x, Rng& rng) {
  check_main_config(s, cfg);
  const auto idx = rng.sample_indices(s.size(), cfg.n_prime);
  std::vector<Point> pts;
  pts.reserve(idx.size());
  for (int i : idx) pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
  const double mech_eps = eps_from_eta(cfg.eta, s.size());
  const auto w = exp_mech_distribution(h, restrict(h, pts), s, mech_eps);
  const auto& chosen = exp_mech_sample(w, rng);

  LabeledSample relabeled = s;
  for (auto& e : relabeled.examples) e.y = h.label(chosen.representative, e.x);
  const auto phi = realizable_learn(h, relabeled, cfg.derived_realizable(s.size()));
  return rng.bernoulli(phi.value(x)) ? 1 : 0;
}

PreconditionReport main_preconditions(const HypothesisClass& h, int n,
                                      const MainConfig& cfg,
                                      const SampleSizeScale& scale) {
  PreconditionReport report;
  auto add = [&](std::string name, double actual, double required) {
    const bool ok = actual >= required;
    report.items.push_back(Precondition{std::move(name), ok, required, actual});
    report.all_satisfied = report.all_satisfied && ok;
  };
  const int d = h.vc_dim();

  add("n >= N_G(alpha, beta, d)", n,
      static_cast<double>(n_g(cfg.alpha, cfg.beta, d, scale.gen)));
  add("n' >= N_net(alpha, alpha, d)", cfg.n_prime,
      static_cast<double>(n_net(cfg.alpha, cfg.alpha, d, scale.net)));
  add("n' >= N_net(eta, alpha, d) + 1", cfg.n_prime,
      cfg.eta < 1.0
          ? static_cast<double>(n_net(cfg.eta, cfg.alpha, d, scale.net) + 1)
          : 2.0);

  const int m = std::min(n, h.domain_size());
  double tau;
  if (h.domain_size() <= 12) {
    tau = static_cast<double>(growth_count(h, m));
  } else {
    tau = static_cast<double>(sauer_bound(d, m));
  }
  const double mech_eps = eps_from_eta(cfg.eta, n);
  add("n >= N_exp(2/(eta n), alpha, tau_n(H))", n,
      static_cast<double>(n_exp(tau, mech_eps, cfg.alpha, scale.exp)));
  add("n >= N_R(1/(eta n), alpha, d)", n,
      static_cast<double>(
          n_r(1.0 / (cfg.eta * static_cast<double>(n)), cfg.alpha, d, scale.real)));
  add("n' <= eps n", cfg.eps * static_cast<double>(n), cfg.n_prime);
  add("eps >= 1/(eta n)", cfg.eps, 1.0 / (cfg.eta * static_cast<double>(n)));
  return report;
}

PrivacyReport privacy_certificate(const HypothesisClass& h, int n, const MainConfig& cfg,
                                  double delta_resolution, double delta_max) {
  PrivacyReport report;
  report.domain_size = h.domain_size();
  report.n = n;
  report.config = cfg;
  report.preconditions = main_preconditions(h, n, cfg);

  const verify::NeighborGrid grid(h.domain_size(), n);
  report.grid_size = grid.size();

  std::vector<ValueFunction> values(static_cast<std::size_t>(grid.size()));
  std::vector<double> naive_delta(static_cast<std::size_t>(grid.size()), 0.0);
  parallel_for(grid.size(), [&](std::int64_t code) {
    const LabeledSample s = grid.decode(code);
    auto vals = main_private_predict_exact(h, s, cfg).values(h.domain_size());
    const auto naive =
        verify::naive_main_values(h, s, cfg.n_prime, cfg.eta, cfg.r, cfg.partition_size);
    double d = 0.0;
    for (std::size_t x = 0; x < vals.size(); ++x)
      d = std::max(d, std::abs(vals[x] - naive[x]));
    naive_delta[static_cast<std::size_t>(code)] = d;
    values[static_cast<std::size_t>(code)] = std::move(vals);
  });
  report.naive_max_abs_delta =
      *std::max_element(naive_delta.begin(), naive_delta.end());

  // Collect every (p, q) probability cell over ordered neighbor pairs, then
  // read the eps-hat frontier off the cells for each delta on the grid.
  struct Cell {
    double p, q;
  };
  std::vector<std::vector<Cell>> cells_per(static_cast<std::size_t>(grid.size()));
  parallel_for(grid.size(), [&](std::int64_t code) {
    auto& cells = cells_per[static_cast<std::size_t>(code)];
    const auto& vs = values[static_cast<std::size_t>(code)];
    for (long nb : grid.neighbors(code)) {
      const auto& vt = values[static_cast<std::size_t>(nb)];
      for (std::size_t x = 0; x < vs.size(); ++x) {
        cells.push_back(Cell{vs[x], vt[x]});
        cells.push_back(Cell{1.0 - vs[x], 1.0 - vt[x]});
      }
    }
  });
  std::vector<Cell> cells;
  for (auto& c : cells_per) {
    cells.insert(cells.end(), c.begin(), c.end());
    c.clear();
  }

  const long steps = static_cast<long>(std::floor(delta_max / delta_resolution));
  std::vector<double> eps_at(static_cast<std::size_t>(steps) + 1, 0.0);
  parallel_for(steps + 1, [&](std::int64_t k) {
    const double delta = static_cast<double>(k) * delta_resolution;
    double worst = 0.0;
    for (const auto& cell : cells) {
      if (cell.p <= delta) continue;
      if (cell.q <= 0.0) {
        worst = std::numeric_limits<double>::infinity();
        break;
      }
      worst = std::max(worst, std::log((cell.p - delta) / cell.q));
    }
    eps_at[static_cast<std::size_t>(k)] = worst;
  });
  for (long k = 0; k <= steps; ++k)
    report.frontier.push_back(
        FrontierPoint{static_cast<double>(k) * delta_resolution,
                      eps_at[static_cast<std::size_t>(k)]});
  report.eps_hat_at_zero = eps_at[0];

  // Fixed-T relation: per-weight bound e^{1/(eta n)} for lambda and Z and for
  // phi gives h_{S,T} <= e^{3/(eta n)} h_{S',T} for every point multiset T.
  {
    auto& out = report.fixed_t;
    out.factor = std::exp(3.0 / (cfg.eta * static_cast<double>(n)));
    out.worst_margin = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<Point>> tsets;
    std::vector<Point> t(static_cast<std::size_t>(cfg.n_prime), 0);
    // Point multisets in nondecreasing order cover all distinct H_T.
    while (true) {
      tsets.push_back(t);
      int i = cfg.n_prime - 1;
      while (i >= 0 && t[static_cast<std::size_t>(i)] == h.domain_size() - 1) --i;
      if (i < 0) break;
      ++t[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < cfg.n_prime; ++j)
        t[static_cast<std::size_t>(j)] = t[static_cast<std::size_t>(i)];
    }
    for (const auto& tpts : tsets) {
      std::vector<ValueFunction> hst(static_cast<std::size_t>(grid.size()));
      parallel_for(grid.size(), [&](std::int64_t code) {
        hst[static_cast<std::size_t>(code)] =
            main_h_st(h, grid.decode(code), tpts, cfg);
      });
      for (long code = 0; code < grid.size(); ++code) {
        for (long nb : grid.neighbors(code)) {
          const auto res = verify::check_dominance(
              verify::DominanceClaim{hst[static_cast<std::size_t>(code)],
                                     hst[static_cast<std::size_t>(nb)], out.factor, 0.0});
          ++out.checked;
          out.worst_margin = std::max(out.worst_margin, res.worst_margin);
          out.holds = out.holds && res.holds;
        }
      }
    }
  }

  // Swap relation: for I containing index 0 whose remainder is an eta-net
  // with respect to the rest of the sample, swapping the changed index for
  // any outside index moves h_{S,S_I} by at most 4 e^6.
  {
    auto& out = report.swap;
    out.factor = 4.0 * std::exp(6.0);
    out.worst_margin = -std::numeric_limits<double>::infinity();
    for (long code = 0; code < grid.size(); ++code) {
      const LabeledSample s = grid.decode(code);
      std::vector<double> rest_weights(static_cast<std::size_t>(h.domain_size()), 0.0);
      for (int i = 1; i < n; ++i)
        rest_weights[static_cast<std::size_t>(s.examples[static_cast<std::size_t>(i)].x)] +=
            1.0 / static_cast<double>(n - 1);
      for_each_index_subset(n, cfg.n_prime, [&](const std::vector<int>& idx) {
        if (idx[0] != 0) return;  // only subsets containing the changed index
        std::vector<Point> rest_pts;
        for (std::size_t j = 1; j < idx.size(); ++j)
          rest_pts.push_back(s.examples[static_cast<std::size_t>(idx[j])].x);
        if (rest_pts.empty() ||
            !is_eps_net(rest_pts, h, rest_weights, cfg.eta)) {
          ++out.skipped;
          return;
        }
        std::vector<Point> i_pts;
        for (int i : idx) i_pts.push_back(s.examples[static_cast<std::size_t>(i)].x);
        const auto lhs = main_h_st(h, s, i_pts, cfg);
        for (int i = 0; i < n; ++i) {
          if (std::find(idx.begin(), idx.end(), i) != idx.end()) continue;
          auto swapped = rest_pts;
          swapped.push_back(s.examples[static_cast<std::size_t>(i)].x);
          const auto rhs = main_h_st(h, s, swapped, cfg);
          const auto res = verify::check_dominance(
              verify::DominanceClaim{lhs, rhs, out.factor, 0.0});
          ++out.checked;
          out.worst_margin = std::max(out.worst_margin, res.worst_margin);
          out.holds = out.holds && res.holds;
        }
      });
    }
  }

  return report;
}

}  // namespace stablepred
