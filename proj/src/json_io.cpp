#include "stablepred/json_io.hpp"

#include <algorithm>
#include <cmath>

namespace stablepred {

namespace {

// NaN/inf are not representable in JSON; reports carry them as null.
json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

}  // namespace

json class_to_json(const HypothesisClass& h) {
  json j;
  switch (h.kind()) {
    case ClassKind::Thresholds:
      j["kind"] = "thresholds";
      break;
    case ClassKind::PointFunctions:
      j["kind"] = "point";
      break;
    case ClassKind::Explicit:
      j["kind"] = "explicit";
      break;
  }
  j["domain_size"] = h.domain_size();
  if (h.kind() == ClassKind::Explicit) {
    json vectors = json::array();
    for (const auto& v : h.vectors()) {
      json row = json::array();
      for (auto b : v) row.push_back(static_cast<int>(b));
      vectors.push_back(row);
    }
    j["vectors"] = vectors;
  }
  return j;
}

HypothesisClass class_from_json(const json& j) {
  reject_unknown_keys(j, {"kind", "domain_size", "vectors"}, "class");
  if (!j.contains("kind") || !j["kind"].is_string())
    throw ConfigError("class needs a string 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "explicit") {
    if (!j.contains("vectors") || !j["vectors"].is_array())
      throw ConfigError("explicit class needs 'vectors'");
    std::vector<std::vector<std::uint8_t>> vectors;
    for (const auto& row : j["vectors"]) {
      std::vector<std::uint8_t> v;
      for (const auto& b : row) {
        const int bit = b.get<int>();
        if (bit != 0 && bit != 1) throw ConfigError("labels must be 0 or 1");
        v.push_back(static_cast<std::uint8_t>(bit));
      }
      vectors.push_back(std::move(v));
    }
    auto h = HypothesisClass::explicit_class(std::move(vectors));
    if (j.contains("domain_size") && j["domain_size"].get<int>() != h.domain_size())
      throw ConfigError("domain_size does not match the vectors");
    return h;
  }
  if (!j.contains("domain_size")) throw ConfigError("class needs 'domain_size'");
  const int domain = j["domain_size"].get<int>();
  if (kind == "thresholds") return HypothesisClass::thresholds(domain);
  if (kind == "point") return HypothesisClass::point_functions(domain);
  throw ConfigError("unknown class kind: " + kind);
}

json sample_to_json(const LabeledSample& s, int domain_size) {
  json j;
  j["domain_size"] = domain_size;
  json pairs = json::array();
  for (const auto& e : s.examples) pairs.push_back(json::array({e.x, e.y}));
  j["pairs"] = pairs;
  return j;
}

LabeledSample sample_from_json(const json& j, int* domain_size_out) {
  reject_unknown_keys(j, {"domain_size", "pairs"}, "dataset");
  if (!j.contains("domain_size") || !j.contains("pairs"))
    throw ConfigError("dataset needs 'domain_size' and 'pairs'");
  const int domain = j["domain_size"].get<int>();
  if (domain < 1) throw ConfigError("domain_size must be >= 1");
  LabeledSample s;
  for (const auto& pair : j["pairs"]) {
    if (!pair.is_array() || pair.size() != 2) throw ConfigError("pairs must be [x, y]");
    const int x = pair[0].get<int>();
    const int y = pair[1].get<int>();
    if (x < 0 || x >= domain) throw ConfigError("point outside the domain");
    if (y != 0 && y != 1) throw ConfigError("labels must be 0 or 1");
    s.examples.push_back(LabeledExample{x, y});
  }
  if (s.size() == 0) throw ConfigError("dataset must hold at least one pair");
  if (domain_size_out) *domain_size_out = domain;
  return s;
}

json precondition_report_to_json(const PreconditionReport& r) {
  json items = json::array();
  for (const auto& p : r.items) {
    json item;
    item["name"] = p.name;
    item["satisfied"] = p.satisfied;
    item["required"] = finite_or_null(p.required);
    item["actual"] = finite_or_null(p.actual);
    items.push_back(item);
  }
  json j;
  j["all_satisfied"] = r.all_satisfied;
  j["conditions"] = items;
  return j;
}

json stability_report_to_json(const StabilityReport& r) {
  json j;
  j["domain_size"] = r.domain_size;
  j["n"] = r.n;
  j["n_prime"] = r.config.n_prime;
  j["gamma"] = r.config.gamma;
  j["alpha"] = r.config.alpha;
  j["beta"] = r.config.beta;
  j["grid_size"] = r.grid_size;
  j["preconditions"] = precondition_report_to_json(r.preconditions);
  j["sup_stability_gap"] = r.sup_gap;
  j["gap_bound"] = r.gap_bound;
  j["stability_ok"] = r.stability_ok;
  j["worst_gap_sample"] = sample_to_json(r.worst_gap_sample, r.domain_size)["pairs"];
  j["worst_gap_neighbor"] = sample_to_json(r.worst_gap_neighbor, r.domain_size)["pairs"];
  j["worst_gap_point"] = r.worst_gap_point;
  j["sup_empirical_excess"] = r.sup_excess;
  j["excess_bound"] = r.excess_bound;
  j["excess_ok"] = r.excess_ok;
  if (r.naive_max_abs_delta)
    j["naive_oracle_max_abs_delta"] = *r.naive_max_abs_delta;
  return j;
}

json privacy_report_to_json(const PrivacyReport& r) {
  json j;
  j["domain_size"] = r.domain_size;
  j["n"] = r.n;
  j["n_prime"] = r.config.n_prime;
  j["eta"] = r.config.eta;
  j["alpha"] = r.config.alpha;
  j["beta"] = r.config.beta;
  j["eps"] = r.config.eps;
  j["r"] = r.config.r;
  j["partition_size"] = r.config.partition_size;
  j["grid_size"] = r.grid_size;
  j["preconditions"] = precondition_report_to_json(r.preconditions);
  j["eps_hat_at_delta_zero"] = finite_or_null(r.eps_hat_at_zero);
  json frontier = json::array();
  for (const auto& p : r.frontier)
    frontier.push_back(json::array({p.delta, finite_or_null(p.eps_hat)}));
  j["frontier"] = frontier;
  auto dominance = [](const DominanceCheckSummary& s) {
    json d;
    d["factor"] = s.factor;
    d["checked"] = s.checked;
    d["skipped"] = s.skipped;
    d["holds"] = s.holds;
    d["worst_margin"] = s.worst_margin;
    return d;
  };
  j["fixed_t_dominance"] = dominance(r.fixed_t);
  j["swap_dominance"] = dominance(r.swap);
  j["naive_oracle_max_abs_delta"] = r.naive_max_abs_delta;
  return j;
}

json lower_bound_report_to_json(const LowerBoundReport& r) {
  json j;
  j["d"] = r.d;
  j["n"] = r.n;
  j["alpha"] = r.alpha;
  j["gamma"] = r.gamma;
  j["trials"] = r.trials;
  j["n_star"] = r.n_star;
  j["below_threshold"] = r.below_threshold;
  j["mean_error"] = r.mean_error;
  j["stderr_error"] = r.stderr_error;
  j["error_lower_bound"] = r.error_lower_bound;
  j["chain_ok"] = r.chain_ok;
  json coords = json::array();
  for (const auto& c : r.coordinates) {
    json cj;
    cj["k"] = c.k;
    cj["mean_flip_sensitivity"] = c.mean_flip_sensitivity;
    cj["mean_count"] = c.mean_count;
    cj["expected_count"] = c.expected_count;
    cj["stability_link_ok"] = c.stability_link_ok;
    coords.push_back(cj);
  }
  j["coordinates"] = coords;
  return j;
}

json amplification_report_to_json(const AmplificationReport& r) {
  json j;
  j["base_eps"] = r.base_eps;
  j["n"] = r.n;
  j["n_prime"] = r.n_prime;
  j["eta_fraction"] = r.eta_fraction;
  j["grid_size"] = r.grid_size;
  j["measured_eps"] = finite_or_null(r.measured_eps);
  j["bound"] = r.bound;
  j["ok"] = r.ok;
  return j;
}

void reject_unknown_keys(const json& j, const std::vector<std::string>& allowed,
                         const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError("unknown key '" + key + "' in " + context);
  }
}

}  // namespace stablepred
