#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stablepred/experiments.hpp"
#include "stablepred/json_io.hpp"
#include "stablepred/privatepred.hpp"
#include "stablepred/stable.hpp"
#include "stablepred/verify.hpp"

namespace py = pybind11;
using namespace stablepred;

namespace {

LabeledSample sample_from_pairs(const std::vector<std::pair<int, int>>& pairs) {
  LabeledSample s;
  for (auto [x, y] : pairs) {
    if (y != 0 && y != 1) throw Error("labels must be 0 or 1");
    s.examples.push_back(LabeledExample{x, y});
  }
  return s;
}

std::vector<std::pair<int, int>> pairs_from_sample(const LabeledSample& s) {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : s.examples) out.emplace_back(e.x, e.y);
  return out;
}

py::object to_py(const json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

// Privacy/stability measurements over a precomputed table of exact values,
// one row per grid code; keeps Python callbacks out of the threaded paths.
verify::ExactLearnerFn table_learner(const verify::NeighborGrid& grid,
                                     const std::vector<ValueFunction>& table) {
  if (static_cast<long>(table.size()) != grid.size())
    throw Error("value table must have one row per grid sample");
  return [&grid, &table](const LabeledSample& s) {
    return table[static_cast<std::size_t>(grid.encode(s))];
  };
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stable and private prediction learners with exact brute-force certification";

  py::register_exception<TooLargeError>(m, "TooLargeError");
  py::register_exception<Error>(m, "StablePredError");

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def("next_double", &Rng::next_double)
      .def("split", &Rng::split);

  py::class_<LabeledSample>(m, "LabeledSample")
      .def(py::init(&sample_from_pairs), py::arg("pairs"))
      .def_property_readonly("pairs", &pairs_from_sample)
      .def("size", &LabeledSample::size)
      .def("__len__", &LabeledSample::size)
      .def("__eq__", [](const LabeledSample& a, const LabeledSample& b) { return a == b; });

  py::class_<Dichotomy>(m, "Dichotomy")
      .def_property_readonly("labels",
                             [](const Dichotomy& d) {
                               std::vector<int> out(d.labels.begin(), d.labels.end());
                               return out;
                             })
      .def_readonly("representative", &Dichotomy::representative);

  py::class_<HypothesisClass>(m, "HypothesisClass")
      .def_static("thresholds", &HypothesisClass::thresholds, py::arg("domain_size"))
      .def_static("point_functions", &HypothesisClass::point_functions,
                  py::arg("domain_size"))
      .def_static("explicit_class", &HypothesisClass::explicit_class, py::arg("vectors"),
                  py::arg("declared_vc") = -1)
      .def_property_readonly("domain_size", &HypothesisClass::domain_size)
      .def_property_readonly("num_hypotheses", &HypothesisClass::num_hypotheses)
      .def_property_readonly("vc_dim", &HypothesisClass::vc_dim)
      .def("label", &HypothesisClass::label, py::arg("hypothesis"), py::arg("x"))
      .def("to_json", [](const HypothesisClass& h) { return to_py(class_to_json(h)); });

  m.def("restrict_class",
        [](const HypothesisClass& h, const std::vector<Point>& t) { return restrict(h, t); },
        py::arg("hypothesis_class"), py::arg("points"),
        "One dichotomy per agreement class on the given points");
  m.def("growth_count", &growth_count, py::arg("hypothesis_class"), py::arg("m"));
  m.def("sauer_bound", &sauer_bound, py::arg("d"), py::arg("m"));
  m.def("sauer_bound_float", &sauer_bound_float, py::arg("d"), py::arg("m"));
  m.def("compute_vc_dim", &compute_vc_dim, py::arg("hypothesis_class"));
  m.def("is_eps_net",
        [](const std::vector<Point>& a, const HypothesisClass& h,
           const std::vector<double>& weights, double alpha) {
          return is_eps_net(a, h, weights, alpha);
        },
        py::arg("points"), py::arg("hypothesis_class"), py::arg("weights"), py::arg("alpha"));
  m.def("erm", &erm, py::arg("hypothesis_class"), py::arg("sample"));
  m.def("empirical_loss",
        [](const HypothesisClass& h, long hyp, const LabeledSample& s) {
          return empirical_loss(h, hyp, s);
        },
        py::arg("hypothesis_class"), py::arg("hypothesis"), py::arg("sample"));

  py::class_<ExpMechWeights>(m, "ExpMechWeights")
      .def_property_readonly("probabilities", &ExpMechWeights::probabilities)
      .def_readonly("losses", &ExpMechWeights::losses)
      .def_readonly("eps", &ExpMechWeights::eps)
      .def("expected_loss", [](const ExpMechWeights& w) { return exp_mech_expected_loss(w); })
      .def("sample_index",
           [](const ExpMechWeights& w, Rng& rng) { return exp_mech_sample_index(w, rng); },
           py::arg("rng"));

  m.def("exp_mech_distribution",
        [](const HypothesisClass& h, const std::vector<Point>& t, const LabeledSample& s,
           double eps) { return exp_mech_distribution(h, restrict(h, t), s, eps); },
        py::arg("hypothesis_class"), py::arg("restriction_points"), py::arg("sample"),
        py::arg("eps"));
  m.def("eps_from_eta", &eps_from_eta, py::arg("eta"), py::arg("n"));

  py::class_<StableConfig>(m, "StableConfig")
      .def(py::init([](int n_prime, double gamma, double alpha, double beta) {
             return StableConfig{n_prime, gamma, alpha, beta};
           }),
           py::arg("n_prime"), py::arg("gamma"), py::arg("alpha") = 0.25,
           py::arg("beta") = 0.05)
      .def_readwrite("n_prime", &StableConfig::n_prime)
      .def_readwrite("gamma", &StableConfig::gamma)
      .def_readwrite("alpha", &StableConfig::alpha)
      .def_readwrite("beta", &StableConfig::beta);

  m.def("h_st",
        [](const HypothesisClass& h, const LabeledSample& s, const std::vector<Point>& t,
           double mech_eps) { return h_st(h, s, t, mech_eps); },
        py::arg("hypothesis_class"), py::arg("sample"), py::arg("t_points"),
        py::arg("mech_eps"));
  m.def("stable_predict_exact",
        [](const HypothesisClass& h, const LabeledSample& s, const StableConfig& cfg) {
          return stable_predict_exact(h, s, cfg).values(h.domain_size());
        },
        py::arg("hypothesis_class"), py::arg("sample"), py::arg("config"),
        "Exact A^sta value function over the domain");
  m.def("stable_predict_sampled", &stable_predict_sampled, py::arg("hypothesis_class"),
        py::arg("sample"), py::arg("config"), py::arg("x"), py::arg("rng"));
  m.def("stability_certificate",
        [](const HypothesisClass& h, int n, const StableConfig& cfg) {
          return to_py(stability_report_to_json(stability_certificate(h, n, cfg)));
        },
        py::arg("hypothesis_class"), py::arg("n"), py::arg("config"));
  m.def("stable_preconditions",
        [](const HypothesisClass& h, int n, const StableConfig& cfg) {
          return to_py(precondition_report_to_json(stable_preconditions(h, n, cfg)));
        },
        py::arg("hypothesis_class"), py::arg("n"), py::arg("config"));

  m.def("flip_wrap", py::overload_cast<double, double>(&flip_wrap), py::arg("value"),
        py::arg("alpha"));
  m.def("flip_wrap_values",
        py::overload_cast<const ValueFunction&, double>(&flip_wrap), py::arg("values"),
        py::arg("alpha"));

  py::class_<RealizableConfig>(m, "RealizableConfig")
      .def(py::init([](int r, int partition_size, double kappa, double eps_target) {
             return RealizableConfig{r, partition_size, kappa, eps_target};
           }),
           py::arg("r"), py::arg("partition_size"), py::arg("kappa"),
           py::arg("eps_target") = 0.0)
      .def_static("log_inv_eps_preset", &RealizableConfig::log_inv_eps_preset,
                  py::arg("eps"), py::arg("sample_size"), py::arg("net_size"))
      .def_static("eta_m_preset", &RealizableConfig::eta_m_preset, py::arg("eta"),
                  py::arg("sample_size"), py::arg("alpha"))
      .def_readwrite("r", &RealizableConfig::r)
      .def_readwrite("partition_size", &RealizableConfig::partition_size)
      .def_readwrite("kappa", &RealizableConfig::kappa)
      .def_readwrite("eps_target", &RealizableConfig::eps_target);

  py::class_<SoftMajorityPredictor>(m, "SoftMajorityPredictor")
      .def_readonly("kappa", &SoftMajorityPredictor::kappa)
      .def("value", &SoftMajorityPredictor::value, py::arg("x"))
      .def("values", &SoftMajorityPredictor::values, py::arg("domain_size"))
      .def("single_vote_ratio",
           [](const SoftMajorityPredictor& p, Point x) {
             return soft_majority_single_vote_ratio(p, x);
           },
           py::arg("x"));

  m.def("realizable_learn", &realizable_learn, py::arg("hypothesis_class"),
        py::arg("relabeled_sample"), py::arg("config"));

  py::class_<MainConfig>(m, "MainConfig")
      .def(py::init([](int n_prime, double eta, double alpha, double beta, double eps, int r,
                       int partition_size) {
             MainConfig cfg;
             cfg.n_prime = n_prime;
             cfg.eta = eta;
             cfg.alpha = alpha;
             cfg.beta = beta;
             cfg.eps = eps;
             cfg.r = r;
             cfg.partition_size = partition_size;
             return cfg;
           }),
           py::arg("n_prime"), py::arg("eta"), py::arg("alpha") = 0.25,
           py::arg("beta") = 0.05, py::arg("eps") = 0.5, py::arg("r") = 1,
           py::arg("partition_size") = 1)
      .def_readwrite("n_prime", &MainConfig::n_prime)
      .def_readwrite("eta", &MainConfig::eta)
      .def_readwrite("alpha", &MainConfig::alpha)
      .def_readwrite("beta", &MainConfig::beta)
      .def_readwrite("eps", &MainConfig::eps)
      .def_readwrite("r", &MainConfig::r)
      .def_readwrite("partition_size", &MainConfig::partition_size);

  m.def("main_private_predict_exact",
        [](const HypothesisClass& h, const LabeledSample& s, const MainConfig& cfg) {
          return main_private_predict_exact(h, s, cfg).values(h.domain_size());
        },
        py::arg("hypothesis_class"), py::arg("sample"), py::arg("config"));
  m.def("main_private_predict_sampled", &main_private_predict_sampled,
        py::arg("hypothesis_class"), py::arg("sample"), py::arg("config"), py::arg("x"),
        py::arg("rng"));
  m.def("privacy_certificate",
        [](const HypothesisClass& h, int n, const MainConfig& cfg, double delta_resolution,
           double delta_max) {
          return to_py(privacy_report_to_json(
              privacy_certificate(h, n, cfg, delta_resolution, delta_max)));
        },
        py::arg("hypothesis_class"), py::arg("n"), py::arg("config"),
        py::arg("delta_resolution") = 1e-4, py::arg("delta_max") = 5e-2);
  m.def("main_preconditions",
        [](const HypothesisClass& h, int n, const MainConfig& cfg) {
          return to_py(precondition_report_to_json(main_preconditions(h, n, cfg)));
        },
        py::arg("hypothesis_class"), py::arg("n"), py::arg("config"));

  py::class_<verify::NeighborGrid>(m, "NeighborGrid")
      .def(py::init<int, int>(), py::arg("domain_size"), py::arg("n"))
      .def_property_readonly("size", &verify::NeighborGrid::size)
      .def("decode", &verify::NeighborGrid::decode, py::arg("code"))
      .def("encode", &verify::NeighborGrid::encode, py::arg("sample"))
      .def("neighbors", &verify::NeighborGrid::neighbors, py::arg("code"));

  m.def("sup_stability_gap_table",
        [](const verify::NeighborGrid& grid, const std::vector<ValueFunction>& table) {
          return verify::sup_stability_gap(table_learner(grid, table), grid);
        },
        py::arg("grid"), py::arg("values"),
        "Exact stability gap from a per-grid-code table of value functions");
  m.def("min_privacy_eps_table",
        [](const verify::NeighborGrid& grid, const std::vector<ValueFunction>& table,
           double delta) {
          return verify::min_privacy_eps(table_learner(grid, table), grid, delta);
        },
        py::arg("grid"), py::arg("values"), py::arg("delta"));
  m.def("check_dominance",
        [](const ValueFunction& lhs, const ValueFunction& rhs, double lambda,
           double kappa_add) {
          const auto res =
              verify::check_dominance(verify::DominanceClaim{lhs, rhs, lambda, kappa_add});
          return py::make_tuple(res.holds, res.worst_margin, res.worst_x, res.worst_y);
        },
        py::arg("lhs"), py::arg("rhs"), py::arg("lam"), py::arg("kappa_add"));

  py::class_<SourceDistribution>(m, "SourceDistribution")
      .def(py::init([](const std::vector<double>& weights, long hypothesis,
                       const std::string& labeler, double noise_rate) {
             SourceDistribution d;
             d.point_weights = weights;
             d.hypothesis = hypothesis;
             if (labeler == "fixed") {
               d.kind = LabelerKind::Fixed;
             } else if (labeler == "agnostic") {
               d.kind = LabelerKind::Agnostic;
             } else {
               throw Error("labeler must be 'fixed' or 'agnostic'");
             }
             d.noise_rate = noise_rate;
             d.validate();
             return d;
           }),
           py::arg("point_weights"), py::arg("hypothesis") = 0,
           py::arg("labeler") = "fixed", py::arg("noise_rate") = 0.0);

  m.def("sample_dataset", &sample_dataset, py::arg("distribution"),
        py::arg("hypothesis_class"), py::arg("n"), py::arg("rng"));
  m.def("flip_set", &flip_set, py::arg("sample"), py::arg("k"));
  m.def("net_probability_check",
        [](const HypothesisClass& h, const SourceDistribution& d, int n_prime, double alpha,
           long trials, Rng& rng, const std::string& mode) {
          const auto m_ = mode == "distinct" ? verify::NetSamplingMode::Distinct
                                             : verify::NetSamplingMode::WithReplacement;
          return verify::net_probability_check(h, d, n_prime, alpha, trials, rng, m_);
        },
        py::arg("hypothesis_class"), py::arg("distribution"), py::arg("n_prime"),
        py::arg("alpha"), py::arg("trials"), py::arg("rng"),
        py::arg("mode") = "with_replacement");
  m.def("uniform_convergence_check", &verify::uniform_convergence_check,
        py::arg("hypothesis_class"), py::arg("distribution"), py::arg("n"), py::arg("alpha"),
        py::arg("trials"), py::arg("rng"));
  m.def("amplification_demo",
        [](const HypothesisClass& h, double base_eps, int n, int n_prime) {
          return to_py(amplification_report_to_json(
              amplification_demo(h, base_eps, n, n_prime)));
        },
        py::arg("hypothesis_class"), py::arg("base_eps"), py::arg("n"), py::arg("n_prime"));

  m.attr("__version__") = "0.1.0";
  m.attr("__all__") = py::make_tuple(
      "Rng", "LabeledSample", "Dichotomy", "HypothesisClass", "restrict_class",
      "growth_count", "sauer_bound", "sauer_bound_float", "compute_vc_dim", "is_eps_net",
      "erm", "empirical_loss", "ExpMechWeights", "exp_mech_distribution", "eps_from_eta",
      "StableConfig", "h_st", "stable_predict_exact", "stable_predict_sampled",
      "stability_certificate", "stable_preconditions", "flip_wrap", "flip_wrap_values",
      "RealizableConfig", "SoftMajorityPredictor", "realizable_learn", "MainConfig",
      "main_private_predict_exact", "main_private_predict_sampled", "privacy_certificate",
      "main_preconditions", "NeighborGrid", "sup_stability_gap_table",
      "min_privacy_eps_table", "check_dominance", "SourceDistribution", "sample_dataset",
      "flip_set", "net_probability_check", "uniform_convergence_check",
      "amplification_demo");
}
