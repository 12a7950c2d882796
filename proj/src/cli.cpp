#include "stablepred/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "stablepred/experiments.hpp"
#include "stablepred/json_io.hpp"
#include "stablepred/privatepred.hpp"
#include "stablepred/stable.hpp"
#include "stablepred/verify.hpp"

namespace stablepred {

namespace {

constexpr int kExitPass = 0;
constexpr int kExitViolated = 1;
constexpr int kExitError = 2;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string mode = "exact";
  std::optional<long> trials;
};

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return j;
}

void emit(const json& report, const CommonFlags& flags, const std::string& filename) {
  const std::string text = report.dump(2) + "\n";
  std::cout << text;
  if (!flags.out_dir.empty()) {
    std::filesystem::create_directories(flags.out_dir);
    std::ofstream out(std::filesystem::path(flags.out_dir) / filename,
                      std::ios::binary);
    out << text;
  }
}

void emit_text(const std::string& text, const CommonFlags& flags,
               const std::string& filename) {
  if (flags.out_dir.empty()) return;
  std::filesystem::create_directories(flags.out_dir);
  std::ofstream out(std::filesystem::path(flags.out_dir) / filename, std::ios::binary);
  out << text;
}

std::uint64_t seed_from(const json& cfg, const CommonFlags& flags) {
  if (flags.seed) return *flags.seed;
  if (cfg.contains("seed")) return cfg["seed"].get<std::uint64_t>();
  return 1;
}

double get_or(const json& cfg, const std::string& key, double fallback) {
  return cfg.contains(key) ? cfg[key].get<double>() : fallback;
}

long get_or(const json& cfg, const std::string& key, long fallback) {
  return cfg.contains(key) ? cfg[key].get<long>() : fallback;
}

SampleSizeScale scale_from(const json& cfg) {
  SampleSizeScale scale;
  if (!cfg.contains("complexity_scale")) return scale;
  const json& s = cfg["complexity_scale"];
  reject_unknown_keys(s, {"net", "exp", "gen", "real"}, "complexity_scale");
  scale.net = get_or(s, "net", 1.0);
  scale.exp = get_or(s, "exp", 1.0);
  scale.gen = get_or(s, "gen", 1.0);
  scale.real = get_or(s, "real", 1.0);
  return scale;
}

SourceDistribution distribution_from(const json& cfg, const HypothesisClass& h) {
  reject_unknown_keys(cfg, {"point_weights", "labeler", "hypothesis", "noise_rate"},
                      "distribution");
  SourceDistribution d;
  if (cfg.contains("point_weights")) {
    d.point_weights = cfg["point_weights"].get<std::vector<double>>();
  } else {
    d.point_weights.assign(static_cast<std::size_t>(h.domain_size()),
                           1.0 / h.domain_size());
  }
  const std::string labeler =
      cfg.contains("labeler") ? cfg["labeler"].get<std::string>() : "fixed";
  if (labeler == "fixed") {
    d.kind = LabelerKind::Fixed;
  } else if (labeler == "agnostic") {
    d.kind = LabelerKind::Agnostic;
  } else {
    throw ConfigError("labeler must be 'fixed' or 'agnostic'");
  }
  d.hypothesis = get_or(cfg, "hypothesis", 0L);
  d.noise_rate = get_or(cfg, "noise_rate", 0.0);
  d.validate();
  return d;
}

int cmd_certify_stability(const CommonFlags& flags) {
  const json cfg = load_config(flags.config_path);
  reject_unknown_keys(cfg,
                      {"class", "n", "n_prime", "gamma", "alpha", "beta", "learner",
                       "seed", "complexity_scale"},
                      "certify-stability config");
  const HypothesisClass h = class_from_json(cfg.at("class"));
  const int n = cfg.at("n").get<int>();
  StableConfig scfg;
  scfg.n_prime = cfg.at("n_prime").get<int>();
  scfg.gamma = cfg.at("gamma").get<double>();
  scfg.alpha = get_or(cfg, "alpha", 0.25);
  scfg.beta = get_or(cfg, "beta", 0.05);
  const std::string learner =
      cfg.contains("learner") ? cfg["learner"].get<std::string>() : "stable";

  StabilityReport report;
  if (learner == "stable") {
    report = stability_certificate(h, n, scfg);
  } else if (learner == "erm_only") {
    report = stability_certificate_custom(h, n, scfg, [&](const LabeledSample& s) {
      const auto d = erm(h, s);
      ValueFunction vals(d.labels.size());
      for (std::size_t x = 0; x < d.labels.size(); ++x)
        vals[x] = static_cast<double>(d.labels[x]);
      return vals;
    });
  } else {
    throw ConfigError("learner must be 'stable' or 'erm_only'");
  }
  report.preconditions = stable_preconditions(h, n, scfg, scale_from(cfg));

  json out = stability_report_to_json(report);
  out["learner"] = learner;
  emit(out, flags, "report.json");

  // The empirical-excess guarantee is only claimed when the preconditions of
  // the stable learner hold; the 3*gamma bound drives the exit code always.
  const bool excess_claimed = report.preconditions.all_satisfied;
  const bool pass = report.stability_ok && (!excess_claimed || report.excess_ok);
  return pass ? kExitPass : kExitViolated;
}

int cmd_certify_privacy(const CommonFlags& flags) {
  const json cfg = load_config(flags.config_path);
  reject_unknown_keys(cfg,
                      {"class", "n", "n_prime", "eta", "alpha", "beta", "eps", "r",
                       "partition_size", "delta_resolution", "delta_max", "seed",
                       "complexity_scale"},
                      "certify-privacy config");
  const HypothesisClass h = class_from_json(cfg.at("class"));
  const int n = cfg.at("n").get<int>();
  MainConfig mcfg;
  mcfg.n_prime = cfg.at("n_prime").get<int>();
  mcfg.eta = cfg.at("eta").get<double>();
  mcfg.alpha = get_or(cfg, "alpha", 0.25);
  mcfg.beta = get_or(cfg, "beta", 0.05);
  mcfg.eps = get_or(cfg, "eps", 0.5);
  mcfg.r = cfg.at("r").get<int>();
  mcfg.partition_size = cfg.at("partition_size").get<int>();

  PrivacyReport report = privacy_certificate(h, n, mcfg, get_or(cfg, "delta_resolution", 1e-4),
                                             get_or(cfg, "delta_max", 5e-2));
  report.preconditions = main_preconditions(h, n, mcfg, scale_from(cfg));
  emit(privacy_report_to_json(report), flags, "report.json");
  return report.fixed_t.holds && report.swap.holds ? kExitPass : kExitViolated;
}

int cmd_predict(const CommonFlags& flags, const std::string& dataset_path, int point) {
  const json cfg = load_config(flags.config_path);
  reject_unknown_keys(cfg,
                      {"class", "learner", "n_prime", "gamma", "alpha", "beta", "eps",
                       "eta", "r", "partition_size", "seed"},
                      "predict config");
  const HypothesisClass h = class_from_json(cfg.at("class"));

  std::ifstream in(dataset_path);
  if (!in) throw ConfigError("cannot open dataset file: " + dataset_path);
  json dataset;
  try {
    in >> dataset;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("dataset parse error: ") + e.what());
  }
  int domain = 0;
  const LabeledSample s = sample_from_json(dataset, &domain);
  if (domain != h.domain_size())
    throw ConfigError("dataset domain_size does not match the class");
  if (point < 0 || point >= h.domain_size()) throw ConfigError("query point outside domain");

  const std::string learner =
      cfg.contains("learner") ? cfg["learner"].get<std::string>() : "stable";
  Rng rng(seed_from(cfg, flags));

  json out;
  out["learner"] = learner;
  out["point"] = point;
  out["mode"] = flags.mode;

  auto finish_exact = [&](const ValueFunction& values,
                          const PreconditionReport& pre) {
    const double p = values[static_cast<std::size_t>(point)];
    out["probability"] = p;
    out["label"] = rng.bernoulli(p) ? 1 : 0;
    out["preconditions"] = precondition_report_to_json(pre);
  };

  if (learner == "stable" || learner == "flip_stable") {
    StableConfig scfg;
    scfg.n_prime = cfg.at("n_prime").get<int>();
    scfg.alpha = get_or(cfg, "alpha", 0.25);
    scfg.beta = get_or(cfg, "beta", 0.05);
    double flip_alpha = 0.0;
    if (learner == "flip_stable") {
      // Flip conversion: target gamma = eps*alpha/2; A^sta with mechanism
      // parameter gamma/3 certifies exactly that via its 3*gamma bound.
      const double eps = cfg.at("eps").get<double>();
      flip_alpha = scfg.alpha;
      scfg.gamma = FlipConfig{eps, flip_alpha}.induced_gamma() / 3.0;
    } else {
      scfg.gamma = cfg.at("gamma").get<double>();
    }
    const auto pre = stable_preconditions(h, s.size(), scfg);
    if (flags.mode == "exact") {
      auto values = stable_predict_exact(h, s, scfg).values(h.domain_size());
      if (learner == "flip_stable") values = flip_wrap(values, flip_alpha);
      finish_exact(values, pre);
    } else {
      int label = stable_predict_sampled(h, s, scfg, point, rng);
      if (learner == "flip_stable" && rng.bernoulli(flip_alpha)) label = 1 - label;
      out["label"] = label;
      out["preconditions"] = precondition_report_to_json(pre);
    }
  } else if (learner == "main") {
    MainConfig mcfg;
    mcfg.n_prime = cfg.at("n_prime").get<int>();
    mcfg.eta = cfg.at("eta").get<double>();
    mcfg.alpha = get_or(cfg, "alpha", 0.25);
    mcfg.beta = get_or(cfg, "beta", 0.05);
    mcfg.eps = get_or(cfg, "eps", 0.5);
    mcfg.r = cfg.at("r").get<int>();
    mcfg.partition_size = cfg.at("partition_size").get<int>();
    const auto pre = main_preconditions(h, s.size(), mcfg);
    if (flags.mode == "exact") {
      finish_exact(main_private_predict_exact(h, s, mcfg).values(h.domain_size()), pre);
    } else {
      out["label"] = main_private_predict_sampled(h, s, mcfg, point, rng);
      out["preconditions"] = precondition_report_to_json(pre);
    }
  } else if (learner == "erm_only") {
    const auto d = erm(h, s);
    out["probability"] = static_cast<double>(d.labels[static_cast<std::size_t>(point)]);
    out["label"] = static_cast<int>(d.labels[static_cast<std::size_t>(point)]);
  } else {
    throw ConfigError("learner must be stable, flip_stable, main, or erm_only");
  }

  emit(out, flags, "report.json");
  return kExitPass;
}

int cmd_experiment(const CommonFlags& flags) {
  const json cfg = load_config(flags.config_path);
  if (!cfg.contains("experiment")) throw ConfigError("experiment config needs 'experiment'");
  const std::string kind = cfg["experiment"].get<std::string>();

  if (kind == "sweep") {
    reject_unknown_keys(cfg,
                        {"experiment", "class", "distribution", "n_values", "n_prime",
                         "gamma", "alpha", "beta", "trials", "grid_cap", "seed"},
                        "sweep config");
    const HypothesisClass h = class_from_json(cfg.at("class"));
    const SourceDistribution d = distribution_from(
        cfg.contains("distribution") ? cfg["distribution"] : json::object(), h);
    SweepConfig sweep;
    sweep.n_values = cfg.at("n_values").get<std::vector<int>>();
    sweep.n_prime = static_cast<int>(get_or(cfg, "n_prime", 2L));
    sweep.gamma = get_or(cfg, "gamma", 0.5);
    sweep.alpha = get_or(cfg, "alpha", 0.25);
    sweep.beta = get_or(cfg, "beta", 0.05);
    sweep.trials = flags.trials.value_or(get_or(cfg, "trials", 50L));
    sweep.grid_cap = get_or(cfg, "grid_cap", 100000L);
    sweep.seed = seed_from(cfg, flags);
    const auto rows = sample_complexity_sweep(h, d, sweep);
    const std::string csv = sweep_to_csv(rows);
    emit_text(csv, flags, "sweep.csv");
    json summary;
    summary["experiment"] = "sweep";
    summary["rows"] = rows.size();
    summary["csv_header"] = sweep_csv_header();
    summary["seed"] = sweep.seed;
    json preconditions = json::array();
    for (int n : sweep.n_values) {
      const StableConfig scfg{std::min(sweep.n_prime, n), sweep.gamma, sweep.alpha,
                              sweep.beta};
      json item;
      item["n"] = n;
      item["report"] = precondition_report_to_json(stable_preconditions(h, n, scfg));
      preconditions.push_back(item);
    }
    summary["preconditions"] = preconditions;
    emit(summary, flags, "summary.json");
    return kExitPass;
  }

  if (kind == "lower-bound") {
    reject_unknown_keys(cfg,
                        {"experiment", "d", "alpha_num", "alpha_den", "gamma",
                         "mechanism_gamma", "n_prime", "n_values", "trials", "seed"},
                        "lower-bound config");
    LowerBoundFamily fam;
    fam.d = cfg.at("d").get<int>();
    fam.alpha = Fraction(get_or(cfg, "alpha_num", 1L), get_or(cfg, "alpha_den", 8L));
    const double gamma = get_or(cfg, "gamma", 0.25);
    const double mech_gamma = get_or(cfg, "mechanism_gamma", gamma / 3.0);
    const int n_prime = static_cast<int>(get_or(cfg, "n_prime", 1L));
    const long trials = flags.trials.value_or(get_or(cfg, "trials", 500L));
    Rng rng(seed_from(cfg, flags));

    std::vector<std::vector<std::uint8_t>> vectors;
    for (long mask = 0; mask < (1L << fam.d); ++mask) {
      std::vector<std::uint8_t> v;
      for (int x = 0; x < fam.d; ++x)
        v.push_back(static_cast<std::uint8_t>((mask >> (fam.d - 1 - x)) & 1));
      vectors.push_back(v);
    }
    const HypothesisClass h_all = HypothesisClass::explicit_class(vectors);

    json runs = json::array();
    for (int n : cfg.at("n_values").get<std::vector<int>>()) {
      StableConfig scfg{std::min(n_prime, n), mech_gamma, fam.alpha.to_double(), 0.05};
      verify::ExactLearnerFn learner = [&](const LabeledSample& s) {
        return stable_predict_exact(h_all, s, scfg).values(h_all.domain_size());
      };
      Rng run_rng = rng.split();
      json run = lower_bound_report_to_json(
          lower_bound_experiment(h_all, learner, fam, gamma, n, trials, run_rng));
      run["preconditions"] = precondition_report_to_json(
          stable_preconditions(h_all, n, scfg));
      runs.push_back(run);
    }
    json summary;
    summary["experiment"] = "lower-bound";
    summary["runs"] = runs;
    emit(summary, flags, "summary.json");
    return kExitPass;
  }

  if (kind == "net-check") {
    reject_unknown_keys(cfg,
                        {"experiment", "class", "distribution", "alpha",
                         "n_prime_values", "trials", "mode", "seed"},
                        "net-check config");
    const HypothesisClass h = class_from_json(cfg.at("class"));
    const SourceDistribution d = distribution_from(
        cfg.contains("distribution") ? cfg["distribution"] : json::object(), h);
    const double alpha = get_or(cfg, "alpha", 0.25);
    const long trials = flags.trials.value_or(get_or(cfg, "trials", 10000L));
    const std::string mode_name =
        cfg.contains("mode") ? cfg["mode"].get<std::string>() : "with_replacement";
    verify::NetSamplingMode mode;
    if (mode_name == "with_replacement") {
      mode = verify::NetSamplingMode::WithReplacement;
    } else if (mode_name == "distinct") {
      mode = verify::NetSamplingMode::Distinct;
    } else {
      throw ConfigError("mode must be 'with_replacement' or 'distinct'");
    }
    Rng rng(seed_from(cfg, flags));
    std::string csv = "n_prime,failure_rate\n";
    json rates = json::array();
    for (int np : cfg.at("n_prime_values").get<std::vector<int>>()) {
      Rng run_rng = rng.split();
      const double rate = verify::net_probability_check(h, d, np, alpha, trials, run_rng, mode);
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%d,%.12g\n", np, rate);
      csv += buf;
      rates.push_back(json::array({np, rate}));
    }
    emit_text(csv, flags, "net_check.csv");
    json summary;
    summary["experiment"] = "net-check";
    summary["alpha"] = alpha;
    summary["trials"] = trials;
    summary["mode"] = mode_name;
    summary["failure_rates"] = rates;
    emit(summary, flags, "summary.json");
    return kExitPass;
  }

  if (kind == "amplification") {
    reject_unknown_keys(cfg, {"experiment", "class", "base_eps", "n", "n_prime", "seed"},
                        "amplification config");
    const HypothesisClass h = class_from_json(cfg.at("class"));
    const auto report = amplification_demo(h, cfg.at("base_eps").get<double>(),
                                           cfg.at("n").get<int>(),
                                           cfg.at("n_prime").get<int>());
    json summary;
    summary["experiment"] = "amplification";
    summary["report"] = amplification_report_to_json(report);
    emit(summary, flags, "summary.json");
    return report.ok ? kExitPass : kExitViolated;
  }

  throw ConfigError("unknown experiment kind: " + kind);
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"Stable and private prediction learners with exact certification"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string dataset_path;
  int query_point = 0;

  auto add_common = [&](CLI::App* cmd, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", flags.config_path, "JSON config file");
    if (needs_config) opt->required();
    cmd->add_option("--seed", flags.seed, "PRNG seed override");
    cmd->add_option("--out", flags.out_dir, "output directory");
    cmd->add_option("--mode", flags.mode, "exact|sampled")
        ->check(CLI::IsMember({"exact", "sampled"}));
    cmd->add_option("--trials", flags.trials, "trial-count override");
  };

  auto* certify_stability =
      app.add_subcommand("certify-stability", "exhaustive 3*gamma stability certificate");
  add_common(certify_stability);
  auto* certify_privacy =
      app.add_subcommand("certify-privacy", "exhaustive privacy frontier certificate");
  add_common(certify_privacy);
  auto* predict = app.add_subcommand("predict", "predict a label for a query point");
  add_common(predict);
  predict->add_option("--dataset", dataset_path, "dataset JSON file")->required();
  predict->add_option("--point", query_point, "query point")->required();
  auto* experiment = app.add_subcommand("experiment", "run a reproduction experiment");
  add_common(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (certify_stability->parsed()) return cmd_certify_stability(flags);
    if (certify_privacy->parsed()) return cmd_certify_privacy(flags);
    if (predict->parsed()) return cmd_predict(flags, dataset_path, query_point);
    if (experiment->parsed()) return cmd_experiment(flags);
  } catch (const TooLargeError& e) {
    std::cerr << "error (TooLarge): " << e.what() << "\n";
    return kExitError;
  } catch (const ConfigError& e) {
    std::cerr << "error (config): " << e.what() << "\n";
    return kExitError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace stablepred
