#include <doctest.h>

#include "stablepred/json_io.hpp"

using namespace stablepred;

TEST_CASE("class json round trip preserves behavior") {
  const std::vector<HypothesisClass> fixtures{
      HypothesisClass::thresholds(5),
      HypothesisClass::point_functions(4),
      HypothesisClass::explicit_class({{0, 1, 1}, {1, 0, 1}})};
  for (const auto& h : fixtures) {
    const auto parsed = class_from_json(class_to_json(h));
    CHECK(parsed.kind() == h.kind());
    CHECK(parsed.domain_size() == h.domain_size());
    CHECK(parsed.num_hypotheses() == h.num_hypotheses());
    for (long i = 0; i < h.num_hypotheses(); ++i)
      for (Point x = 0; x < h.domain_size(); ++x)
        CHECK(parsed.label(i, x) == h.label(i, x));
  }
}

TEST_CASE("class json rejects malformed input") {
  CHECK_THROWS_AS(class_from_json(json::parse(R"({"kind":"mystery","domain_size":3})")),
                  ConfigError);
  CHECK_THROWS_AS(class_from_json(json::parse(R"({"domain_size":3})")), ConfigError);
  CHECK_THROWS_AS(class_from_json(json::parse(
                      R"({"kind":"thresholds","domain_size":3,"extra":1})")),
                  ConfigError);
  CHECK_THROWS_AS(class_from_json(json::parse(
                      R"({"kind":"explicit","vectors":[[0,2]]})")),
                  ConfigError);
}

TEST_CASE("dataset json: parse, domain check, and errors") {
  const auto j = json::parse(R"({"domain_size": 3, "pairs": [[0,1],[2,0],[1,1]]})");
  int domain = 0;
  const auto s = sample_from_json(j, &domain);
  CHECK(domain == 3);
  REQUIRE(s.size() == 3);
  CHECK(s.examples[1].x == 2);
  CHECK(s.examples[1].y == 0);

  const auto round = sample_to_json(s, domain);
  CHECK(sample_from_json(round) == s);

  CHECK_THROWS_AS(sample_from_json(json::parse(R"({"pairs": [[0,1]]})")), ConfigError);
  CHECK_THROWS_AS(sample_from_json(json::parse(R"({"domain_size":2,"pairs":[[5,1]]})")),
                  ConfigError);
  CHECK_THROWS_AS(sample_from_json(json::parse(R"({"domain_size":2,"pairs":[[0,3]]})")),
                  ConfigError);
  CHECK_THROWS_AS(sample_from_json(json::parse(R"({"domain_size":2,"pairs":[]})")),
                  ConfigError);
}

TEST_CASE("reject_unknown_keys") {
  const auto j = json::parse(R"({"a": 1, "b": 2})");
  CHECK_NOTHROW(reject_unknown_keys(j, {"a", "b", "c"}, "test"));
  CHECK_THROWS_AS(reject_unknown_keys(j, {"a"}, "test"), ConfigError);
}

TEST_CASE("report serialization carries stable keys") {
  const auto h = HypothesisClass::thresholds(2);
  const StableConfig cfg{1, 1.0, 0.25, 0.05};
  const auto report = stability_certificate(h, 2, cfg);
  const auto j = stability_report_to_json(report);
  for (const char* key :
       {"domain_size", "n", "n_prime", "gamma", "preconditions", "sup_stability_gap",
        "gap_bound", "stability_ok", "sup_empirical_excess", "excess_ok",
        "naive_oracle_max_abs_delta"})
    CHECK(j.contains(key));
  // serialization is deterministic
  CHECK(j.dump() == stability_report_to_json(report).dump());
}
