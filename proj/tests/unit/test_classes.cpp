#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "stablepred/classes.hpp"
#include "stablepred/rng.hpp"

using namespace stablepred;

namespace {

LabeledSample make_sample(std::initializer_list<std::pair<int, int>> pairs) {
  LabeledSample s;
  for (auto [x, y] : pairs) s.examples.push_back(LabeledExample{x, y});
  return s;
}

// Brute-force dichotomy count used as the oracle for restrict/growth checks:
// collect the distinct patterns directly from the label() primitive.
long count_patterns(const HypothesisClass& h, const std::vector<Point>& pts) {
  std::set<std::vector<int>> seen;
  for (long i = 0; i < h.num_hypotheses(); ++i) {
    std::vector<int> pat;
    for (Point p : pts) pat.push_back(h.label(i, p));
    seen.insert(pat);
  }
  return static_cast<long>(seen.size());
}

}  // namespace

TEST_CASE("restrict: thresholds over the full domain") {
  const auto h = HypothesisClass::thresholds(4);
  const std::vector<Point> t{0, 1, 2, 3};
  const auto dis = restrict(h, t);
  REQUIRE(dis.size() == 5);
  // h_t(x) = 1 iff x < t, sorted by pattern.
  const std::vector<std::vector<std::uint8_t>> expect{
      {0, 0, 0, 0}, {1, 0, 0, 0}, {1, 1, 0, 0}, {1, 1, 1, 0}, {1, 1, 1, 1}};
  for (std::size_t i = 0; i < dis.size(); ++i) {
    CHECK(dis[i].labels == expect[i]);
    // representative realizes its pattern
    for (std::size_t p = 0; p < t.size(); ++p)
      CHECK(h.label(dis[i].representative, t[p]) == dis[i].labels[p]);
  }
  CHECK(std::is_sorted(dis.begin(), dis.end(),
                       [](const auto& a, const auto& b) { return a.labels < b.labels; }));
}

TEST_CASE("restrict: all hypotheses agreeing on a point collapse to one class") {
  const auto h = HypothesisClass::explicit_class({{0, 1, 1}, {0, 0, 1}, {0, 1, 0}});
  const std::vector<Point> t{0};
  CHECK(restrict(h, t).size() == 1);
}

TEST_CASE("restrict: full-domain restriction of distinct vectors is the identity") {
  const auto h = HypothesisClass::explicit_class({{0, 0}, {0, 1}, {1, 1}});
  const std::vector<Point> t{0, 1};
  CHECK(restrict(h, t).size() == 3);
}

TEST_CASE("restrict: empty restriction set is an error") {
  const auto h = HypothesisClass::thresholds(3);
  const std::vector<Point> t{};
  CHECK_THROWS_AS(restrict(h, t), EmptyRestrictionError);
}

TEST_CASE("restrict: re-restriction is idempotent") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const int domain = 2 + static_cast<int>(rng.next_below(4));
    std::vector<std::vector<std::uint8_t>> vectors;
    const int k = 2 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < k; ++i) {
      std::vector<std::uint8_t> v;
      for (int x = 0; x < domain; ++x) v.push_back(static_cast<std::uint8_t>(rng.next_below(2)));
      vectors.push_back(v);
    }
    const auto h = HypothesisClass::explicit_class(vectors);
    std::vector<Point> t;
    for (int x = 0; x < domain; ++x)
      if (rng.bernoulli(0.6)) t.push_back(x);
    if (t.empty()) t.push_back(0);

    const auto dis = restrict(h, t);
    std::vector<std::vector<std::uint8_t>> patterns;
    for (const auto& d : dis) patterns.push_back(d.labels);
    const auto again = HypothesisClass::explicit_class(patterns, 0);
    std::vector<Point> full(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) full[i] = static_cast<Point>(i);
    CHECK(restrict(again, full).size() == dis.size());
  }
}

TEST_CASE("growth_count: thresholds") {
  CHECK(growth_count(HypothesisClass::thresholds(6), 4) == 5);  // m+1 patterns on any m points
  CHECK(growth_count(HypothesisClass::thresholds(6), 1) == 2);
}

TEST_CASE("growth_count: full restriction of an explicit class") {
  const auto h = HypothesisClass::explicit_class({{0, 0, 1}, {0, 1, 1}, {1, 1, 1}, {1, 0, 0}});
  CHECK(growth_count(h, 3) == 4);
}

TEST_CASE("growth_count: guard throws with the Sauer bound attached") {
  const auto h = HypothesisClass::thresholds(25);
  try {
    growth_count(h, 3);
    FAIL("expected TooLargeError");
  } catch (const TooLargeError& e) {
    CHECK(e.bound > 0.0);
  }
}

TEST_CASE("sauer_bound: small exact values") {
  CHECK(sauer_bound(1, 4) == 5);
  CHECK(sauer_bound(2, 5) == 16);
  CHECK(sauer_bound(3, 3) == 8);  // d = m gives 2^m
  CHECK(sauer_bound(5, 5) == 32);
  CHECK(sauer_bound(0, 7) == 1);
  CHECK(sauer_bound_float(1, 4) == doctest::Approx(std::exp(1.0) * 4.0));
}

TEST_CASE("sauer-shelah holds for every class in the fixture set") {
  std::vector<HypothesisClass> fixtures;
  for (int n = 2; n <= 12; ++n) fixtures.push_back(HypothesisClass::thresholds(n));
  for (int n = 2; n <= 8; ++n) fixtures.push_back(HypothesisClass::point_functions(n));
  fixtures.push_back(HypothesisClass::explicit_class(
      {{0, 0, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 1}, {1, 0, 1, 0}, {1, 1, 1, 1}}));
  for (const auto& h : fixtures) {
    const int d = compute_vc_dim(h);
    for (int m = 1; m <= h.domain_size(); ++m)
      CHECK(static_cast<unsigned long long>(growth_count(h, m)) <= sauer_bound(d, m));
  }
}

TEST_CASE("is_eps_net: trivial cases") {
  const auto h = HypothesisClass::thresholds(4);
  std::vector<double> uniform(4, 0.25);
  const std::vector<Point> full{0, 1, 2, 3};
  CHECK(is_eps_net(full, h, uniform, 0.0));
  const std::vector<Point> one{2};
  CHECK(is_eps_net(one, h, uniform, 1.0));
}

TEST_CASE("is_eps_net: thresholds on eight points against the pair oracle") {
  const auto h = HypothesisClass::thresholds(8);
  std::vector<double> uniform(8, 0.125);
  const std::vector<Point> a{0, 2, 4, 6};

  // Oracle: thresholds t < t' disagree exactly on [t, t'); they agree on A
  // iff that window avoids A. Max agreeing disagreement mass:
  double worst = 0.0;
  for (int t = 0; t <= 8; ++t) {
    for (int tp = t + 1; tp <= 8; ++tp) {
      bool hits_a = false;
      for (int x = t; x < tp; ++x)
        if (x == 0 || x == 2 || x == 4 || x == 6) hits_a = true;
      if (!hits_a) worst = std::max(worst, (tp - t) / 8.0);
    }
  }
  CHECK(worst == doctest::Approx(0.125));

  CHECK_FALSE(is_eps_net(a, h, uniform, 0.1));  // below the worst mass
  CHECK(is_eps_net(a, h, uniform, 0.125));
  CHECK(is_eps_net(a, h, uniform, 0.25));
}

TEST_CASE("is_eps_net: bad distribution rejected") {
  const auto h = HypothesisClass::thresholds(3);
  std::vector<double> w{0.5, 0.5, 0.5};
  const std::vector<Point> a{0};
  CHECK_THROWS_AS(is_eps_net(a, h, w, 0.5), BadDistributionError);
}

TEST_CASE("is_eps_net: monotone in alpha, anti-monotone in A") {
  Rng rng(23);
  const auto h = HypothesisClass::thresholds(6);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> w(6);
    double total = 0.0;
    for (auto& v : w) {
      v = rng.next_double();
      total += v;
    }
    for (auto& v : w) v /= total;
    std::vector<Point> a;
    for (Point x = 0; x < 6; ++x)
      if (rng.bernoulli(0.5)) a.push_back(x);
    if (a.empty()) a.push_back(static_cast<Point>(rng.next_below(6)));
    const double alpha = rng.next_double();

    if (is_eps_net(a, h, w, alpha)) {
      CHECK(is_eps_net(a, h, w, std::min(1.0, alpha + 0.25)));
      auto bigger = a;
      for (Point x = 0; x < 6; ++x)
        if (std::find(bigger.begin(), bigger.end(), x) == bigger.end()) {
          bigger.push_back(x);
          break;
        }
      CHECK(is_eps_net(bigger, h, w, alpha));
    }
  }
}

TEST_CASE("compute_vc_dim") {
  for (int n = 2; n <= 12; ++n) CHECK(compute_vc_dim(HypothesisClass::thresholds(n)) == 1);
  CHECK(compute_vc_dim(HypothesisClass::point_functions(5)) == 1);
  const auto all = HypothesisClass::explicit_class({{0, 0, 0},
                                                    {0, 0, 1},
                                                    {0, 1, 0},
                                                    {0, 1, 1},
                                                    {1, 0, 0},
                                                    {1, 0, 1},
                                                    {1, 1, 0},
                                                    {1, 1, 1}});
  CHECK(all.vc_dim() == 3);
  const auto constant = HypothesisClass::explicit_class({{1, 1, 1}});
  CHECK(constant.vc_dim() == 0);
}

TEST_CASE("erm: realizable sample recovers the unique minimizer") {
  const auto h = HypothesisClass::thresholds(4);
  const auto s = make_sample({{0, 1}, {1, 1}, {2, 0}, {3, 0}});
  const auto best = erm(h, s);
  CHECK(best.representative == 2);  // h_2 = 1100
  CHECK(empirical_loss(h, best.representative, s) == 0.0);
}

TEST_CASE("erm: all-ties sample resolves to hypothesis 0") {
  // Both constant hypotheses have loss 1/2 on a balanced sample.
  const auto h = HypothesisClass::explicit_class({{0, 0}, {1, 1}});
  const auto s = make_sample({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  CHECK(erm(h, s).representative == 0);
}

TEST_CASE("erm: deterministic across calls") {
  Rng rng(5);
  const auto h = HypothesisClass::thresholds(5);
  for (int rep = 0; rep < 20; ++rep) {
    LabeledSample s;
    const int n = 1 + static_cast<int>(rng.next_below(6));
    for (int i = 0; i < n; ++i)
      s.examples.push_back(LabeledExample{static_cast<Point>(rng.next_below(5)),
                                          static_cast<int>(rng.next_below(2))});
    CHECK(erm(h, s).representative == erm(h, s).representative);
  }
}

TEST_CASE("restrict count matches the pattern oracle on random classes") {
  Rng rng(99);
  for (int rep = 0; rep < 25; ++rep) {
    const int domain = 2 + static_cast<int>(rng.next_below(5));
    std::vector<std::vector<std::uint8_t>> vectors;
    const int k = 1 + static_cast<int>(rng.next_below(10));
    for (int i = 0; i < k; ++i) {
      std::vector<std::uint8_t> v;
      for (int x = 0; x < domain; ++x) v.push_back(static_cast<std::uint8_t>(rng.next_below(2)));
      vectors.push_back(v);
    }
    const auto h = HypothesisClass::explicit_class(vectors);
    std::vector<Point> t;
    for (int x = 0; x < domain; ++x)
      if (rng.bernoulli(0.5)) t.push_back(x);
    if (t.empty()) t.push_back(0);
    CHECK(static_cast<long>(restrict(h, t).size()) == count_patterns(h, t));
  }
}
