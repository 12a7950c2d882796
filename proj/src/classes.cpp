#include "stablepred/classes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace stablepred {

std::vector<Point> LabeledSample::points() const {
  std::vector<Point> out;
  out.reserve(examples.size());
  for (const auto& e : examples) out.push_back(e.x);
  return out;
}

HypothesisClass HypothesisClass::thresholds(int domain_size) {
  if (domain_size < 1) throw Error("domain_size must be >= 1");
  return HypothesisClass(ClassKind::Thresholds, domain_size, 1, {});
}

HypothesisClass HypothesisClass::point_functions(int domain_size) {
  if (domain_size < 1) throw Error("domain_size must be >= 1");
  return HypothesisClass(ClassKind::PointFunctions, domain_size, 1, {});
}

HypothesisClass HypothesisClass::explicit_class(
    std::vector<std::vector<std::uint8_t>> vectors, int declared_vc) {
  if (vectors.empty()) throw EmptyClassError();
  const int domain_size = static_cast<int>(vectors.front().size());
  if (domain_size < 1) throw Error("label vectors must be non-empty");
  for (const auto& v : vectors) {
    if (static_cast<int>(v.size()) != domain_size)
      throw Error("label vectors must all have the domain's length");
    for (auto b : v)
      if (b > 1) throw Error("labels must be 0 or 1");
  }
  HypothesisClass h(ClassKind::Explicit, domain_size, declared_vc, std::move(vectors));
  if (declared_vc < 0) h.vc_dim_ = compute_vc_dim(h);
  return h;
}

long HypothesisClass::num_hypotheses() const {
  switch (kind_) {
    case ClassKind::Thresholds:
      return domain_size_ + 1;
    case ClassKind::PointFunctions:
      return domain_size_;
    case ClassKind::Explicit:
      return static_cast<long>(vectors_.size());
  }
  return 0;
}

int HypothesisClass::label(long h, Point x) const {
  switch (kind_) {
    case ClassKind::Thresholds:
      return x < h ? 1 : 0;
    case ClassKind::PointFunctions:
      return x == h ? 1 : 0;
    case ClassKind::Explicit:
      return vectors_[static_cast<std::size_t>(h)][static_cast<std::size_t>(x)];
  }
  return 0;
}

std::vector<std::uint8_t> HypothesisClass::labels_on(long h, std::span<const Point> pts) const {
  std::vector<std::uint8_t> out;
  out.reserve(pts.size());
  for (Point p : pts) out.push_back(static_cast<std::uint8_t>(label(h, p)));
  return out;
}

std::vector<std::uint8_t> HypothesisClass::full_labels(long h) const {
  std::vector<std::uint8_t> out;
  out.reserve(static_cast<std::size_t>(domain_size_));
  for (Point p = 0; p < domain_size_; ++p) out.push_back(static_cast<std::uint8_t>(label(h, p)));
  return out;
}

std::vector<Dichotomy> restrict(const HypothesisClass& h, std::span<const Point> t) {
  if (t.empty()) throw EmptyRestrictionError();
  for (Point p : t)
    if (p < 0 || p >= h.domain_size()) throw Error("restriction point outside domain");
  std::map<std::vector<std::uint8_t>, long> first_rep;
  const long k = h.num_hypotheses();
  for (long i = 0; i < k; ++i) {
    auto pattern = h.labels_on(i, t);
    first_rep.emplace(std::move(pattern), i);  // keeps the smallest index
  }
  std::vector<Dichotomy> out;
  out.reserve(first_rep.size());
  for (auto& [pattern, rep] : first_rep) out.push_back(Dichotomy{pattern, rep});
  return out;  // map iteration is already sorted by pattern
}

std::vector<Dichotomy> restrict(const HypothesisClass& h, const LabeledSample& t) {
  auto pts = t.points();
  return restrict(h, pts);
}

namespace {

// Visits all m-subsets of {0..domain-1} in lexicographic order.
template <typename Fn>
void for_each_subset(int domain, int m, Fn&& fn) {
  std::vector<Point> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    fn(std::span<const Point>(idx));
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == domain - m + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

}  // namespace

long growth_count(const HypothesisClass& h, int m) {
  if (m < 1 || m > h.domain_size()) throw Error("growth_count requires 1 <= m <= |X|");
  if (h.domain_size() > 20)
    throw TooLargeError("growth_count guard: domain_size > 20",
                        sauer_bound_float(h.vc_dim(), m));
  long best = 0;
  for_each_subset(h.domain_size(), m, [&](std::span<const Point> a) {
    best = std::max(best, static_cast<long>(restrict(h, a).size()));
  });
  return best;
}

unsigned long long sauer_bound(int d, int m) {
  if (d < 0 || m < 0) throw Error("sauer_bound requires d, m >= 0");
  const unsigned long long cap = std::numeric_limits<unsigned long long>::max();
  if (d >= m) {
    return m >= 64 ? cap : (1ull << m);
  }
  unsigned long long total = 0;
  unsigned long long binom = 1;  // C(m, 0)
  for (int i = 0; i <= d; ++i) {
    if (total > cap - binom) return cap;
    total += binom;
    // C(m, i+1) = C(m, i) * (m - i) / (i + 1); exact since the intermediate
    // product is a multiple of (i + 1).
    if (binom > cap / static_cast<unsigned long long>(m - i)) return cap;
    binom = binom * static_cast<unsigned long long>(m - i) /
            static_cast<unsigned long long>(i + 1);
  }
  return total;
}

double sauer_bound_float(int d, int m) {
  if (d <= 0) return 1.0;
  return std::pow(std::exp(1.0) * static_cast<double>(m) / static_cast<double>(d),
                  static_cast<double>(d));
}

bool is_eps_net(std::span<const Point> a, const HypothesisClass& h,
                std::span<const double> weights, double alpha) {
  if (static_cast<int>(weights.size()) != h.domain_size())
    throw BadDistributionError("weights must cover the domain");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw BadDistributionError("negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw BadDistributionError("weights must sum to 1 within 1e-12");
  for (Point p : a)
    if (p < 0 || p >= h.domain_size()) throw Error("net point outside domain");

  // Restriction set: A together with the weighted support. Agreement classes
  // over it determine both sides of the net condition.
  std::vector<Point> pts;
  std::vector<bool> in_pts(static_cast<std::size_t>(h.domain_size()), false);
  auto add = [&](Point p) {
    if (!in_pts[static_cast<std::size_t>(p)]) {
      in_pts[static_cast<std::size_t>(p)] = true;
      pts.push_back(p);
    }
  };
  for (Point p : a) add(p);
  for (Point p = 0; p < h.domain_size(); ++p)
    if (weights[static_cast<std::size_t>(p)] > 0.0) add(p);
  std::sort(pts.begin(), pts.end());

  auto dis = restrict(h, pts);
  if (dis.size() > 10000)
    throw TooLargeError("is_eps_net guard: more than 1e4 dichotomies");

  std::vector<std::size_t> a_positions;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (std::find(a.begin(), a.end(), pts[i]) != a.end()) a_positions.push_back(i);

  for (std::size_t i = 0; i < dis.size(); ++i) {
    for (std::size_t j = i + 1; j < dis.size(); ++j) {
      bool agree_on_a = true;
      for (std::size_t pos : a_positions) {
        if (dis[i].labels[pos] != dis[j].labels[pos]) {
          agree_on_a = false;
          break;
        }
      }
      if (!agree_on_a) continue;
      double mass = 0.0;
      for (std::size_t pos = 0; pos < pts.size(); ++pos)
        if (dis[i].labels[pos] != dis[j].labels[pos])
          mass += weights[static_cast<std::size_t>(pts[pos])];
      if (mass > alpha + 1e-12) return false;
    }
  }
  return true;
}

int compute_vc_dim(const HypothesisClass& h) {
  if (h.domain_size() > 20) throw TooLargeError("compute_vc_dim guard: domain_size > 20");
  int best = 0;
  for (int m = 1; m <= h.domain_size(); ++m) {
    bool shattered = false;
    for_each_subset(h.domain_size(), m, [&](std::span<const Point> a) {
      if (shattered) return;
      if (static_cast<long>(restrict(h, a).size()) == (1L << m)) shattered = true;
    });
    if (!shattered) break;  // shattering is downward closed
    best = m;
  }
  return best;
}

double empirical_loss(const HypothesisClass& h, long hypothesis, const LabeledSample& s) {
  if (s.size() == 0) throw Error("empirical loss of an empty sample");
  int mistakes = 0;
  for (const auto& e : s.examples)
    if (h.label(hypothesis, e.x) != e.y) ++mistakes;
  return static_cast<double>(mistakes) / static_cast<double>(s.size());
}

double empirical_loss(std::span<const double> values, const LabeledSample& s) {
  if (s.size() == 0) throw Error("empirical loss of an empty sample");
  double total = 0.0;
  for (const auto& e : s.examples)
    total += std::abs(values[static_cast<std::size_t>(e.x)] - static_cast<double>(e.y));
  return total / static_cast<double>(s.size());
}

Dichotomy erm(const HypothesisClass& h, const LabeledSample& s) {
  const long k = h.num_hypotheses();
  long best = 0;
  int best_mistakes = s.size() + 1;
  for (long i = 0; i < k; ++i) {
    int mistakes = 0;
    for (const auto& e : s.examples)
      if (h.label(i, e.x) != e.y) ++mistakes;
    if (mistakes < best_mistakes) {
      best_mistakes = mistakes;
      best = i;
    }
  }
  return Dichotomy{h.full_labels(best), best};
}

}  // namespace stablepred
