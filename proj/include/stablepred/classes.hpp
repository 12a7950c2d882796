#ifndef STABLEPRED_CLASSES_HPP
#define STABLEPRED_CLASSES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "stablepred/errors.hpp"

namespace stablepred {

// Points are indices into a finite domain X = {0, ..., domain_size-1}.
using Point = int;

struct LabeledExample {
  Point x;
  int y;  // 0 or 1
  friend bool operator==(const LabeledExample&, const LabeledExample&) = default;
};

// Ordered sequence of labeled points; duplicates permitted (multiset
// semantics). Two samples are neighbors iff they have equal size and differ
// in exactly one index.
struct LabeledSample {
  std::vector<LabeledExample> examples;

  LabeledSample() = default;
  explicit LabeledSample(std::vector<LabeledExample> ex) : examples(std::move(ex)) {}

  int size() const { return static_cast<int>(examples.size()); }
  std::vector<Point> points() const;
  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

enum class ClassKind { Thresholds, PointFunctions, Explicit };

// An enumerable family of binary classifiers over a finite domain.
//
// Thresholds fixes the orientation h_t(x) = 1 iff x < t for t in {0..|X|},
// so there are |X|+1 hypotheses and the VC dimension is 1. PointFunctions is
// the family of singleton indicators. Explicit holds arbitrary label vectors.
class HypothesisClass {
 public:
  static HypothesisClass thresholds(int domain_size);
  static HypothesisClass point_functions(int domain_size);
  // declared_vc < 0 means "compute it" (requires domain_size <= 20).
  static HypothesisClass explicit_class(std::vector<std::vector<std::uint8_t>> vectors,
                                        int declared_vc = -1);

  ClassKind kind() const { return kind_; }
  int domain_size() const { return domain_size_; }
  long num_hypotheses() const;
  int vc_dim() const { return vc_dim_; }

  // Label of hypothesis h at x; hypotheses are indexed 0..num_hypotheses()-1
  // in the canonical order used everywhere for tie-breaking.
  int label(long h, Point x) const;

  std::vector<std::uint8_t> labels_on(long h, std::span<const Point> pts) const;
  std::vector<std::uint8_t> full_labels(long h) const;

  const std::vector<std::vector<std::uint8_t>>& vectors() const { return vectors_; }

 private:
  HypothesisClass(ClassKind kind, int domain_size, int vc,
                  std::vector<std::vector<std::uint8_t>> vectors)
      : kind_(kind), domain_size_(domain_size), vc_dim_(vc), vectors_(std::move(vectors)) {}

  ClassKind kind_;
  int domain_size_;
  int vc_dim_;
  std::vector<std::vector<std::uint8_t>> vectors_;  // Explicit only
};

// One labeling pattern of a restriction set, with the smallest hypothesis
// index that realizes it.
struct Dichotomy {
  std::vector<std::uint8_t> labels;
  long representative = 0;
  friend bool operator==(const Dichotomy&, const Dichotomy&) = default;
};

// H_T: one representative per equivalence class of H under agreement on T,
// sorted by label pattern. Throws EmptyRestrictionError on empty T.
std::vector<Dichotomy> restrict(const HypothesisClass& h, std::span<const Point> t);
std::vector<Dichotomy> restrict(const HypothesisClass& h, const LabeledSample& t);

// Exact growth function value: max |H_A| over all m-subsets A of the domain.
// Guarded to domain_size <= 20; beyond that throws TooLargeError carrying the
// Sauer-Shelah bound.
long growth_count(const HypothesisClass& h, int m);

// Sum_{i<=d} C(m, i), exact integer arithmetic (saturating at the max
// representable value). sauer_bound_float is the (e*m/d)^d companion.
unsigned long long sauer_bound(int d, int m);
double sauer_bound_float(int d, int m);

// True iff every pair of hypotheses of H agreeing on A has weighted
// disagreement mass <= alpha. weights is a distribution over the domain
// (must sum to 1 within 1e-12); the check runs over the dichotomies of
// A union support(weights), which is sufficient.
bool is_eps_net(std::span<const Point> a, const HypothesisClass& h,
                std::span<const double> weights, double alpha);

// Largest m such that some m-subset of the domain is shattered.
int compute_vc_dim(const HypothesisClass& h);

// Empirical loss of hypothesis h on S.
double empirical_loss(const HypothesisClass& h, long hypothesis, const LabeledSample& s);

// Empirical loss of a randomized predictor given as per-point probabilities:
// (1/n) sum |p(x_i) - y_i|.
double empirical_loss(std::span<const double> values, const LabeledSample& s);

// Loss minimizer over the class, ties broken toward the smallest hypothesis
// index; returned as a full-domain dichotomy.
Dichotomy erm(const HypothesisClass& h, const LabeledSample& s);

// Per-point probabilities of predicting label 1; the representation every
// exact predictor in this library reduces to on a finite domain.
using ValueFunction = std::vector<double>;

}  // namespace stablepred

#endif
