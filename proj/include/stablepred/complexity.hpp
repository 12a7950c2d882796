#ifndef STABLEPRED_COMPLEXITY_HPP
#define STABLEPRED_COMPLEXITY_HPP

namespace stablepred {

// Multipliers for the sample-size calculators below, overridable from run
// configs. 1.0 keeps the library defaults.
struct SampleSizeScale {
  double net = 1.0;
  double exp = 1.0;
  double gen = 1.0;
  double real = 1.0;
};

// Smallest n' such that an i.i.d. n'-sample is an alpha-net for a VC-d class
// with probability 1-beta: ceil((4 d ln(8/alpha) + 2 ln(2/beta)) / alpha).
long n_net(double alpha, double beta, int d, double scale = 1.0);

// Sample size for the eps-private exponential mechanism over k candidates to
// be alpha-approximate: ceil(2 ln(k) / (eps * alpha)).
long n_exp(double k_candidates, double eps, double alpha, double scale = 1.0);

// Uniform-convergence sample size: ceil((8 d + 4 ln(2/beta)) / alpha^2).
long n_g(double alpha, double beta, int d, double scale = 1.0);

// Sample size for the realizable private learner at privacy eps and accuracy
// alpha: r partitions of alpha-net size, r = ceil(3 ln(1/eps) / eps)
// (clamped to >= 1 so the expression stays meaningful for eps >= 1).
long n_r(double eps, double alpha, int d, double scale = 1.0);

}  // namespace stablepred

#endif
