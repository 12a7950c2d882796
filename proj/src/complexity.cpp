#include "stablepred/complexity.hpp"

#include <algorithm>
#include <cmath>

#include "stablepred/errors.hpp"

namespace stablepred {

namespace {

long ceil_to_long(double x) {
  if (!(x < 9.0e18)) return 9000000000000000000L;  // saturate
  return static_cast<long>(std::ceil(x));
}

void check_unit(double v, const char* name) {
  if (!(v > 0.0) || !(v < 1.0)) throw Error(std::string(name) + " must be in (0,1)");
}

}  // namespace

long n_net(double alpha, double beta, int d, double scale) {
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  const double raw =
      (4.0 * d * std::log(8.0 / alpha) + 2.0 * std::log(2.0 / beta)) / alpha;
  return std::max(1L, ceil_to_long(scale * raw));
}

long n_exp(double k_candidates, double eps, double alpha, double scale) {
  check_unit(alpha, "alpha");
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (!(k_candidates >= 1.0)) throw Error("candidate count must be >= 1");
  const double raw = 2.0 * std::log(k_candidates) / (eps * alpha);
  return std::max(0L, ceil_to_long(scale * raw));
}

long n_g(double alpha, double beta, int d, double scale) {
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  const double raw = (8.0 * d + 4.0 * std::log(2.0 / beta)) / (alpha * alpha);
  return std::max(1L, ceil_to_long(scale * raw));
}

long n_r(double eps, double alpha, int d, double scale) {
  check_unit(alpha, "alpha");
  if (!(eps > 0.0)) throw Error("eps must be positive");
  const double r = std::max(1.0, std::ceil(3.0 * std::log(1.0 / eps) / eps));
  const double raw = r * static_cast<double>(n_net(alpha, alpha, d));
  return std::max(1L, ceil_to_long(scale * raw));
}

}  // namespace stablepred
