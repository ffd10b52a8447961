#include "ndd/divergence.hpp"

#include <cmath>

namespace ndd::kl {

namespace {

// Below this, a density value is treated as exact zero: the p*log(p/q)
// term vanishes (the p->0 limit) and q is clamped before the division so
// underflowed Gaussian tails cannot produce infinities.
constexpr double kDensityFloor = 1e-30;

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

double term(double p, double q) {
  if (p < kDensityFloor) return 0.0;
  return p * std::log(p / std::max(q, kDensityFloor));
}

}  // namespace

KLValue kl_divergence(const kde::DensityEstimate& p,
                      const kde::DensityEstimate& q, const KlOptions& opts) {
  if (p.grid != q.grid) {
    throw ConfigError("KL divergence requires estimates on an identical grid");
  }
  for (double v : p.values) {
    if (v < 0.0) throw ConfigError("negative density value in p");
  }
  for (double v : q.values) {
    if (v < 0.0) throw ConfigError("negative density value in q");
  }

  KLValue out;
  out.n_new = p.n;
  out.n_old = q.n;

  if (p.values == q.values) return out;  // identical estimates, exactly zero

  if (p.grid.dim() == 1) {
    const auto& axis = p.grid.axes[0];
    KahanSum acc;
    double prev = term(p.values[0], q.values[0]);
    for (std::size_t j = 1; j < axis.size(); ++j) {
      const double cur = term(p.values[j], q.values[j]);
      acc.add(0.5 * (prev + cur) * (axis[j] - axis[j - 1]));
      prev = cur;
    }
    out.value = acc.sum;
    return out;
  }

  KahanSum acc;
  for (std::size_t j = 0; j < p.values.size(); ++j) {
    acc.add(term(p.values[j], q.values[j]));
  }
  double v = acc.sum;
  if (opts.volume_weighted) {
    for (std::size_t d = 0; d < p.grid.dim(); ++d) v *= p.grid.spacing(d);
  }
  out.value = v;
  return out;
}

}  // namespace ndd::kl
