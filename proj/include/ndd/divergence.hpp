#pragma once

#include "ndd/kde.hpp"

namespace ndd::kl {

struct KLValue {
  double value = 0.0;     // nats, >= 0 up to quadrature round-off
  std::size_t n_new = 0;  // sample count behind p
  std::size_t n_old = 0;  // sample count behind q
};

struct KlOptions {
  // Multivariate only. The default reproduces the plain grid sum
  // sum_i p_i*log(p_i/q_i); enabling this weights each term by the grid
  // cell volume, turning the sum into a Riemann integral.
  bool volume_weighted = false;
};

// KL(p || q) on a shared grid. Univariate estimates integrate
// p*log(p/q) with the trapezoidal rule; multivariate ones use the grid sum
// (see KlOptions). Terms with p below 1e-30 contribute zero and q is
// clamped at 1e-30 before the division.
//
// Throws ConfigError when the grids are not bit-identical or a density
// value is negative.
KLValue kl_divergence(const kde::DensityEstimate& p,
                      const kde::DensityEstimate& q,
                      const KlOptions& opts = {});

}  // namespace ndd::kl
