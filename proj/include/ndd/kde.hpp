#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ndd/types.hpp"

namespace ndd::kde {

// Evaluation grid: one strictly increasing, uniformly spaced axis per
// dimension. Multivariate values live on the Cartesian product, row-major
// with the last axis fastest.
struct Grid {
  std::vector<std::vector<double>> axes;

  std::size_t dim() const { return axes.size(); }
  std::size_t size() const;
  double spacing(std::size_t d) const;

  bool operator==(const Grid&) const = default;
};

struct DensityEstimate {
  Grid grid;
  std::vector<double> values;     // one per grid point, all >= 0
  std::size_t n = 0;              // sample count behind the estimate
  std::vector<double> bandwidth;  // per dimension
};

// h = 1.06 * sigma_hat * n^(-1/5), sigma_hat with the n-1 denominator.
// Throws InsufficientDataError for n < 2 and ConfigError for constant data
// (a degenerate variable has no density to estimate).
double silverman_bandwidth(std::span<const double> samples);

// Per-dimension rule for a D-dimensional product kernel:
//   h_d = sigma_d * (4 / ((D+2) * n))^(1/(D+4))
// whose D = 1 case is the 1.06 * n^(-1/5) rule above.
std::vector<double> silverman_bandwidth(
    const std::vector<std::vector<double>>& columns);

// Uniform axis on [min - pad_factor*h, max + pad_factor*h].
Grid build_grid(std::span<const double> samples, int points,
                double pad_factor, double bandwidth);

Grid build_grid(const std::vector<std::vector<double>>& columns,
                int points_per_dim, double pad_factor,
                const std::vector<double>& bandwidth);

// Gaussian-kernel density on the grid:
//   f(x) = 1/(n*h) * sum_i kappa((x - x_i)/h),  kappa(u) = exp(-u^2/2)/sqrt(2*pi)
// Summation is exact up to a +-9h kernel cutoff (tail terms below 1e-15) and
// Kahan-compensated, so results are stable to well under 1e-6 absolute.
DensityEstimate kde_univariate(std::span<const double> samples,
                               const Grid& grid, double bandwidth);

// Product-Gaussian kernel with per-dimension bandwidths:
//   f(x) = 1/n * sum_i prod_d kappa((x_d - x_{i,d})/h_d)/h_d
// columns[d][i] is sample i in dimension d; all columns equal length.
DensityEstimate kde_multivariate(const std::vector<std::vector<double>>& columns,
                                 const Grid& grid,
                                 const std::vector<double>& bandwidth);

// Trapezoidal mass for univariate estimates, cell-volume rectangle sum for
// multivariate ones. Close to 1 whenever the grid spans the data range.
double quadrature_mass(const DensityEstimate& est);

// Number of density evaluations performed since process start. Lets callers
// verify that cached estimates are reused instead of recomputed.
std::uint64_t evaluation_count();

}  // namespace ndd::kde
