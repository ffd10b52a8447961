#include "ndd/kde.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>

namespace ndd::kde {

namespace {

// Kernel values beyond 9 bandwidths are below 3e-18 and cannot move any
// grid value by more than ~1e-15 absolute, so the windowed sum matches the
// full sum inside double precision.
constexpr double kKernelCutoff = 9.0;

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

std::atomic<std::uint64_t> g_evaluations{0};

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

void check_bandwidth(double h) {
  if (!(h > 0.0) || !std::isfinite(h)) {
    throw ConfigError("bandwidth must be positive and finite");
  }
}

void check_grid(const Grid& grid) {
  if (grid.axes.empty()) throw ConfigError("grid has no axes");
  for (const auto& axis : grid.axes) {
    if (axis.size() < 2) throw ConfigError("grid axis needs at least 2 points");
    for (std::size_t j = 1; j < axis.size(); ++j) {
      if (!(axis[j] > axis[j - 1])) {
        throw ConfigError("grid axis must be strictly increasing");
      }
    }
  }
}

}  // namespace

std::size_t Grid::size() const {
  std::size_t n = 1;
  for (const auto& axis : axes) n *= axis.size();
  return n;
}

double Grid::spacing(std::size_t d) const {
  const auto& axis = axes.at(d);
  return (axis.back() - axis.front()) / static_cast<double>(axis.size() - 1);
}

namespace {

double sample_std(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) {
    throw InsufficientDataError(
        "bandwidth estimation needs at least 2 samples, got " +
            std::to_string(n),
        2);
  }
  KahanSum mean_acc;
  for (double x : samples) mean_acc.add(x);
  const double mean = mean_acc.sum / static_cast<double>(n);
  KahanSum ss;
  for (double x : samples) ss.add((x - mean) * (x - mean));
  const double sigma = std::sqrt(ss.sum / static_cast<double>(n - 1));
  if (sigma == 0.0) {
    throw ConfigError("degenerate variable: samples are constant (" +
                      std::to_string(samples[0]) + ")");
  }
  return sigma;
}

}  // namespace

double silverman_bandwidth(std::span<const double> samples) {
  return 1.06 * sample_std(samples) *
         std::pow(static_cast<double>(samples.size()), -0.2);
}

std::vector<double> silverman_bandwidth(
    const std::vector<std::vector<double>>& columns) {
  // Per-dimension Silverman rule sigma * (4/((D+2)*n))^(1/(D+4)); the
  // univariate 1.06 * n^(-1/5) is its D = 1 case, (4/3)^(1/5) rounded.
  const double dims = static_cast<double>(columns.size());
  std::vector<double> h;
  h.reserve(columns.size());
  for (const auto& col : columns) {
    const double n = static_cast<double>(col.size());
    h.push_back(sample_std(col) *
                std::pow(4.0 / ((dims + 2.0) * n), 1.0 / (dims + 4.0)));
  }
  return h;
}

Grid build_grid(std::span<const double> samples, int points,
                double pad_factor, double bandwidth) {
  if (samples.empty()) throw ConfigError("grid construction needs samples");
  if (points < 2) throw ConfigError("grid needs at least 2 points per axis");
  check_bandwidth(bandwidth);

  auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
  const double lo = *lo_it - pad_factor * bandwidth;
  const double hi = *hi_it + pad_factor * bandwidth;
  const double step = (hi - lo) / static_cast<double>(points - 1);

  Grid grid;
  grid.axes.emplace_back();
  auto& axis = grid.axes.back();
  axis.resize(points);
  for (int j = 0; j < points; ++j) axis[j] = lo + j * step;
  return grid;
}

Grid build_grid(const std::vector<std::vector<double>>& columns,
                int points_per_dim, double pad_factor,
                const std::vector<double>& bandwidth) {
  if (columns.empty()) throw ConfigError("grid construction needs columns");
  if (bandwidth.size() != columns.size()) {
    throw ConfigError("one bandwidth per dimension required");
  }
  Grid grid;
  for (std::size_t d = 0; d < columns.size(); ++d) {
    Grid axis = build_grid(columns[d], points_per_dim, pad_factor, bandwidth[d]);
    grid.axes.push_back(std::move(axis.axes[0]));
  }
  return grid;
}

DensityEstimate kde_univariate(std::span<const double> samples,
                               const Grid& grid, double bandwidth) {
  if (samples.empty()) {
    throw InsufficientDataError("density estimation needs samples", 1);
  }
  check_bandwidth(bandwidth);
  check_grid(grid);
  if (grid.dim() != 1) throw ConfigError("univariate estimate needs a 1-d grid");

  g_evaluations.fetch_add(1, std::memory_order_relaxed);

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());

  const auto& axis = grid.axes[0];
  const double n = static_cast<double>(samples.size());
  const double inv_h = 1.0 / bandwidth;
  const double scale = kInvSqrt2Pi * inv_h / n;
  const double reach = kKernelCutoff * bandwidth;

  DensityEstimate est;
  est.grid = grid;
  est.values.resize(axis.size());
  est.n = samples.size();
  est.bandwidth = {bandwidth};

  for (std::size_t j = 0; j < axis.size(); ++j) {
    const double x = axis[j];
    auto first = std::lower_bound(sorted.begin(), sorted.end(), x - reach);
    auto last = std::upper_bound(first, sorted.end(), x + reach);
    KahanSum acc;
    for (auto it = first; it != last; ++it) {
      const double u = (x - *it) * inv_h;
      acc.add(std::exp(-0.5 * u * u));
    }
    est.values[j] = scale * acc.sum;
  }
  return est;
}

DensityEstimate kde_multivariate(const std::vector<std::vector<double>>& columns,
                                 const Grid& grid,
                                 const std::vector<double>& bandwidth) {
  if (columns.empty()) throw ConfigError("no sample columns given");
  const std::size_t n = columns[0].size();
  if (n == 0) throw InsufficientDataError("density estimation needs samples", 1);
  for (const auto& col : columns) {
    if (col.size() != n) throw ConfigError("sample columns differ in length");
  }
  check_grid(grid);
  const std::size_t dims = columns.size();
  if (grid.dim() != dims) throw ConfigError("grid/sample dimension mismatch");
  if (bandwidth.size() != dims) {
    throw ConfigError("one bandwidth per dimension required");
  }
  for (double h : bandwidth) check_bandwidth(h);

  if (dims == 1) return kde_univariate(columns[0], grid, bandwidth[0]);

  g_evaluations.fetch_add(1, std::memory_order_relaxed);

  // Row-major strides, last axis fastest.
  std::vector<std::size_t> stride(dims);
  stride[dims - 1] = 1;
  for (std::size_t d = dims - 1; d > 0; --d) {
    stride[d - 1] = stride[d] * grid.axes[d].size();
  }

  DensityEstimate est;
  est.grid = grid;
  est.values.assign(grid.size(), 0.0);
  est.n = n;
  est.bandwidth = bandwidth;

  // Per-sample contribution is a rank-1 tensor of per-dimension kernel
  // vectors restricted to the cutoff window; accumulate it directly.
  std::vector<std::vector<double>> w(dims);   // kernel weights per dim
  std::vector<std::size_t> lo(dims), len(dims);

  std::vector<std::size_t> idx(dims - 1);

  for (std::size_t i = 0; i < n; ++i) {
    bool contributes = true;
    for (std::size_t d = 0; d < dims; ++d) {
      const auto& axis = grid.axes[d];
      const double h = bandwidth[d];
      const double x = columns[d][i];
      const double reach = kKernelCutoff * h;
      const double step = grid.spacing(d);
      const double last = static_cast<double>(axis.size() - 1);

      const double t_lo = (x - reach - axis.front()) / step;
      const double t_hi = (x + reach - axis.front()) / step;
      if (t_hi < 0.0 || t_lo > last) {
        contributes = false;
        break;
      }
      const std::size_t j0 =
          t_lo <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(t_lo));
      const std::size_t j1 = t_hi >= last
                                 ? axis.size() - 1
                                 : static_cast<std::size_t>(std::floor(t_hi));
      if (j0 > j1) {
        contributes = false;
        break;
      }
      lo[d] = j0;
      len[d] = j1 - j0 + 1;
      w[d].resize(len[d]);
      const double inv_h = 1.0 / h;
      for (std::size_t j = 0; j < len[d]; ++j) {
        const double u = (axis[j0 + j] - x) * inv_h;
        w[d][j] = kInvSqrt2Pi * inv_h * std::exp(-0.5 * u * u);
      }
    }
    if (!contributes) continue;

    // Walk the window of the leading axes; the last axis is the tight loop.
    std::fill(idx.begin(), idx.end(), 0);
    bool more = true;
    while (more) {
      std::size_t base = lo[dims - 1];
      double coeff = 1.0;
      for (std::size_t d = 0; d + 1 < dims; ++d) {
        base += (lo[d] + idx[d]) * stride[d];
        coeff *= w[d][idx[d]];
      }
      const auto& wl = w[dims - 1];
      double* out = est.values.data() + base;
      for (std::size_t j = 0; j < len[dims - 1]; ++j) out[j] += coeff * wl[j];

      more = false;
      for (std::size_t d = dims - 1; d-- > 0;) {
        if (++idx[d] < len[d]) {
          more = true;
          break;
        }
        idx[d] = 0;
      }
    }
  }

  const double inv_n = 1.0 / static_cast<double>(n);
  for (double& v : est.values) v *= inv_n;
  return est;
}

double quadrature_mass(const DensityEstimate& est) {
  if (est.grid.dim() == 1) {
    const auto& axis = est.grid.axes[0];
    KahanSum acc;
    for (std::size_t j = 0; j + 1 < axis.size(); ++j) {
      acc.add(0.5 * (est.values[j] + est.values[j + 1]) *
              (axis[j + 1] - axis[j]));
    }
    return acc.sum;
  }
  double cell = 1.0;
  for (std::size_t d = 0; d < est.grid.dim(); ++d) cell *= est.grid.spacing(d);
  KahanSum acc;
  for (double v : est.values) acc.add(v);
  return acc.sum * cell;
}

std::uint64_t evaluation_count() {
  return g_evaluations.load(std::memory_order_relaxed);
}

}  // namespace ndd::kde
