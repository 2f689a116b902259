#include "tjp/lowres.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "tjp/error.hpp"
#include "tjp/resample.hpp"
#include "tjp/simd.hpp"

namespace tjp {

namespace {

// Extents padded to three axes (a leading 1 for 2D grids).
std::array<std::size_t, 3> as3(const Shape& s) {
  if (s.rank() == 2) return {1, s[0], s[1]};
  return {s[0], s[1], s[2]};
}

}  // namespace

SigmaField sigma_field(const Shape& shape, Range range, std::uint32_t control_spacing, RngStream& rng) {
  if (!(range.lo >= 0.0 && range.lo <= range.hi)) fail(ErrorKind::domain, "sigma range must satisfy 0 <= lo <= hi");
  if (control_spacing == 0) fail(ErrorKind::domain, "control spacing must be at least 1");
  const auto dims = as3(shape);
  std::array<std::size_t, 3> ctrl{};
  for (std::size_t a = 0; a < 3; ++a) ctrl[a] = (dims[a] - 1 + control_spacing - 1) / control_spacing + 1;

  std::vector<double> points(ctrl[0] * ctrl[1] * ctrl[2]);
  for (double& p : points) p = rng.uniform(range.lo, range.hi);

  // Per-axis lower control index and fraction for each cell index.
  std::array<std::vector<std::size_t>, 3> base;
  std::array<std::vector<double>, 3> frac;
  for (std::size_t a = 0; a < 3; ++a) {
    base[a].resize(dims[a]);
    frac[a].resize(dims[a]);
    for (std::size_t v = 0; v < dims[a]; ++v) {
      base[a][v] = v / control_spacing;
      frac[a][v] = static_cast<double>(v % control_spacing) / control_spacing;
    }
  }
  auto at = [&](std::size_t i, std::size_t j, std::size_t k) {
    return points[(std::min(i, ctrl[0] - 1) * ctrl[1] + std::min(j, ctrl[1] - 1)) * ctrl[2] + std::min(k, ctrl[2] - 1)];
  };

  Grid values(shape);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims[0]; ++i) {
    for (std::size_t j = 0; j < dims[1]; ++j) {
      for (std::size_t k = 0; k < dims[2]; ++k, ++idx) {
        const std::size_t i0 = base[0][i], j0 = base[1][j], k0 = base[2][k];
        const double fi = frac[0][i], fj = frac[1][j], fk = frac[2][k];
        double v = 0.0;
        for (int di = 0; di < 2; ++di) {
          const double wi = di ? fi : 1.0 - fi;
          if (wi == 0.0) continue;
          for (int dj = 0; dj < 2; ++dj) {
            const double wj = dj ? fj : 1.0 - fj;
            if (wj == 0.0) continue;
            for (int dk = 0; dk < 2; ++dk) {
              const double wk = dk ? fk : 1.0 - fk;
              if (wk == 0.0) continue;
              v += wi * wj * wk * at(i0 + di, j0 + dj, k0 + dk);
            }
          }
        }
        values[idx] = static_cast<float>(std::clamp(v, range.lo, range.hi));
      }
    }
  }
  return {std::move(values), range, control_spacing};
}

SigmaField constant_sigma_field(const Shape& shape, double sigma) {
  if (!(sigma >= 0.0)) fail(ErrorKind::domain, "sigma must be nonnegative");
  return {Grid(shape, static_cast<float>(sigma)), {sigma, sigma}, 1};
}

Grid spatially_varying_gaussian(const Grid& x, const SigmaField& sf) {
  if (!(x.shape() == sf.values.shape())) fail(ErrorKind::domain, "sigma field shape does not match image");
  const auto dims = as3(x.shape());
  const std::size_t s0 = dims[1] * dims[2], s1 = dims[2];
  const auto& kern = simd::kernels();
  const float* src = x.data().data();

  Grid out(x.shape());
  out.set_spacing(x.spacing());
  std::vector<float> half;  // half[t] = exp(-t^2 / (2 sigma^2))
  std::vector<float> row;   // clipped weights along the last axis

  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims[0]; ++i) {
    for (std::size_t j = 0; j < dims[1]; ++j) {
      for (std::size_t k = 0; k < dims[2]; ++k, ++idx) {
        const float sigma = sf.values[idx];
        if (!(sigma >= kSigmaIdentityCutoff)) {
          out[idx] = src[idx];
          continue;
        }
        const auto r = static_cast<std::size_t>(std::ceil(3.0 * static_cast<double>(sigma)));
        const double inv = 1.0 / (2.0 * static_cast<double>(sigma) * sigma);
        half.resize(r + 1);
        for (std::size_t t = 0; t <= r; ++t) half[t] = static_cast<float>(std::exp(-static_cast<double>(t * t) * inv));

        auto clip = [&](std::size_t v, std::size_t n) {
          return std::pair<std::size_t, std::size_t>{v >= r ? v - r : 0, std::min(n - 1, v + r)};
        };
        auto dist = [](std::size_t a, std::size_t b) { return a > b ? a - b : b - a; };

        // A 2D grid is a single slab: the leading axis contributes weight 1.
        const auto [i_lo, i_hi] = dims[0] == 1 ? std::pair<std::size_t, std::size_t>{0, 0} : clip(i, dims[0]);
        const auto [j_lo, j_hi] = clip(j, dims[1]);
        const auto [k_lo, k_hi] = clip(k, dims[2]);

        row.resize(k_hi - k_lo + 1);
        double z_k = 0.0;
        for (std::size_t kk = k_lo; kk <= k_hi; ++kk) {
          row[kk - k_lo] = half[dist(kk, k)];
          z_k += row[kk - k_lo];
        }
        double z_j = 0.0;
        for (std::size_t jj = j_lo; jj <= j_hi; ++jj) z_j += half[dist(jj, j)];
        double z_i = 1.0;
        if (dims[0] > 1) {
          z_i = 0.0;
          for (std::size_t ii = i_lo; ii <= i_hi; ++ii) z_i += half[dist(ii, i)];
        }

        double acc = 0.0;
        for (std::size_t ii = i_lo; ii <= i_hi; ++ii) {
          const double wi = dims[0] == 1 ? 1.0 : static_cast<double>(half[dist(ii, i)]);
          double acc_j = 0.0;
          for (std::size_t jj = j_lo; jj <= j_hi; ++jj) {
            const float* line = src + ii * s0 + jj * s1 + k_lo;
            acc_j += static_cast<double>(half[dist(jj, j)]) * kern.dot(line, row.data(), row.size());
          }
          acc += wi * acc_j;
        }
        out[idx] = static_cast<float>(acc / (z_i * z_j * z_k));
      }
    }
  }
  return out;
}

LowresResult degrade_lowres(const Grid& x, const DegradationConfig& cfg, const RngStream& rng) {
  cfg.validate();
  RngStream params = rng.fork("params");
  RngStream noise = rng.fork("eta");
  RngStream sigma_rng = rng.fork("sigma");

  LowresParams p;
  p.scale = params.uniform(cfg.down_scale_range.lo, cfg.down_scale_range.hi);
  p.sigma_down = params.uniform(cfg.down_noise_range.lo, cfg.down_noise_range.hi);
  p.noise_lineage = noise.lineage();
  p.sigma_lineage = sigma_rng.lineage();

  Grid noisy = x;
  for (float& v : noisy.data()) v = static_cast<float>(v + noise.gaussian(0.0, p.sigma_down));

  p.intermediate = scaled_shape(x.shape(), p.scale);
  const Grid down = resize_linear(noisy, p.intermediate);
  const Grid up = resize_linear(down, x.shape());

  const SigmaField sf = sigma_field(x.shape(), cfg.down_sigma_range, cfg.sigma_control_spacing, sigma_rng);
  Grid blurred = spatially_varying_gaussian(up, sf);
  blurred.set_spacing(x.spacing());
  return {std::move(blurred), std::move(p)};
}

}  // namespace tjp
