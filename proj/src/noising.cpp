#include "tjp/noising.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "tjp/error.hpp"
#include "tjp/simd.hpp"

namespace tjp {

NoiseResult degrade_noise(const Grid& x, const DegradationConfig& cfg, const RngStream& rng) {
  cfg.validate();
  for (float v : x.data()) {
    if (!(v >= -1e-6f && v <= 1.0f + 1e-6f)) fail(ErrorKind::domain, "noise input must lie in [0, 1]");
  }
  RngStream params = rng.fork("params");
  RngStream gauss = rng.fork("gauss");
  RngStream photons = rng.fork("poisson");
  RngStream sp = rng.fork("saltpepper");

  NoiseParams p;
  p.sigma_noise = params.uniform(cfg.gauss_noise_range.lo, cfg.gauss_noise_range.hi);
  p.sp_amount = params.uniform(cfg.sp_amount_range.lo, cfg.sp_amount_range.hi);
  p.poisson_peak = cfg.poisson_peak;

  Grid out = x;
  auto data = out.data();

  // max(0, x + eta)
  for (float& v : data) v = static_cast<float>(v + gauss.gaussian(0.0, p.sigma_noise));
  simd::kernels().clamp_min(data.data(), data.size(), 0.0f);

  if (p.poisson_peak > 0.0) {
    for (float& v : data) {
      const double counts = static_cast<double>(photons.poisson(static_cast<double>(v) * p.poisson_peak));
      v = std::min(static_cast<float>(counts / p.poisson_peak), kPoissonCeiling);
    }
  }

  const std::size_t n = data.size();
  p.sp_cells = static_cast<std::uint64_t>(std::llround(p.sp_amount * static_cast<double>(n)));
  if (p.sp_cells > 0) {
    // Partial Fisher-Yates: the first sp_cells entries are a uniform sample without replacement.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < p.sp_cells; ++i) {
      std::swap(order[i], order[i + sp.uniform_index(n - i)]);
      const bool salt = sp.uniform() < cfg.sp_salt_ratio;
      data[order[i]] = salt ? 1.0f : 0.0f;
      p.salt_cells += salt ? 1 : 0;
    }
  }
  return {std::move(out), p};
}

}  // namespace tjp
