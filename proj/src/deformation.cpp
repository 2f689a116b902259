#include "tjp/deformation.hpp"

#include <array>
#include <cmath>
#include <string>

#include "tjp/error.hpp"
#include "tjp/lowres.hpp"

namespace tjp {

namespace {

// Nearest float to alpha * t that does not exceed alpha in magnitude.
float bounded(double alpha, double t) {
  float v = static_cast<float>(alpha * t);
  const auto cap = static_cast<float>(alpha);
  if (static_cast<double>(cap) > alpha) {
    const float below = std::nextafter(cap, 0.0f);
    if (v > below) v = below;
    if (v < -below) v = -below;
  }
  return v;
}

}  // namespace

DeformationField zero_field(const Shape& shape) {
  DeformationField f;
  f.shape = shape;
  for (std::size_t a = 0; a < shape.rank(); ++a) {
    f.comp.emplace_back(shape);
    f.sigma_used.push_back(0.0);
  }
  return f;
}

Grid bound_component(const Grid& raw, double alpha) {
  double mean = 0.0;
  for (float v : raw.data()) mean += v;
  mean /= static_cast<double>(raw.size());
  double var = 0.0;
  for (float v : raw.data()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(raw.size());
  const double inv_std = var < 1e-12 ? 1.0 : 1.0 / std::sqrt(var);

  Grid out(raw.shape());
  out.set_spacing(raw.spacing());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const double z = var < 1e-12 ? 0.0 : (raw[i] - mean) * inv_std;
    out[i] = bounded(alpha, std::tanh(z));
  }
  return out;
}

DeformationField deformation_field(const Shape& shape, const DegradationConfig& cfg, const RngStream& rng) {
  cfg.validate();
  DeformationField field;
  field.shape = shape;
  field.alpha = cfg.flow_alpha;
  for (std::size_t a = 0; a < shape.rank(); ++a) {
    RngStream flow = rng.fork("flow" + std::to_string(a));
    field.provenance.push_back(flow.lineage());
    Grid raw = perlin_field(shape, cfg.perlin_octaves, cfg.perlin_persistence, cfg.perlin_base_spacing,
                            cfg.perlin_lacunarity, flow);
    double sigma_mean = 0.0;
    if (cfg.flow_smoothing) {
      RngStream sigma_rng = rng.fork("flowsigma" + std::to_string(a));
      const SigmaField sf =
          cfg.flow_constant_sigma
              ? constant_sigma_field(shape, sigma_rng.uniform(cfg.flow_sigma_range.lo, cfg.flow_sigma_range.hi))
              : sigma_field(shape, cfg.flow_sigma_range, cfg.sigma_control_spacing, sigma_rng);
      for (float s : sf.values.data()) sigma_mean += s;
      sigma_mean /= static_cast<double>(sf.values.size());
      raw = spatially_varying_gaussian(raw, sf);
    }
    field.sigma_used.push_back(sigma_mean);
    field.comp.push_back(bound_component(raw, cfg.flow_alpha));
  }
  return field;
}

Grid warp(const Grid& x, const DeformationField& field) {
  if (!(field.shape == x.shape()) || field.comp.size() != x.rank()) {
    fail(ErrorKind::domain, "deformation field shape " + field.shape.to_string() + " does not match image " +
                                x.shape().to_string());
  }
  const Shape& s = x.shape();
  Grid out(s);
  out.set_spacing(x.spacing());

  if (s.rank() == 2) {
    const long n0 = static_cast<long>(s[0]), n1 = static_cast<long>(s[1]);
    auto fetch = [&](long i, long j) -> double {
      if (i < 0 || j < 0 || i >= n0 || j >= n1) return 0.0;
      return x[static_cast<std::size_t>(i * n1 + j)];
    };
    std::size_t idx = 0;
    for (long i = 0; i < n0; ++i) {
      for (long j = 0; j < n1; ++j, ++idx) {
        const double p0 = static_cast<double>(i) + field.cells(0, idx);
        const double p1 = static_cast<double>(j) + field.cells(1, idx);
        const double f0 = std::floor(p0), f1 = std::floor(p1);
        const double t0 = p0 - f0, t1 = p1 - f1;
        const long i0 = static_cast<long>(f0), j0 = static_cast<long>(f1);
        double v = 0.0;
        v += (1.0 - t0) * (1.0 - t1) * fetch(i0, j0);
        if (t1 != 0.0) v += (1.0 - t0) * t1 * fetch(i0, j0 + 1);
        if (t0 != 0.0) v += t0 * (1.0 - t1) * fetch(i0 + 1, j0);
        if (t0 != 0.0 && t1 != 0.0) v += t0 * t1 * fetch(i0 + 1, j0 + 1);
        out[idx] = static_cast<float>(v);
      }
    }
    return out;
  }

  const long n0 = static_cast<long>(s[0]), n1 = static_cast<long>(s[1]), n2 = static_cast<long>(s[2]);
  auto fetch = [&](long i, long j, long k) -> double {
    if (i < 0 || j < 0 || k < 0 || i >= n0 || j >= n1 || k >= n2) return 0.0;
    return x[static_cast<std::size_t>((i * n1 + j) * n2 + k)];
  };
  std::size_t idx = 0;
  for (long i = 0; i < n0; ++i) {
    for (long j = 0; j < n1; ++j) {
      for (long k = 0; k < n2; ++k, ++idx) {
        const double p[3] = {static_cast<double>(i) + field.cells(0, idx), static_cast<double>(j) + field.cells(1, idx),
                             static_cast<double>(k) + field.cells(2, idx)};
        long base[3];
        double t[3];
        for (int a = 0; a < 3; ++a) {
          const double f = std::floor(p[a]);
          base[a] = static_cast<long>(f);
          t[a] = p[a] - f;
        }
        double v = 0.0;
        for (int c = 0; c < 8; ++c) {
          double w = 1.0;
          long q[3];
          for (int a = 0; a < 3; ++a) {
            const int bit = (c >> (2 - a)) & 1;
            const double wa = bit ? t[a] : 1.0 - t[a];
            w *= wa;
            q[a] = base[a] + bit;
          }
          if (w != 0.0) v += w * fetch(q[0], q[1], q[2]);
        }
        out[idx] = static_cast<float>(v);
      }
    }
  }
  return out;
}

std::vector<double> jacobian_determinants(const DeformationField& field) {
  const Shape& s = field.shape;
  const std::size_t rank = s.rank();
  if (field.comp.size() != rank) fail(ErrorKind::domain, "field needs one component per axis");
  for (std::size_t a = 0; a < rank; ++a) {
    if (s[a] < 3) fail(ErrorKind::domain, "jacobian needs every axis extent >= 3");
  }
  const auto st = s.strides();
  // Central difference of the normalized component, converted to cells:
  // (phi(v+1) - phi(v-1)) * (extent / 2) / 2, evaluated in float like the field.
  std::array<float, 3> to_cells{};
  for (std::size_t a = 0; a < rank; ++a) to_cells[a] = static_cast<float>(static_cast<double>(s[a]) * 0.25);

  std::vector<double> dets;
  auto entry = [&](std::size_t comp, std::size_t axis, std::size_t idx) {
    const Grid& g = field.comp[comp];
    const float d = (g[idx + st[axis]] - g[idx - st[axis]]) * to_cells[comp];
    return comp == axis ? 1.0f + d : d;
  };

  if (rank == 2) {
    dets.reserve((s[0] - 2) * (s[1] - 2));
    for (std::size_t i = 1; i + 1 < s[0]; ++i) {
      for (std::size_t j = 1; j + 1 < s[1]; ++j) {
        const std::size_t idx = i * st[0] + j;
        const double a = entry(0, 0, idx), b = entry(0, 1, idx);
        const double c = entry(1, 0, idx), d = entry(1, 1, idx);
        dets.push_back(a * d - b * c);
      }
    }
    return dets;
  }

  dets.reserve((s[0] - 2) * (s[1] - 2) * (s[2] - 2));
  for (std::size_t i = 1; i + 1 < s[0]; ++i) {
    for (std::size_t j = 1; j + 1 < s[1]; ++j) {
      for (std::size_t k = 1; k + 1 < s[2]; ++k) {
        const std::size_t idx = i * st[0] + j * st[1] + k;
        double m[3][3];
        for (std::size_t r = 0; r < 3; ++r) {
          for (std::size_t c = 0; c < 3; ++c) m[r][c] = entry(r, c, idx);
        }
        dets.push_back(m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                       m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                       m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]));
      }
    }
  }
  return dets;
}

JacobianStats jacobian_stats(const DeformationField& field) {
  const std::vector<double> dets = jacobian_determinants(field);
  JacobianStats st;
  st.interior_cells = dets.size();

  std::size_t positive = 0;
  double shift = 0.0, sum = 0.0, sum_sq = 0.0;
  for (double det : dets) {
    if (det <= 0.0) continue;
    const double l = std::log(det);
    if (positive++ == 0) shift = l;
    const double d = l - shift;
    sum += d;
    sum_sq += d * d;
  }
  if (positive == 0) fail(ErrorKind::degenerate_field, "every jacobian determinant is nonpositive");

  const auto m = static_cast<double>(positive);
  const double var = (sum_sq - sum * sum / m) / m;
  st.sdlogj = var > 0.0 ? std::sqrt(var) : 0.0;
  st.nonpos_fraction = static_cast<double>(dets.size() - positive) / static_cast<double>(dets.size());
  return st;
}

Grid grid_image(const Shape& shape, std::uint32_t spacing, std::uint32_t line_width) {
  if (spacing < 1 || line_width < 1) fail(ErrorKind::domain, "grid spacing and line width must be at least 1");
  Grid out(shape);
  const auto st = shape.strides();
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    std::size_t rem = idx;
    bool on_line = false;
    for (std::size_t a = 0; a < shape.rank(); ++a) {
      const std::size_t coord = rem / st[a];
      rem %= st[a];
      on_line = on_line || coord % spacing < line_width;
    }
    out[idx] = on_line ? 1.0f : 0.0f;
  }
  return out;
}

}  // namespace tjp
