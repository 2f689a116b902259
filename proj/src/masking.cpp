#include "tjp/masking.hpp"

#include <vector>

#include "tjp/error.hpp"
#include "tjp/simd.hpp"

namespace tjp {

std::size_t MaskPair::jointly_hidden() const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < lattice_a.size(); ++i) n += (lattice_a[i] == 0.0f && lattice_b[i] == 0.0f) ? 1 : 0;
  return n;
}

Shape mask_lattice_shape(const Shape& shape, std::uint32_t cell) {
  if (cell == 0) fail(ErrorKind::configuration, "mask cell must be at least 1");
  std::vector<std::size_t> dims = shape.to_vector();
  for (auto& d : dims) d = (d + cell - 1) / cell;
  return Shape(std::span<const std::size_t>(dims));
}

Grid generate_mask_lattice(const Shape& lattice, double tau_keep, RngStream& rng) {
  if (!(tau_keep >= 0.0 && tau_keep <= 1.0)) fail(ErrorKind::domain, "tau_keep must lie in [0, 1]");
  Grid m(lattice);
  for (float& v : m.data()) v = rng.uniform() < tau_keep ? 1.0f : 0.0f;
  return m;
}

Grid expand_mask(const Grid& lattice, const Shape& shape, std::uint32_t cell) {
  if (!(mask_lattice_shape(shape, cell) == lattice.shape())) fail(ErrorKind::domain, "lattice does not match shape");
  Grid out(shape);
  const auto ls = lattice.shape().strides();
  const auto os = shape.strides();
  if (shape.rank() == 2) {
    for (std::size_t i = 0; i < shape[0]; ++i) {
      for (std::size_t j = 0; j < shape[1]; ++j) out[i * os[0] + j] = lattice[(i / cell) * ls[0] + j / cell];
    }
  } else {
    for (std::size_t i = 0; i < shape[0]; ++i) {
      for (std::size_t j = 0; j < shape[1]; ++j) {
        for (std::size_t k = 0; k < shape[2]; ++k) {
          out[i * os[0] + j * os[1] + k] = lattice[(i / cell) * ls[0] + (j / cell) * ls[1] + k / cell];
        }
      }
    }
  }
  return out;
}

Grid generate_mask(const Shape& shape, std::uint32_t cell, double tau_keep, RngStream& rng) {
  const Shape lattice = mask_lattice_shape(shape, cell);
  return expand_mask(generate_mask_lattice(lattice, tau_keep, rng), shape, cell);
}

DualMaskResult dual_mask(const Grid& x, const DegradationConfig& cfg, const RngStream& rng) {
  cfg.validate();
  const double tau_keep = 1.0 - cfg.mask_ratio;
  const Shape lattice = mask_lattice_shape(x.shape(), cfg.mask_cell);
  RngStream rng_a = rng.fork("maskA");
  RngStream rng_b = rng.fork("maskB");

  MaskPair pair{Grid(lattice), Grid(lattice), cfg.mask_cell, tau_keep, 0};
  for (std::uint32_t attempt = 1; attempt <= kMaxMaskDraws; ++attempt) {
    pair.lattice_a = generate_mask_lattice(lattice, tau_keep, rng_a);
    pair.lattice_b = generate_mask_lattice(lattice, tau_keep, rng_b);
    pair.attempts = attempt;
    if (pair.jointly_hidden() > 0) {
      const Grid m_a = expand_mask(pair.lattice_a, x.shape(), cfg.mask_cell);
      const Grid m_b = expand_mask(pair.lattice_b, x.shape(), cfg.mask_cell);
      Grid x_a(x.shape()), x_b(x.shape());
      x_a.set_spacing(x.spacing());
      x_b.set_spacing(x.spacing());
      const auto& k = simd::kernels();
      k.multiply(x.data().data(), m_a.data().data(), x_a.data().data(), x.size());
      k.multiply(x.data().data(), m_b.data().data(), x_b.data().data(), x.size());
      return {std::move(x_a), std::move(x_b), std::move(pair)};
    }
  }
  fail(ErrorKind::degenerate_mask, "no lattice cell hidden in both masks after 16 draws (mask_ratio " +
                                       std::to_string(cfg.mask_ratio) + ")");
}

}  // namespace tjp
