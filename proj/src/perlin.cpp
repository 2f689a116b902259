#include <cmath>
#include <numeric>

#include "tjp/deformation.hpp"
#include "tjp/error.hpp"

namespace tjp {

namespace {

constexpr std::size_t kTable = 256;

// Largest single-corner contribution (0.5 - r^2)^4 * r, reached at r^2 = 1/18.
const double kCornerPeak = std::pow(0.5 - 1.0 / 18.0, 4) * std::sqrt(1.0 / 18.0);
// A point lies in one simplex: 3 corners in 2D, 4 in 3D.
const double kScale2 = 1.0 / (3.0 * kCornerPeak);
const double kScale3 = 1.0 / (4.0 * kCornerPeak);

const double kF2 = 0.5 * (std::sqrt(3.0) - 1.0);
const double kG2 = (3.0 - std::sqrt(3.0)) / 6.0;
constexpr double kF3 = 1.0 / 3.0;
constexpr double kG3 = 1.0 / 6.0;

long fast_floor(double v) { return static_cast<long>(std::floor(v)); }

}  // namespace

SimplexNoise::SimplexNoise(std::size_t rank, RngStream& rng) : rank_(rank), perm_(kTable), gradients_(kTable * rank) {
  if (rank != 2 && rank != 3) fail(ErrorKind::domain, "simplex noise supports 2 or 3 dimensions");
  std::iota(perm_.begin(), perm_.end(), 0);
  for (std::size_t i = kTable - 1; i > 0; --i) std::swap(perm_[i], perm_[rng.uniform_index(i + 1)]);
  for (std::size_t g = 0; g < kTable; ++g) {
    double norm = 0.0;
    do {
      norm = 0.0;
      for (std::size_t a = 0; a < rank; ++a) {
        gradients_[g * rank + a] = rng.gaussian(0.0, 1.0);
        norm += gradients_[g * rank + a] * gradients_[g * rank + a];
      }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (std::size_t a = 0; a < rank; ++a) gradients_[g * rank + a] /= norm;
  }
}

std::size_t SimplexNoise::hash(long i, long j) const {
  return perm_[static_cast<std::size_t>(i + perm_[static_cast<std::size_t>(j) & 255]) & 255];
}

std::size_t SimplexNoise::hash(long i, long j, long k) const {
  return perm_[static_cast<std::size_t>(i + perm_[static_cast<std::size_t>(j + perm_[static_cast<std::size_t>(k) & 255]) & 255]) & 255];
}

double SimplexNoise::evaluate(double x, double y) const {
  const double s = (x + y) * kF2;
  const long i = fast_floor(x + s);
  const long j = fast_floor(y + s);
  const double t = static_cast<double>(i + j) * kG2;
  const double x0 = x - (static_cast<double>(i) - t);
  const double y0 = y - (static_cast<double>(j) - t);
  const long i1 = x0 > y0 ? 1 : 0;
  const long j1 = 1 - i1;

  const double cx[3] = {x0, x0 - i1 + kG2, x0 - 1.0 + 2.0 * kG2};
  const double cy[3] = {y0, y0 - j1 + kG2, y0 - 1.0 + 2.0 * kG2};
  const long ci[3] = {i, i + i1, i + 1};
  const long cj[3] = {j, j + j1, j + 1};

  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    double w = 0.5 - cx[c] * cx[c] - cy[c] * cy[c];
    if (w <= 0.0) continue;
    w *= w;
    const double* g = &gradients_[hash(ci[c], cj[c]) * 2];
    sum += w * w * (g[0] * cx[c] + g[1] * cy[c]);
  }
  return sum * kScale2;
}

double SimplexNoise::evaluate(double x, double y, double z) const {
  const double s = (x + y + z) * kF3;
  const long i = fast_floor(x + s);
  const long j = fast_floor(y + s);
  const long k = fast_floor(z + s);
  const double t = static_cast<double>(i + j + k) * kG3;
  const double x0 = x - (static_cast<double>(i) - t);
  const double y0 = y - (static_cast<double>(j) - t);
  const double z0 = z - (static_cast<double>(k) - t);

  long i1, j1, k1, i2, j2, k2;
  if (x0 >= y0) {
    if (y0 >= z0) {
      i1 = 1, j1 = 0, k1 = 0, i2 = 1, j2 = 1, k2 = 0;
    } else if (x0 >= z0) {
      i1 = 1, j1 = 0, k1 = 0, i2 = 1, j2 = 0, k2 = 1;
    } else {
      i1 = 0, j1 = 0, k1 = 1, i2 = 1, j2 = 0, k2 = 1;
    }
  } else {
    if (y0 < z0) {
      i1 = 0, j1 = 0, k1 = 1, i2 = 0, j2 = 1, k2 = 1;
    } else if (x0 < z0) {
      i1 = 0, j1 = 1, k1 = 0, i2 = 0, j2 = 1, k2 = 1;
    } else {
      i1 = 0, j1 = 1, k1 = 0, i2 = 1, j2 = 1, k2 = 0;
    }
  }

  const double cx[4] = {x0, x0 - i1 + kG3, x0 - i2 + 2.0 * kG3, x0 - 1.0 + 3.0 * kG3};
  const double cy[4] = {y0, y0 - j1 + kG3, y0 - j2 + 2.0 * kG3, y0 - 1.0 + 3.0 * kG3};
  const double cz[4] = {z0, z0 - k1 + kG3, z0 - k2 + 2.0 * kG3, z0 - 1.0 + 3.0 * kG3};
  const long ci[4] = {i, i + i1, i + i2, i + 1};
  const long cj[4] = {j, j + j1, j + j2, j + 1};
  const long ck[4] = {k, k + k1, k + k2, k + 1};

  double sum = 0.0;
  for (int c = 0; c < 4; ++c) {
    double w = 0.5 - cx[c] * cx[c] - cy[c] * cy[c] - cz[c] * cz[c];
    if (w <= 0.0) continue;
    w *= w;
    const double* g = &gradients_[hash(ci[c], cj[c], ck[c]) * 3];
    sum += w * w * (g[0] * cx[c] + g[1] * cy[c] + g[2] * cz[c]);
  }
  return sum * kScale3;
}

Grid perlin_field(const Shape& shape, std::uint32_t octaves, double persistence, std::uint32_t base_spacing,
                  double lacunarity, RngStream& rng) {
  if (octaves < 1) fail(ErrorKind::domain, "perlin octaves must be at least 1");
  if (!(persistence > 0.0 && persistence <= 1.0)) fail(ErrorKind::domain, "perlin persistence must lie in (0, 1]");
  if (base_spacing < 2) fail(ErrorKind::domain, "perlin base spacing must be at least 2");
  if (!(lacunarity > 1.0)) fail(ErrorKind::domain, "perlin lacunarity must exceed 1");

  const std::size_t rank = shape.rank();
  std::vector<double> acc(shape.size(), 0.0);
  double amplitude = 1.0;
  double frequency = 1.0 / static_cast<double>(base_spacing);
  for (std::uint32_t n = 0; n < octaves; ++n) {
    const SimplexNoise noise(rank, rng);
    double offset[3];
    for (std::size_t a = 0; a < rank; ++a) offset[a] = rng.uniform(0.0, static_cast<double>(kTable));

    std::size_t idx = 0;
    if (rank == 2) {
      for (std::size_t i = 0; i < shape[0]; ++i) {
        for (std::size_t j = 0; j < shape[1]; ++j, ++idx) {
          acc[idx] += amplitude * noise.evaluate(static_cast<double>(i) * frequency + offset[0],
                                                 static_cast<double>(j) * frequency + offset[1]);
        }
      }
    } else {
      for (std::size_t i = 0; i < shape[0]; ++i) {
        for (std::size_t j = 0; j < shape[1]; ++j) {
          for (std::size_t k = 0; k < shape[2]; ++k, ++idx) {
            acc[idx] += amplitude * noise.evaluate(static_cast<double>(i) * frequency + offset[0],
                                                   static_cast<double>(j) * frequency + offset[1],
                                                   static_cast<double>(k) * frequency + offset[2]);
          }
        }
      }
    }
    amplitude *= persistence;
    frequency *= lacunarity;
  }

  Grid out(shape);
  for (std::size_t i = 0; i < acc.size(); ++i) out[i] = static_cast<float>(acc[i]);
  return out;
}

}  // namespace tjp
