#include "tjp/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tjp/error.hpp"
#include "tjp/simd.hpp"

namespace tjp {

namespace {

void require_same_shape(const Shape& a, const Shape& b) {
  if (!(a == b)) fail(ErrorKind::domain, "shape mismatch: " + a.to_string() + " vs " + b.to_string());
}

// Valid-mode separable Gaussian filtering of a rows x cols plane in double
// precision; result is (rows - w + 1) x (cols - w + 1), column-major.
std::vector<double> filter_valid(const std::vector<double>& plane, std::size_t rows, std::size_t cols,
                                 const std::vector<double>& taps) {
  const auto& k = simd::kernels();
  const std::size_t w = taps.size();
  const std::size_t out_c = cols - w + 1, out_r = rows - w + 1;
  std::vector<double> horiz(rows * out_c);
  for (std::size_t r = 0; r < rows; ++r) k.correlate(plane.data() + r * cols, out_c, taps.data(), w, horiz.data() + r * out_c);
  // Transpose so the vertical pass also runs along contiguous memory.
  std::vector<double> t(out_c * rows);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < out_c; ++c) t[c * rows + r] = horiz[r * out_c + c];
  }
  std::vector<double> out(out_c * out_r);
  for (std::size_t c = 0; c < out_c; ++c) k.correlate(t.data() + c * rows, out_r, taps.data(), w, out.data() + c * out_r);
  return out;
}

double ssim_plane(const float* a, const float* b, std::size_t rows, std::size_t cols, double max_val) {
  std::size_t w = std::min<std::size_t>({11, rows, cols});
  if (w % 2 == 0) --w;
  const double sigma = 1.5 * static_cast<double>(w) / 11.0;
  std::vector<double> taps(w);
  double total = 0.0;
  for (std::size_t i = 0; i < w; ++i) {
    const double d = static_cast<double>(i) - static_cast<double>(w / 2);
    taps[i] = std::exp(-d * d / (2.0 * sigma * sigma));
    total += taps[i];
  }
  for (double& t : taps) t /= total;

  const std::size_t n = rows * cols;
  std::vector<double> da(n), db(n), aa(n), bb(n), ab(n);
  for (std::size_t i = 0; i < n; ++i) {
    da[i] = a[i];
    db[i] = b[i];
    aa[i] = da[i] * da[i];
    bb[i] = db[i] * db[i];
    ab[i] = da[i] * db[i];
  }

  const auto mu_a = filter_valid(da, rows, cols, taps);
  const auto mu_b = filter_valid(db, rows, cols, taps);
  const auto e_aa = filter_valid(aa, rows, cols, taps);
  const auto e_bb = filter_valid(bb, rows, cols, taps);
  const auto e_ab = filter_valid(ab, rows, cols, taps);

  const double c1 = (0.01 * max_val) * (0.01 * max_val);
  const double c2 = (0.03 * max_val) * (0.03 * max_val);
  double sum = 0.0;
  for (std::size_t i = 0; i < mu_a.size(); ++i) {
    const double ma = mu_a[i], mb = mu_b[i];
    const double va = e_aa[i] - ma * ma;
    const double vb = e_bb[i] - mb * mb;
    const double cov = e_ab[i] - ma * mb;
    sum += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
  }
  return sum / static_cast<double>(mu_a.size());
}

}  // namespace

double psnr(const Grid& a, const Grid& b, double max_val) {
  require_same_shape(a.shape(), b.shape());
  if (!(max_val > 0.0)) fail(ErrorKind::domain, "psnr max value must be positive");
  const double mse = simd::kernels().sum_squared_diff(a.data().data(), b.data().data(), a.size()) /
                     static_cast<double>(a.size());
  if (mse == 0.0) return kPsnrIdentical;
  return 10.0 * std::log10(max_val * max_val / mse);
}

double ssim(const Grid& a, const Grid& b, double max_val) {
  require_same_shape(a.shape(), b.shape());
  if (!(max_val > 0.0)) fail(ErrorKind::domain, "ssim max value must be positive");
  const Shape& s = a.shape();
  const std::size_t rows = s[s.rank() - 2], cols = s[s.rank() - 1];
  if (rows < 3 || cols < 3) fail(ErrorKind::domain, "ssim needs planes of at least 3 x 3");
  const std::size_t slices = s.rank() == 3 ? s[0] : 1;
  double sum = 0.0;
  for (std::size_t z = 0; z < slices; ++z) {
    const std::size_t off = z * rows * cols;
    sum += ssim_plane(a.data().data() + off, b.data().data() + off, rows, cols, max_val);
  }
  return sum / static_cast<double>(slices);
}

double dice(const LabelGrid& a, const LabelGrid& b, std::uint32_t label) {
  require_same_shape(a.shape(), b.shape());
  std::size_t na = 0, nb = 0, both = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool in_a = a[i] == label, in_b = b[i] == label;
    na += in_a;
    nb += in_b;
    both += in_a && in_b;
  }
  if (na + nb == 0) fail(ErrorKind::undefined_metric, "label " + std::to_string(label) + " absent from both grids");
  return 2.0 * static_cast<double>(both) / static_cast<double>(na + nb);
}

double dice_macro(const LabelGrid& a, const LabelGrid& b) {
  require_same_shape(a.shape(), b.shape());
  std::set<std::uint32_t> labels;
  for (auto v : a.data()) if (v) labels.insert(v);
  for (auto v : b.data()) if (v) labels.insert(v);
  if (labels.empty()) fail(ErrorKind::undefined_metric, "no foreground labels in either grid");
  double sum = 0.0;
  for (auto l : labels) sum += dice(a, b, l);
  return sum / static_cast<double>(labels.size());
}

std::vector<std::size_t> surface_cells(const LabelGrid& g, std::uint32_t label) {
  const Shape& s = g.shape();
  const auto st = s.strides();
  std::vector<std::size_t> out;
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (g[idx] != label) continue;
    bool surface = false;
    std::size_t rem = idx;
    for (std::size_t a = 0; a < s.rank() && !surface; ++a) {
      const std::size_t c = rem / st[a];
      rem %= st[a];
      surface = c == 0 || c + 1 == s[a] || g[idx - st[a]] != label || g[idx + st[a]] != label;
    }
    if (surface) out.push_back(idx);
  }
  return out;
}

std::vector<double> squared_distance_transform(const Shape& shape, const std::vector<std::size_t>& marked,
                                               const std::array<double, 3>& spacing) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> d(shape.size(), kInf);
  for (std::size_t m : marked) d[m] = 0.0;
  const auto st = shape.strides();

  std::vector<double> f, out;
  std::vector<std::size_t> v;
  std::vector<double> z;
  for (std::size_t axis = 0; axis < shape.rank(); ++axis) {
    const std::size_t n = shape[axis];
    const double h = spacing[axis];
    f.resize(n);
    out.resize(n);
    v.resize(n);
    z.resize(n + 1);
    const std::size_t lines = shape.size() / n;
    for (std::size_t line = 0; line < lines; ++line) {
      // Start of this line: split the line number over the other axes.
      std::size_t base = 0, rem = line;
      for (std::size_t a = shape.rank(); a-- > 0;) {
        if (a == axis) continue;
        base += (rem % shape[a]) * st[a];
        rem /= shape[a];
      }
      for (std::size_t q = 0; q < n; ++q) f[q] = d[base + q * st[axis]];

      // Lower envelope of parabolas (Felzenszwalb & Huttenlocher) over finite samples.
      std::size_t k = 0;
      bool any = false;
      for (std::size_t q = 0; q < n; ++q) {
        if (f[q] == kInf) continue;
        const double xq = static_cast<double>(q) * h;
        if (!any) {
          v[0] = q;
          z[0] = -kInf;
          z[1] = kInf;
          any = true;
          continue;
        }
        // z[0] is -inf, so k never drops below zero.
        const auto intersect = [&](std::size_t p) {
          const double xp = static_cast<double>(p) * h;
          return ((f[q] + xq * xq) - (f[p] + xp * xp)) / (2.0 * (xq - xp));
        };
        double s = intersect(v[k]);
        while (s <= z[k]) s = intersect(v[--k]);
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = kInf;
      }
      if (!any) continue;
      std::size_t j = 0;
      for (std::size_t q = 0; q < n; ++q) {
        const double xq = static_cast<double>(q) * h;
        while (z[j + 1] < xq) ++j;
        const double dx = xq - static_cast<double>(v[j]) * h;
        out[q] = dx * dx + f[v[j]];
      }
      for (std::size_t q = 0; q < n; ++q) d[base + q * st[axis]] = out[q];
    }
  }
  return d;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) fail(ErrorKind::undefined_metric, "percentile of an empty set");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double hd95(const LabelGrid& a, const LabelGrid& b, std::uint32_t label, const std::array<double, 3>& spacing) {
  require_same_shape(a.shape(), b.shape());
  const auto sa = surface_cells(a, label);
  const auto sb = surface_cells(b, label);
  if (sa.empty() || sb.empty()) fail(ErrorKind::undefined_metric, "label " + std::to_string(label) + " has an empty surface");
  const auto da = squared_distance_transform(a.shape(), sa, spacing);
  const auto db = squared_distance_transform(b.shape(), sb, spacing);
  std::vector<double> pooled;
  pooled.reserve(sa.size() + sb.size());
  for (std::size_t i : sa) pooled.push_back(std::sqrt(db[i]));
  for (std::size_t i : sb) pooled.push_back(std::sqrt(da[i]));
  return percentile(std::move(pooled), 0.95);
}

std::pair<double, double> sdlogj(const DeformationField& field) {
  const JacobianStats st = jacobian_stats(field);
  return {st.sdlogj, st.nonpos_fraction};
}

}  // namespace tjp
