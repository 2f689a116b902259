#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "oracles.hpp"
#include "support.hpp"
#include "tjp/error.hpp"
#include "tjp/metrics.hpp"

using namespace tjp;
using namespace oracle;

TEST_CASE("psnr analytic cases") {
  const Grid a(Shape{8, 8}, 0.25f);
  CHECK(psnr(a, a, 1.0) == kPsnrIdentical);
  CHECK(std::isinf(psnr(a, a, 1.0)));

  CHECK(std::abs(psnr(Grid(Shape{8, 8}, 0.0f), Grid(Shape{8, 8}, 1.0f), 1.0)) <= 1e-9);

  // A uniform difference with MSE exactly 1/100 of max^2: 0.5 on max 5.
  CHECK(std::abs(psnr(Grid(Shape{6, 7}, 2.0f), Grid(Shape{6, 7}, 2.5f), 5.0) - 20.0) <= 1e-9);

  // The 0.1 difference as realized in 32-bit floats.
  const float x = 0.5f, y = 0.6f;
  const double d = static_cast<double>(y) - static_cast<double>(x);
  const double analytic = 10.0 * std::log10(1.0 / (d * d));
  const double got = psnr(Grid(Shape{5, 9}, x), Grid(Shape{5, 9}, y), 1.0);
  CHECK(std::abs(got - analytic) <= 1e-9);
  CHECK(std::abs(got - 20.0) < 1e-5);

  const Grid p = testing::random_grid(Shape{9, 9}, 1), q = testing::random_grid(Shape{9, 9}, 2);
  CHECK(psnr(p, q, 1.0) == psnr(q, p, 1.0));
  CHECK_THROWS_AS(psnr(p, Grid(Shape{9, 8}), 1.0), Error);
  CHECK_THROWS_AS(psnr(p, q, 0.0), Error);
}

TEST_CASE("ssim analytic cases and oracle agreement") {
  const Grid x = testing::random_grid(Shape{32, 40}, 3);
  CHECK(std::abs(ssim(x, x, 1.0) - 1.0) <= 1e-9);

  const double constant = ssim(Grid(Shape{16, 16}, 0.5f), Grid(Shape{16, 16}, 0.6f), 1.0);
  CHECK(std::abs(constant - (2 * 0.3 + 1e-4) / (0.25 + 0.36 + 1e-4)) <= 1e-4);
  CHECK(std::abs(constant - 0.98361) <= 1e-4);

  const Grid y = testing::random_grid(Shape{32, 40}, 4);
  CHECK(ssim(x, y, 1.0) < 1.0);
  CHECK(std::abs(ssim(x, y, 1.0) - ssim(y, x, 1.0)) <= 1e-12);

  for (const Shape& s : {Shape{16, 16}, Shape{11, 13}, Shape{6, 9}, Shape{3, 5}, Shape{4, 12, 14}, Shape{16, 16, 16}}) {
    const Grid a = testing::random_grid(s, 5), b = testing::random_grid(s, 6);
    CHECK(std::abs(ssim(a, b, 1.0) - oracle_ssim(a, b, 1.0)) <= 1e-9);
  }
  CHECK_THROWS_AS(ssim(Grid(Shape{2, 10}), Grid(Shape{2, 10}), 1.0), Error);
}

TEST_CASE("dice examples") {
  LabelGrid a(Shape{4, 4}, 0), b(Shape{4, 4}, 0);
  for (std::size_t i : {0, 1, 2, 3}) a[i] = 1;
  for (std::size_t i : {2, 3, 4, 5}) b[i] = 1;
  CHECK(dice(a, b, 1) == 0.5);
  CHECK(dice(a, a, 1) == 1.0);
  LabelGrid c(Shape{4, 4}, 0);
  for (std::size_t i : {10, 11}) c[i] = 1;
  CHECK(dice(a, c, 1) == 0.0);
  try {
    dice(a, b, 7);
    FAIL("expected undefined metric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_metric);
  }
  CHECK(dice_macro(a, a) == 1.0);
}

TEST_CASE("hd95 examples") {
  LabelGrid a(Shape{10, 10}, 0), b(Shape{10, 10}, 0);
  a[2 * 10 + 2] = 1;
  b[2 * 10 + 5] = 1;
  CHECK(hd95(a, b, 1) == 3.0);
  CHECK(hd95(a, a, 1) == 0.0);
  try {
    hd95(a, LabelGrid(Shape{10, 10}, 0), 1);
    FAIL("expected undefined metric");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::undefined_metric);
  }
  CHECK(hd95(a, b, 1, {1.0, 2.0, 1.0}) == 6.0);
}

TEST_CASE("dice and hd95 match brute force on random fixtures up to 16^3") {
  std::mt19937 gen(12345);
  const std::vector<Shape> shapes{Shape{5, 7}, Shape{16, 16}, Shape{9, 13}, Shape{6, 5, 7}, Shape{16, 16, 16}, Shape{12, 3, 16}};
  int compared = 0;
  for (const Shape& s : shapes) {
    for (int rep = 0; rep < 6; ++rep) {
      const LabelGrid a = random_labels(s, gen), b = random_labels(s, gen);
      for (std::uint32_t label = 1; label <= 3; ++label) {
        const bool in_a = std::count(a.data().begin(), a.data().end(), label) > 0;
        const bool in_b = std::count(b.data().begin(), b.data().end(), label) > 0;
        if (in_a || in_b) CHECK(dice(a, b, label) == oracle_dice(a, b, label));
        if (in_a && in_b) {
          CHECK(hd95(a, b, label) == oracle_hd95(a, b, label, {1.0, 1.0, 1.0}));
          const std::array<double, 3> h{0.5, 1.25, 2.0};
          CHECK(std::abs(hd95(a, b, label, h) - oracle_hd95(a, b, label, h)) <= 1e-9);
          ++compared;
        }
      }
    }
  }
  CHECK(compared > 20);
}

TEST_CASE("dice and hd95 are symmetric and ignore relabeling of other labels") {
  std::mt19937 gen(99);
  for (int rep = 0; rep < 10; ++rep) {
    const Shape s{12, 14, 9};
    LabelGrid a = random_labels(s, gen), b = random_labels(s, gen);
    a[0] = 1;
    b[1] = 1;
    CHECK(dice(a, b, 1) == dice(b, a, 1));
    CHECK(hd95(a, b, 1) == hd95(b, a, 1));
    // Swap labels 2 and 3 in both inputs.
    LabelGrid ra = a, rb = b;
    for (auto* g : {&ra, &rb}) {
      for (auto& v : g->data()) v = v == 2 ? 3 : v == 3 ? 2 : v;
    }
    CHECK(dice(ra, rb, 1) == dice(a, b, 1));
    CHECK(hd95(ra, rb, 1) == hd95(a, b, 1));
  }
}

TEST_CASE("distance transform and percentile helpers") {
  const Shape s{5, 6};
  const auto d = squared_distance_transform(s, {0}, {1.0, 1.0, 1.0});
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 6; ++j) CHECK(d[i * 6 + j] == static_cast<double>(i * i + j * j));
  }
  CHECK(std::isinf(squared_distance_transform(s, {}, {1.0, 1.0, 1.0})[3]));
  CHECK(percentile({1, 2, 3, 4, 5}, 0.5) == 3.0);
  CHECK(percentile({0, 10}, 0.95) == doctest::Approx(9.5));
  CHECK(percentile({7}, 0.95) == 7.0);
}
