#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "chartensor/kernels.hpp"
#include "chartensor/tensor_core.hpp"

using namespace chartensor;
using kernels::KernelTable;

namespace {

std::vector<double> random_plane(std::size_t n, std::mt19937_64& rng, double lo = -1, double hi = 1) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

class KernelEquivalence : public ::testing::Test {
 protected:
  void SetUp() override {
    simd_ = kernels::avx2_kernels();
    if (!simd_) GTEST_SKIP() << "AVX2 kernels unavailable on this host";
  }
  const KernelTable& ref() const { return kernels::scalar_kernels(); }
  const KernelTable* simd_ = nullptr;
};

const int kSizes[][2] = {{1, 1}, {2, 3}, {3, 2}, {4, 4}, {5, 7}, {7, 5}, {8, 8},
                         {9, 3}, {16, 16}, {17, 13}, {33, 31}, {64, 48}, {101, 67}};

}  // namespace

TEST_F(KernelEquivalence, Sobel) {
  std::mt19937_64 rng(1);
  for (const auto& s : kSizes) {
    const auto img = random_plane(std::size_t(s[0]) * s[1], rng, 0, 1);
    std::vector<double> ax(img.size()), ay(img.size()), bx(img.size()), by(img.size());
    ref().sobel(img.data(), s[0], s[1], ax.data(), ay.data());
    simd_->sobel(img.data(), s[0], s[1], bx.data(), by.data());
    EXPECT_TRUE(bit_equal(ax, bx)) << s[0] << "x" << s[1];
    EXPECT_TRUE(bit_equal(ay, by)) << s[0] << "x" << s[1];
  }
}

TEST_F(KernelEquivalence, OuterProduct) {
  std::mt19937_64 rng(2);
  for (std::size_t n : {1u, 3u, 4u, 5u, 31u, 1000u}) {
    const auto gx = random_plane(n, rng), gy = random_plane(n, rng);
    std::vector<double> a[3], b[3];
    for (int c = 0; c < 3; ++c) a[c].resize(n), b[c].resize(n);
    ref().outer_product(gx.data(), gy.data(), n, a[0].data(), a[1].data(), a[2].data());
    simd_->outer_product(gx.data(), gy.data(), n, b[0].data(), b[1].data(), b[2].data());
    for (int c = 0; c < 3; ++c) EXPECT_TRUE(bit_equal(a[c], b[c]));
  }
}

TEST_F(KernelEquivalence, GaussianRowsAndColumns) {
  std::mt19937_64 rng(3);
  for (double rho : {0.5, 1.0, 2.0}) {
    const auto taps = gaussian_taps(rho);
    const int radius = static_cast<int>(taps.size() / 2);
    for (const auto& s : kSizes) {
      const auto src = random_plane(std::size_t(s[0]) * s[1], rng);
      std::vector<double> a(src.size()), b(src.size());
      ref().convolve_rows(src.data(), s[0], s[1], taps.data(), radius, a.data());
      simd_->convolve_rows(src.data(), s[0], s[1], taps.data(), radius, b.data());
      EXPECT_TRUE(bit_equal(a, b)) << "rows " << s[0] << "x" << s[1] << " rho " << rho;
      ref().convolve_cols(src.data(), s[0], s[1], taps.data(), radius, a.data());
      simd_->convolve_cols(src.data(), s[0], s[1], taps.data(), radius, b.data());
      EXPECT_TRUE(bit_equal(a, b)) << "cols " << s[0] << "x" << s[1] << " rho " << rho;
    }
  }
}

TEST_F(KernelEquivalence, VoteN4) {
  std::mt19937_64 rng(4);
  kernels::VoteWeights dir[4] = {vote_weights(-1, 0, 4.0), vote_weights(1, 0, 4.0),
                                 vote_weights(0, -1, 4.0), vote_weights(0, 1, 4.0)};
  for (const auto& s : kSizes) {
    const std::size_t n = std::size_t(s[0]) * s[1];
    const auto xx = random_plane(n, rng, 0, 2), xy = random_plane(n, rng), yy = random_plane(n, rng, 0, 2);
    std::vector<double> a[3], b[3];
    for (int c = 0; c < 3; ++c) a[c].resize(n), b[c].resize(n);
    ref().vote_n4(xx.data(), xy.data(), yy.data(), s[0], s[1], dir, a[0].data(), a[1].data(), a[2].data());
    simd_->vote_n4(xx.data(), xy.data(), yy.data(), s[0], s[1], dir, b[0].data(), b[1].data(), b[2].data());
    for (int c = 0; c < 3; ++c) EXPECT_TRUE(bit_equal(a[c], b[c])) << s[0] << "x" << s[1];
  }
}

TEST(KernelDispatch, SelectionByName) {
  const std::string before = kernels::active_kernels().name;
  EXPECT_TRUE(kernels::select_kernels("scalar"));
  EXPECT_STREQ(kernels::active_kernels().name, "scalar");
  EXPECT_FALSE(kernels::select_kernels("neon-please"));
  EXPECT_TRUE(kernels::select_kernels("auto"));
  if (kernels::avx2_kernels()) {
    EXPECT_STREQ(kernels::active_kernels().name, "avx2");
  }
  kernels::select_kernels(before);
}

TEST(KernelDispatch, PipelineFieldsIdenticalAcrossKernelSets) {
  if (!kernels::avx2_kernels()) GTEST_SKIP() << "AVX2 kernels unavailable";
  std::mt19937_64 rng(5);
  GrayImage img(45, 37);
  for (auto& v : img.values()) v = std::uniform_real_distribution<double>(0, 1)(rng);
  TensorParams p;
  kernels::select_kernels("scalar");
  const auto a = compute_descriptor(img, p);
  p.descriptor = Descriptor::kStructureTensor;
  const auto as = compute_descriptor(img, p);
  kernels::select_kernels("avx2");
  const auto bs = compute_descriptor(img, p);
  p.descriptor = Descriptor::kTensorVoting;
  const auto b = compute_descriptor(img, p);
  kernels::select_kernels("auto");
  for (std::size_t i = 0; i < a.analyzed.size(); ++i) {
    EXPECT_EQ(a.analyzed.at(i), b.analyzed.at(i));
    EXPECT_EQ(as.analyzed.at(i), bs.analyzed.at(i));
  }
}
