#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "chartensor/tensor_core.hpp"
#include "oracles.hpp"

using namespace chartensor;

namespace {

TensorField tg_of(const GrayImage& img) { return gradient_tensor(compute_gradient(img)); }

double max_abs_diff(const TensorField& a, const TensorField& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a.xx()[i] - b.xx()[i]));
    m = std::max(m, std::abs(a.xy()[i] - b.xy()[i]));
    m = std::max(m, std::abs(a.yy()[i] - b.yy()[i]));
  }
  return m;
}

}  // namespace

TEST(Gradient, ConstantImageHasZeroGradient) {
  const auto g = compute_gradient(GrayImage(7, 5, 0.5));
  for (std::size_t i = 0; i < g.gx.size(); ++i) {
    EXPECT_EQ(g.gx[i], 0.0);
    EXPECT_EQ(g.gy[i], 0.0);
  }
}

TEST(Gradient, VerticalStepEdge) {
  GrayImage img(8, 6, 0.0);
  for (int y = 0; y < 6; ++y)
    for (int x = 4; x < 8; ++x) img(x, y) = 1.0;
  const auto g = compute_gradient(img);
  for (int y = 1; y < 5; ++y) {
    EXPECT_GT(g.at(3, y).gx, 0.0);
    EXPECT_GT(g.at(4, y).gx, 0.0);
    for (int x = 0; x < 8; ++x) EXPECT_EQ(g.at(x, y).gy, 0.0);
  }
  // A unit step yields a unit gradient across the edge pair.
  EXPECT_DOUBLE_EQ(g.at(3, 2).gx + g.at(4, 2).gx, 2.0);
}

TEST(Gradient, MatchesDirectConvolution) {
  GrayImage img(5, 5, 0.0);
  img(2, 2) = 1.0;
  std::vector<double> gx, gy;
  oracle::sobel(img, gx, gy);
  const auto g = compute_gradient(img);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    EXPECT_NEAR(g.gx[i], gx[i], 1e-15);
    EXPECT_NEAR(g.gy[i], gy[i], 1e-15);
  }
  std::mt19937_64 rng(3);
  const auto r = oracle::random_image(13, 9, rng);
  oracle::sobel(r, gx, gy);
  const auto g2 = compute_gradient(r);
  for (std::size_t i = 0; i < gx.size(); ++i) {
    EXPECT_NEAR(g2.gx[i], gx[i], 1e-14);
    EXPECT_NEAR(g2.gy[i], gy[i], 1e-14);
  }
}

TEST(Gradient, EmptyImageIsInvalidInput) {
  try {
    compute_gradient(GrayImage{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(GradientTensor, OuterProducts) {
  GradientField g{3, 1, {0.0, 1.0, 3.0}, {0.0, 0.0, 4.0}};
  const auto t = gradient_tensor(g);
  EXPECT_EQ(t.at(0, 0), (SymTensor2{0, 0, 0}));
  EXPECT_EQ(t.at(1, 0), (SymTensor2{1, 0, 0}));
  EXPECT_EQ(t.at(2, 0), (SymTensor2{9, 12, 16}));
  const auto d = eigen_decompose(t.at(2, 0));
  EXPECT_NEAR(d.l0, 25.0, 1e-12);
  EXPECT_NEAR(d.l1, 0.0, 1e-12);
}

TEST(Eigen, DecompositionInvariants) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 1000; ++i) {
    const SymTensor2 t{u(rng), u(rng), u(rng)};
    const auto d = eigen_decompose(t);
    EXPECT_GE(d.l0, d.l1);
    EXPECT_NEAR(std::hypot(d.v0.x, d.v0.y), 1.0, 1e-9);
    EXPECT_NEAR(std::hypot(d.v1.x, d.v1.y), 1.0, 1e-9);
    EXPECT_NEAR(d.v0.x * d.v1.x + d.v0.y * d.v1.y, 0.0, 1e-9);
    const auto back = compose(d);
    EXPECT_NEAR(back.xx, t.xx, 1e-7);
    EXPECT_NEAR(back.xy, t.xy, 1e-7);
    EXPECT_NEAR(back.yy, t.yy, 1e-7);
  }
}

TEST(StructureTensor, ConstantFieldUnchanged) {
  TensorField f(9, 7);
  for (std::size_t i = 0; i < f.size(); ++i) f.set(i, {2.0, -0.5, 1.0});
  const auto s = structure_tensor(f, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(s.xx()[i], 2.0, 1e-12);
    EXPECT_NEAR(s.xy()[i], -0.5, 1e-12);
    EXPECT_NEAR(s.yy()[i], 1.0, 1e-12);
  }
}

TEST(StructureTensor, ImpulseSpreadsAsScalarMultiples) {
  TensorField f(7, 7);
  const SymTensor2 k{0.36, 0.48, 0.64};
  f.set(3, 3, k);
  const auto s = structure_tensor(f, 1.0);
  std::vector<double> plane(49, 0.0);
  plane[3 * 7 + 3] = 1.0;
  const auto ref = oracle::gaussian2d(plane, 7, 7, 1.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_GE(ref[i], 0.0);
    EXPECT_NEAR(s.xx()[i], ref[i] * k.xx, 1e-15);
    EXPECT_NEAR(s.xy()[i], ref[i] * k.xy, 1e-15);
    EXPECT_NEAR(s.yy()[i], ref[i] * k.yy, 1e-15);
  }
}

TEST(StructureTensor, RhoMustBePositive) {
  TensorField f(3, 3);
  EXPECT_THROW(structure_tensor(f, 0.0), Error);
  EXPECT_THROW(structure_tensor(f, -1.0), Error);
}

TEST(CastVote, ZeroTensorGivesZeroVote) {
  const auto v = cast_vote({1, 0}, {0, 0}, SymTensor2{}, 4.0);
  EXPECT_EQ(v, (SymTensor2{0, 0, 0}));
}

TEST(CastVote, HorizontalNeighbourExample) {
  const auto v = cast_vote({1, 0}, {0, 0}, SymTensor2{1, 0, 0}, 4.0);
  EXPECT_NEAR(v.xx, 0.5 * std::exp(-0.25), 1e-12);
  EXPECT_NEAR(v.xx, 0.389, 5e-4);
  EXPECT_NEAR(v.xy, 0.0, 1e-15);
  EXPECT_NEAR(v.yy, 0.0, 1e-15);
  // Agrees with the literal product formula when K commutes with r r^T.
  const auto lit = oracle::vote_literal(-1, 0, SymTensor2{1, 0, 0}, 4.0);
  EXPECT_NEAR(v.xx, lit.a, 1e-15);
  EXPECT_NEAR(v.yy, lit.d, 1e-15);
}

TEST(CastVote, VerticalNeighbourMatchesMatrixOracle) {
  const SymTensor2 k{1, 0, 0};
  const auto v = cast_vote({0, 1}, {0, 0}, k, 4.0);
  const auto ref = oracle::vote(0, -1, k, 4.0);
  EXPECT_NEAR(v.xx, ref.xx, 1e-12);
  EXPECT_NEAR(v.xy, ref.xy, 1e-12);
  EXPECT_NEAR(v.yy, ref.yy, 1e-12);
  EXPECT_GE(min_eigenvalue(v), -1e-9);
  EXPECT_NEAR(v.xx, std::exp(-0.25), 1e-12);  // K is orthogonal to r: untouched
}

TEST(CastVote, CoincidentPixelsRejected) {
  try {
    cast_vote({2, 2}, {2, 2}, SymTensor2{1, 0, 0}, 4.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(CastVote, SymmetricPsdAndOracleOnRandomInputs) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_int_distribution<int> d(-4, 4);
  for (int i = 0; i < 2000; ++i) {
    const double gx = u(rng), gy = u(rng), hx = u(rng), hy = u(rng);
    const SymTensor2 k{gx * gx + hx * hx, gx * gy + hx * hy, gy * gy + hy * hy};  // PSD
    int dx = d(rng), dy = d(rng);
    if (dx == 0 && dy == 0) dx = 1;
    const auto v = cast_vote({0, 0}, {dx, dy}, k, 4.0);
    const auto ref = oracle::vote(dx, dy, k, 4.0);
    EXPECT_NEAR(v.xx, ref.xx, 1e-12);
    EXPECT_NEAR(v.xy, ref.xy, 1e-12);
    EXPECT_NEAR(v.yy, ref.yy, 1e-12);
    EXPECT_GE(min_eigenvalue(v), -1e-9);
  }
}

TEST(VoteField, ZeroInputZeroOutput) {
  const auto tv = tensor_vote_field(TensorField(6, 5), 4.0);
  for (std::size_t i = 0; i < tv.size(); ++i) EXPECT_EQ(tv.at(i), (SymTensor2{}));
}

TEST(VoteField, SingleStickAtCentre) {
  TensorField tg(3, 3);
  const SymTensor2 k{1, 0, 0};
  tg.set(1, 1, k);
  const auto tv = tensor_vote_field(tg, 4.0);
  EXPECT_EQ(tv.at(1, 1), (SymTensor2{}));
  const Pixel c{1, 1};
  for (Pixel p : {Pixel{0, 1}, Pixel{2, 1}, Pixel{1, 0}, Pixel{1, 2}}) {
    const auto expect = cast_vote(p, c, k, 4.0);
    EXPECT_EQ(tv.at(p.x, p.y), expect);
  }
  for (Pixel p : {Pixel{0, 0}, Pixel{2, 0}, Pixel{0, 2}, Pixel{2, 2}}) EXPECT_EQ(tv.at(p.x, p.y), (SymTensor2{}));
}

TEST(VoteField, BlackSquareMatchesQuadrupleLoop) {
  const auto img = oracle::rectangle(20, 20, 6, 6, 14, 14);
  const auto tg = tg_of(img);
  EXPECT_LE(max_abs_diff(tensor_vote_field(tg, 4.0), oracle::vote_field(tg, 4.0)), 1e-9);
}

TEST(VoteField, RandomImagesMatchQuadrupleLoop) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto tg = tg_of(oracle::random_image(11 + trial, 9 + 2 * trial, rng));
    EXPECT_LE(max_abs_diff(tensor_vote_field(tg, 4.0), oracle::vote_field(tg, 4.0)), 1e-9);
  }
}

TEST(Diffusion, ZeroTensorBecomesIdentity) {
  const auto t = anisotropic_diffuse(SymTensor2{}, 0.16);
  EXPECT_NEAR(t.xx, 1.0, 1e-15);
  EXPECT_NEAR(t.xy, 0.0, 1e-15);
  EXPECT_NEAR(t.yy, 1.0, 1e-15);
}

TEST(Diffusion, EigenvaluesRemappedEigenvectorsKept) {
  // lambda = {0.16, 0} along a rotated frame.
  const double c = std::cos(0.3), s = std::sin(0.3);
  const SymTensor2 t{0.16 * c * c, 0.16 * c * s, 0.16 * s * s};
  const auto out = anisotropic_diffuse(t, 0.16);
  const auto d = eigen_decompose(out);
  EXPECT_NEAR(d.l0, 1.0, 1e-12);
  EXPECT_NEAR(d.l1, std::exp(-1.0), 1e-12);
  // The former major axis (c, s) now carries the smaller eigenvalue.
  EXPECT_NEAR(std::abs(d.v1.x * c + d.v1.y * s), 1.0, 1e-9);
}

TEST(Diffusion, IsotropicStaysIsotropic) {
  const auto out = anisotropic_diffuse(SymTensor2{0.3, 0.0, 0.3}, 0.16);
  EXPECT_NEAR(out.xx, std::exp(-0.3 / 0.16), 1e-15);
  EXPECT_NEAR(out.yy, std::exp(-0.3 / 0.16), 1e-15);
  EXPECT_NEAR(out.xy, 0.0, 1e-15);
}

TEST(Diffusion, DeltaMustBePositive) {
  EXPECT_THROW(anisotropic_diffuse(TensorField(2, 2), 0.0), Error);
}

TEST(Saliency, Formulas) {
  auto s = saliency(EigenDecomp2{1, 0});
  EXPECT_DOUBLE_EQ(s.cl, 1.0);
  EXPECT_DOUBLE_EQ(s.cp, 0.0);
  s = saliency(EigenDecomp2{1, 1});
  EXPECT_DOUBLE_EQ(s.cl, 0.0);
  EXPECT_DOUBLE_EQ(s.cp, 1.0);
  s = saliency(EigenDecomp2{3, 1});
  EXPECT_DOUBLE_EQ(s.cl, 0.5);
  EXPECT_DOUBLE_EQ(s.cp, 0.5);
  s = saliency(EigenDecomp2{0, 0});
  EXPECT_TRUE(s.homogeneous);
  EXPECT_EQ(s.cl, 0.0);
  EXPECT_EQ(s.cp, 0.0);
}

TEST(Degenerate, ConstantFieldGivesNothing) {
  Diagnostics diag;
  const auto f = compute_descriptor(GrayImage(16, 16, 1.0), {});
  EXPECT_TRUE(detect_degenerate_points(f.analyzed, f.source, 0.6, 0.005, &diag).empty());
  EXPECT_FALSE(diag.messages.empty());
}

TEST(Degenerate, RectangleCornersOnly) {
  const auto img = oracle::rectangle(40, 40, 10, 10, 30, 30);
  const auto f = compute_descriptor(img, {});
  const auto pts = detect_degenerate_points(f.analyzed, f.source, 0.6, 0.005);
  ASSERT_FALSE(pts.empty());
  const double cx[2] = {9.5, 29.5};
  for (const auto& p : pts) {
    double best = 1e9;
    for (double x : cx)
      for (double y : cx) best = std::min(best, std::hypot(p.x - x, p.y - y));
    EXPECT_LE(best, 4.0) << p.x << "," << p.y;
  }
}

TEST(Degenerate, ThresholdMonotonicity) {
  std::mt19937_64 rng(21);
  const auto img = oracle::random_image(24, 24, rng);
  const auto f = compute_descriptor(img, {});
  const auto sal = saliency_map(f.analyzed, f.source);
  auto key = [](const DegeneratePoint& p) { return p.y * 1000 + p.x; };
  const double taus[][2] = {{0.3, 0.0}, {0.6, 0.005}, {0.8, 0.05}, {0.95, 0.2}, {0.99999, 0.2}};
  std::vector<int> prev;
  for (int i = 0; i < 5; ++i) {
    std::vector<int> cur;
    for (const auto& p : detect_degenerate_points(f.analyzed, sal, taus[i][0], taus[i][1])) cur.push_back(key(p));
    if (i > 0) {
      for (int k : cur) EXPECT_TRUE(std::binary_search(prev.begin(), prev.end(), k));
    }
    prev = cur;
  }
  const auto rect = compute_descriptor(oracle::rectangle(40, 40, 10, 10, 30, 30), {});
  EXPECT_LE(detect_degenerate_points(rect.analyzed, rect.source, 0.99999, 0.005).size(), 4u);
}

TEST(Degenerate, ThresholdRangesValidated) {
  const auto f = compute_descriptor(oracle::rectangle(12, 12, 3, 3, 9, 9), {});
  EXPECT_THROW(detect_degenerate_points(f.analyzed, f.source, 0.0, 0.005), Error);
  EXPECT_THROW(detect_degenerate_points(f.analyzed, f.source, 1.0, 0.005), Error);
  EXPECT_THROW(detect_degenerate_points(f.analyzed, f.source, 0.5, 1.0), Error);
}

TEST(Properties, PsdClosureAndPartition) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 4; ++trial) {
    const auto img = oracle::random_image(32, 32, rng);
    const auto tg = tg_of(img);
    const auto ts = structure_tensor(tg, 1.0);
    const auto tv = tensor_vote_field(tg, 4.0);
    const auto tad = anisotropic_diffuse(tv, 0.16);
    for (const TensorField* f : {&tg, &ts, &tv, &tad})
      for (std::size_t i = 0; i < f->size(); ++i) ASSERT_GE(min_eigenvalue(f->at(i)), -1e-9);
    const auto sal = saliency_map(tad, tv);
    for (const auto& s : sal.values()) {
      if (s.homogeneous) continue;
      EXPECT_NEAR(s.cl + s.cp, 1.0, 1e-9);
      EXPECT_GE(s.cl, 0.0);
      EXPECT_LE(s.cp, 1.0);
    }
  }
}

TEST(Properties, TranslationEquivariance) {
  std::mt19937_64 rng(8);
  const auto patch = oracle::random_image(16, 16, rng);
  auto place = [&](int ox, int oy) {
    GrayImage img(40, 40, 1.0);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) img(x + ox, y + oy) = patch(x, y);
    return compute_descriptor(img, {}).analyzed;
  };
  const auto a = place(4, 5), b = place(11, 9);
  for (int y = -2; y < 18; ++y)
    for (int x = -2; x < 18; ++x) {
      const auto ta = a.at(x + 4, y + 5), tb = b.at(x + 11, y + 9);
      EXPECT_NEAR(ta.xx, tb.xx, 1e-12);
      EXPECT_NEAR(ta.xy, tb.xy, 1e-12);
      EXPECT_NEAR(ta.yy, tb.yy, 1e-12);
    }
}

TEST(Descriptor, StructureTensorPathAndParsing) {
  TensorParams p;
  p.descriptor = parse_descriptor("structure-tensor");
  EXPECT_EQ(parse_descriptor("tv"), Descriptor::kTensorVoting);
  EXPECT_THROW(parse_descriptor("bogus"), Error);
  const auto img = oracle::rectangle(20, 20, 5, 5, 15, 15);
  const auto f = compute_descriptor(img, p);
  EXPECT_LE(max_abs_diff(f.analyzed, structure_tensor(tg_of(img), 1.0)), 0.0);
}

TEST(Descriptor, MultiChannelSumsVotes) {
  const auto img = oracle::rectangle(16, 16, 4, 4, 12, 12);
  const auto one = compute_descriptor(img, {});
  const auto two = compute_descriptor(std::vector<GrayImage>{img, img}, {});
  for (std::size_t i = 0; i < one.source.size(); ++i)
    EXPECT_NEAR(two.source.xx()[i], 2.0 * one.source.xx()[i], 1e-12);
}
