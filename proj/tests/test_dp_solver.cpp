#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "tbdnc/dp_solver.hpp"

using namespace tbdnc;

namespace {

DpProblem problem_for(const BlurKernel& k, double cs, double ce, DpParams params = {}) {
  DpProblem p;
  p.accumulated_kernel = k;
  p.causal_start_x = cs;
  p.causal_end_x = ce;
  p.params = params;
  return p;
}

FrameRecord with_kernel(int index, BlurKernel k) {
  return {FrameCurve::detected(index, {0, 0}, {1, 1}), std::move(k)};
}

}  // namespace

TEST(AccumulateKernels, Additivity) {
  BlurKernel a(3, 3);
  a.set(1, 1, 1.0);
  std::vector<FrameRecord> frames{with_kernel(1, a), with_kernel(2, a)};
  const BlurKernel sum = accumulate_kernels(frames, 1, 2);
  EXPECT_EQ(sum.at(1, 1), 2.0);
  EXPECT_EQ(sum.sum(), 2.0);
  EXPECT_EQ(accumulate_kernels(frames, 2, 2), a);
}

TEST(AccumulateKernels, MatchesScalarLoop) {
  std::mt19937_64 rng(3);
  std::vector<FrameRecord> frames;
  for (int i = 1; i <= 10; ++i) frames.push_back(with_kernel(i, oracle::random_kernel(rng, 8, 8)));
  frames[4].kernel.reset();
  const BlurKernel acc = accumulate_kernels(frames, 1, 10);
  for (int y = 0; y < 8; ++y) {
    for (int x = 0; x < 8; ++x) {
      double s = 0.0;
      for (const auto& f : frames)
        if (f.kernel) s += f.kernel->at(x, y);
      EXPECT_NEAR(acc.at(x, y), s, 1e-12);
    }
  }
}

TEST(AccumulateKernels, Errors) {
  std::vector<FrameRecord> frames{with_kernel(1, BlurKernel(3, 3)), with_kernel(2, BlurKernel(4, 3))};
  EXPECT_THROW(accumulate_kernels(frames, 1, 2), Error);
  frames = {{FrameCurve::absent(1), std::nullopt}};
  EXPECT_EQ(accumulate_kernels(frames, 1, 1, 5, 4), BlurKernel(5, 4));
  EXPECT_THROW(accumulate_kernels(frames, 1, 1), Error);
}

TEST(Energy, SinglePointIsMinusKernelValue) {
  BlurKernel k(4, 4);
  k.set(2, 1, 0.7);
  DpParams params;
  params.kappa2 = params.kappa3 = 0.0;
  DiscretePath path;
  path.x_begin = path.x_end = 2;
  path.rows = {1};
  path.frame_width = 4;
  EXPECT_DOUBLE_EQ(energy(path, problem_for(k, 0, 3, params)), -0.7);
}

TEST(Energy, StraightPathHasNoCurvature) {
  BlurKernel k(5, 5, std::vector<double>(25, 1.0));
  DpParams params;
  params.kappa1 = 0.1;
  params.kappa2 = params.kappa3 = 0.0;
  DiscretePath path;
  path.x_begin = 0;
  path.x_end = 2;
  path.rows = {2, 2, 2};
  path.frame_width = 5;
  EXPECT_DOUBLE_EQ(energy(path, problem_for(k, 0, 4, params)), -3.0);
}

TEST(Energy, TermByTermRecomputation) {
  std::mt19937_64 rng(11);
  const BlurKernel k = oracle::random_kernel(rng, 6, 6);
  DiscretePath path;
  path.x_begin = 1;
  path.x_end = 4;
  path.rows = {2, 4, 3, 3};
  path.frame_width = 6;
  const double cs = 0.4, ce = 4.6;  // columns 0 and 5
  double expected = -(k.at(1, 2) + k.at(2, 4) + k.at(3, 3) + k.at(4, 3));
  expected += 0.1 * (std::abs((3 - 4) - (4 - 2)) + std::abs((3 - 3) - (3 - 4)));
  expected += 0.1 * (0 - 1) + 0.1 * (4 - 5);
  EXPECT_NEAR(energy(path, problem_for(k, cs, ce)), expected, 1e-12);
}

TEST(Energy, BoundsError) {
  DiscretePath path;
  path.x_begin = 0;
  path.x_end = 0;
  path.rows = {7};
  path.frame_width = 3;
  try {
    energy(path, problem_for(BlurKernel(3, 3), 0, 2));
    FAIL() << "expected a bounds error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::bounds);
  }
}

TEST(Solve, OnePixelKernel) {
  DpParams params;
  params.kappa2 = params.kappa3 = 0.0;
  const DpResult r = solve(problem_for(BlurKernel(1, 1, {0.8}), 0, 0, params));
  EXPECT_EQ(r.path.length(), 1);
  EXPECT_EQ(r.path.rows[0], 0);
  EXPECT_DOUBLE_EQ(r.energy, -0.8);
}

TEST(Solve, MatchesBruteForceOnRandomKernels) {
  std::mt19937_64 rng(20240607);
  std::uniform_int_distribution<int> size(1, 6);
  const double kappas[] = {0.0, 0.1, 0.5};
  std::uniform_int_distribution<int> pick(0, 2);
  for (int trial = 0; trial < 120; ++trial) {
    const int w = size(rng), h = size(rng);
    const BlurKernel k = oracle::random_kernel(rng, w, h, trial % 3 == 0 ? 0.25 : 0.7);
    std::uniform_real_distribution<double> col(0.0, w - 1.0);
    DpParams params;
    params.kappa1 = kappas[pick(rng)];
    params.kappa2 = kappas[pick(rng)];
    params.kappa3 = kappas[pick(rng)];
    const DpProblem p = problem_for(k, col(rng), col(rng), params);
    const DpResult r = solve(p);
    const double truth = oracle::brute_force_min_energy(k, p.causal_start_x, p.causal_end_x,
                                                        params.kappa1, params.kappa2, params.kappa3);
    ASSERT_NEAR(r.energy, truth, 1e-9) << "trial " << trial;
    ASSERT_NEAR(energy(r.path, p), r.energy, 1e-9);
    ASSERT_NO_THROW(r.path.validate());
  }
}

TEST(Solve, TwoTableNeverBeatsExact) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const BlurKernel k = oracle::random_kernel(rng, 7, 7);
    DpParams exact;
    exact.kappa1 = 0.5;
    DpParams faithful = exact;
    faithful.exact_state = false;
    const DpResult a = solve(problem_for(k, 0, 6, exact));
    const DpProblem pf = problem_for(k, 0, 6, faithful);
    const DpResult b = solve(pf);
    EXPECT_LE(a.energy, b.energy + 1e-12);
    EXPECT_NEAR(energy(b.path, pf), b.energy, 1e-12);
    EXPECT_NO_THROW(b.path.validate());
  }
}

TEST(Solve, FlipEquivariance) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    const BlurKernel k = oracle::random_kernel(rng, 8, 6);
    const DpResult a = solve(problem_for(k, 1, 6));
    const DpResult b = solve(problem_for(k.mirrored_x(), 6, 1));
    EXPECT_NEAR(a.energy, b.energy, 1e-12);
    auto pa = a.path.image_points();
    auto pb = b.path.image_points();
    ASSERT_EQ(pa.size(), pb.size());
    for (std::size_t i = 0; i < pa.size(); ++i) {
      EXPECT_EQ(pa[i].x(), 7 - pb[i].x());
      EXPECT_EQ(pa[i].y(), pb[i].y());
    }
  }
}

TEST(Solve, MassBeyondEndNeverIncreasesEnergy) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    BlurKernel k = oracle::random_kernel(rng, 7, 5);
    DpParams params;
    params.kappa3 = 0.0;
    const DpResult before = solve(problem_for(k, 0, 3, params));
    std::vector<double> v(static_cast<std::size_t>(8 * 5), 0.0);
    for (int y = 0; y < 5; ++y) {
      for (int x = 0; x < 7; ++x) v[static_cast<std::size_t>(y * 8 + x)] = k.at(x, y);
      v[static_cast<std::size_t>(y * 8 + 7)] = 0.3;
    }
    const DpResult after = solve(problem_for(BlurKernel(8, 5, v), 0, 3, params));
    EXPECT_LE(after.energy, before.energy + 1e-12);
  }
}

TEST(Solve, AllZeroKernelGivesPointAtCausalStart) {
  DpProblem p = problem_for(BlurKernel(9, 7), 2.2, 7.0);
  p.causal_start_row = 4.0;
  const DpResult r = solve(p);
  ASSERT_EQ(r.path.length(), 1);
  EXPECT_EQ(r.path.image_points().front(), Point(2, 4));
}

TEST(Solve, RecoversDrawnParabola) {
  auto f = [](double x) { return 4.0 + 0.015 * (x - 2.0) * (x - 2.0); };
  const BlurKernel k = oracle::draw_curve(40, 30, f);
  const DpResult r = solve(problem_for(k, 0, 39));
  double sq = 0.0;
  for (int i = 0; i < r.path.length(); ++i) {
    const double d = r.path.rows[static_cast<std::size_t>(i)] - f(r.path.x_begin + i);
    sq += d * d;
  }
  EXPECT_EQ(r.path.x_begin, 0);
  EXPECT_EQ(r.path.x_end, 39);
  EXPECT_LT(std::sqrt(sq / r.path.length()), 1.0);
}

TEST(SolveBestOrientation, HorizontalAndVerticalLines) {
  BlurKernel horiz(8, 8);
  for (int x = 0; x < 8; ++x) horiz.set(x, 3, 1.0);
  auto [c1, r1] = make_problems(horiz, {0, 3}, {7, 3}, DpParams{});
  const DpResult a = solve_best_orientation(c1, r1);
  EXPECT_EQ(a.path.axis, Axis::column_wise);
  EXPECT_LT(solve(c1).energy, solve(r1).energy);

  const BlurKernel vert = horiz.transposed();
  auto [c2, r2] = make_problems(vert, {3, 0}, {3, 7}, DpParams{});
  const DpResult b = solve_best_orientation(c2, r2);
  EXPECT_EQ(b.path.axis, Axis::row_wise);
  for (const Point& p : b.path.image_points()) EXPECT_EQ(p.x(), 3);
}

TEST(SolveBestOrientation, ReturnsMinimumOfBoth) {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 30; ++trial) {
    const BlurKernel k = oracle::random_kernel(rng, 8, 8);
    auto [col, row] = make_problems(k, {1, 2}, {6, 5}, DpParams{});
    const double expect = std::min(solve(col).energy, solve(row).energy);
    EXPECT_DOUBLE_EQ(solve_best_orientation(col, row).energy, expect);
  }
}
