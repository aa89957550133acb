#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>

#include "ckn/optimizers.hpp"
#include "ckn/parallel.hpp"
#include "ckn/quadrature.hpp"
#include "ckn/spectral.hpp"

using namespace ckn;

namespace {

CknParams make(std::vector<double> A, double a, double b) { return {MonomialWeight(std::move(A)), a, b}; }

QuadratureOptions with(Execution e) {
  QuadratureOptions o;
  o.initial_nodes = 16;
  o.execution = e;
  return o;
}

class ParallelMatchesSerial : public ::testing::Test {
 protected:
  // force several threads even on a single-core machine
  void SetUp() override { setenv("CKN_THREADS", "4", 1); }
  void TearDown() override { unsetenv("CKN_THREADS"); }
};

}  // namespace

TEST_F(ParallelMatchesSerial, Map) {
  const auto f = [](std::size_t i) { return std::sin(static_cast<double>(i)) / (1.0 + i); };
  const auto s = parallel::map(1000, f, Execution::Serial);
  const auto p = parallel::map(1000, f, Execution::Parallel);
  EXPECT_EQ(s, p);
  EXPECT_EQ(parallel::pairwise_sum(s), parallel::pairwise_sum(p));
}

TEST_F(ParallelMatchesSerial, WarpedIntegral) {
  const CknParams p = make({1, 0}, -0.2, 0.3);
  const DerivedParams dp = derive(p);
  const WarpedFunction F = [](double y, std::span<const double> t) { return std::exp(y * t[1]) * (1 + t[0] * t[0]); };
  EXPECT_EQ(integrate_S(F, dp, p.weight, with(Execution::Serial)),
            integrate_S(F, dp, p.weight, with(Execution::Parallel)));
}

TEST_F(ParallelMatchesSerial, CknSidesOfPerturbedOptimizer) {
  const CknParams p = make({1, 0}, 0, 0.5);
  const DerivedParams dp = derive(p);
  const ModelS S(p, dp);
  SplitMix64 rng(3);
  const PerturbedOptimizer F = PerturbedOptimizer::random(rng, OptimizerS(1.5, 0.5, dp), p.weight.dim());
  const AmbientFunction f = [&](std::span<const Jet> v) { return F(v); };
  const CknSides a = ckn_sides(S, f, with(Execution::Serial));
  const CknSides b = ckn_sides(S, f, with(Execution::Parallel));
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_EQ(a.rhs, b.rhs);
}

TEST_F(ParallelMatchesSerial, PhaseScan) {
  ScanGrid g;
  g.steps_a = g.steps_b = 6;
  SpectralOptions so_s, so_p;
  so_s.execution = Execution::Serial;
  const auto s = phase_scan(MonomialWeight({1, 0}), g, 4, so_s, with(Execution::Serial));
  const auto q = phase_scan(MonomialWeight({1, 0}), g, 4, so_p, with(Execution::Parallel));
  ASSERT_EQ(s.size(), q.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].verdict.test_quotient, q[i].verdict.test_quotient);
    EXPECT_EQ(s[i].quotient_quadrature, q[i].quotient_quadrature);
    EXPECT_EQ(s[i].verdict.verdict, q[i].verdict.verdict);
  }
}
