#include <cmath>
#include <vector>

#include <boost/math/special_functions/erf.hpp>
#include <gtest/gtest.h>

#include "cevem/rng.hpp"

using namespace cevem::rng;

// Known-answer vectors for Philox4x32-10 from the Random123 distribution.
TEST(Philox, KnownAnswers) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}), (Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(Uniform, OpenInterval) {
  EXPECT_EQ(bits_to_open_unit(0), 0x1.0p-53);
  EXPECT_EQ(bits_to_open_unit(~0ull), 1.0 - 0x1.0p-53);
  EXPECT_LT(bits_to_open_unit(~0ull), 1.0);
  EXPECT_TRUE(std::isfinite(normal_quantile(bits_to_open_unit(~0ull))));
  EXPECT_TRUE(std::isfinite(normal_quantile(bits_to_open_unit(0))));
  EXPECT_EQ(bits_to_open_unit(1ull << 63), 0.5 + 0x1.0p-53);
}

TEST(NormalQuantile, MatchesInverseErfc) {
  for (double u : {1e-300, 1e-12, 1e-6, 0.001, 0.02425, 0.1, 0.3, 0.5, 0.7, 0.97575, 0.999, 1.0 - 1e-12}) {
    const double ref = -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u);
    EXPECT_NEAR(normal_quantile(u), ref, 1e-13 * std::max(1.0, std::abs(ref))) << "u=" << u;
  }
}

TEST(Substream, DeterministicAndKeyed) {
  Substream a(42, StreamKind::Skeleton, 3);
  Substream b(42, StreamKind::Skeleton, 3);
  Substream c(42, StreamKind::Skeleton, 4);
  Substream d(43, StreamKind::Skeleton, 3);
  Substream e(42, StreamKind::Bridge, 3);
  int same_c = 0, same_d = 0, same_e = 0;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    same_c += x == c.uniform();
    same_d += x == d.uniform();
    same_e += x == e.uniform();
  }
  EXPECT_EQ(same_c, 0);
  EXPECT_EQ(same_d, 0);
  EXPECT_EQ(same_e, 0);
}

TEST(Substream, NormalMoments) {
  Substream s(20101014, StreamKind::Diagnostics, 0);
  const int n = 1000000;
  double sum = 0, sq = 0, q4 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sq += z * z;
    q4 += z * z * z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 5 * std::sqrt(1.0 / n));
  EXPECT_NEAR(sq / n, 1.0, 5 * std::sqrt(2.0 / n));
  EXPECT_NEAR(q4 / n, 3.0, 5 * std::sqrt(96.0 / n));
}

TEST(Substream, UniformHistogramIsFlat) {
  Substream s(1, StreamKind::Oracle, 9);
  const int bins = 20, n = 200000;
  std::vector<int> h(bins, 0);
  for (int i = 0; i < n; ++i) ++h[static_cast<int>(s.uniform() * bins)];
  double chi2 = 0;
  const double expect = static_cast<double>(n) / bins;
  for (int v : h) chi2 += (v - expect) * (v - expect) / expect;
  // 19 dof, 99.9% quantile is 43.8
  EXPECT_LT(chi2, 43.8);
}
