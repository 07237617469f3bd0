#include <gtest/gtest.h>

#include <complex>
#include <random>
#include <vector>

#include "lwrkit/denoise.hpp"
#include "lwrkit/kernels.hpp"
#include "lwrkit/psd.hpp"
#include "lwrkit/scenario.hpp"

using namespace lwr;
using namespace lwr::kernels;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<Isa> simd_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (isa_available(isa)) out.push_back(isa);
  }
  return out;
}

// Restores the dispatch choice when a test ends.
struct IsaGuard {
  Isa saved = active_isa();
  ~IsaGuard() { force_isa(saved); }
};

}  // namespace

TEST(Kernels, ScalarAlwaysAvailable) {
  EXPECT_TRUE(isa_available(Isa::scalar));
  EXPECT_EQ(isa_name(Isa::scalar), "scalar");
  EXPECT_TRUE(isa_available(active_isa()));
}

TEST(Kernels, ForceUnavailableIsaIsRejected) {
  IsaGuard guard;
  for (Isa isa : {Isa::avx2, Isa::neon}) {
    if (!isa_available(isa)) {
      const Isa before = active_isa();
      EXPECT_FALSE(force_isa(isa));
      EXPECT_EQ(active_isa(), before);
    }
  }
}

TEST(Kernels, SimdMatchesScalarBitExact) {
  const auto& ref = table(Isa::scalar);
  std::mt19937_64 rng(7);
  for (Isa isa : simd_isas()) {
    const auto& simd = table(isa);
    // Lengths straddle every vector width and remainder.
    for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 64u, 257u, 1000u}) {
      const auto a = random_vector(n, rng);
      const auto b = random_vector(n, rng);
      const auto w = random_vector(n, rng);

      std::vector<double> r1(n), r2(n);
      ref.squared_difference(a.data(), b.data(), n, r1.data());
      simd.squared_difference(a.data(), b.data(), n, r2.data());
      EXPECT_EQ(r1, r2) << isa_name(isa) << " squared_difference n=" << n;

      r1 = b, r2 = b;
      ref.add_into(a.data(), n, r1.data());
      simd.add_into(a.data(), n, r2.data());
      EXPECT_EQ(r1, r2) << "add_into n=" << n;

      std::vector<double> acc1 = b, acc2 = b, ws1 = a, ws2 = a;
      ref.weighted_accumulate(w.data(), a.data(), n, acc1.data(), ws1.data());
      simd.weighted_accumulate(w.data(), a.data(), n, acc2.data(), ws2.data());
      EXPECT_EQ(acc1, acc2) << "weighted_accumulate n=" << n;
      EXPECT_EQ(ws1, ws2);

      ref.affine(a.data(), n, 1.7, -0.3, r1.data());
      simd.affine(a.data(), n, 1.7, -0.3, r2.data());
      EXPECT_EQ(r1, r2) << "affine n=" << n;

      r1 = b, r2 = b;
      ref.scaled_add(a.data(), n, -0.61, r1.data());
      simd.scaled_add(a.data(), n, -0.61, r2.data());
      EXPECT_EQ(r1, r2) << "scaled_add n=" << n;

      const auto inter = random_vector(2 * n, rng);
      r1 = b, r2 = b;
      ref.power_accumulate(inter.data(), n, 0.37, r1.data());
      simd.power_accumulate(inter.data(), n, 0.37, r2.data());
      EXPECT_EQ(r1, r2) << "power_accumulate n=" << n;

      for (std::size_t taps : {1u, 3u, 5u, 9u, 33u}) {
        const auto t = random_vector(taps, rng);
        const auto src = random_vector(n + taps - 1, rng);
        ref.correlate(src.data(), n, t.data(), taps, r1.data());
        simd.correlate(src.data(), n, t.data(), taps, r2.data());
        EXPECT_EQ(r1, r2) << "correlate n=" << n << " taps=" << taps;
      }
    }
  }
}

TEST(Kernels, ScalarReferenceValues) {
  const auto& ref = table(Isa::scalar);
  const std::vector<double> src{1, 2, 3, 4, 5};
  const std::vector<double> taps{0.5, 0.25, 0.25};
  std::vector<double> out(3);
  ref.correlate(src.data(), 3, taps.data(), 3, out.data());
  EXPECT_DOUBLE_EQ(out[0], 0.5 + 0.5 + 0.75);
  EXPECT_DOUBLE_EQ(out[2], 1.5 + 1.0 + 1.25);

  const std::vector<std::complex<double>> z{{3, 4}, {1, -1}};
  std::vector<double> acc{1.0, 0.0};
  power_accumulate(z, 2.0, acc);
  EXPECT_DOUBLE_EQ(acc[0], 51.0);
  EXPECT_DOUBLE_EQ(acc[1], 4.0);
}

TEST(Kernels, WrapperRejectsSizeMismatch) {
  std::vector<double> a(4), b(5), out(4);
  EXPECT_THROW(squared_difference(a, b, out), std::invalid_argument);
  EXPECT_THROW(correlate_valid(a, std::vector<double>(3), out), std::invalid_argument);
}

// Whole pipelines must not depend on the dispatched ISA either.
TEST(Kernels, EndToEndResultsIndependentOfIsa) {
  IsaGuard guard;
  const Scenario scenario;
  const auto sample = make_sample(scenario, 11);
  const std::vector<int> frames{16};
  const auto image = acquire(scenario, sample, frames)[0];

  ASSERT_TRUE(force_isa(Isa::scalar));
  const auto ref_denoised = denoise(image, DenoiserSpec{});
  const auto ref = analyze_image(image);
  for (Isa isa : simd_isas()) {
    ASSERT_TRUE(force_isa(isa));
    EXPECT_EQ(denoise(image, DenoiserSpec{}), ref_denoised) << isa_name(isa);
    const auto got = analyze_image(image);
    EXPECT_EQ(got.roughness.lwr.biased.density, ref.roughness.lwr.biased.density);
    EXPECT_EQ(got.roughness.lwr.sigma_unbiased(), ref.roughness.lwr.sigma_unbiased());
    EXPECT_EQ(got.snr.linescan_snr, ref.snr.linescan_snr);
  }
}
