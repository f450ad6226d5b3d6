#pragma once

#include <array>
#include <cstdint>

#include "sdc/dataset.hpp"

namespace sdc::dataset {

struct SyntheticOptions {
  std::uint64_t seed = 42;
  std::size_t n = 1000;                                  // at least 30
  std::array<double, 3> class_mix = {1.0 / 3, 1.0 / 3, 1.0 / 3};  // sums to 1
};

// Seeded synthetic stand-in dataset. Per row, a damage class k is drawn from
// class_mix and a drift value from a log-uniform band inside that class's
// MIDR interval; the 18 features are then sampled so the documented relation
//
//   log MIDR = c0 + log PGA + log HI + 0.35 log(Htot/16) - 0.5 (nvx+nvy) + eps
//
// holds exactly with eps ~ N(0, 0.10), making MIDR a monotone noisy function
// of (PGA, HI, Htot). The remaining intensity measures are lognormal
// transforms of PGA/PGV with independent noise. Deterministic in the seed.
FeatureTable generate_synthetic(const SyntheticOptions& options);

}  // namespace sdc::dataset
