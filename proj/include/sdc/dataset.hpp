#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdc/numeric.hpp"

namespace sdc::dataset {

// Three-state damage scale keyed to MIDR (percent): Class0 below 0.50,
// Class1 on the closed interval [0.50, 1.00], Class2 above 1.00.
enum class DamageClass : int { Class0 = 0, Class1 = 1, Class2 = 2 };

inline constexpr int kNumClasses = 3;

DamageClass classify_damage(double midr_percent);

inline constexpr std::size_t kNumFeatures = 18;

// Canonical column names: 4 structural features followed by the 14 intensity
// measures, in the fixed order used by every table this library writes.
const std::array<std::string, kNumFeatures>& feature_names();

inline constexpr const char* kMidrColumn = "MIDR";
inline constexpr const char* kClassColumn = "CLASS";

// Labeled feature table. Immutable by convention once built; rows are
// row-major over the 18 canonical features. midr (percent) and labels are
// optional but, when present, cover every row.
struct FeatureTable {
  numeric::Matrix features;          // n x kNumFeatures
  std::vector<double> midr;          // empty or size n
  std::vector<DamageClass> labels;   // empty or size n
  std::string tag;

  std::size_t rows() const { return features.n_rows; }
  bool has_midr() const { return !midr.empty(); }
  bool has_labels() const { return !labels.empty(); }
  std::span<const double> row(std::size_t i) const { return features.row(i); }

  std::array<std::size_t, kNumClasses> class_counts() const;
};

void validate_table(const FeatureTable& table);

FeatureTable read_table(const std::string& path);
void write_table(const FeatureTable& table, const std::string& path);

}  // namespace sdc::dataset
