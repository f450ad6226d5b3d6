#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "sdc/dataset.hpp"
#include "sdc/errors.hpp"
#include "sdc/synthetic.hpp"

using namespace sdc;
using namespace sdc::dataset;

namespace {

std::string scratch_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "sdc_dataset_tests";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("damage classification thresholds") {
  CHECK(classify_damage(0.30) == DamageClass::Class0);
  CHECK(classify_damage(0.75) == DamageClass::Class1);
  // Both interval ends belong to Class1.
  CHECK(classify_damage(0.50) == DamageClass::Class1);
  CHECK(classify_damage(1.00) == DamageClass::Class1);
  CHECK(classify_damage(1.0000001) == DamageClass::Class2);
  CHECK(classify_damage(0.0) == DamageClass::Class0);

  CHECK_THROWS_AS(classify_damage(-0.1), InvalidArgument);
  CHECK_THROWS_AS(classify_damage(std::numeric_limits<double>::quiet_NaN()),
                  InvalidArgument);
  CHECK_THROWS_AS(classify_damage(std::numeric_limits<double>::infinity()),
                  InvalidArgument);
}

TEST_CASE("damage classification is a monotone step function") {
  double previous = -1.0;
  for (double midr = 0.0; midr <= 3.0; midr += 0.001) {
    const double current = static_cast<double>(classify_damage(midr));
    CHECK(current >= previous);
    previous = current;
  }
}

TEST_CASE("table write/read round-trips bit-exactly") {
  SyntheticOptions options;
  options.seed = 9;
  options.n = 60;
  const FeatureTable table = generate_synthetic(options);

  const std::string path = scratch_path("roundtrip.csv");
  write_table(table, path);
  const FeatureTable back = read_table(path);

  REQUIRE(back.rows() == table.rows());
  for (std::size_t i = 0; i < table.rows(); ++i) {
    for (std::size_t j = 0; j < kNumFeatures; ++j)
      CHECK(back.features.at(i, j) == table.features.at(i, j));
    CHECK(back.midr[i] == table.midr[i]);
    CHECK(back.labels[i] == table.labels[i]);
  }
}

TEST_CASE("stored labels re-derive from stored midr") {
  SyntheticOptions options;
  options.seed = 4;
  options.n = 200;
  const FeatureTable table = generate_synthetic(options);
  const std::string path = scratch_path("labels.csv");
  write_table(table, path);
  const FeatureTable back = read_table(path);
  for (std::size_t i = 0; i < back.rows(); ++i)
    CHECK(classify_damage(back.midr[i]) == back.labels[i]);
}

TEST_CASE("schema errors name the offending column") {
  const std::string path = scratch_path("bad_schema.csv");
  {
    std::ofstream out(path);
    out << "Htot,nvx,nvy,e0,PGA,PGV,PGD,Ia,SED,CAV,ASI,EPA,PGV_PGA,PP,TUD,TBD,TSD\n";
    for (int i = 0; i < 17; ++i) out << (i ? ",1" : "1");
    out << "\n";
  }
  try {
    read_table(path);
    FAIL("expected a schema error");
  } catch (const SchemaError& e) {
    CHECK(std::string(e.what()).find("HI") != std::string::npos);
  }
}

TEST_CASE("NaN cells are rejected with coordinates") {
  const std::string path = scratch_path("bad_nan.csv");
  {
    std::ofstream out(path);
    const auto& names = feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    for (std::size_t j = 0; j < names.size(); ++j)
      out << (j ? "," : "") << (j == 5 ? "NaN" : "1.0");
    out << "\n";
  }
  try {
    read_table(path);
    FAIL("expected a missing-value error");
  } catch (const SchemaError& e) {
    const std::string what = e.what();
    CHECK(what.find("row 1") != std::string::npos);
    CHECK(what.find("PGV") != std::string::npos);
  }
}

TEST_CASE("non-numeric cells are rejected") {
  const std::string path = scratch_path("bad_token.csv");
  {
    std::ofstream out(path);
    const auto& names = feature_names();
    for (std::size_t j = 0; j < names.size(); ++j) out << (j ? "," : "") << names[j];
    out << "\n";
    for (std::size_t j = 0; j < names.size(); ++j)
      out << (j ? "," : "") << (j == 2 ? "abc" : "1.0");
    out << "\n";
  }
  CHECK_THROWS_AS(read_table(path), ParseError);
}

TEST_CASE("comment lines before the header are skipped") {
  const std::string path = scratch_path("comments.csv");
  SyntheticOptions options;
  options.seed = 2;
  options.n = 40;
  const FeatureTable table = generate_synthetic(options);
  write_table(table, path);

  const std::string commented = scratch_path("commented.csv");
  {
    std::ifstream in(path);
    std::ofstream out(commented);
    out << "# produced by a test\n# second comment\n" << in.rdbuf();
  }
  const FeatureTable back = read_table(commented);
  CHECK(back.rows() == table.rows());
}

TEST_CASE("synthetic generation is deterministic in the seed") {
  SyntheticOptions options;
  options.seed = 1;
  options.n = 300;
  const FeatureTable a = generate_synthetic(options);
  const FeatureTable b = generate_synthetic(options);
  CHECK(a.features.data == b.features.data);
  CHECK(a.midr == b.midr);
  CHECK(a.labels == b.labels);

  options.seed = 2;
  const FeatureTable c = generate_synthetic(options);
  CHECK(a.features.data != c.features.data);
}

TEST_CASE("synthetic class frequencies track the requested mix") {
  SyntheticOptions options;
  options.seed = 1;
  options.n = 3000;
  const FeatureTable table = generate_synthetic(options);
  const auto counts = table.class_counts();
  for (int c = 0; c < kNumClasses; ++c) {
    const double freq = static_cast<double>(counts[c]) / static_cast<double>(options.n);
    CHECK(std::abs(freq - 1.0 / 3.0) < 0.03);
  }

  options.class_mix = {0.6, 0.3, 0.1};
  options.seed = 8;
  const FeatureTable skewed = generate_synthetic(options);
  const auto skewed_counts = skewed.class_counts();
  CHECK(std::abs(skewed_counts[0] / 3000.0 - 0.6) < 0.03);
  CHECK(std::abs(skewed_counts[1] / 3000.0 - 0.3) < 0.03);
  CHECK(std::abs(skewed_counts[2] / 3000.0 - 0.1) < 0.03);
}

TEST_CASE("synthetic options are validated") {
  SyntheticOptions options;
  options.n = 10;
  CHECK_THROWS_AS(generate_synthetic(options), InvalidArgument);
  options.n = 100;
  options.class_mix = {0.5, 0.5, 0.5};
  CHECK_THROWS_AS(generate_synthetic(options), InvalidArgument);
  options.class_mix = {1.0, 0.0, 0.0};
  CHECK_THROWS_AS(generate_synthetic(options), InvalidArgument);
}

TEST_CASE("synthetic features carry signal: 1-NN beats the majority class") {
  SyntheticOptions options;
  options.seed = 12;
  options.n = 600;
  const FeatureTable table = generate_synthetic(options);

  const std::size_t train_n = 400;
  std::array<std::size_t, kNumClasses> train_counts{0, 0, 0};
  for (std::size_t i = 0; i < train_n; ++i)
    train_counts[static_cast<int>(table.labels[i])]++;
  int majority = 0;
  for (int c = 1; c < kNumClasses; ++c)
    if (train_counts[c] > train_counts[majority]) majority = c;

  // Feature scales differ wildly, so compare on per-feature normalized values.
  std::array<double, kNumFeatures> lo{}, hi{};
  for (std::size_t j = 0; j < kNumFeatures; ++j) {
    lo[j] = hi[j] = table.features.at(0, j);
    for (std::size_t i = 1; i < train_n; ++i) {
      lo[j] = std::min(lo[j], table.features.at(i, j));
      hi[j] = std::max(hi[j], table.features.at(i, j));
    }
  }
  auto scaled = [&](std::size_t i, std::size_t j) {
    const double width = hi[j] - lo[j];
    return width > 0 ? (table.features.at(i, j) - lo[j]) / width : 0.0;
  };

  std::size_t nn_correct = 0, majority_correct = 0;
  for (std::size_t i = train_n; i < table.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_row = 0;
    for (std::size_t t = 0; t < train_n; ++t) {
      double d2 = 0;
      for (std::size_t j = 0; j < kNumFeatures; ++j) {
        const double d = scaled(i, j) - scaled(t, j);
        d2 += d * d;
      }
      if (d2 < best) {
        best = d2;
        best_row = t;
      }
    }
    if (table.labels[best_row] == table.labels[i]) ++nn_correct;
    if (static_cast<int>(table.labels[i]) == majority) ++majority_correct;
  }
  CHECK(nn_correct > majority_correct);
}
