#include "sdc/dataset.hpp"

#include <cmath>
#include <map>

#include "sdc/csv.hpp"
#include "sdc/errors.hpp"

namespace sdc::dataset {

DamageClass classify_damage(double midr_percent) {
  if (!std::isfinite(midr_percent) || midr_percent < 0.0)
    throw InvalidArgument("classify_damage: MIDR must be finite and nonnegative");
  if (midr_percent < 0.50) return DamageClass::Class0;
  if (midr_percent <= 1.00) return DamageClass::Class1;
  return DamageClass::Class2;
}

const std::array<std::string, kNumFeatures>& feature_names() {
  static const std::array<std::string, kNumFeatures> names = {
      "Htot", "nvx", "nvy", "e0",  "PGA", "PGV", "PGD",     "Ia",  "SED",
      "CAV",  "ASI", "HI",  "EPA", "PGV_PGA", "PP", "TUD", "TBD", "TSD"};
  return names;
}

std::array<std::size_t, kNumClasses> FeatureTable::class_counts() const {
  std::array<std::size_t, kNumClasses> counts{0, 0, 0};
  for (DamageClass c : labels) counts[static_cast<int>(c)]++;
  return counts;
}

void validate_table(const FeatureTable& table) {
  const std::size_t n = table.rows();
  if (table.features.n_cols != kNumFeatures)
    throw SchemaError("feature table must have " + std::to_string(kNumFeatures) + " columns");
  if (table.has_midr() && table.midr.size() != n)
    throw SchemaError("MIDR column does not cover every row");
  if (table.has_labels() && table.labels.size() != n)
    throw SchemaError("CLASS column does not cover every row");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < kNumFeatures; ++j)
      if (!std::isfinite(table.features.at(i, j)))
        throw SchemaError("non-finite value at row " + std::to_string(i) + ", column " +
                          feature_names()[j]);
    if (table.has_midr() && !(std::isfinite(table.midr[i]) && table.midr[i] >= 0.0))
      throw SchemaError("invalid MIDR at row " + std::to_string(i));
  }
}

FeatureTable read_table(const std::string& path) {
  const csv::Document doc = csv::read_file(path);

  std::map<std::string, std::size_t> column_of;
  for (std::size_t j = 0; j < doc.header.size(); ++j) {
    if (column_of.count(doc.header[j]))
      throw SchemaError(path + ": duplicate column " + doc.header[j]);
    column_of[doc.header[j]] = j;
  }

  const auto& names = feature_names();
  std::array<std::size_t, kNumFeatures> feature_col{};
  for (std::size_t f = 0; f < kNumFeatures; ++f) {
    const auto it = column_of.find(names[f]);
    if (it == column_of.end()) throw SchemaError(path + ": missing column " + names[f]);
    feature_col[f] = it->second;
  }
  const bool has_midr = column_of.count(kMidrColumn) > 0;
  const bool has_class = column_of.count(kClassColumn) > 0;

  std::size_t known = kNumFeatures + (has_midr ? 1 : 0) + (has_class ? 1 : 0);
  if (column_of.size() != known) {
    for (const auto& [name, idx] : column_of) {
      (void)idx;
      bool canonical = name == kMidrColumn || name == kClassColumn;
      for (const auto& f : names) canonical = canonical || f == name;
      if (!canonical) throw SchemaError(path + ": unknown column " + name);
    }
  }

  FeatureTable table;
  const std::size_t n = doc.rows.size();
  table.features = numeric::Matrix(n, kNumFeatures);
  if (has_midr) table.midr.resize(n);
  if (has_class) table.labels.resize(n);

  for (std::size_t i = 0; i < n; ++i) {
    const auto& cells = doc.rows[i];
    if (cells.size() != doc.header.size())
      throw ParseError(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(cells.size()) + " cells, header has " +
                       std::to_string(doc.header.size()));
    auto cell_value = [&](std::size_t col, const std::string& name) {
      const std::string ctx = path + ": row " + std::to_string(i + 1) + ", column " + name;
      const double v = csv::parse_double(cells[col], ctx);
      if (std::isnan(v)) throw SchemaError(ctx + ": missing value");
      return v;
    };
    for (std::size_t f = 0; f < kNumFeatures; ++f)
      table.features.at(i, f) = cell_value(feature_col[f], names[f]);
    if (has_midr) table.midr[i] = cell_value(column_of[kMidrColumn], kMidrColumn);
    if (has_class) {
      const std::string ctx =
          path + ": row " + std::to_string(i + 1) + ", column " + kClassColumn;
      const long long c = csv::parse_int(cells[column_of[kClassColumn]], ctx);
      if (c < 0 || c >= kNumClasses)
        throw SchemaError(ctx + ": class out of range: " + std::to_string(c));
      table.labels[i] = static_cast<DamageClass>(c);
    }
  }
  validate_table(table);
  return table;
}

void write_table(const FeatureTable& table, const std::string& path) {
  validate_table(table);
  csv::Writer out(path);

  std::vector<std::string> header(feature_names().begin(), feature_names().end());
  if (table.has_midr()) header.push_back(kMidrColumn);
  if (table.has_labels()) header.push_back(kClassColumn);
  out.write_row(header);

  std::vector<std::string> cells;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    cells.clear();
    for (std::size_t f = 0; f < kNumFeatures; ++f)
      cells.push_back(numeric::format_g17(table.features.at(i, f)));
    if (table.has_midr()) cells.push_back(numeric::format_g17(table.midr[i]));
    if (table.has_labels())
      cells.push_back(std::to_string(static_cast<int>(table.labels[i])));
    out.write_row(cells);
  }
  out.close();
}

}  // namespace sdc::dataset
