#include "sdc/synthetic.hpp"

#include <algorithm>
#include <cmath>

#include "sdc/errors.hpp"

namespace sdc::dataset {

namespace {

constexpr double kC0 = -0.6;       // intercept of the drift relation
constexpr double kHtotExp = 0.35;  // exponent on Htot/16
constexpr double kWallRelief = 0.5;
constexpr double kDriftNoise = 0.10;  // sigma of eps
constexpr double kPgaShare = 0.65;    // share of log demand carried by PGA
constexpr double kShareNoise = 0.35;  // sigma of the PGA/HI split

// Log-uniform MIDR bands per class, kept inside the class intervals so the
// stored label always equals the drawn class.
constexpr double kMidrLo[3] = {0.06, 0.51, 1.01};
constexpr double kMidrHi[3] = {0.49, 0.995, 4.8};

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

}  // namespace

FeatureTable generate_synthetic(const SyntheticOptions& options) {
  if (options.n < 30) throw InvalidArgument("synthetic table needs n >= 30");
  double mix_sum = 0.0;
  for (double p : options.class_mix) {
    if (!(p > 0.0)) throw InvalidArgument("class mix proportions must be positive");
    mix_sum += p;
  }
  if (std::abs(mix_sum - 1.0) > 1e-9)
    throw InvalidArgument("class mix proportions must sum to 1");

  numeric::Rng rng(numeric::mix_seed(options.seed, 0x73796e7468ull));

  FeatureTable table;
  table.tag = "synthetic";
  table.features = numeric::Matrix(options.n, kNumFeatures);
  table.midr.resize(options.n);
  table.labels.resize(options.n);

  const auto& names = feature_names();
  std::array<std::size_t, kNumFeatures> col{};
  for (std::size_t f = 0; f < kNumFeatures; ++f) col[f] = f;
  auto index_of = [&](const char* name) {
    for (std::size_t f = 0; f < kNumFeatures; ++f)
      if (names[f] == name) return f;
    throw InvalidArgument(std::string("unknown feature ") + name);
  };
  const std::size_t c_htot = index_of("Htot"), c_nvx = index_of("nvx"),
                    c_nvy = index_of("nvy"), c_e0 = index_of("e0"),
                    c_pga = index_of("PGA"), c_pgv = index_of("PGV"),
                    c_pgd = index_of("PGD"), c_ia = index_of("Ia"),
                    c_sed = index_of("SED"), c_cav = index_of("CAV"),
                    c_asi = index_of("ASI"), c_hi = index_of("HI"),
                    c_epa = index_of("EPA"), c_ratio = index_of("PGV_PGA"),
                    c_pp = index_of("PP"), c_tud = index_of("TUD"),
                    c_tbd = index_of("TBD"), c_tsd = index_of("TSD");

  for (std::size_t i = 0; i < options.n; ++i) {
    // Damage class and drift target.
    const double pick = rng.uniform01();
    int k = 0;
    double acc = options.class_mix[0];
    while (k < 2 && pick >= acc) acc += options.class_mix[++k];
    const double log_midr =
        rng.uniform(std::log(kMidrLo[k]), std::log(kMidrHi[k]));
    const double midr = std::exp(log_midr);

    // Structural features: 1-10 stories of 3.2 m, modest wall ratios and
    // eccentricities.
    const double stories = 1.0 + static_cast<double>(rng.below(10));
    const double htot = 3.2 * stories;
    const double nvx = clamp(rng.normal(0.25, 0.15), 0.0, 0.6);
    const double nvy = clamp(rng.normal(0.25, 0.15), 0.0, 0.6);
    const double e0 = clamp(std::abs(rng.normal(0.0, 0.5)), 0.0, 2.5);

    // Split the log demand implied by the drift relation between PGA and HI.
    const double eps = rng.normal(0.0, kDriftNoise);
    const double demand = log_midr - kC0 - kHtotExp * std::log(htot / 16.0) +
                          kWallRelief * (nvx + nvy) - eps;
    const double z = rng.normal(0.0, kShareNoise);
    const double log_pga = kPgaShare * demand + z;
    const double log_hi = (1.0 - kPgaShare) * demand - z;
    const double pga = std::exp(log_pga);
    const double hi = std::exp(log_hi);

    // Companion intensity measures: lognormal transforms with their own noise.
    const double pgv = 0.08 * std::pow(pga, 0.9) * std::exp(rng.normal(0.0, 0.20));
    const double pgd = 0.35 * std::pow(pgv, 1.1) * std::exp(rng.normal(0.0, 0.30));
    const double tbd = clamp(std::exp(rng.normal(std::log(12.0), 0.45)), 1.0, 60.0);
    const double tud = tbd * rng.uniform(0.35, 0.90);
    const double tsd = tbd * rng.uniform(0.40, 0.95);
    const double ia =
        0.05 * std::pow(pga, 1.9) * std::pow(tud + 1.0, 0.5) * std::exp(rng.normal(0.0, 0.25));
    const double sed =
        0.8 * pgv * pgv * std::pow(tsd + 1.0, 0.6) * std::exp(rng.normal(0.0, 0.30));
    const double cav =
        0.4 * std::pow(pga, 0.9) * std::pow(tbd + 1.0, 0.7) * std::exp(rng.normal(0.0, 0.20));
    const double asi = 0.30 * pga * std::exp(rng.normal(0.0, 0.15));
    const double epa = asi * std::exp(rng.normal(0.0, 0.05));
    const double pp = clamp(std::exp(rng.normal(std::log(0.35), 0.40)), 0.04, 3.0);

    auto row = table.features.row(i);
    row[col[c_htot]] = htot;
    row[col[c_nvx]] = nvx;
    row[col[c_nvy]] = nvy;
    row[col[c_e0]] = e0;
    row[col[c_pga]] = pga;
    row[col[c_pgv]] = pgv;
    row[col[c_pgd]] = pgd;
    row[col[c_ia]] = ia;
    row[col[c_sed]] = sed;
    row[col[c_cav]] = cav;
    row[col[c_asi]] = asi;
    row[col[c_hi]] = hi;
    row[col[c_epa]] = epa;
    row[col[c_ratio]] = pgv / pga;
    row[col[c_pp]] = pp;
    row[col[c_tud]] = tud;
    row[col[c_tbd]] = tbd;
    row[col[c_tsd]] = tsd;

    table.midr[i] = midr;
    table.labels[i] = classify_damage(midr);
  }

  return table;
}

}  // namespace sdc::dataset
