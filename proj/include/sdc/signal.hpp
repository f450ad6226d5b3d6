#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace sdc::signal {

// Records converted from g on load use this constant.
inline constexpr double kGravity = 9.81;  // m/s^2

enum class RecordUnit { MetersPerSecond2, G };
enum class RecordFormat { Auto, TwoColumn, HeaderNptsDt };

// Uniformly sampled ground acceleration, stored in m/s^2 regardless of the
// source unit (the unit tag records provenance only).
struct Accelerogram {
  double dt = 0.0;
  std::vector<double> samples;
  std::string id;
  RecordUnit source_unit = RecordUnit::MetersPerSecond2;

  double duration() const {
    return samples.size() < 2 ? 0.0 : dt * static_cast<double>(samples.size() - 1);
  }
};

struct TimeSeries {
  double dt = 0.0;
  std::vector<double> samples;
};

// Elastic spectra at fixed damping. sd is the computed quantity; psv and sa
// are the pseudo-spectral values sd*w and sd*w^2 with w = 2*pi/T.
struct ResponseSpectrum {
  double damping = 0.05;
  std::vector<double> periods;
  std::vector<double> sa;
  std::vector<double> psv;
  std::vector<double> sd;
};

struct IntensityMeasures {
  double pga = 0.0;             // m/s^2
  double pgv = 0.0;             // m/s
  double pgd = 0.0;             // m
  double arias = 0.0;           // m/s
  double sed = 0.0;             // m^2/s
  double cav = 0.0;             // m/s
  double asi = 0.0;             // m/s
  double hi = 0.0;              // m
  double epa = 0.0;             // m/s^2
  double vmax_over_amax = 0.0;  // s
  double pp = 0.0;              // s
  double tud = 0.0;             // s
  double tbd = 0.0;             // s
  double tsd = 0.0;             // s
  bool vmax_over_amax_defined = true;  // false only for an all-zero record
};

inline constexpr int kNumIntensityMeasures = 14;

// Canonical ordering used by feature tables and the C API.
std::array<double, kNumIntensityMeasures> to_array(const IntensityMeasures& im);

struct ImConfig {
  double damping = 0.05;
  double threshold_fraction = 0.05;  // of PGA, for the uniform/bracketed durations
  double arias_lower = 0.05;         // Husid fractions for the significant duration
  double arias_upper = 0.95;
  double period_min = 0.02;  // spectrum grid, seconds
  double period_max = 4.0;
  double period_step = 0.02;
  bool detrend = false;  // optional linear detrend of the record before use
};

Accelerogram load_accelerogram(const std::string& path,
                               RecordFormat format = RecordFormat::Auto,
                               RecordUnit unit = RecordUnit::MetersPerSecond2);
Accelerogram parse_accelerogram(std::istream& in, const std::string& id,
                                RecordFormat format, RecordUnit unit);

// Cumulative trapezoidal integral; first sample 0. Applied once this turns
// acceleration into velocity, twice into displacement.
TimeSeries integrate_series(const Accelerogram& acc);
TimeSeries integrate_series(const TimeSeries& series);

std::vector<double> default_period_grid(const ImConfig& cfg = {});

// Peak SDOF response per period via Newmark average acceleration
// (gamma = 1/2, beta = 1/4), sub-stepped so the integration step is at most
// min(dt, T/20). Periods must be strictly increasing, all >= 0.02 s.
ResponseSpectrum compute_response_spectrum(const Accelerogram& acc, double damping,
                                           const std::vector<double>& periods);

IntensityMeasures compute_intensity_measures(const Accelerogram& acc,
                                             const ImConfig& cfg = {});

}  // namespace sdc::signal
