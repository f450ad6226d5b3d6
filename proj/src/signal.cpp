#include "sdc/signal.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sdc/csv.hpp"
#include "sdc/errors.hpp"

namespace sdc::signal {

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '#';
  }
  return true;
}

std::vector<std::string> whitespace_tokens(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream ss(line);
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

void validate_record(const Accelerogram& acc) {
  if (acc.dt <= 0.0) throw ParseError(acc.id + ": nonpositive time step");
  if (acc.samples.size() < 2) throw ParseError(acc.id + ": fewer than 2 samples");
  for (double x : acc.samples)
    if (!std::isfinite(x)) throw ParseError(acc.id + ": non-finite sample");
}

Accelerogram parse_two_column(std::istream& in, const std::string& id) {
  Accelerogram acc;
  acc.id = id;
  std::vector<double> times;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    const auto toks = whitespace_tokens(line);
    if (toks.size() != 2)
      throw ParseError(id + ":" + std::to_string(lineno) + ": expected 'time acceleration'");
    const std::string ctx = id + ":" + std::to_string(lineno);
    times.push_back(csv::parse_double(toks[0], ctx));
    acc.samples.push_back(csv::parse_double(toks[1], ctx));
  }
  if (times.size() < 2) throw ParseError(id + ": fewer than 2 samples");
  acc.dt = times[1] - times[0];
  if (!(acc.dt > 0.0)) throw ParseError(id + ": time column not increasing");
  for (std::size_t i = 1; i + 1 < times.size(); ++i) {
    const double step = times[i + 1] - times[i];
    if (std::abs(step - acc.dt) > 1e-6 * acc.dt)
      throw ParseError(id + ": non-uniform time step near row " + std::to_string(i + 2));
  }
  return acc;
}

Accelerogram parse_header_format(std::istream& in, const std::string& id,
                                 const std::string& header_line) {
  // Header looks like "NPTS=4096, DT=0.01" (case-insensitive, flexible spacing).
  std::string upper = header_line;
  std::transform(upper.begin(), upper.end(), upper.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  auto field = [&](const std::string& key) -> std::string {
    const auto pos = upper.find(key);
    if (pos == std::string::npos)
      throw ParseError(id + ": header missing " + key);
    std::size_t i = pos + key.size();
    while (i < upper.size() && (upper[i] == ' ' || upper[i] == '\t')) ++i;
    if (i >= upper.size() || upper[i] != '=')
      throw ParseError(id + ": malformed header near " + key);
    ++i;
    while (i < upper.size() && (upper[i] == ' ' || upper[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < upper.size() && upper[j] != ',' && !std::isspace(static_cast<unsigned char>(upper[j])))
      ++j;
    return header_line.substr(i, j - i);
  };

  Accelerogram acc;
  acc.id = id;
  const long long npts = csv::parse_int(field("NPTS"), id + ": NPTS");
  acc.dt = csv::parse_double(field("DT"), id + ": DT");
  if (npts < 2) throw ParseError(id + ": fewer than 2 samples");
  if (!(acc.dt > 0.0)) throw ParseError(id + ": nonpositive DT");

  acc.samples.reserve(static_cast<std::size_t>(npts));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_comment_or_blank(line)) continue;
    for (const auto& tok : whitespace_tokens(line))
      acc.samples.push_back(csv::parse_double(tok, id + ": data"));
  }
  if (acc.samples.size() != static_cast<std::size_t>(npts))
    throw ParseError(id + ": NPTS=" + std::to_string(npts) + " but found " +
                     std::to_string(acc.samples.size()) + " values");
  return acc;
}

std::vector<double> linear_detrend(const std::vector<double>& x, double dt) {
  // Least-squares line over sample times.
  const std::size_t n = x.size();
  double st = 0, sx = 0, stt = 0, stx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = dt * static_cast<double>(i);
    st += t;
    sx += x[i];
    stt += t * t;
    stx += t * x[i];
  }
  const double denom = static_cast<double>(n) * stt - st * st;
  double slope = 0.0, intercept = sx / static_cast<double>(n);
  if (denom != 0.0) {
    slope = (static_cast<double>(n) * stx - st * sx) / denom;
    intercept = (sx - slope * st) / static_cast<double>(n);
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = x[i] - (intercept + slope * dt * static_cast<double>(i));
  return out;
}

double trapezoid_total(const std::vector<double>& y, double dt) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < y.size(); ++i) acc += 0.5 * dt * (y[i] + y[i + 1]);
  return acc;
}

double peak_abs(const std::vector<double>& y) {
  double m = 0.0;
  for (double x : y) m = std::max(m, std::abs(x));
  return m;
}

// Integral of `values` over the period band [lo, hi] by trapezoid, with the
// band edges interpolated when they fall between grid points.
double band_integral(const std::vector<double>& periods, const std::vector<double>& values,
                     double lo, double hi) {
  const std::size_t n = periods.size();
  if (n < 2) return 0.0;
  const double a = std::max(lo, periods.front());
  const double b = std::min(hi, periods.back());
  if (!(b > a)) return 0.0;

  auto value_at = [&](double t) {
    const auto it = std::upper_bound(periods.begin(), periods.end(), t);
    std::size_t j = static_cast<std::size_t>(it - periods.begin());
    if (j == 0) return values.front();
    if (j >= n) return values.back();
    const double frac = (t - periods[j - 1]) / (periods[j] - periods[j - 1]);
    return values[j - 1] + frac * (values[j] - values[j - 1]);
  };

  double total = 0.0;
  double t_prev = a;
  double v_prev = value_at(a);
  for (std::size_t i = 0; i < n; ++i) {
    if (periods[i] <= a) continue;
    if (periods[i] >= b) break;
    total += 0.5 * (periods[i] - t_prev) * (v_prev + values[i]);
    t_prev = periods[i];
    v_prev = values[i];
  }
  total += 0.5 * (b - t_prev) * (v_prev + value_at(b));
  return total;
}

}  // namespace

std::array<double, kNumIntensityMeasures> to_array(const IntensityMeasures& im) {
  return {im.pga, im.pgv, im.pgd, im.arias, im.sed,           im.cav, im.asi,
          im.hi,  im.epa, im.vmax_over_amax, im.pp, im.tud, im.tbd, im.tsd};
}

Accelerogram parse_accelerogram(std::istream& in, const std::string& id,
                                RecordFormat format, RecordUnit unit) {
  Accelerogram acc;
  if (format == RecordFormat::TwoColumn) {
    acc = parse_two_column(in, id);
  } else {
    // Find the first non-comment line; the header format announces itself.
    std::string first;
    bool found = false;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (is_comment_or_blank(line)) continue;
      first = line;
      found = true;
      break;
    }
    if (!found) throw ParseError(id + ": empty record file");
    std::string upper = first;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    const bool has_header = upper.find("NPTS") != std::string::npos;
    if (format == RecordFormat::HeaderNptsDt && !has_header)
      throw ParseError(id + ": expected NPTS/DT header");
    if (has_header) {
      acc = parse_header_format(in, id, first);
    } else {
      // Re-assemble the stream for the two-column parser.
      std::stringstream rest;
      rest << first << '\n' << in.rdbuf();
      acc = parse_two_column(rest, id);
    }
  }

  acc.source_unit = unit;
  if (unit == RecordUnit::G)
    for (double& x : acc.samples) x *= kGravity;
  validate_record(acc);
  return acc;
}

Accelerogram load_accelerogram(const std::string& path, RecordFormat format,
                               RecordUnit unit) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open record file " + path);
  std::string id = path;
  const auto slash = id.find_last_of("/\\");
  if (slash != std::string::npos) id = id.substr(slash + 1);
  const auto dot = id.find_last_of('.');
  if (dot != std::string::npos && dot > 0) id = id.substr(0, dot);
  return parse_accelerogram(in, id, format, unit);
}

namespace {

TimeSeries cumulative_trapezoid(double dt, const std::vector<double>& x) {
  TimeSeries out;
  out.dt = dt;
  out.samples.resize(x.size(), 0.0);
  for (std::size_t i = 1; i < x.size(); ++i)
    out.samples[i] = out.samples[i - 1] + 0.5 * dt * (x[i - 1] + x[i]);
  return out;
}

}  // namespace

TimeSeries integrate_series(const Accelerogram& acc) {
  for (double x : acc.samples)
    if (!std::isfinite(x)) throw InvalidArgument("integrate_series: non-finite input");
  return cumulative_trapezoid(acc.dt, acc.samples);
}

TimeSeries integrate_series(const TimeSeries& series) {
  for (double x : series.samples)
    if (!std::isfinite(x)) throw InvalidArgument("integrate_series: non-finite input");
  return cumulative_trapezoid(series.dt, series.samples);
}

std::vector<double> default_period_grid(const ImConfig& cfg) {
  if (!(cfg.period_step > 0.0) || !(cfg.period_max > cfg.period_min))
    throw InvalidArgument("invalid period grid configuration");
  const auto count = static_cast<std::size_t>(
      std::floor((cfg.period_max - cfg.period_min) / cfg.period_step + 0.5));
  std::vector<double> grid(count + 1);
  for (std::size_t i = 0; i <= count; ++i)
    grid[i] = cfg.period_min + cfg.period_step * static_cast<double>(i);
  return grid;
}

ResponseSpectrum compute_response_spectrum(const Accelerogram& acc, double damping,
                                           const std::vector<double>& periods) {
  if (!(damping > 0.0 && damping < 1.0))
    throw InvalidArgument("damping must lie in (0,1)");
  if (periods.empty()) throw InvalidArgument("empty period grid");
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (!(periods[i] > 0.0)) throw InvalidArgument("nonpositive period in grid");
    if (i > 0 && !(periods[i] > periods[i - 1]))
      throw InvalidArgument("period grid not strictly increasing");
  }
  if (periods.front() < 0.02) throw InvalidArgument("period grid must start at >= 0.02 s");
  validate_record(acc);

  ResponseSpectrum spec;
  spec.damping = damping;
  spec.periods = periods;
  spec.sa.resize(periods.size());
  spec.psv.resize(periods.size());
  spec.sd.resize(periods.size());

  const auto& ag = acc.samples;
  const double dt = acc.dt;

  for (std::size_t ip = 0; ip < periods.size(); ++ip) {
    const double period = periods[ip];
    const double w = kTwoPi / period;
    const int nsub = std::max(1, static_cast<int>(std::ceil(dt / (period / 20.0))));
    const double h = dt / static_cast<double>(nsub);

    // Newmark constant average acceleration, unconditionally stable.
    constexpr double beta = 0.25;
    constexpr double gamma = 0.5;
    const double c = 2.0 * damping * w;
    const double k = w * w;
    const double keff = k + gamma * c / (beta * h) + 1.0 / (beta * h * h);
    const double a1 = 1.0 / (beta * h * h);
    const double a2 = 1.0 / (beta * h);
    const double a3 = 1.0 / (2.0 * beta) - 1.0;
    const double b1 = gamma / (beta * h);
    const double b2 = gamma / beta - 1.0;
    const double b3 = h * (gamma / (2.0 * beta) - 1.0);

    double u = 0.0, v = 0.0;
    double a = -ag[0];  // initial acceleration from equilibrium at rest
    double peak = 0.0;

    for (std::size_t i = 0; i + 1 < ag.size(); ++i) {
      for (int s = 1; s <= nsub; ++s) {
        const double frac = static_cast<double>(s) / static_cast<double>(nsub);
        const double ag_next = ag[i] + frac * (ag[i + 1] - ag[i]);
        const double p_next = -ag_next;
        const double u_next =
            (p_next + a1 * u + a2 * v + a3 * a + c * (b1 * u + b2 * v + b3 * a)) / keff;
        const double a_next = a1 * (u_next - u) - a2 * v - a3 * a;
        const double v_next = v + h * ((1.0 - gamma) * a + gamma * a_next);
        u = u_next;
        v = v_next;
        a = a_next;
        peak = std::max(peak, std::abs(u));
      }
    }

    spec.sd[ip] = peak;
    spec.psv[ip] = peak * w;
    spec.sa[ip] = peak * w * w;
  }
  return spec;
}

IntensityMeasures compute_intensity_measures(const Accelerogram& acc, const ImConfig& cfg) {
  validate_record(acc);
  if (!(cfg.threshold_fraction > 0.0 && cfg.threshold_fraction < 1.0))
    throw InvalidArgument("threshold fraction must lie in (0,1)");
  if (!(cfg.arias_lower >= 0.0 && cfg.arias_upper <= 1.0 && cfg.arias_lower < cfg.arias_upper))
    throw InvalidArgument("invalid Arias duration bounds");

  Accelerogram rec = acc;
  if (cfg.detrend) rec.samples = linear_detrend(rec.samples, rec.dt);
  const auto& a = rec.samples;
  const double dt = rec.dt;
  const std::size_t n = a.size();

  IntensityMeasures im;

  const TimeSeries vel = integrate_series(rec);
  const TimeSeries disp = integrate_series(vel);

  im.pga = peak_abs(a);
  im.pgv = peak_abs(vel.samples);
  im.pgd = peak_abs(disp.samples);

  std::vector<double> a2(n), v2(n), absa(n);
  for (std::size_t i = 0; i < n; ++i) {
    a2[i] = a[i] * a[i];
    v2[i] = vel.samples[i] * vel.samples[i];
    absa[i] = std::abs(a[i]);
  }
  constexpr double kPi = 3.14159265358979323846264;
  im.arias = kPi / (2.0 * kGravity) * trapezoid_total(a2, dt);
  im.sed = trapezoid_total(v2, dt);
  // CAV integrates |a(t)|; the absolute value is what makes the quantity a
  // cumulative velocity rather than the (near-zero) net velocity change.
  im.cav = trapezoid_total(absa, dt);

  const auto grid = default_period_grid(cfg);
  const ResponseSpectrum spec = compute_response_spectrum(rec, cfg.damping, grid);
  im.asi = band_integral(spec.periods, spec.sa, 0.1, 0.5);
  im.hi = band_integral(spec.periods, spec.psv, 0.1, 2.5);
  im.epa = im.asi / ((0.5 - 0.1) * 2.5);

  std::size_t best = 0;
  for (std::size_t i = 1; i < spec.sa.size(); ++i)
    if (spec.sa[i] > spec.sa[best]) best = i;  // strict: smallest period wins ties
  im.pp = spec.periods[best];

  if (im.pga > 0.0) {
    im.vmax_over_amax = im.pgv / im.pga;
    im.vmax_over_amax_defined = true;

    const double thr = cfg.threshold_fraction * im.pga;
    std::size_t first = n, last = 0;
    double tud = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (absa[i] > thr) {
        if (first == n) first = i;
        last = i;
      }
      if (i + 1 < n && absa[i] > thr && absa[i + 1] > thr) tud += dt;
    }
    if (first < n) {
      im.tud = tud;
      im.tbd = dt * static_cast<double>(last - first);
    }

    // Husid curve: cumulative Arias fraction, linearly interpolated.
    std::vector<double> husid(n, 0.0);
    for (std::size_t i = 1; i < n; ++i)
      husid[i] = husid[i - 1] + 0.5 * dt * (a2[i - 1] + a2[i]);
    const double total = husid.back();
    if (total > 0.0) {
      auto time_at_fraction = [&](double frac) {
        const double target = frac * total;
        for (std::size_t i = 1; i < n; ++i) {
          if (husid[i] >= target) {
            const double seg = husid[i] - husid[i - 1];
            const double fr = seg > 0.0 ? (target - husid[i - 1]) / seg : 0.0;
            return dt * (static_cast<double>(i - 1) + fr);
          }
        }
        return dt * static_cast<double>(n - 1);
      };
      im.tsd = time_at_fraction(cfg.arias_upper) - time_at_fraction(cfg.arias_lower);
    }
  } else {
    // All-zero record: the threshold durations are undefined, reported as 0,
    // and vmax/amax is flagged.
    im.vmax_over_amax = 0.0;
    im.vmax_over_amax_defined = false;
  }

  return im;
}

}  // namespace sdc::signal
