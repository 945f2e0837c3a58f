#include "softsensor/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include <json.hpp>

#include "softsensor/error.hpp"
#include "softsensor/io.hpp"
#include "softsensor/parallel.hpp"

namespace softsensor::synth {

SensorVector default_sensor_offset() {
  SensorVector v{};
  for (std::size_t j = 0; j < kSensorVariables; ++j) {
    // Amplitude gains sit around 10, phase shifts around 2.
    v[j] = j < 10 ? 10.0 + 0.3 * static_cast<double>(j) : 2.0 + 0.1 * static_cast<double>(j - 10);
  }
  return v;
}

SensorVector default_sensor_gain() {
  return {0.70, 0.80, 0.90, 1.00, 1.10, 1.20, 1.30, 1.20, 1.10, 1.30,
          0.90, 1.00, 1.10, 1.20, 1.30, 1.20, 1.40, 1.30, 1.20, 1.10};
}

SensorVector default_sensor_noise() {
  SensorVector v{};
  v.fill(0.06);
  v[2] = v[3] = v[10] = 0.35;  // SV 3, 4, 11
  v[9] = v[16] = 0.03;         // SV 10, 17
  return v;
}

SensorVector default_sensor_gain2() {
  SensorVector v{};
  for (std::size_t j = 0; j < kSensorVariables; ++j) v[j] = j % 2 == 0 ? 1.0 : -1.0;
  return v;
}

void GeneratorConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InvalidArgument(std::string("generator config: ") + what);
  };
  require(n_coils + n_elevated_coils + (include_testcoil ? 1 : 0) >= 2, "need at least two coils");
  require(min_measurements >= 1 && min_measurements <= max_measurements,
          "need 1 <= min_measurements <= max_measurements");
  require(n_heats >= 1, "n_heats must be positive");
  for (std::size_t j = 0; j < kSensorVariables; ++j) {
    require(std::isfinite(sensor_offset[j]), "sensor_offset must be finite");
    require(std::isfinite(sensor_gain[j]) && sensor_gain[j] > 0.0, "sensor_gain must be positive");
    require(std::isfinite(sensor_gain2[j]), "sensor_gain2 must be finite");
    require(std::isfinite(sensor_noise[j]) && sensor_noise[j] >= 0.0,
            "sensor_noise must be non-negative");
  }
  for (double v : {heat_mean, elevated_heat_mean, testcoil_low, testcoil_high, usl_t1, usl_t2}) {
    require(std::isfinite(v), "levels and limits must be finite");
  }
  for (double v : {heat_sd, coil_sd, elevated_heat_sd, drift_amplitude, target_noise, usl_margin,
                   sensor_resolution, hazard_max, second_factor_sd}) {
    require(std::isfinite(v) && v >= 0.0, "spreads, margins and hazard must be non-negative");
  }
  require(drift_period > 0.0, "drift_period must be positive");
  require(std::isfinite(a1) && std::isfinite(a2) && std::isfinite(b1) && std::isfinite(b2) && a1 != 0.0 && a2 != 0.0, "a1, a2 must be non-zero");
  require(hazard_max <= 1.0, "hazard_max must be a probability");
  require(hazard_scale > 0.0, "hazard_scale must be positive");
  require(hour_linked_fraction >= 0.0 && hour_linked_fraction <= 1.0,
          "hour_linked_fraction must be in [0, 1]");
  require(testcoil_center > 0.0 && testcoil_center < 1.0, "testcoil_center must be in (0, 1)");
  require(testcoil_width > 0.0, "testcoil_width must be positive");
  require(!include_testcoil || (testcoil_length >= 10 && testcoil_locations >= 1),
          "testcoil needs length >= 10 and at least one location");
  require(testcoil_replicates >= 1 && production_replicates >= 1, "replicates must be positive");
  require(production_window >= 1, "production_window must be positive");
  require(sample_rate_hz > 0.0 && coil_gap_s >= 0.0, "sample rate must be positive");
}

namespace {

using nlohmann::json;

template <class T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_vector(const json& j, const char* key, SensorVector& out) {
  if (!j.contains(key)) return;
  const auto v = j.at(key).get<std::vector<double>>();
  if (v.size() != kSensorVariables) {
    throw InvalidArgument(std::string("generator config: ") + key + " needs 20 entries");
  }
  std::copy(v.begin(), v.end(), out.begin());
}

}  // namespace

#define SOFTSENSOR_CONFIG_FIELDS(X)                                                           \
  X(seed) X(n_coils) X(n_elevated_coils) X(include_testcoil) X(min_measurements)              \
  X(max_measurements) X(n_heats) X(heat_mean) X(heat_sd) X(coil_sd) X(elevated_heat_mean)      \
  X(elevated_heat_sd) X(drift_amplitude) X(drift_period) X(sensor_resolution) X(a1) X(a2)      \
  X(target_noise) X(usl_t1) X(usl_t2) X(usl_margin) X(testcoil_length) X(testcoil_low)        \
  X(testcoil_high) X(testcoil_center) X(testcoil_width) X(testcoil_locations)                  \
  X(testcoil_replicates) X(production_replicates) X(production_window) X(hazard_max)          \
  X(hazard_scale) X(hour_linked_fraction) X(sample_rate_hz) X(coil_gap_s) X(second_factor_sd) X(b1) X(b2)

GeneratorConfig config_from_json(const std::string& text) {
  GeneratorConfig c;
  try {
    const auto j = json::parse(text);
    if (!j.is_object()) throw InvalidArgument("generator config: expected a JSON object");
#define X(name) read_field(j, #name, c.name);
    SOFTSENSOR_CONFIG_FIELDS(X)
#undef X
    read_vector(j, "sensor_offset", c.sensor_offset);
    read_vector(j, "sensor_gain", c.sensor_gain);
    read_vector(j, "sensor_noise", c.sensor_noise);
    read_vector(j, "sensor_gain2", c.sensor_gain2);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("generator config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_to_json(const GeneratorConfig& c) {
  nlohmann::ordered_json j;
#define X(name) j[#name] = c.name;
  SOFTSENSOR_CONFIG_FIELDS(X)
#undef X
  j["sensor_offset"] = std::vector<double>(c.sensor_offset.begin(), c.sensor_offset.end());
  j["sensor_gain"] = std::vector<double>(c.sensor_gain.begin(), c.sensor_gain.end());
  j["sensor_noise"] = std::vector<double>(c.sensor_noise.begin(), c.sensor_noise.end());
  j["sensor_gain2"] = std::vector<double>(c.sensor_gain2.begin(), c.sensor_gain2.end());
  return j.dump(2) + "\n";
}

#undef SOFTSENSOR_CONFIG_FIELDS

namespace {

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index)};
  return std::mt19937_64(seq);
}

double quantize(double v, double step) { return step > 0.0 ? std::round(v / step) * step : v; }

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct CoilPlan {
  std::string coil_id;
  std::string heat_id;
  CoilKind kind = CoilKind::Production;
  double heat_level = 0.0;
};

struct BuiltCoil {
  Coil coil;
  CoilTruth truth;
};

double replicate_mean(double latent, double a, double sd, int replicates, std::mt19937_64& rng) {
  std::normal_distribution<double> noise(0.0, 1.0);
  double s = 0.0;
  for (int r = 0; r < replicates; ++r) s += a * latent + sd * noise(rng);
  return s / replicates;
}

bool in_margin_band(double t2, const GeneratorConfig& c) {
  return t2 > c.usl_t2 && t2 <= c.usl_t2 + c.usl_margin;
}

void emit_sensor_rows(const GeneratorConfig& c, const std::vector<double>& h, double g,
                      const std::string& id, std::mt19937_64& rng, Coil& coil) {
  std::normal_distribution<double> noise(0.0, 1.0);
  coil.measurements.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    auto& m = coil.measurements[i];
    m.coil_id = id;
    m.position_index = i;
    m.timestamp = static_cast<double>(i) / c.sample_rate_hz;
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      const double x = c.sensor_offset[j] - c.sensor_gain[j] * h[i] - c.sensor_gain2[j] * g +
                       c.sensor_noise[j] * noise(rng);
      m.values[j] = quantize(x, c.sensor_resolution);
    }
  }
}

BuiltCoil build_production(const GeneratorConfig& c, const CoilPlan& plan, std::mt19937_64& rng) {
  BuiltCoil out;
  out.truth.coil_id = plan.coil_id;
  out.truth.heat_id = plan.heat_id;
  out.truth.kind = plan.kind;
  out.coil.coil_id = plan.coil_id;
  out.coil.heat_id = plan.heat_id;

  std::uniform_int_distribution<std::size_t> length(c.min_measurements, c.max_measurements);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = length(rng);
  const double phase = 2.0 * std::numbers::pi * unit(rng);

  std::vector<double> drift(n);
  for (std::size_t i = 0; i < n; ++i) {
    drift[i] = c.drift_amplitude *
               std::sin(2.0 * std::numbers::pi * static_cast<double>(i) / c.drift_period + phase);
  }
  const std::size_t window = std::min(n, c.production_window);
  double drift_mean = 0.0;
  for (std::size_t i = 0; i < window; ++i) drift_mean += drift[i];
  drift_mean /= static_cast<double>(window);

  // The start-of-coil sample represents the material under the first window.
  const double sd = plan.kind == CoilKind::Elevated ? c.elevated_heat_sd * 0.5 : c.coil_sd;
  const double g = c.second_factor_sd > 0.0 ? c.second_factor_sd * normal(rng) : 0.0;
  double base = 0.0;
  TensileSample sample{plan.coil_id, 0, 0.0, 0.0, c.production_replicates};
  bool accepted = false;
  for (int attempt = 0; attempt < 200 && !accepted; ++attempt) {
    base = plan.heat_level + sd * normal(rng);
    const double latent = base + drift_mean;
    sample.t1 = replicate_mean(latent, c.a1, c.target_noise, c.production_replicates, rng) + c.b1 * g;
    sample.t2 = replicate_mean(latent, c.a2, c.target_noise, c.production_replicates, rng) + c.b2 * g;
    accepted = !in_margin_band(sample.t2, c);
  }
  if (!accepted) {
    // Push the coil just clear of the band.
    const double shift = (c.usl_t2 + c.usl_margin + 0.05 - sample.t2) / c.a2;
    base += shift;
    sample.t1 += c.a1 * shift;
    sample.t2 += c.a2 * shift;
  }

  auto& tr = out.truth;
  tr.hardness.resize(n);
  tr.t1.resize(n);
  tr.t2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    tr.hardness[i] = base + drift[i];
    tr.t1[i] = c.a1 * tr.hardness[i] + c.b1 * g;
    tr.t2[i] = c.a2 * tr.hardness[i] + c.b2 * g;
  }
  tr.second_factor = g;
  emit_sensor_rows(c, tr.hardness, g, plan.coil_id, rng, out.coil);
  out.coil.tensile_samples.push_back(sample);

  if (c.hazard_max > 0.0) {
    for (std::size_t i = 0; i < n; ++i) {
      const double excess = std::max(0.0, tr.t1[i] - c.usl_t1);
      const double p = c.hazard_max * (2.0 * logistic(excess / c.hazard_scale) - 1.0);
      if (p > 0.0 && unit(rng) < p) {
        tr.fault_positions.push_back(i);
        const bool hourly = unit(rng) < c.hour_linked_fraction;
        // Hour references are resolved after timestamps are offset.
        out.coil.fault_events.push_back(
            {plan.coil_id, hourly ? FaultRefKind::Hour : FaultRefKind::Measurement,
             static_cast<long long>(i)});
      }
    }
  }
  return out;
}

BuiltCoil build_testcoil(const GeneratorConfig& c, const CoilPlan& plan, std::mt19937_64& rng) {
  BuiltCoil out;
  out.truth.coil_id = plan.coil_id;
  out.truth.heat_id = plan.heat_id;
  out.truth.kind = CoilKind::Testcoil;
  out.coil.coil_id = plan.coil_id;
  out.coil.heat_id = plan.heat_id;

  const std::size_t n = c.testcoil_length;
  const double center = c.testcoil_center * static_cast<double>(n);
  auto& tr = out.truth;
  tr.transition_position = static_cast<std::size_t>(std::lround(center));
  tr.hardness.resize(n);
  tr.t1.resize(n);
  tr.t2.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = logistic((static_cast<double>(i) - center) / c.testcoil_width);
    tr.hardness[i] = c.testcoil_low + (c.testcoil_high - c.testcoil_low) * s;
    tr.t1[i] = c.a1 * tr.hardness[i];
    tr.t2[i] = c.a2 * tr.hardness[i];
  }
  emit_sensor_rows(c, tr.hardness, 0.0, plan.coil_id, rng, out.coil);

  for (std::size_t l = 0; l < c.testcoil_locations; ++l) {
    const auto p = static_cast<std::size_t>(std::lround(
        (static_cast<double>(l) + 0.5) / static_cast<double>(c.testcoil_locations) *
        static_cast<double>(n)));
    const std::size_t pos = std::min(p, n - 1);
    // The sample spans the centered 5-measurement neighbourhood.
    const std::size_t lo = pos >= 2 ? pos - 2 : 0;
    const std::size_t hi = std::min(pos + 2, n - 1);
    double latent = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) latent += tr.hardness[i];
    latent /= static_cast<double>(hi - lo + 1);
    TensileSample s{plan.coil_id, pos, 0.0, 0.0, c.testcoil_replicates};
    s.t1 = replicate_mean(latent, c.a1, c.target_noise, c.testcoil_replicates, rng);
    s.t2 = replicate_mean(latent, c.a2, c.target_noise, c.testcoil_replicates, rng);
    out.coil.tensile_samples.push_back(s);
  }
  return out;
}

std::string numbered(const char* prefix, std::size_t i, int width) {
  std::string digits = std::to_string(i);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

}  // namespace

GeneratedData generate(const GeneratorConfig& c) {
  c.validate();
  auto master = derived_rng(c.seed, 0, 0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> heat_levels(c.n_heats);
  for (auto& h : heat_levels) h = c.heat_mean + c.heat_sd * normal(master);
  const std::size_t n_elevated_heats = c.n_elevated_coils > 0 ? 2 : 0;
  std::vector<double> elevated_levels(n_elevated_heats);
  for (auto& h : elevated_levels) h = c.elevated_heat_mean + c.elevated_heat_sd * normal(master);

  std::vector<CoilKind> kinds(c.n_coils, CoilKind::Production);
  kinds.insert(kinds.end(), c.n_elevated_coils, CoilKind::Elevated);
  std::shuffle(kinds.begin(), kinds.end(), master);

  std::vector<CoilPlan> plans;
  std::size_t clean_seen = 0, elevated_seen = 0;
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    CoilPlan p;
    p.coil_id = numbered("C", i + 1, 3);
    p.kind = kinds[i];
    if (p.kind == CoilKind::Elevated) {
      const auto h = elevated_seen++ % n_elevated_heats;
      p.heat_id = numbered("HE", h + 1, 1);
      p.heat_level = elevated_levels[h];
    } else {
      const auto h = clean_seen++ % c.n_heats;
      p.heat_id = numbered("H", h + 1, 2);
      p.heat_level = heat_levels[h];
    }
    plans.push_back(std::move(p));
  }
  if (c.include_testcoil) {
    CoilPlan p;
    p.coil_id = "TESTCOIL";
    p.kind = CoilKind::Testcoil;
    p.heat_id = n_elevated_heats > 0 ? "HE1" : "H01";
    plans.push_back(std::move(p));
  }

  std::vector<BuiltCoil> built(plans.size());
  parallel_for(plans.size(), [&](std::size_t i) {
    auto rng = derived_rng(c.seed, 1, i);
    built[i] = plans[i].kind == CoilKind::Testcoil ? build_testcoil(c, plans[i], rng)
                                                   : build_production(c, plans[i], rng);
  });

  GeneratedData data;
  double start = 0.0;
  for (auto& b : built) {
    for (auto& m : b.coil.measurements) m.timestamp = std::round((start + m.timestamp) * 1000.0) / 1000.0;
    for (auto& f : b.coil.fault_events) {
      if (f.kind == FaultRefKind::Hour) {
        const double ts = b.coil.measurements[static_cast<std::size_t>(f.reference)].timestamp;
        f.reference = static_cast<long long>(std::floor(ts / 3600.0));
      }
    }
    if (!b.coil.measurements.empty()) start = b.coil.measurements.back().timestamp + c.coil_gap_s;
    data.tensile.insert(data.tensile.end(), b.coil.tensile_samples.begin(), b.coil.tensile_samples.end());
    data.faults.insert(data.faults.end(), b.coil.fault_events.begin(), b.coil.fault_events.end());
    data.truth.coils.push_back(std::move(b.truth));
    data.coils.push_back(std::move(b.coil));
  }
  data.truth.limits = c.limits();
  return data;
}

std::vector<std::filesystem::path> write_generated(const GeneratedData& data,
                                                   const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error("cannot write " + p.string());
    return out;
  };
  std::vector<std::filesystem::path> paths{dir / "coils.csv", dir / "tensile.csv",
                                           dir / "faults.csv", dir / "truth.csv"};
  {
    auto out = open(paths[0]);
    io::write_measurements(out, data.coils);
  }
  {
    auto out = open(paths[1]);
    io::write_tensile(out, data.tensile);
  }
  {
    auto out = open(paths[2]);
    io::write_fault_log(out, data.faults);
  }
  {
    auto out = open(paths[3]);
    out << "coil_id,heat_id,position_index,hardness,t1,t2\n";
    for (const auto& t : data.truth.coils) {
      for (std::size_t i = 0; i < t.hardness.size(); ++i) {
        out << t.coil_id << ',' << t.heat_id << ',' << i << ',' << io::format_double(t.hardness[i])
            << ',' << io::format_double(t.t1[i]) << ',' << io::format_double(t.t2[i]) << '\n';
      }
    }
  }
  return paths;
}

ModifiedGroups generate_modified_groups(const GeneratorConfig& c, const ModifiedGroupsConfig& g) {
  c.validate();
  if (g.strips_per_group == 0 || g.locations_per_strip == 0 || g.measurements_per_location == 0) {
    throw InvalidArgument("modified groups: counts must be positive");
  }
  auto rng = derived_rng(c.seed, 2, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto per_strip = g.locations_per_strip * g.measurements_per_location;
  const auto rows = static_cast<Eigen::Index>(g.strips_per_group * per_strip);

  auto group = [&](double level, bool with_failed, std::vector<std::size_t>* failed) {
    Eigen::MatrixXd M(rows, static_cast<Eigen::Index>(kSensorVariables));
    Eigen::Index r = 0;
    for (std::size_t s = 0; s < g.strips_per_group; ++s) {
      const bool failed_strip = with_failed && s == 0;
      const double strip_level = (failed_strip ? 0.0 : level) + g.strip_sd * normal(rng);
      for (std::size_t l = 0; l < g.locations_per_strip; ++l) {
        const double loc_level = strip_level + 0.5 * g.strip_sd * normal(rng);
        for (std::size_t i = 0; i < g.measurements_per_location; ++i, ++r) {
          if (failed_strip && failed) failed->push_back(static_cast<std::size_t>(r));
          for (std::size_t j = 0; j < kSensorVariables; ++j) {
            M(r, static_cast<Eigen::Index>(j)) = quantize(
                c.sensor_offset[j] - c.sensor_gain[j] * loc_level + c.sensor_noise[j] * normal(rng),
                c.sensor_resolution);
          }
        }
      }
    }
    return M;
  };

  ModifiedGroups out;
  out.hard = group(g.hardness_offset, g.failed_modification, &out.failed_rows);
  out.soft = group(-g.hardness_offset, false, nullptr);
  out.reference = group(0.0, false, nullptr);
  return out;
}

}  // namespace softsensor::synth
