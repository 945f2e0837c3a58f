#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"
#include "softsensor/fault_detection.hpp"

namespace softsensor::synth {

SensorVector default_sensor_offset();
SensorVector default_sensor_gain();
SensorVector default_sensor_noise();
SensorVector default_sensor_gain2();

/// Latent-factor production line. Every measurement carries a latent
/// hardness h; sensors read x = offset - gain * h + noise (harder material
/// reads lower) and the material properties are t = a * h + noise.
struct GeneratorConfig {
  std::uint64_t seed = 1;

  std::size_t n_coils = 34;           // clean production coils
  std::size_t n_elevated_coils = 6;   // coils from elevated-hardness heats
  bool include_testcoil = true;
  std::size_t min_measurements = 2500;
  std::size_t max_measurements = 4500;

  std::size_t n_heats = 10;
  double heat_mean = -0.8;  // latent hardness of clean heats
  double heat_sd = 0.5;
  double coil_sd = 0.2;     // coil offset within its heat
  double elevated_heat_mean = 1.2;
  double elevated_heat_sd = 0.15;
  double drift_amplitude = 0.15;
  double drift_period = 3000.0;  // measurements

  SensorVector sensor_offset = default_sensor_offset();
  SensorVector sensor_gain = default_sensor_gain();     // positive
  SensorVector sensor_noise = default_sensor_noise();   // SV 3, 4, 11 noisy; SV 10, 17 quiet
  double sensor_resolution = 1e-6;  // quantization step; 0 disables

  double a1 = 1.0;
  double a2 = 1.5;
  double target_noise = 0.05;  // per tensile replicate

  /// Optional second latent factor g, drawn once per coil. Sensors read
  /// an extra -gain2 * g and the properties an extra b * g. 0 disables it.
  double second_factor_sd = 0.0;
  SensorVector sensor_gain2 = default_sensor_gain2();
  double b1 = 1.0;
  double b2 = -1.0;

  double usl_t1 = 0.5;
  double usl_t2 = 1.0;
  /// Labeled t2 values never fall in (usl_t2, usl_t2 + margin].
  double usl_margin = 0.5;

  std::size_t testcoil_length = 8000;
  double testcoil_low = -0.5;
  double testcoil_high = 2.5;
  double testcoil_center = 0.55;  // fraction of the coil length
  double testcoil_width = 60.0;   // sigmoid scale in measurements
  std::size_t testcoil_locations = 9;
  int testcoil_replicates = 2;
  int production_replicates = 3;
  std::size_t production_window = 200;

  /// Fault probability per measurement: hazard_max * (2 * logistic(e / hazard_scale) - 1)
  /// with e = max(0, t1 - usl_t1).
  double hazard_max = 0.0015;
  double hazard_scale = 0.1;
  double hour_linked_fraction = 0.5;

  double sample_rate_hz = 3.0;
  double coil_gap_s = 600.0;

  /// Throws InvalidArgument naming the first violated constraint.
  void validate() const;

  SpecificationLimits limits() const { return {usl_t1, usl_t2}; }
};

GeneratorConfig config_from_json(const std::string& text);  // missing keys keep defaults
std::string config_to_json(const GeneratorConfig& config);

enum class CoilKind { Production, Elevated, Testcoil };

struct CoilTruth {
  std::string coil_id;
  std::string heat_id;
  CoilKind kind = CoilKind::Production;
  std::vector<double> hardness;
  double second_factor = 0.0;
  std::vector<double> t1;
  std::vector<double> t2;
  std::vector<std::size_t> fault_positions;
  std::size_t transition_position = 0;  // testcoil only
};

struct GroundTruth {
  std::vector<CoilTruth> coils;
  SpecificationLimits limits;
};

struct GeneratedData {
  std::vector<Coil> coils;  // tensile samples and faults attached
  std::vector<TensileSample> tensile;
  std::vector<FaultEvent> faults;
  GroundTruth truth;
};

GeneratedData generate(const GeneratorConfig& config);

/// Writes coils.csv, tensile.csv, faults.csv and truth.csv; returns the paths.
std::vector<std::filesystem::path> write_generated(const GeneratedData& data,
                                                   const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Laboratory modification experiment

struct ModifiedGroupsConfig {
  double hardness_offset = 2.0;
  std::size_t strips_per_group = 3;
  std::size_t locations_per_strip = 3;
  std::size_t measurements_per_location = 200;
  double strip_sd = 0.05;
  /// One hard strip keeps reference hardness.
  bool failed_modification = false;
};

struct ModifiedGroups {
  Eigen::MatrixXd hard;
  Eigen::MatrixXd soft;
  Eigen::MatrixXd reference;
  std::vector<std::size_t> failed_rows;  // rows of `hard` from the failed strip
};

ModifiedGroups generate_modified_groups(const GeneratorConfig& config,
                                        const ModifiedGroupsConfig& groups = {});

}  // namespace softsensor::synth
