#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include <Eigen/Dense>

namespace softsensor {

/// Number of sensor variables per reading: 10 amplitude gains followed by
/// 10 phase shifts, one pair per excitation frequency.
inline constexpr std::size_t kSensorVariables = 20;
/// Number of material properties estimated (yield strength t1, tensile strength t2).
inline constexpr std::size_t kTargets = 2;

using SensorVector = std::array<double, kSensorVariables>;

struct SensorMeasurement {
  double timestamp = 0.0;  // seconds, monotonic
  std::string coil_id;
  SensorVector values{};
  std::size_t position_index = 0;
};

struct TensileSample {
  std::string coil_id;
  std::size_t position_index = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  int replicate_count = 1;
};

enum class FaultRefKind { Measurement, Hour };

/// A logged product fault. For `Measurement` the reference is a position
/// index on the coil; for `Hour` it is floor(timestamp / 3600).
struct FaultEvent {
  std::string coil_id;
  FaultRefKind kind = FaultRefKind::Measurement;
  long long reference = 0;
};

struct Coil {
  std::string coil_id;
  std::string heat_id;
  std::vector<SensorMeasurement> measurements;
  std::vector<TensileSample> tensile_samples;
  std::vector<FaultEvent> fault_events;

  /// Measurements as an n x 20 matrix.
  Eigen::MatrixXd matrix() const;
};

/// Aggregated sensor vectors paired with tensile results, one row per
/// (coil, tensile sample) pairing.
struct LabeledDataset {
  Eigen::MatrixXd X;  // n x 20
  Eigen::MatrixXd Y;  // n x 2, columns t1, t2
  std::vector<std::string> row_coil;

  std::size_t rows() const noexcept { return static_cast<std::size_t>(X.rows()); }

  /// Subset of rows, in the given order.
  LabeledDataset select(const std::vector<std::size_t>& rows) const;

  /// Throws InvalidArgument if shapes disagree or any entry is non-finite.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Stream cleaning

struct PlausibilityBounds {
  SensorVector lower;
  SensorVector upper;

  /// (-inf, +inf) on every variable; only non-finite values are rejected.
  static PlausibilityBounds unbounded();
  static PlausibilityBounds uniform(double lower, double upper);
};

enum class RemovalReason { NonFinite, OutOfBounds };

struct Removal {
  std::size_t original_position = 0;
  RemovalReason reason = RemovalReason::NonFinite;
  std::size_t variable = 0;  // first offending variable, 0-based
};

struct CleanReport {
  std::vector<Removal> removed;
  bool empty_result = false;
};

struct CleanResult {
  Coil coil;
  CleanReport report;
};

CleanResult clean_stream(const Coil& coil, const PlausibilityBounds& bounds);

// ---------------------------------------------------------------------------
// Aggregation into a labeled dataset

/// Production coils pair the mean of the first `production_window`
/// measurements with the start-of-coil sample; coils listed in
/// `neighborhood_coils` pair each sample with the mean of the centered
/// window {p-2..p+2} (clipped at coil ends).
struct AggregationPolicy {
  std::size_t production_window = 200;
  std::size_t neighborhood = 5;
  std::unordered_set<std::string> neighborhood_coils;

  /// Marks every coil with more than one tensile sample for neighborhood
  /// aggregation.
  static AggregationPolicy infer(const std::vector<Coil>& coils);
};

struct DatasetBuild {
  LabeledDataset data;
  std::vector<std::string> excluded_coils;
  std::vector<std::string> warnings;
};

DatasetBuild build_labeled_dataset(const std::vector<Coil>& coils,
                                   const AggregationPolicy& policy);

/// Resolves a fault reference to measurement indices (positions in
/// `coil.measurements`). Empty when it cannot be resolved.
std::vector<std::size_t> resolve_fault(const Coil& coil, const FaultEvent& fault);

/// Attaches tensile samples and fault events to the coils they name.
/// Records for unknown coils are returned as warnings.
std::vector<std::string> attach_records(std::vector<Coil>& coils,
                                        const std::vector<TensileSample>& samples,
                                        const std::vector<FaultEvent>& faults);

}  // namespace softsensor
