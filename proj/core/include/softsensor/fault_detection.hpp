#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"
#include "softsensor/pls.hpp"
#include "softsensor/preprocess.hpp"

namespace softsensor {

/// Upper specification limits in standardized property units.
struct SpecificationLimits {
  double usl_t1 = 0.0;
  double usl_t2 = 0.0;
};

enum class FaultRule { T1Only, T2Only, T1OrT2 };

std::string_view to_string(FaultRule rule);
std::optional<FaultRule> parse_fault_rule(std::string_view text);  // t1 | t2 | t1-or-t2

/// Strict comparison against the limits.
bool classify_fault(const Eigen::Vector2d& y_hat, const SpecificationLimits& limits,
                    FaultRule rule);

struct OutOfSpecFraction {
  double t1 = 0.0;
  double t2 = 0.0;
  std::size_t n = 0;
};

/// nullopt when fewer than `min_count` estimates are available.
std::optional<OutOfSpecFraction> fraction_out_of_spec(const Eigen::MatrixXd& estimates,
                                                      const SpecificationLimits& limits,
                                                      std::size_t min_count = 2000);

struct AlertEvent {
  std::string coil_id;
  std::size_t position = 0;
  std::string property;  // "t1" or "t2": the property that opened the alert
  double smoothed = 0.0;
  double usl = 0.0;
};

struct StreamConfig {
  SpecificationLimits limits;
  FaultRule rule = FaultRule::T1OrT2;
  std::size_t window = 50;
  double hysteresis = 0.1;
};

/// Single-pass scorer for one coil. An alert opens the first time a smoothed
/// estimate governed by the rule exceeds its USL; it closes once every
/// governed smoothed estimate is below USL - hysteresis, after which a new
/// crossing can open another alert.
class StreamScorer {
 public:
  struct Step {
    Eigen::Vector2d estimate;
    Eigen::Vector2d smoothed;
    std::optional<AlertEvent> alert;
  };

  StreamScorer(const PlsModel& model, std::string coil_id, const StreamConfig& config);

  Step push(const SensorVector& values, std::size_t position);
  bool alert_open() const noexcept { return open_; }

 private:
  const PlsModel* model_;
  std::string coil_id_;
  StreamConfig config_;
  TrailingMean t1_;
  TrailingMean t2_;
  bool open_ = false;
};

struct StreamScore {
  Eigen::MatrixXd estimates;  // n x 2
  Eigen::MatrixXd smoothed;   // n x 2
  std::vector<AlertEvent> alerts;
};

StreamScore stream_score(const PlsModel& model, const Coil& coil, const StreamConfig& config);

/// One JSON object per line: coil_id, position, property, smoothed, usl.
std::string alert_json(const AlertEvent& alert);

// ---------------------------------------------------------------------------
// Coil-level risk

enum class AlertState { Clear, Alerted };

struct RiskRow {
  std::string coil_id;
  std::size_t n_estimates = 0;
  double fraction_t1 = 0.0;
  double fraction_t2 = 0.0;
  std::size_t reported_fault_count = 0;
  std::size_t alert_count = 0;
  AlertState alert_state = AlertState::Clear;
};

struct RiskReport {
  std::vector<RiskRow> rows;  // coils with at least min_count estimates
  std::vector<std::string> excluded_coils;
};

RiskReport build_risk_report(const PlsModel& model, const std::vector<Coil>& coils,
                             const StreamConfig& config, std::size_t min_count = 2000);

void write_risk_csv(std::ostream& out, const RiskReport& report);

// ---------------------------------------------------------------------------
// Linking logged faults to estimates

enum class FaultCategory { BothViolated, T1Only, T2Only, Within, Unlinked };

std::string_view to_string(FaultCategory c);

struct FaultLink {
  FaultEvent fault;
  std::vector<std::size_t> positions;  // linked measurement indices
  std::size_t both = 0, t1_only = 0, t2_only = 0, within = 0;
  FaultCategory category = FaultCategory::Unlinked;  // majority over linked estimates
};

struct FaultLinkage {
  std::vector<FaultLink> links;
  std::size_t both = 0, t1_only = 0, t2_only = 0, within = 0, unlinked = 0;
};

/// `estimates[c]` holds the per-measurement estimates of `coils[c]`.
FaultLinkage link_faults(const std::vector<Coil>& coils,
                         const std::vector<Eigen::MatrixXd>& estimates,
                         const SpecificationLimits& limits);

void write_fault_links_csv(std::ostream& out, const FaultLinkage& linkage);

}  // namespace softsensor
