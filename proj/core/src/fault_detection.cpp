#include "softsensor/fault_detection.hpp"

#include <array>
#include <ostream>

#include <json.hpp>

#include "softsensor/error.hpp"
#include "softsensor/io.hpp"
#include "softsensor/parallel.hpp"

namespace softsensor {

std::string_view to_string(FaultRule rule) {
  switch (rule) {
    case FaultRule::T1Only: return "t1";
    case FaultRule::T2Only: return "t2";
    case FaultRule::T1OrT2: return "t1-or-t2";
  }
  return "?";
}

std::optional<FaultRule> parse_fault_rule(std::string_view text) {
  if (text == "t1") return FaultRule::T1Only;
  if (text == "t2") return FaultRule::T2Only;
  if (text == "t1-or-t2") return FaultRule::T1OrT2;
  return std::nullopt;
}

bool classify_fault(const Eigen::Vector2d& y_hat, const SpecificationLimits& limits,
                    FaultRule rule) {
  const bool v1 = y_hat[0] > limits.usl_t1;
  const bool v2 = y_hat[1] > limits.usl_t2;
  switch (rule) {
    case FaultRule::T1Only: return v1;
    case FaultRule::T2Only: return v2;
    case FaultRule::T1OrT2: return v1 || v2;
  }
  return false;
}

std::optional<OutOfSpecFraction> fraction_out_of_spec(const Eigen::MatrixXd& estimates,
                                                      const SpecificationLimits& limits,
                                                      std::size_t min_count) {
  const auto n = static_cast<std::size_t>(estimates.rows());
  if (n == 0 || n < min_count) return std::nullopt;
  if (estimates.cols() != 2) throw InvalidArgument("fraction_out_of_spec: expected two columns");
  std::size_t c1 = 0, c2 = 0;
  for (Eigen::Index i = 0; i < estimates.rows(); ++i) {
    if (estimates(i, 0) > limits.usl_t1) ++c1;
    if (estimates(i, 1) > limits.usl_t2) ++c2;
  }
  return OutOfSpecFraction{static_cast<double>(c1) / static_cast<double>(n),
                           static_cast<double>(c2) / static_cast<double>(n), n};
}

StreamScorer::StreamScorer(const PlsModel& model, std::string coil_id, const StreamConfig& config)
    : model_(&model),
      coil_id_(std::move(coil_id)),
      config_(config),
      t1_(config.window),
      t2_(config.window) {
  if (model.n_features() != static_cast<Eigen::Index>(kSensorVariables) || model.n_targets() != 2) {
    throw InvalidArgument("stream scorer: model must map 20 sensor variables to 2 properties");
  }
}

StreamScorer::Step StreamScorer::push(const SensorVector& values, std::size_t position) {
  const Eigen::Map<const Eigen::VectorXd> x(values.data(), static_cast<Eigen::Index>(values.size()));
  Step step;
  step.estimate = model_->B.transpose() * x + model_->intercept;
  step.smoothed = {t1_.push(step.estimate[0]), t2_.push(step.estimate[1])};

  const bool watch_t1 = config_.rule != FaultRule::T2Only;
  const bool watch_t2 = config_.rule != FaultRule::T1Only;
  const auto& lim = config_.limits;
  if (!open_) {
    if (watch_t1 && step.smoothed[0] > lim.usl_t1) {
      step.alert = AlertEvent{coil_id_, position, "t1", step.smoothed[0], lim.usl_t1};
    } else if (watch_t2 && step.smoothed[1] > lim.usl_t2) {
      step.alert = AlertEvent{coil_id_, position, "t2", step.smoothed[1], lim.usl_t2};
    }
    open_ = step.alert.has_value();
  } else {
    const bool below1 = !watch_t1 || step.smoothed[0] < lim.usl_t1 - config_.hysteresis;
    const bool below2 = !watch_t2 || step.smoothed[1] < lim.usl_t2 - config_.hysteresis;
    if (below1 && below2) open_ = false;
  }
  return step;
}

StreamScore stream_score(const PlsModel& model, const Coil& coil, const StreamConfig& config) {
  StreamScorer scorer(model, coil.coil_id, config);
  StreamScore out;
  const auto n = static_cast<Eigen::Index>(coil.measurements.size());
  out.estimates.resize(n, 2);
  out.smoothed.resize(n, 2);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& m = coil.measurements[static_cast<std::size_t>(i)];
    auto step = scorer.push(m.values, m.position_index);
    out.estimates.row(i) = step.estimate.transpose();
    out.smoothed.row(i) = step.smoothed.transpose();
    if (step.alert) out.alerts.push_back(std::move(*step.alert));
  }
  return out;
}

std::string alert_json(const AlertEvent& alert) {
  nlohmann::ordered_json j = {{"coil_id", alert.coil_id},
                              {"position", alert.position},
                              {"property", alert.property},
                              {"smoothed", alert.smoothed},
                              {"usl", alert.usl}};
  return j.dump();
}

RiskReport build_risk_report(const PlsModel& model, const std::vector<Coil>& coils,
                             const StreamConfig& config, std::size_t min_count) {
  std::vector<std::optional<RiskRow>> rows(coils.size());
  parallel_for(coils.size(), [&](std::size_t c) {
    const auto& coil = coils[c];
    const auto score = stream_score(model, coil, config);
    const auto frac = fraction_out_of_spec(score.estimates, config.limits, min_count);
    if (!frac) return;
    RiskRow row;
    row.coil_id = coil.coil_id;
    row.n_estimates = frac->n;
    row.fraction_t1 = frac->t1;
    row.fraction_t2 = frac->t2;
    row.reported_fault_count = coil.fault_events.size();
    row.alert_count = score.alerts.size();
    row.alert_state = score.alerts.empty() ? AlertState::Clear : AlertState::Alerted;
    rows[c] = std::move(row);
  });
  RiskReport report;
  for (std::size_t c = 0; c < coils.size(); ++c) {
    if (rows[c]) {
      report.rows.push_back(std::move(*rows[c]));
    } else {
      report.excluded_coils.push_back(coils[c].coil_id);
    }
  }
  return report;
}

void write_risk_csv(std::ostream& out, const RiskReport& report) {
  out << "coil_id,n_estimates,fraction_out_of_spec_t1,fraction_out_of_spec_t2,"
         "reported_fault_count,alert_count,alert_state\n";
  for (const auto& r : report.rows) {
    out << r.coil_id << ',' << r.n_estimates << ',' << io::format_double(r.fraction_t1) << ','
        << io::format_double(r.fraction_t2) << ',' << r.reported_fault_count << ','
        << r.alert_count << ',' << (r.alert_state == AlertState::Alerted ? "alerted" : "clear")
        << '\n';
  }
}

std::string_view to_string(FaultCategory c) {
  switch (c) {
    case FaultCategory::BothViolated: return "t1_and_t2";
    case FaultCategory::T1Only: return "t1_only";
    case FaultCategory::T2Only: return "t2_only";
    case FaultCategory::Within: return "within_specifications";
    case FaultCategory::Unlinked: return "unlinked";
  }
  return "?";
}

FaultLinkage link_faults(const std::vector<Coil>& coils,
                         const std::vector<Eigen::MatrixXd>& estimates,
                         const SpecificationLimits& limits) {
  if (coils.size() != estimates.size()) throw InvalidArgument("link_faults: one estimate block per coil");
  FaultLinkage linkage;
  for (std::size_t c = 0; c < coils.size(); ++c) {
    const auto& coil = coils[c];
    const auto& est = estimates[c];
    if (static_cast<std::size_t>(est.rows()) != coil.measurements.size()) {
      throw InvalidArgument("link_faults: estimate rows differ from measurements of " + coil.coil_id);
    }
    for (const auto& fault : coil.fault_events) {
      FaultLink link;
      link.fault = fault;
      link.positions = resolve_fault(coil, fault);
      for (auto i : link.positions) {
        const auto r = static_cast<Eigen::Index>(i);
        const bool v1 = est(r, 0) > limits.usl_t1;
        const bool v2 = est(r, 1) > limits.usl_t2;
        if (v1 && v2) ++link.both;
        else if (v1) ++link.t1_only;
        else if (v2) ++link.t2_only;
        else ++link.within;
      }
      if (!link.positions.empty()) {
        // Majority; ties resolve toward the more severe category.
        const std::array<std::pair<std::size_t, FaultCategory>, 4> tally{{
            {link.both, FaultCategory::BothViolated},
            {link.t1_only, FaultCategory::T1Only},
            {link.t2_only, FaultCategory::T2Only},
            {link.within, FaultCategory::Within},
        }};
        std::size_t best = 0;
        for (const auto& [count, cat] : tally) {
          if (count > best) {
            best = count;
            link.category = cat;
          }
        }
      }
      switch (link.category) {
        case FaultCategory::BothViolated: ++linkage.both; break;
        case FaultCategory::T1Only: ++linkage.t1_only; break;
        case FaultCategory::T2Only: ++linkage.t2_only; break;
        case FaultCategory::Within: ++linkage.within; break;
        case FaultCategory::Unlinked: ++linkage.unlinked; break;
      }
      linkage.links.push_back(std::move(link));
    }
  }
  return linkage;
}

void write_fault_links_csv(std::ostream& out, const FaultLinkage& linkage) {
  out << "coil_id,ref_kind,ref_value,linked_estimates,t1_and_t2,t1_only,t2_only,within,category\n";
  for (const auto& l : linkage.links) {
    out << l.fault.coil_id << ',' << io::to_string(l.fault.kind) << ',' << l.fault.reference << ','
        << l.positions.size() << ',' << l.both << ',' << l.t1_only << ',' << l.t2_only << ','
        << l.within << ',' << to_string(l.category) << '\n';
  }
}

}  // namespace softsensor
