#include "softsensor/data_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "softsensor/error.hpp"

namespace softsensor {

Eigen::MatrixXd Coil::matrix() const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(measurements.size()),
                      static_cast<Eigen::Index>(kSensorVariables));
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = measurements[i].values[j];
    }
  }
  return out;
}

LabeledDataset LabeledDataset::select(const std::vector<std::size_t>& rows) const {
  LabeledDataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.Y.resize(static_cast<Eigen::Index>(rows.size()), Y.cols());
  out.row_coil.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(rows[i]);
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(r);
    out.Y.row(static_cast<Eigen::Index>(i)) = Y.row(r);
    out.row_coil.push_back(row_coil[rows[i]]);
  }
  return out;
}

void LabeledDataset::validate() const {
  if (X.rows() != Y.rows() || static_cast<std::size_t>(X.rows()) != row_coil.size()) {
    throw InvalidArgument("labeled dataset: row counts of X, Y and row_coil differ");
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw InvalidArgument("labeled dataset: non-finite entry");
  }
}

PlausibilityBounds PlausibilityBounds::unbounded() {
  return uniform(-std::numeric_limits<double>::infinity(),
                 std::numeric_limits<double>::infinity());
}

PlausibilityBounds PlausibilityBounds::uniform(double lower, double upper) {
  PlausibilityBounds b;
  b.lower.fill(lower);
  b.upper.fill(upper);
  return b;
}

CleanResult clean_stream(const Coil& coil, const PlausibilityBounds& bounds) {
  CleanResult result;
  result.coil.coil_id = coil.coil_id;
  result.coil.heat_id = coil.heat_id;
  result.coil.tensile_samples = coil.tensile_samples;
  result.coil.fault_events = coil.fault_events;
  result.coil.measurements.reserve(coil.measurements.size());

  for (const auto& m : coil.measurements) {
    bool keep = true;
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      const double v = m.values[j];
      if (!std::isfinite(v)) {
        result.report.removed.push_back({m.position_index, RemovalReason::NonFinite, j});
        keep = false;
        break;
      }
      if (v < bounds.lower[j] || v > bounds.upper[j]) {
        result.report.removed.push_back({m.position_index, RemovalReason::OutOfBounds, j});
        keep = false;
        break;
      }
    }
    if (keep) {
      SensorMeasurement copy = m;
      copy.position_index = result.coil.measurements.size();
      result.coil.measurements.push_back(std::move(copy));
    }
  }
  result.report.empty_result = result.coil.measurements.empty();
  return result;
}

AggregationPolicy AggregationPolicy::infer(const std::vector<Coil>& coils) {
  AggregationPolicy policy;
  for (const auto& c : coils) {
    if (c.tensile_samples.size() > 1) policy.neighborhood_coils.insert(c.coil_id);
  }
  return policy;
}

namespace {

void append_row(LabeledDataset& data, std::vector<double>& x_flat, const Eigen::VectorXd& x,
                const TensileSample& sample) {
  x_flat.insert(x_flat.end(), x.data(), x.data() + x.size());
  data.row_coil.push_back(sample.coil_id);
}

Eigen::VectorXd mean_rows(const std::vector<SensorMeasurement>& ms, std::size_t begin,
                          std::size_t end) {
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(kSensorVariables));
  for (std::size_t i = begin; i < end; ++i) {
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      acc[static_cast<Eigen::Index>(j)] += ms[i].values[j];
    }
  }
  return acc / static_cast<double>(end - begin);
}

}  // namespace

DatasetBuild build_labeled_dataset(const std::vector<Coil>& coils,
                                   const AggregationPolicy& policy) {
  if (policy.neighborhood == 0 || policy.production_window == 0) {
    throw InvalidArgument("aggregation windows must be positive");
  }
  DatasetBuild build;
  std::vector<double> x_flat;
  std::vector<double> y_flat;

  auto push = [&](const Eigen::VectorXd& x, const TensileSample& s) {
    append_row(build.data, x_flat, x, s);
    y_flat.push_back(s.t1);
    y_flat.push_back(s.t2);
  };

  const auto half = static_cast<long long>(policy.neighborhood / 2);
  for (const auto& coil : coils) {
    if (coil.tensile_samples.empty()) continue;
    const auto& ms = coil.measurements;

    if (policy.neighborhood_coils.contains(coil.coil_id)) {
      for (const auto& s : coil.tensile_samples) {
        const long long p = static_cast<long long>(s.position_index);
        auto by_pos = [](const SensorMeasurement& m, long long v) {
          return static_cast<long long>(m.position_index) < v;
        };
        auto lo = std::lower_bound(ms.begin(), ms.end(), p - half, by_pos);
        auto hi = std::lower_bound(ms.begin(), ms.end(), p + half + 1, by_pos);
        if (lo == hi) {
          build.warnings.push_back("coil " + coil.coil_id + ": no measurements near position " +
                                   std::to_string(s.position_index) + ", sample skipped");
          continue;
        }
        push(mean_rows(ms, static_cast<std::size_t>(lo - ms.begin()),
                       static_cast<std::size_t>(hi - ms.begin())),
             s);
      }
      continue;
    }

    if (ms.size() < policy.production_window) {
      build.excluded_coils.push_back(coil.coil_id);
      continue;
    }
    const Eigen::VectorXd x = mean_rows(ms, 0, policy.production_window);
    for (const auto& s : coil.tensile_samples) {
      if (s.position_index >= policy.production_window) {
        build.warnings.push_back("coil " + coil.coil_id + ": sample at position " +
                                 std::to_string(s.position_index) +
                                 " is not at the start of the coil, skipped");
        continue;
      }
      push(x, s);
    }
  }

  const auto n = static_cast<Eigen::Index>(build.data.row_coil.size());
  build.data.X = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(
      x_flat.data(), n, static_cast<Eigen::Index>(kSensorVariables));
  build.data.Y = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                                Eigen::RowMajor>>(
      y_flat.data(), n, static_cast<Eigen::Index>(kTargets));
  return build;
}

std::vector<std::size_t> resolve_fault(const Coil& coil, const FaultEvent& fault) {
  std::vector<std::size_t> out;
  const auto& ms = coil.measurements;
  if (fault.kind == FaultRefKind::Measurement) {
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (static_cast<long long>(ms[i].position_index) == fault.reference) {
        out.push_back(i);
        break;
      }
    }
    return out;
  }
  for (std::size_t i = 0; i < ms.size(); ++i) {
    if (static_cast<long long>(std::floor(ms[i].timestamp / 3600.0)) == fault.reference) {
      out.push_back(i);
    }
  }
  return out;
}

std::vector<std::string> attach_records(std::vector<Coil>& coils,
                                        const std::vector<TensileSample>& samples,
                                        const std::vector<FaultEvent>& faults) {
  std::map<std::string, Coil*> by_id;
  for (auto& c : coils) by_id[c.coil_id] = &c;
  std::vector<std::string> warnings;
  for (const auto& s : samples) {
    auto it = by_id.find(s.coil_id);
    if (it == by_id.end()) {
      warnings.push_back("tensile sample for unknown coil " + s.coil_id);
      continue;
    }
    it->second->tensile_samples.push_back(s);
  }
  for (const auto& f : faults) {
    auto it = by_id.find(f.coil_id);
    if (it == by_id.end()) {
      warnings.push_back("fault for unknown coil " + f.coil_id);
      continue;
    }
    it->second->fault_events.push_back(f);
  }
  return warnings;
}

}  // namespace softsensor
