#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "manifest.hpp"
#include "softsensor/error.hpp"
#include "softsensor/evaluation.hpp"
#include "softsensor/fault_detection.hpp"
#include "softsensor/gmlvq.hpp"
#include "softsensor/io.hpp"
#include "softsensor/metrics.hpp"
#include "softsensor/ols.hpp"
#include "softsensor/pca.hpp"
#include "softsensor/pls.hpp"
#include "softsensor/preprocess.hpp"
#include "softsensor/stats.hpp"
#include "softsensor/synthgen.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace softsensor::cli {
namespace {

using io::format_double;

fs::path output_dir(const Options& o) {
  if (o.out.empty()) throw UsageError("--out is required");
  fs::path dir(o.out);
  fs::create_directories(dir);
  return dir;
}

class Outputs {
 public:
  explicit Outputs(fs::path dir) : dir_(std::move(dir)) {}

  void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    body(out);
    out.close();
    if (!out) throw Error("write failed: " + path.string());
    paths_.push_back(path);
  }

  void add(const fs::path& p) { paths_.push_back(p); }

  void finish(RunManifest manifest) {
    manifest.outputs = paths_;
    manifest.write(dir_);
  }

  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> paths_;
};

struct LoadedData {
  std::vector<Coil> coils;
  std::vector<fs::path> inputs;
};

LoadedData load_data(const Options& o) {
  if (o.data.empty()) throw UsageError("--data is required");
  const fs::path dir(o.data);
  if (!fs::exists(dir / "coils.csv")) throw UsageError("no coils.csv in " + dir.string());
  auto d = io::load_data_directory(dir);
  for (const auto& e : d.record_errors) {
    std::cerr << "warning: coils.csv line " << e.line << ": " << e.message << '\n';
  }
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';
  LoadedData out{std::move(d.coils), {dir / "coils.csv"}};
  for (const char* f : {"tensile.csv", "faults.csv"}) {
    if (fs::exists(dir / f)) out.inputs.push_back(dir / f);
  }
  return out;
}

DatasetBuild labeled(const std::vector<Coil>& coils, const AggregationPolicy& policy) {
  auto build = build_labeled_dataset(coils, policy);
  for (const auto& w : build.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& c : build.excluded_coils) std::cerr << "warning: coil " << c << " excluded\n";
  if (build.data.rows() == 0) throw Error("no labeled rows in the data directory");
  return build;
}

PlsModel load_model(const Options& o) {
  if (o.model.empty()) throw UsageError("--model is required");
  if (!fs::exists(o.model)) throw UsageError("model file not found: " + o.model);
  return load_pls(o.model);
}

SpecificationLimits limits(const Options& o) {
  if (!o.usl_t1 || !o.usl_t2) throw UsageError("--usl-t1 and --usl-t2 are required");
  return {*o.usl_t1, *o.usl_t2};
}

FaultRule rule(const Options& o) {
  auto r = parse_fault_rule(o.rule);
  if (!r) throw UsageError("--rule must be t1, t2 or t1-or-t2");
  return *r;
}

std::string dump(const ordered_json& j) { return j.dump(); }

std::string metric(const std::optional<double>& v) { return v ? format_double(*v) : "undefined"; }

void write_row(std::ostream& out, const Eigen::RowVectorXd& r) {
  for (Eigen::Index i = 0; i < r.size(); ++i) out << ',' << format_double(r[i]);
}

void sensor_columns(std::ostream& out) {
  for (std::size_t j = 1; j <= kSensorVariables; ++j) out << ",sv" << j;
}

const Coil* find_coil(const std::vector<Coil>& coils, const std::string& id) {
  for (const auto& c : coils) {
    if (c.coil_id == id) return &c;
  }
  return nullptr;
}

}  // namespace

int cmd_generate(const Options& o) {
  synth::GeneratorConfig config;
  std::vector<fs::path> inputs;
  try {
    if (!o.config.empty()) {
      std::ifstream in(o.config, std::ios::binary);
      if (!in) throw UsageError("cannot read config " + o.config);
      std::ostringstream ss;
      ss << in.rdbuf();
      config = synth::config_from_json(ss.str());
      inputs.push_back(o.config);
    }
    if (o.seed) config.seed = *o.seed;
    config.validate();
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  Outputs outputs(output_dir(o));
  const auto data = synth::generate(config);
  for (const auto& p : synth::write_generated(data, outputs.dir())) outputs.add(p);
  outputs.finish({"generate", dump(ordered_json::parse(synth::config_to_json(config))), inputs,
                  config.seed, {}});
  return 0;
}

int cmd_fit(const Options& o) {
  const int k = o.k.value_or(1);
  if (k < 1) throw UsageError("--k must be positive");
  auto loaded = load_data(o);
  Outputs outputs(output_dir(o));
  const auto build = labeled(loaded.coils, AggregationPolicy::infer(loaded.coils));
  const auto model = pls_fit(build.data, k);
  outputs.write("model.json", [&](std::ostream& out) { out << serialize_pls(model); });
  outputs.finish({"fit", dump({{"k", k}}), loaded.inputs, std::nullopt, {}});
  return 0;
}

int cmd_cv(const Options& o) {
  if (o.k_max < 1) throw UsageError("--k-max must be positive");
  auto loaded = load_data(o);
  Outputs outputs(output_dir(o));
  const auto build = labeled(loaded.coils, AggregationPolicy::infer(loaded.coils));
  const auto& data = build.data;

  KSelection sel;
  try {
    sel = select_k(data, o.k_max);
  } catch (const DegenerateColumn&) {
    throw;
  } catch (const InvalidArgument& e) {
    throw UsageError(e.what());
  }
  outputs.write("rmse_vs_k.csv", [&](std::ostream& out) {
    out << "k,rmse_t1,rmse_t2,rmse,standard_error,selected\n";
    for (const auto& r : sel.rows) {
      out << r.k << ',' << format_double(r.mean_rmse[0]) << ',' << format_double(r.mean_rmse[1]) << ','
          << format_double(r.overall) << ',' << format_double(r.standard_error) << ','
          << (r.k == sel.selected_k ? 1 : 0) << '\n';
    }
  });

  std::vector<std::optional<CvResult>> ols(kSensorVariables);
  for (std::size_t j = 0; j < kSensorVariables; ++j) {
    try {
      ols[j] = leave_one_coil_out_cv(data, ols_fitter(j));
    } catch (const DegenerateColumn& e) {
      std::cerr << "warning: sv" << j + 1 << ": " << e.what() << '\n';
    }
  }
  outputs.write("per-variable-ols.csv", [&](std::ostream& out) {
    out << "variable,rmse_t1,rmse_t2,rmse\n";
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      out << "sv" << j + 1;
      if (ols[j] && !ols[j]->folds.empty()) {
        out << ',' << format_double(ols[j]->mean_rmse[0]) << ',' << format_double(ols[j]->mean_rmse[1])
            << ',' << format_double(ols[j]->overall_rmse()) << '\n';
      } else {
        out << ",undefined,undefined,undefined\n";
      }
    }
  });

  const int k = o.k.value_or(sel.selected_k);
  const auto cv = leave_one_coil_out_cv(data, k);
  for (const auto& w : cv.warnings) std::cerr << "warning: " << w << '\n';
  outputs.write("cv_scatter.csv", [&](std::ostream& out) { write_cv_scatter(out, cv, data); });
  outputs.finish({"cv", dump({{"k_max", o.k_max}, {"k", k}}), loaded.inputs, std::nullopt, {}});
  return 0;
}

int cmd_score(const Options& o) {
  const auto model = load_model(o);
  auto loaded = load_data(o);
  loaded.inputs.push_back(o.model);
  std::optional<SpecificationLimits> lim;
  if (o.usl_t1 || o.usl_t2) lim = limits(o);
  StreamConfig config;
  if (lim) config.limits = *lim;
  config.rule = rule(o);
  config.window = o.window;
  if (config.window == 0) throw UsageError("--window must be positive");

  std::vector<const Coil*> selected;
  if (!o.coil.empty()) {
    const auto* c = find_coil(loaded.coils, o.coil);
    if (!c) throw UsageError("coil not found: " + o.coil);
    selected.push_back(c);
  } else {
    for (const auto& c : loaded.coils) selected.push_back(&c);
  }

  Outputs outputs(output_dir(o));
  std::vector<AlertEvent> alerts;
  outputs.write("estimates.csv", [&](std::ostream& out) {
    out << "coil_id,position_index,t1_hat,t2_hat,t1_smoothed,t2_smoothed\n";
    for (const auto* c : selected) {
      const auto s = stream_score(model, *c, config);
      for (Eigen::Index i = 0; i < s.estimates.rows(); ++i) {
        out << c->coil_id << ',' << c->measurements[static_cast<std::size_t>(i)].position_index;
        write_row(out, s.estimates.row(i));
        write_row(out, s.smoothed.row(i));
        out << '\n';
      }
      alerts.insert(alerts.end(), s.alerts.begin(), s.alerts.end());
    }
  });
  if (lim) {
    outputs.write("alerts.jsonl", [&](std::ostream& out) {
      for (const auto& a : alerts) out << alert_json(a) << '\n';
    });
  }
  ordered_json cfg{{"window", o.window}, {"rule", o.rule}, {"coil", o.coil}};
  if (lim) {
    cfg["usl_t1"] = lim->usl_t1;
    cfg["usl_t2"] = lim->usl_t2;
  }
  outputs.finish({"score", dump(cfg), loaded.inputs, std::nullopt, {}});
  return 0;
}

int cmd_monitor(const Options& o, std::istream& in, std::ostream& out) {
  const auto model = load_model(o);
  StreamConfig config;
  config.limits = limits(o);
  config.rule = rule(o);
  config.window = o.window;
  if (config.window == 0) throw UsageError("--window must be positive");

  // One scorer per coil; positions count measurements within the coil.
  std::map<std::string, std::pair<StreamScorer, std::size_t>> scorers;
  std::string line;
  std::size_t line_no = 0;
  const io::CsvFormat format;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1 && line.rfind("timestamp", 0) == 0) continue;
    std::string error;
    std::optional<SensorMeasurement> m;
    try {
      m = io::parse_measurement_row(line, line_no, format, error);
    } catch (const ParseError& e) {
      error = e.what();
    }
    if (!m) {
      std::cerr << "warning: line " << line_no << ": " << error << '\n';
      continue;
    }
    auto it = scorers.find(m->coil_id);
    if (it == scorers.end()) {
      it = scorers.emplace(m->coil_id, std::pair{StreamScorer(model, m->coil_id, config), std::size_t{0}})
               .first;
    }
    auto& [scorer, position] = it->second;
    const auto step = scorer.push(m->values, position++);
    if (step.alert) out << alert_json(*step.alert) << '\n' << std::flush;
  }
  return 0;
}

int cmd_report(const Options& o) {
  const auto lim = limits(o);
  if (o.data.empty() && o.predictions.empty()) throw UsageError("--data or --predictions is required");

  std::vector<fs::path> inputs;
  Eigen::MatrixXd truth, pred;
  std::optional<PlsModel> model;
  LoadedData loaded;
  std::optional<DatasetBuild> build;
  AggregationPolicy policy;
  int k = 0;

  if (!o.data.empty()) {
    model = load_model(o);
    loaded = load_data(o);
    inputs = loaded.inputs;
    inputs.push_back(o.model);
    policy = AggregationPolicy::infer(loaded.coils);
    build = labeled(loaded.coils, policy);
  }
  if (!o.predictions.empty()) {
    if (!fs::exists(o.predictions)) throw UsageError("predictions file not found: " + o.predictions);
    const auto table = io::read_csv(fs::path(o.predictions));
    const std::array<std::size_t, 4> cols{table.column("t1"), table.column("t2"), table.column("t1_hat"),
                                          table.column("t2_hat")};
    const auto n = static_cast<Eigen::Index>(table.rows.size());
    truth.resize(n, 2);
    pred.resize(n, 2);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = table.rows[static_cast<std::size_t>(i)];
      for (std::size_t c = 0; c < 4; ++c) {
        const auto v = io::parse_double(row.at(cols[c]));
        if (!v) throw ParseError(static_cast<std::size_t>(i) + 2, "malformed number in " + o.predictions);
        (c < 2 ? truth : pred)(i, static_cast<Eigen::Index>(c % 2)) = *v;
      }
    }
    inputs.push_back(o.predictions);
  } else {
    k = o.k.value_or(model->k);
    const auto cv = leave_one_coil_out_cv(build->data, k);
    for (const auto& w : cv.warnings) std::cerr << "warning: " << w << '\n';
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < cv.predictions.rows(); ++i) {
      if (cv.predictions.row(i).allFinite()) keep.push_back(i);
    }
    truth.resize(static_cast<Eigen::Index>(keep.size()), 2);
    pred.resize(static_cast<Eigen::Index>(keep.size()), 2);
    for (std::size_t r = 0; r < keep.size(); ++r) {
      truth.row(static_cast<Eigen::Index>(r)) = build->data.Y.row(keep[r]);
      pred.row(static_cast<Eigen::Index>(r)) = cv.predictions.row(keep[r]);
    }
  }

  Outputs outputs(output_dir(o));
  outputs.write("metrics.csv", [&](std::ostream& out) {
    out << "rule,tp,fn,fp,tn,precision,recall,f1,f3\n";
    for (auto r : {FaultRule::T1Only, FaultRule::T2Only, FaultRule::T1OrT2}) {
      std::vector<bool> p, t;
      for (Eigen::Index i = 0; i < truth.rows(); ++i) {
        t.push_back(classify_fault(truth.row(i).transpose(), lim, r));
        p.push_back(classify_fault(pred.row(i).transpose(), lim, r));
      }
      const auto c = confusion(p, t);
      const auto s1 = precision_recall_fbeta(c, 1.0);
      const auto s3 = precision_recall_fbeta(c, 3.0);
      out << to_string(r) << ',' << c.tp << ',' << c.fn << ',' << c.fp << ',' << c.tn << ','
          << metric(s1.precision) << ',' << metric(s1.recall) << ',' << metric(s1.f_beta) << ','
          << metric(s3.f_beta) << '\n';
    }
  });

  if (build) {
    outputs.write("correlations.csv", [&](std::ostream& out) {
      out << "subset,variable,t1,t2\n";
      const auto& d = build->data;
      for (const bool with_neighborhood : {false, true}) {
        std::vector<std::size_t> rows;
        for (std::size_t i = 0; i < d.rows(); ++i) {
          if (with_neighborhood || !policy.neighborhood_coils.contains(d.row_coil[i])) rows.push_back(i);
        }
        const auto sub = d.select(rows);
        const std::string name = with_neighborhood ? "all" : "without_neighborhood_coils";
        auto corr = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) -> std::string {
          try {
            return format_double(pearson_correlation({a.data(), static_cast<std::size_t>(a.size())},
                                                     {b.data(), static_cast<std::size_t>(b.size())}));
          } catch (const InvalidArgument&) {
            return "undefined";
          }
        };
        std::optional<Eigen::MatrixXd> scores;
        try {
          if (sub.rows() >= 3) scores = pca_project(pca_fit(sub.X, 2), sub.X);
        } catch (const InvalidArgument& e) {
          std::cerr << "warning: " << name << ": " << e.what() << '\n';
        }
        for (int c = 0; c < 2; ++c) {
          out << name << ",PC" << c + 1;
          for (int t = 0; t < 2; ++t) {
            out << ',' << (scores ? corr(scores->col(c), sub.Y.col(t)) : std::string("undefined"));
          }
          out << '\n';
        }
        out << name << ",t1," << corr(sub.Y.col(0), sub.Y.col(0)) << ',' << corr(sub.Y.col(0), sub.Y.col(1))
            << '\n';
      }
    });

    StreamConfig config;
    config.limits = lim;
    config.rule = rule(o);
    config.window = o.window;
    if (config.window == 0) throw UsageError("--window must be positive");
    const auto risk = build_risk_report(*model, loaded.coils, config, o.min_count);
    for (const auto& c : risk.excluded_coils) {
      std::cerr << "warning: coil " << c << " has fewer than " << o.min_count << " estimates\n";
    }
    outputs.write("risk.csv", [&](std::ostream& out) { write_risk_csv(out, risk); });

    std::vector<Eigen::MatrixXd> estimates;
    for (const auto& c : loaded.coils) estimates.push_back(pls_predict(*model, c.matrix()));
    const auto links = link_faults(loaded.coils, estimates, lim);
    outputs.write("fault_links.csv", [&](std::ostream& out) { write_fault_links_csv(out, links); });
  }

  ordered_json cfg{{"usl_t1", lim.usl_t1}, {"usl_t2", lim.usl_t2}, {"rule", o.rule},
                   {"window", o.window}, {"min_count", o.min_count}, {"k", k}};
  outputs.finish({"report", dump(cfg), inputs, std::nullopt, {}});
  return 0;
}

int cmd_gmlvq_eval(const Options& o) {
  const auto lim = limits(o);
  const auto r = rule(o);
  const auto model = load_model(o);
  auto loaded = load_data(o);
  loaded.inputs.push_back(o.model);
  if (o.splits < 1 || o.validation_size < 2) throw UsageError("--splits >= 1 and --validation-size >= 2");
  const std::uint64_t seed = o.seed.value_or(0);

  // Neighbourhood-sampled coils were not released to production, so they
  // cannot contribute faults or fault-free negatives.
  const auto policy = AggregationPolicy::infer(loaded.coils);
  std::vector<Eigen::RowVectorXd> positives, candidates;
  for (const auto& coil : loaded.coils) {
    if (coil.measurements.empty() || policy.neighborhood_coils.contains(coil.coil_id)) continue;
    std::set<std::size_t> fault_rows, linked_rows;
    for (const auto& f : coil.fault_events) {
      for (auto i : resolve_fault(coil, f)) {
        fault_rows.insert(i);
        if (f.kind == FaultRefKind::Measurement) linked_rows.insert(i);
      }
    }
    const auto X = coil.matrix();
    const auto est = pls_predict(model, X);
    for (auto i : linked_rows) positives.push_back(X.row(static_cast<Eigen::Index>(i)));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (!fault_rows.contains(static_cast<std::size_t>(i)) && classify_fault(est.row(i).transpose(), lim, r)) {
        candidates.push_back(X.row(i));
      }
    }
  }
  const std::size_t n = positives.size();
  if (n < 2) throw Error("gmlvq-eval: fewer than two measurement-linked faults");
  if (candidates.size() < n) throw Error("gmlvq-eval: not enough out-of-spec measurements without faults");

  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x6d6c7671u};
  std::mt19937_64 rng(seq);
  std::vector<std::size_t> idx(candidates.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::shuffle(idx.begin(), idx.end(), rng);

  Eigen::MatrixXd X(static_cast<Eigen::Index>(2 * n), static_cast<Eigen::Index>(kSensorVariables));
  std::vector<int> labels(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    X.row(static_cast<Eigen::Index>(i)) = positives[i];
    labels[i] = 1;
    X.row(static_cast<Eigen::Index>(n + i)) = candidates[idx[i]];
    labels[n + i] = 0;
  }
  if (o.shuffle_labels) std::shuffle(labels.begin(), labels.end(), rng);

  SplitEvalConfig config;
  config.n_splits = o.splits;
  config.validation_size = o.validation_size;
  config.seed = seed;
  config.gmlvq.seed = seed;
  const auto result = repeated_split_auc(X, labels, config);

  Outputs outputs(output_dir(o));
  outputs.write("gmlvq_auc.csv", [&](std::ostream& out) {
    out << "split,auc\n";
    for (std::size_t s = 0; s < result.split_auc.size(); ++s) {
      out << s << ',' << format_double(result.split_auc[s]) << '\n';
    }
  });
  outputs.write("gmlvq_summary.csv", [&](std::ostream& out) {
    out << "n_positive,n_negative,n_splits,mean_auc\n"
        << n << ',' << n << ',' << result.split_auc.size() << ',' << format_double(result.mean_auc) << '\n';
  });
  ordered_json cfg{{"usl_t1", lim.usl_t1},   {"usl_t2", lim.usl_t2},
                   {"rule", o.rule},         {"splits", o.splits},
                   {"validation_size", o.validation_size}, {"shuffle_labels", o.shuffle_labels}};
  outputs.finish({"gmlvq-eval", dump(cfg), loaded.inputs, seed, {}});
  return 0;
}

int cmd_analyze(const Options& o) {
  if (o.window == 0) throw UsageError("--window must be positive");
  auto loaded = load_data(o);
  if (loaded.coils.empty()) throw Error("analyze: no measurements");
  Outputs outputs(output_dir(o));

  Eigen::Index total = 0;
  for (const auto& c : loaded.coils) total += static_cast<Eigen::Index>(c.measurements.size());
  Eigen::MatrixXd all(total, static_cast<Eigen::Index>(kSensorVariables));
  Eigen::Index r = 0;
  for (const auto& c : loaded.coils) {
    const auto m = c.matrix();
    all.middleRows(r, m.rows()) = m;
    r += m.rows();
  }
  const int k = static_cast<int>(std::min<Eigen::Index>(all.cols(), all.rows() - 1));
  if (k >= 1) {
    const auto pca = pca_fit(all, k);
    outputs.write("pca.csv", [&](std::ostream& out) {
      out << "component,eigenvalue,explained_variance_ratio";
      sensor_columns(out);
      out << '\n';
      for (int c = 0; c < k; ++c) {
        out << c + 1 << ',' << format_double(pca.eigenvalues[c]) << ','
            << format_double(pca.explained_variance_ratio[c]);
        write_row(out, pca.loadings.col(c).transpose());
        out << '\n';
      }
    });
  }

  const Coil* coil = nullptr;
  if (!o.coil.empty()) {
    coil = find_coil(loaded.coils, o.coil);
    if (!coil) throw UsageError("coil not found: " + o.coil);
  } else {
    const auto policy = AggregationPolicy::infer(loaded.coils);
    for (const auto& c : loaded.coils) {
      if (policy.neighborhood_coils.contains(c.coil_id)) {
        coil = &c;
        break;
      }
    }
    if (!coil) coil = &loaded.coils.front();
  }

  const PlateauRange plateau;
  if (coil->measurements.size() >= std::max(plateau.end, o.window)) {
    const auto noise = noise_ranking(*coil, plateau, o.window);
    for (const auto& w : noise.warnings) std::cerr << "warning: " << w << '\n';
    const auto order = noise.order();
    std::vector<std::size_t> rank(kSensorVariables);
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = i + 1;
    outputs.write("noise.csv", [&](std::ostream& out) {
      out << "variable,plateau_std,transition,fraction,rank\n";
      for (std::size_t j = 0; j < kSensorVariables; ++j) {
        out << "sv" << j + 1 << ',' << format_double(noise.plateau_std[j]) << ','
            << format_double(noise.transition[j]) << ',' << format_double(noise.fraction[j]) << ','
            << rank[j] << '\n';
      }
    });
  } else {
    std::cerr << "warning: coil " << coil->coil_id << " is too short for the noise ranking\n";
  }

  if (coil->measurements.size() >= o.window) {
    const auto X = coil->matrix();
    std::vector<std::vector<double>> smooth(kSensorVariables);
    for (std::size_t j = 0; j < kSensorVariables; ++j) {
      std::vector<double> s(X.rows());
      for (Eigen::Index i = 0; i < X.rows(); ++i) s[static_cast<std::size_t>(i)] = X(i, static_cast<Eigen::Index>(j));
      smooth[j] = moving_average(s, o.window);
    }
    outputs.write("smoothed.csv", [&](std::ostream& out) {
      out << "coil_id,position_index";
      sensor_columns(out);
      out << '\n';
      for (std::size_t i = 0; i < coil->measurements.size(); ++i) {
        out << coil->coil_id << ',' << coil->measurements[i].position_index;
        for (std::size_t j = 0; j < kSensorVariables; ++j) out << ',' << format_double(smooth[j][i]);
        out << '\n';
      }
    });
  }

  outputs.finish({"analyze", dump({{"window", o.window}, {"coil", coil->coil_id}}), loaded.inputs,
                  std::nullopt, {}});
  return 0;
}

}  // namespace softsensor::cli
