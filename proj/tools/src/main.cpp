#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "softsensor/error.hpp"

#ifndef SOFTSENSOR_VERSION
#define SOFTSENSOR_VERSION "0.0.0"
#endif

using softsensor::cli::Options;

int main(int argc, char** argv) {
  CLI::App app{"Soft-sensor toolkit for inline material property estimation"};
  app.set_version_flag("--version", SOFTSENSOR_VERSION);
  app.require_subcommand(1);
  Options o;

  auto data = [&](CLI::App* c) { c->add_option("--data", o.data, "Directory with coils.csv, tensile.csv, faults.csv"); };
  auto out = [&](CLI::App* c) { c->add_option("--out", o.out, "Output directory"); };
  auto model = [&](CLI::App* c) { c->add_option("--model", o.model, "Serialized PLS model"); };
  auto usl = [&](CLI::App* c) {
    c->add_option("--usl-t1", o.usl_t1, "Upper specification limit for t1");
    c->add_option("--usl-t2", o.usl_t2, "Upper specification limit for t2");
  };
  auto rule = [&](CLI::App* c) {
    c->add_option("--rule", o.rule, "Fault rule")->check(CLI::IsMember({"t1", "t2", "t1-or-t2"}));
  };
  auto window = [&](CLI::App* c) { c->add_option("--window", o.window, "Moving-average window")->capture_default_str(); };
  auto seed = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed"); };

  auto* generate = app.add_subcommand("generate", "Generate a synthetic production data set");
  generate->add_option("--config", o.config, "Generator configuration (JSON)");
  seed(generate);
  out(generate);

  auto* fit = app.add_subcommand("fit", "Fit a PLS model on labeled coils");
  data(fit);
  out(fit);
  fit->add_option("--k", o.k, "Number of latent components (default 1)");

  auto* cv = app.add_subcommand("cv", "Leave-one-coil-out cross-validation");
  data(cv);
  out(cv);
  cv->add_option("--k-max", o.k_max, "Largest number of components to evaluate")->capture_default_str();
  cv->add_option("--k", o.k, "Components for cv_scatter.csv (default: selected k)");

  auto* score = app.add_subcommand("score", "Per-position estimates for every measurement");
  model(score);
  data(score);
  out(score);
  usl(score);
  rule(score);
  window(score);
  score->add_option("--coil", o.coil, "Score a single coil");

  auto* monitor = app.add_subcommand("monitor", "Stream measurements from stdin and emit alerts on stdout");
  model(monitor);
  usl(monitor);
  rule(monitor);
  window(monitor);

  auto* report = app.add_subcommand("report", "Fault metrics, correlations, risk and fault linkage");
  model(report);
  data(report);
  out(report);
  usl(report);
  rule(report);
  window(report);
  report->add_option("--min-count", o.min_count, "Minimum estimates per coil for risk.csv")->capture_default_str();
  report->add_option("--k", o.k, "Components for the cross-validated predictions (default: model k)");
  report->add_option("--predictions", o.predictions, "CSV with t1,t2,t1_hat,t2_hat instead of --data");

  auto* gmlvq = app.add_subcommand("gmlvq-eval", "GMLVQ separability of fault and out-of-spec measurements");
  model(gmlvq);
  data(gmlvq);
  out(gmlvq);
  usl(gmlvq);
  rule(gmlvq);
  seed(gmlvq);
  gmlvq->add_option("--splits", o.splits, "Number of random splits")->capture_default_str();
  gmlvq->add_option("--validation-size", o.validation_size, "Validation samples per split")->capture_default_str();
  gmlvq->add_flag("--shuffle-labels", o.shuffle_labels, "Permute class labels (null experiment)");

  auto* analyze = app.add_subcommand("analyze", "PCA, noise ranking and smoothed signals");
  data(analyze);
  out(analyze);
  window(analyze);
  analyze->add_option("--coil", o.coil, "Coil for the noise ranking (default: first neighbourhood-sampled coil)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  namespace cli = softsensor::cli;
  try {
    if (*generate) return cli::cmd_generate(o);
    if (*fit) return cli::cmd_fit(o);
    if (*cv) return cli::cmd_cv(o);
    if (*score) return cli::cmd_score(o);
    if (*monitor) return cli::cmd_monitor(o, std::cin, std::cout);
    if (*report) return cli::cmd_report(o);
    if (*gmlvq) return cli::cmd_gmlvq_eval(o);
    if (*analyze) return cli::cmd_analyze(o);
  } catch (const cli::UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
