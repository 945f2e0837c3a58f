#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

namespace softsensor::cli {

/// Bad flags or configuration; maps to exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config;
  std::string data;
  std::string out;
  std::string model;
  std::string predictions;
  std::string coil;
  std::string rule = "t1-or-t2";
  std::optional<std::uint64_t> seed;
  std::optional<double> usl_t1;
  std::optional<double> usl_t2;
  std::size_t window = 50;
  std::size_t min_count = 2000;
  std::optional<int> k;
  int k_max = 5;
  int splits = 100;
  int validation_size = 8;
  bool shuffle_labels = false;
};

int cmd_generate(const Options& o);
int cmd_fit(const Options& o);
int cmd_cv(const Options& o);
int cmd_score(const Options& o);
int cmd_monitor(const Options& o, std::istream& in, std::ostream& out);
int cmd_report(const Options& o);
int cmd_gmlvq_eval(const Options& o);
int cmd_analyze(const Options& o);

}  // namespace softsensor::cli
