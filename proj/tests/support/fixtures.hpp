#pragma once

#include <filesystem>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "softsensor/data_model.hpp"

namespace fixture {

inline softsensor::Coil coil_from(const std::string& id, const Eigen::MatrixXd& X) {
  softsensor::Coil c;
  c.coil_id = id;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    softsensor::SensorMeasurement m;
    m.coil_id = id;
    m.position_index = static_cast<std::size_t>(i);
    m.timestamp = static_cast<double>(i) / 3.0;
    for (Eigen::Index j = 0; j < X.cols() && j < 20; ++j) m.values[static_cast<std::size_t>(j)] = X(i, j);
    c.measurements.push_back(m);
  }
  return c;
}

inline Eigen::MatrixXd gaussian(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::MatrixXd X(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) X(i, j) = n(rng);
  return X;
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) {
    path = std::filesystem::temp_directory_path() /
           (name + "-" + std::to_string(std::random_device{}()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

}  // namespace fixture
