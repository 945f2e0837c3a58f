#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "softsensor/data_model.hpp"

namespace softsensor::io {

struct CsvFormat {
  char delimiter = ',';
  bool header = true;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
/// Strict decimal parse of the whole field; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view field);

std::vector<std::string_view> split_fields(std::string_view line, char delimiter);

/// Generic table reader shared by every CSV this project writes.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
};

CsvTable read_csv(std::istream& in, const CsvFormat& format = {});
CsvTable read_csv(const std::filesystem::path& path, const CsvFormat& format = {});

// ---------------------------------------------------------------------------
// Measurement files: timestamp,coil_id,sv1..sv20

struct RecordError {
  std::size_t line = 0;
  std::string message;
};

struct MeasurementParse {
  std::vector<Coil> coils;  // in order of first appearance
  std::vector<RecordError> errors;
};

/// Parses one data row. Returns nullopt and fills `error` for a malformed
/// numeric field; throws ParseError when the column count is wrong.
std::optional<SensorMeasurement> parse_measurement_row(std::string_view line, std::size_t line_no,
                                                       const CsvFormat& format,
                                                       std::string& error);

MeasurementParse parse_measurements(std::istream& in, const CsvFormat& format = {});
MeasurementParse parse_measurement_file(const std::filesystem::path& path,
                                        const CsvFormat& format = {});

std::string measurement_header(char delimiter = ',');
void write_measurements(std::ostream& out, const std::vector<Coil>& coils);

// ---------------------------------------------------------------------------
// Tensile file: coil_id,position_index,t1,t2,replicates

std::vector<TensileSample> parse_tensile(std::istream& in, const CsvFormat& format = {});
std::vector<TensileSample> parse_tensile_file(const std::filesystem::path& path);
void write_tensile(std::ostream& out, const std::vector<TensileSample>& samples);

// ---------------------------------------------------------------------------
// Fault log: coil_id,ref_kind,ref_value  (ref_kind: measurement | hour)

std::vector<FaultEvent> parse_fault_log(std::istream& in, const CsvFormat& format = {});
std::vector<FaultEvent> parse_fault_log_file(const std::filesystem::path& path);
void write_fault_log(std::ostream& out, const std::vector<FaultEvent>& faults);

std::string_view to_string(FaultRefKind kind);

/// Loads coils.csv, tensile.csv and (if present) faults.csv from a data
/// directory and attaches the records to their coils.
struct DataDirectory {
  std::vector<Coil> coils;
  std::vector<RecordError> record_errors;
  std::vector<std::string> warnings;
};

DataDirectory load_data_directory(const std::filesystem::path& dir);

}  // namespace softsensor::io
