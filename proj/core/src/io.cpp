#include "softsensor/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <system_error>

#include "softsensor/error.hpp"

namespace softsensor::io {

namespace {

constexpr std::size_t kMeasurementColumns = 2 + kSensorVariables;

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  return in;
}

// Yields non-empty, CR-stripped lines with their 1-based line numbers.
template <class Fn>
void for_each_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    fn(std::string_view(line), line_no);
  }
}

std::optional<long long> parse_integer(std::string_view field) {
  long long v = 0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

void expect_columns(std::size_t got, std::size_t want, std::size_t line_no) {
  if (got != want) {
    throw ParseError(line_no, "expected " + std::to_string(want) + " columns, found " +
                                  std::to_string(got));
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw Error("format_double: buffer too small");
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view field) {
  if (field.empty()) return std::nullopt;
  // from_chars rejects a leading '+'.
  if (field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw InvalidArgument("csv: no column named '" + std::string(name) + "'");
}

CsvTable read_csv(std::istream& in, const CsvFormat& format) {
  CsvTable table;
  bool first = true;
  std::size_t width = 0;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    auto fields = split_fields(line, format.delimiter);
    if (first) {
      first = false;
      width = fields.size();
      if (format.header) {
        for (auto f : fields) table.header.emplace_back(f);
        return;
      }
    }
    expect_columns(fields.size(), width, line_no);
    auto& row = table.rows.emplace_back();
    for (auto f : fields) row.emplace_back(f);
  });
  return table;
}

CsvTable read_csv(const std::filesystem::path& path, const CsvFormat& format) {
  auto in = open_input(path);
  return read_csv(in, format);
}

std::optional<SensorMeasurement> parse_measurement_row(std::string_view line, std::size_t line_no,
                                                       const CsvFormat& format,
                                                       std::string& error) {
  const auto fields = split_fields(line, format.delimiter);
  expect_columns(fields.size(), kMeasurementColumns, line_no);
  SensorMeasurement m;
  const auto ts = parse_double(fields[0]);
  if (!ts) {
    error = "malformed timestamp '" + std::string(fields[0]) + "'";
    return std::nullopt;
  }
  m.timestamp = *ts;
  if (fields[1].empty()) {
    error = "empty coil_id";
    return std::nullopt;
  }
  m.coil_id = std::string(fields[1]);
  for (std::size_t j = 0; j < kSensorVariables; ++j) {
    const auto v = parse_double(fields[2 + j]);
    if (!v) {
      error = "malformed value for sv" + std::to_string(j + 1) + " '" +
              std::string(fields[2 + j]) + "'";
      return std::nullopt;
    }
    m.values[j] = *v;
  }
  return m;
}

MeasurementParse parse_measurements(std::istream& in, const CsvFormat& format) {
  MeasurementParse result;
  std::map<std::string, std::size_t> index;
  bool expect_header = format.header;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    if (expect_header) {
      expect_header = false;
      expect_columns(split_fields(line, format.delimiter).size(), kMeasurementColumns, line_no);
      return;
    }
    std::string error;
    auto m = parse_measurement_row(line, line_no, format, error);
    if (!m) {
      result.errors.push_back({line_no, error});
      return;
    }
    auto [it, inserted] = index.try_emplace(m->coil_id, result.coils.size());
    if (inserted) {
      auto& c = result.coils.emplace_back();
      c.coil_id = m->coil_id;
    }
    auto& coil = result.coils[it->second];
    m->position_index = coil.measurements.size();
    coil.measurements.push_back(std::move(*m));
  });
  return result;
}

MeasurementParse parse_measurement_file(const std::filesystem::path& path,
                                        const CsvFormat& format) {
  auto in = open_input(path);
  return parse_measurements(in, format);
}

std::string measurement_header(char delimiter) {
  std::string h = "timestamp";
  h += delimiter;
  h += "coil_id";
  for (std::size_t j = 1; j <= kSensorVariables; ++j) {
    h += delimiter;
    h += "sv" + std::to_string(j);
  }
  return h;
}

void write_measurements(std::ostream& out, const std::vector<Coil>& coils) {
  out << measurement_header() << '\n';
  for (const auto& c : coils) {
    for (const auto& m : c.measurements) {
      out << format_double(m.timestamp) << ',' << m.coil_id;
      for (double v : m.values) out << ',' << format_double(v);
      out << '\n';
    }
  }
}

std::vector<TensileSample> parse_tensile(std::istream& in, const CsvFormat& format) {
  std::vector<TensileSample> out;
  bool expect_header = format.header;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line, format.delimiter);
    expect_columns(fields.size(), 5, line_no);
    if (expect_header) {
      expect_header = false;
      return;
    }
    const auto pos = parse_integer(fields[1]);
    const auto t1 = parse_double(fields[2]);
    const auto t2 = parse_double(fields[3]);
    const auto reps = parse_integer(fields[4]);
    if (!pos || *pos < 0 || !t1 || !t2 || !reps || *reps < 1 || !std::isfinite(*t1) ||
        !std::isfinite(*t2)) {
      throw ParseError(line_no, "malformed tensile record");
    }
    out.push_back({std::string(fields[0]), static_cast<std::size_t>(*pos), *t1, *t2,
                   static_cast<int>(*reps)});
  });
  return out;
}

std::vector<TensileSample> parse_tensile_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_tensile(in);
}

void write_tensile(std::ostream& out, const std::vector<TensileSample>& samples) {
  out << "coil_id,position_index,t1,t2,replicates\n";
  for (const auto& s : samples) {
    out << s.coil_id << ',' << s.position_index << ',' << format_double(s.t1) << ','
        << format_double(s.t2) << ',' << s.replicate_count << '\n';
  }
}

std::string_view to_string(FaultRefKind kind) {
  return kind == FaultRefKind::Measurement ? "measurement" : "hour";
}

std::vector<FaultEvent> parse_fault_log(std::istream& in, const CsvFormat& format) {
  std::vector<FaultEvent> out;
  bool expect_header = format.header;
  for_each_line(in, [&](std::string_view line, std::size_t line_no) {
    const auto fields = split_fields(line, format.delimiter);
    expect_columns(fields.size(), 3, line_no);
    if (expect_header) {
      expect_header = false;
      return;
    }
    FaultEvent f;
    f.coil_id = std::string(fields[0]);
    if (fields[1] == "measurement") {
      f.kind = FaultRefKind::Measurement;
    } else if (fields[1] == "hour") {
      f.kind = FaultRefKind::Hour;
    } else {
      throw ParseError(line_no, "unknown ref_kind '" + std::string(fields[1]) + "'");
    }
    const auto ref = parse_integer(fields[2]);
    if (!ref) throw ParseError(line_no, "malformed ref_value");
    f.reference = *ref;
    out.push_back(std::move(f));
  });
  return out;
}

std::vector<FaultEvent> parse_fault_log_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_fault_log(in);
}

void write_fault_log(std::ostream& out, const std::vector<FaultEvent>& faults) {
  out << "coil_id,ref_kind,ref_value\n";
  for (const auto& f : faults) {
    out << f.coil_id << ',' << to_string(f.kind) << ',' << f.reference << '\n';
  }
}

DataDirectory load_data_directory(const std::filesystem::path& dir) {
  DataDirectory d;
  auto parsed = parse_measurement_file(dir / "coils.csv");
  d.coils = std::move(parsed.coils);
  d.record_errors = std::move(parsed.errors);
  std::vector<TensileSample> samples;
  if (std::filesystem::exists(dir / "tensile.csv")) samples = parse_tensile_file(dir / "tensile.csv");
  std::vector<FaultEvent> faults;
  if (std::filesystem::exists(dir / "faults.csv")) faults = parse_fault_log_file(dir / "faults.csv");
  d.warnings = attach_records(d.coils, samples, faults);
  return d;
}

}  // namespace softsensor::io
