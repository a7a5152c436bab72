#include "hdpmean/csv.hpp"

#include <cmath>
#include <cstdio>

namespace hdpmean {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_int(long v) { return std::to_string(v); }

std::string format_uint(std::uint64_t v) { return std::to_string(v); }

namespace {

bool needs_quoting(const std::string& field) {
  return field.find_first_of(",\"\r\n") != std::string::npos;
}

std::string quoted(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

void CsvWriter::write_fields(std::span<const std::string> fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << (needs_quoting(fields[i]) ? quoted(fields[i]) : fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::header(std::span<const std::string> names) { write_fields(names); }

void CsvWriter::row(std::span<const std::string> fields) { write_fields(fields); }

}  // namespace hdpmean
