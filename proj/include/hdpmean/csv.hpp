#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace hdpmean {

/// Doubles rendered with 17 significant digits (lossless round trip);
/// infinities as "inf"/"-inf".
std::string format_double(double v);
std::string format_int(long v);
std::string format_uint(std::uint64_t v);

/// RFC 4180 CSV: fields holding commas, quotes, or newlines get quoted, and
/// embedded quotes are doubled. A header row is always written first.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::span<const std::string> names);
  void row(std::span<const std::string> fields);

 private:
  void write_fields(std::span<const std::string> fields);
  std::ostream& out_;
};

}  // namespace hdpmean
