// Small text helpers shared by the library and the CLI.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hk::util {

/// A named initializer such as "gaussian(0.5, 20)".
struct CallSpec {
  std::string name;
  std::vector<double> args;
};

/// Parses `name` or `name(a, b, ...)`. Throws std::invalid_argument.
CallSpec parse_call(std::string_view text);

/// printf("%.*g") into a std::string.
std::string fmt_g(double v, int digits);

/// Parses "start:stop:step" (inclusive stop, within half a step) or a
/// comma-separated list of values.
std::vector<double> parse_range(std::string_view text);

/// Evenly spaced grid with inclusive endpoints.
std::vector<double> linspace(double first, double last, std::size_t count);

/// FNV-1a 64-bit hash, printed as 16 hex digits by hex64.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Column index or -1.
  int column(std::string_view name) const;
};

/// Minimal CSV reader for the files this project writes (no quoting).
CsvTable read_csv(std::istream& is);

}  // namespace hk::util
