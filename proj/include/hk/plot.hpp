// Static SVG rendering of the CSV tables this project writes. Output depends
// only on the input table and options: fixed canvas, fixed number format,
// no timestamps.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "hk/util.hpp"

namespace hk::plot {

class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Kind { heatmap, lines, trajectory };

Kind kind_from_string(std::string_view s);

struct Options {
  bool log_x = false;   ///< log-scaled horizontal axis (time for trajectories)
  std::string title;
  std::string metadata; ///< embedded verbatim as an XML comment
};

/// Phase diagram: needs columns R, sigma, Q_mean (replicates averaged).
std::string heatmap_svg(const util::CsvTable& table, const Options& opt);

/// First column is x; every other column is one line.
std::string lines_svg(const util::CsvTable& table, const Options& opt);

/// Needs column t followed by x0..x{N-1}; draws one world-line per agent,
/// broken where it wraps around the circle.
std::string trajectory_svg(const util::CsvTable& table, const Options& opt);

std::string render(Kind kind, const util::CsvTable& table, const Options& opt);

}  // namespace hk::plot
