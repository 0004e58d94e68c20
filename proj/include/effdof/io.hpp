#ifndef EFFDOF_IO_HPP
#define EFFDOF_IO_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "effdof/estimators.hpp"
#include "effdof/montecarlo.hpp"

namespace effdof::io {

// ---------------------------------------------------------------------------------------------
// Input files

/// Components file: UTF-8 CSV, header `weight,variance,dof`, one component per line.
/// Blank lines are ignored; a trailing '\r' is tolerated. ParseError columns are 1-based field
/// positions.
ComponentSet parse_components(std::istream& in);
ComponentSet read_components_file(const std::filesystem::path& path);

/// Pseudo-values file: one finite real per line, blank lines ignored.
std::vector<double> parse_pseudo_values(std::istream& in);
std::vector<double> read_pseudo_values_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------------------------
// Tables

enum class Format { Csv, Json, Markdown };

Format parse_format(std::string_view name);
std::string_view to_string(Format format) noexcept;

/// Integer cells print as integers, Real cells with the requested number of decimals, Label
/// cells verbatim. Json output carries every Real at full precision.
struct Label {
  std::string text;
};
using Cell = std::variant<std::monostate, Label, std::int64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline constexpr int kDefaultPrecision = 3;
inline constexpr int kMaxPrecision = 12;

std::string render(const Table& table, Format format, int precision = kDefaultPrecision);

/// Rows: satterthwaite, boardman, corrected (value, numerator, denominator), then kish_neff and
/// design_effect of the weight column.
Table estimate_table(const ComponentSet& set);

enum class SimLayout {
  Bias,   ///< K, df, mean/SD uncorrected, mean/SD corrected, K x df
  Ratio,  ///< K, nu, M(Kish), M(Satt), M(Corr), K x nu, and the three ratios
};

SimLayout parse_layout(std::string_view name);
std::string_view to_string(SimLayout layout) noexcept;

Table simulation_table(const std::vector<SimCell>& cells, SimLayout layout);

/// Every SimCell field, one row per cell.
Table simulation_cells_table(const std::vector<SimCell>& cells);

/// Shortest round-trip text for a double ("1", "0.3", "2048.471").
std::string shortest(double value);

// ---------------------------------------------------------------------------------------------
// Run manifest

struct RunManifest {
  SimConfig config;
  std::string preset;
  std::string layout;
  std::string seed_source;  ///< "flag", "config" or "entropy"
  unsigned threads = 1;
  std::uint64_t weight_rejections = 0;
  double wall_clock_seconds = 0.0;
};

std::string manifest_to_json(const RunManifest& manifest);

/// Reads back the `config` object of a manifest (other keys are informational).
SimConfig config_from_manifest_json(std::string_view text);

}  // namespace effdof::io

#endif  // EFFDOF_IO_HPP
