#include <algorithm>
#include <string>

#include <fmt/format.h>
#include <fmt/ranges.h>
#include <json.hpp>

#include "effdof/io.hpp"

namespace effdof::io {

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  if (name == "markdown" || name == "md") return Format::Markdown;
  throw ValidationError("unknown format '" + std::string(name) + "' (csv|json|markdown)");
}

std::string_view to_string(Format format) noexcept {
  switch (format) {
    case Format::Csv:
      return "csv";
    case Format::Json:
      return "json";
    case Format::Markdown:
      return "markdown";
  }
  return "csv";
}

SimLayout parse_layout(std::string_view name) {
  if (name == "bias") return SimLayout::Bias;
  if (name == "ratio") return SimLayout::Ratio;
  throw ValidationError("unknown layout '" + std::string(name) + "' (bias|ratio)");
}

std::string_view to_string(SimLayout layout) noexcept {
  return layout == SimLayout::Bias ? "bias" : "ratio";
}

std::string shortest(double value) { return fmt::format("{}", value); }

namespace {

struct TextCell {
  int precision;

  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(const Label& l) const { return l.text; }
  std::string operator()(std::int64_t v) const { return fmt::format("{}", v); }
  std::string operator()(double v) const { return fmt::format("{:.{}f}", v, precision); }
};

nlohmann::ordered_json json_cell(const Cell& cell) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, Label>) {
          return v.text;
        } else {
          return v;
        }
      },
      cell);
}

std::string render_csv(const Table& t, int precision) {
  std::string out = fmt::format("{}\n", fmt::join(t.columns, ","));
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (const auto& c : row) cells.push_back(std::visit(TextCell{precision}, c));
    out += fmt::format("{}\n", fmt::join(cells, ","));
  }
  return out;
}

std::string render_markdown(const Table& t, int precision) {
  std::vector<std::vector<std::string>> text;
  std::vector<std::size_t> width(t.columns.size(), 3);
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    width[i] = std::max(width[i], t.columns[i].size());
  }
  for (const auto& row : t.rows) {
    auto& cells = text.emplace_back();
    for (std::size_t i = 0; i < row.size(); ++i) {
      cells.push_back(std::visit(TextCell{precision}, row[i]));
      width[i] = std::max(width[i], cells.back().size());
    }
  }

  std::string out = "|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out += fmt::format(" {:>{}} |", t.columns[i], width[i]);
  }
  out += "\n|";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    out += fmt::format(" {:->{}}: |", "", width[i] - 1);
  }
  out += "\n";
  for (const auto& cells : text) {
    out += "|";
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out += fmt::format(" {:>{}} |", cells[i], width[i]);
    }
    out += "\n";
  }
  return out;
}

std::string render_json(const Table& t) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows.dump(2) + "\n";
}

}  // namespace

std::string render(const Table& table, Format format, int precision) {
  if (precision < 0 || precision > kMaxPrecision) {
    throw ValidationError(fmt::format("precision must be in [0, {}]", kMaxPrecision));
  }
  switch (format) {
    case Format::Csv:
      return render_csv(table, precision);
    case Format::Json:
      return render_json(table);
    case Format::Markdown:
      return render_markdown(table, precision);
  }
  return {};
}

Table estimate_table(const ComponentSet& set) {
  Table t;
  t.columns = {"estimator", "value", "numerator", "denominator"};
  for (const auto& est : {satterthwaite_df(set), boardman_df(set), corrected_df(set)}) {
    t.rows.push_back({Label{std::string(to_string(est.variant))}, est.value, est.numerator,
                      est.denominator});
  }
  std::vector<double> weights;
  weights.reserve(set.size());
  for (const auto& c : set.components()) weights.push_back(c.weight);
  const WeightVector w(std::move(weights));
  t.rows.push_back({Label{"kish_neff"}, kish_neff(w), std::monostate{}, std::monostate{}});
  t.rows.push_back({Label{"design_effect"}, design_effect(w), std::monostate{}, std::monostate{}});
  return t;
}

Table simulation_table(const std::vector<SimCell>& cells, SimLayout layout) {
  Table t;
  if (layout == SimLayout::Bias) {
    t.columns = {"K", "df", "mean_unc", "sd_unc", "mean_corr", "sd_corr", "K_x_df"};
    for (const auto& c : cells) {
      t.rows.push_back({std::int64_t{c.k}, Label{shortest(c.nu_bar)}, c.mean_satt, c.sd_satt,
                        c.mean_corr, c.sd_corr, Label{shortest(c.expected)}});
    }
  } else {
    t.columns = {"K",      "nu_bar",      "mean_kish",     "mean_satt",    "mean_corr",
                 "K_x_nu", "kish_over_k", "satt_over_knu", "corr_over_knu"};
    for (const auto& c : cells) {
      t.rows.push_back({std::int64_t{c.k}, Label{shortest(c.nu_bar)}, c.mean_kish, c.mean_satt,
                        c.mean_corr, Label{shortest(c.expected)}, c.ratio_kish_k, c.ratio_satt,
                        c.ratio_corr});
    }
  }
  return t;
}

Table simulation_cells_table(const std::vector<SimCell>& cells) {
  Table t;
  t.columns = {"k",          "nu_bar",       "mean_satt",  "sd_satt",    "mean_corr",
               "sd_corr",    "mean_kish",    "expected",   "ratio_kish_k", "ratio_satt",
               "ratio_corr", "replicates",   "weight_rejections"};
  for (const auto& c : cells) {
    t.rows.push_back({std::int64_t{c.k}, Label{shortest(c.nu_bar)}, c.mean_satt, c.sd_satt,
                      c.mean_corr, c.sd_corr, c.mean_kish, Label{shortest(c.expected)},
                      c.ratio_kish_k, c.ratio_satt, c.ratio_corr,
                      static_cast<std::int64_t>(c.replicates),
                      static_cast<std::int64_t>(c.weight_rejections)});
  }
  return t;
}

}  // namespace effdof::io
