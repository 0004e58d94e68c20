#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "effdof/io.hpp"
#include "effdof/random.hpp"

namespace effdof::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_real(std::string_view field, std::size_t line, std::size_t column) {
  const auto text = trim(field);
  if (text.empty()) throw ParseError(line, column, "empty field");
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  // from_chars rejects a leading '+', which is valid decimal text.
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    throw ParseError(line, column, "not a number: '" + std::string(text) + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError(line, column, "value must be finite: '" + std::string(text) + "'");
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, 0, "cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

ComponentSet parse_components(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  bool have_header = false;
  std::vector<VarianceComponent> components;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    if (!have_header) {
      if (text != "weight,variance,dof") {
        throw ParseError(line, 0, "expected header 'weight,variance,dof'");
      }
      have_header = true;
      continue;
    }

    double fields[3];
    std::size_t column = 0;
    std::string_view rest = text;
    for (;;) {
      const auto comma = rest.find(',');
      if (column == 3) throw ParseError(line, 4, "expected exactly 3 fields");
      fields[column] = parse_real(rest.substr(0, comma), line, column + 1);
      ++column;
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (column != 3) throw ParseError(line, column + 1, "expected exactly 3 fields");

    const VarianceComponent c{fields[0], fields[1], fields[2]};
    if (c.weight < 0.0) throw ParseError(line, 1, "weight must be >= 0");
    if (c.variance < 0.0) throw ParseError(line, 2, "variance must be >= 0");
    if (!(c.dof > 0.0)) throw ParseError(line, 3, "dof must be > 0");
    components.push_back(c);
  }
  if (!have_header) throw ParseError(line + 1, 0, "missing header 'weight,variance,dof'");
  if (components.empty()) throw ParseError(line + 1, 0, "no components after the header");
  return ComponentSet(std::move(components));
}

ComponentSet read_components_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_components(in);
}

std::vector<double> parse_pseudo_values(std::istream& in) {
  std::string raw;
  std::size_t line = 0;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(raw);
    if (text.empty()) continue;
    values.push_back(parse_real(text, line, 1));
  }
  return values;
}

std::vector<double> read_pseudo_values_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_pseudo_values(in);
}

std::string manifest_to_json(const RunManifest& m) {
  using nlohmann::ordered_json;
  const auto& c = m.config;
  ordered_json config{
      {"k_values", c.k_values},
      {"nu_values", c.nu_values},
      {"weight_mode", std::string(to_string(c.weight_mode))},
      {"equal_scale", std::string(to_string(c.equal_scale))},
      {"weight_mean", 1.0},
      {"weight_sd", c.weight_sd},
      {"fix_weights", c.fix_weights},
      {"sigma_sq", c.sigma_sq},
      {"replicates", c.replicates},
      {"seed", c.seed},
  };
  ordered_json doc{
      {"tool", "effdof"},
      {"version", EFFDOF_VERSION},
      {"rng", std::string(kRngDescription)},
      {"replicates_per_block", kReplicatesPerBlock},
      {"weight_rejection_rule", "Normal weights <= 0 are redrawn"},
      {"preset", m.preset},
      {"layout", m.layout},
      {"seed_source", m.seed_source},
      {"threads", m.threads},
      {"config", config},
      {"weight_rejections", m.weight_rejections},
      {"wall_clock_seconds", m.wall_clock_seconds},
  };
  return doc.dump(2) + "\n";
}

SimConfig config_from_manifest_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(0, e.byte, std::string("invalid manifest JSON: ") + e.what());
  }
  if (!doc.contains("config") || !doc["config"].is_object()) {
    throw ParseError(0, 0, "manifest has no 'config' object");
  }
  const auto& j = doc["config"];
  SimConfig c;
  try {
    c.k_values = j.at("k_values").get<std::vector<int>>();
    c.nu_values = j.at("nu_values").get<std::vector<double>>();
    const auto mode = j.at("weight_mode").get<std::string>();
    if (mode == "equal") {
      c.weight_mode = WeightMode::Equal;
    } else if (mode == "random") {
      c.weight_mode = WeightMode::RandomNormal;
    } else {
      throw ParseError(0, 0, "unknown weight_mode '" + mode + "'");
    }
    const auto scale = j.at("equal_scale").get<std::string>();
    if (scale == "inverse-k") {
      c.equal_scale = EqualScale::InverseK;
    } else if (scale == "unit") {
      c.equal_scale = EqualScale::Unit;
    } else {
      throw ParseError(0, 0, "unknown equal_scale '" + scale + "'");
    }
    c.weight_sd = j.at("weight_sd").get<double>();
    c.fix_weights = j.at("fix_weights").get<bool>();
    c.sigma_sq = j.at("sigma_sq").get<double>();
    c.replicates = j.at("replicates").get<std::uint64_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, 0, std::string("bad manifest config: ") + e.what());
  }
  return c;
}

}  // namespace effdof::io
