#include "smd/config.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "smd/errors.hpp"
#include "smd/potentials.hpp"

namespace smd {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  auto blank = [](unsigned char c) { return std::isspace(c) != 0; };
  s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), blank));
  s.erase(std::find_if_not(s.rbegin(), s.rend(), blank).base(), s.end());
  return s;
}

std::string unquote(std::string s) {
  s = trim(std::move(s));
  if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front()) {
    s = s.substr(1, s.size() - 2);
  }
  return s;
}

// Drops '#'/';' comments that are not inside quotes.
std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#' || c == ';') {
      return line.substr(0, i);
    }
  }
  return line;
}

std::vector<std::string> split_list(std::string s) {
  s = unquote(std::move(s));
  if (!s.empty() && s.front() == '[' && s.back() == ']') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = unquote(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

long to_long(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  long x = 0;
  try {
    x = std::stol(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != v.size()) throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

bool to_bool(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

ModelTag to_model(const std::string& key, std::string v) {
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "1" || v == "model1") return ModelTag::Model1;
  if (v == "2" || v == "model2") return ModelTag::Model2;
  throw ConfigError("key '" + key + "': expected 1 or 2, got '" + v + "'");
}

void apply(ExperimentConfig& cfg, const std::string& key, const std::string& raw) {
  const std::string v = unquote(raw);
  if (key == "model.kind") {
    cfg.model = to_model(key, v);
  } else if (key == "model.n") {
    cfg.n = to_long(key, v);
  } else if (key == "model.d") {
    cfg.d = to_long(key, v);
  } else if (key == "model.epsilon") {
    cfg.epsilon = to_double(key, v);
  } else if (key == "model.t") {
    cfg.t = to_double(key, v);
  } else if (key == "model.sigma") {
    cfg.sigma = to_double(key, v);
  } else if (key == "mirrors") {
    cfg.mirrors = split_list(raw);
  } else if (key == "seeds") {
    cfg.seeds.clear();
    for (const auto& s : split_list(raw)) {
      const long x = to_long(key, s);
      if (x < 0) throw ConfigError("seeds must be non-negative");
      cfg.seeds.push_back(static_cast<std::uint64_t>(x));
    }
  } else if (key == "theory") {
    cfg.theory = to_bool(key, v);
  } else if (key == "empirical") {
    cfg.empirical = to_bool(key, v);
  } else if (key == "timing") {
    cfg.timing = to_bool(key, v);
  } else if (key == "draws") {
    cfg.draws = static_cast<int>(to_long(key, v));
  } else if (key == "theory_seed") {
    const long x = to_long(key, v);
    if (x < 0) throw ConfigError("theory_seed must be non-negative");
    cfg.theory_seed = static_cast<std::uint64_t>(x);
  } else if (key == "out") {
    cfg.out_path = v;
  } else if (key == "trainer.eta") {
    cfg.eta = to_double(key, v);
  } else if (key == "trainer.q") {
    cfg.q = to_double(key, v);
  } else if (key == "trainer.tol") {
    cfg.tol = to_double(key, v);
  } else if (key == "trainer.max_epochs") {
    cfg.max_epochs = static_cast<int>(to_long(key, v));
  } else if (key == "saddle.grid_points") {
    cfg.saddle.grid_points = static_cast<int>(to_long(key, v));
  } else if (key == "saddle.refine_passes") {
    cfg.saddle.refine_passes = static_cast<int>(to_long(key, v));
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

std::string model_name(ModelTag m) { return m == ModelTag::Model1 ? "model1" : "model2"; }

void ExperimentConfig::validate() const {
  if (n <= 0 || d <= 0) throw ConfigError("model.n and model.d must be positive");
  if (n >= d) throw ConfigError("need n < d (over-parametrized regime)");
  if (empirical && n % 2 != 0) throw ConfigError("model.n must be even for balanced sampling");
  if (mirrors.empty()) throw ConfigError("mirrors must not be empty");
  if (empirical && seeds.empty()) throw ConfigError("seeds must not be empty when empirical = true");
  if (!theory && !empirical) throw ConfigError("nothing to do: theory and empirical are both off");
  if (!(sigma > 0.0)) throw ConfigError("model.sigma must be > 0");
  if (model == ModelTag::Model1 && !(epsilon > 0.0 && epsilon < 1.0)) {
    throw ConfigError("model.epsilon must lie in (0, 1)");
  }
  if (model == ModelTag::Model2 && !(t > 0.0)) throw ConfigError("model.t must be > 0");
  if (draws < 1) throw ConfigError("draws must be >= 1");
  if (eta && !(*eta > 0.0)) throw ConfigError("trainer.eta must be > 0");
  if (q && !(*q > 1.0)) throw ConfigError("trainer.q must be > 1");
  if (tol && !(*tol > 0.0)) throw ConfigError("trainer.tol must be > 0");
  if (max_epochs && *max_epochs < 1) throw ConfigError("trainer.max_epochs must be >= 1");
  for (const auto& m : mirrors) {
    try {
      (void)Potential::parse(m);
    } catch (const ParameterError& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    saddle.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(e.what());
  }
}

ExperimentConfig parse_config(std::istream& in) {
  std::ostringstream cleaned;
  std::string line;
  while (std::getline(in, line)) {
    std::string s = trim(strip_comment(line));
    // TOML writes `key = value`; the INI reader wants the same, so only comments need removing.
    cleaned << s << '\n';
  }
  pt::ptree tree;
  try {
    std::istringstream src(cleaned.str());
    pt::ini_parser::read_ini(src, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("malformed config (line " + std::to_string(e.line()) + "): " + e.message());
  }

  ExperimentConfig cfg;
  for (const auto& [name, node] : tree) {
    if (node.empty()) {
      if (node.data().empty()) continue;  // empty section header
      apply(cfg, name, node.data());
      continue;
    }
    for (const auto& [key, leaf] : node) {
      if (!leaf.empty()) throw ConfigError("nested sections are not supported");
      apply(cfg, name + "." + key, leaf.data());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  if (!std::filesystem::exists(path)) throw FileError("config file not found: " + path, path);
  std::ifstream in(path);
  if (!in) throw FileError("cannot open config file: " + path, path);
  return parse_config(in);
}

}  // namespace smd
