#ifndef ADER_CONFIG_JSON_HPP
#define ADER_CONFIG_JSON_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "ader/core.hpp"
#include "ader/dynamics.hpp"
#include "ader/environments.hpp"
#include "ader/runner.hpp"

namespace ader {

/** How one comparator column is produced for every run of an experiment. */
struct ComparatorRegistration {
  enum class Kind { constant_best, per_round_minimizer, block_best, follow_dynamics, custom_file };
  Kind kind = Kind::constant_best;
  std::string name;
  std::filesystem::path file;  // custom_file only
};

/**
 * One experiment: the cross product of algorithms x environments x
 * horizons x seeds, each scored against every registered comparator.
 */
struct ExperimentConfig {
  std::vector<AlgorithmVariant> algorithms;
  std::vector<EnvironmentSpec> environments;  // horizon and seed filled per tuple
  std::vector<int> horizons;
  std::vector<std::uint64_t> seeds;
  std::vector<ComparatorRegistration> comparators;
  std::optional<ContractionSpec> model;  // dynamics for ader-dynamical / follow-dynamics
  std::optional<double> baseline_eta;
  int comparator_blocks = 10;  // block-best granularity on unsegmented environments
  std::filesystem::path out_dir = "out";
  bool out_dir_from_config = false;  // lets flags and ADER_OUT_DIR layer correctly
  int jobs = 1;
};

namespace detail {

inline int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

inline void check_keys(const nlohmann::json& object, const std::set<std::string>& allowed,
                       const std::string& where) {
  for (const auto& item : object.items())
    if (allowed.find(item.key()) == allowed.end())
      throw std::invalid_argument("config: unknown key '" + item.key() + "' in " + where);
}

template <typename T>
inline T field_or(const nlohmann::json& object, const std::string& key, T fallback,
                  const std::string& where) {
  if (!object.contains(key)) return fallback;
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config: key '" + key + "' in " + where + " has the wrong type");
  }
}

template <typename T>
inline T required_field(const nlohmann::json& object, const std::string& key,
                        const std::string& where) {
  if (!object.contains(key))
    throw std::invalid_argument("config: missing required key '" + key + "' in " + where);
  try {
    return object.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw std::invalid_argument("config: key '" + key + "' in " + where + " has the wrong type");
  }
}

inline EnvironmentSpec parse_environment(const nlohmann::json& object, const std::string& where) {
  if (!object.is_object())
    throw std::invalid_argument("config: " + where + " must be an object");
  check_keys(object,
             {"family", "dimension", "diameter", "gradient_bound", "drift", "switches",
              "segment_length", "tau"},
             where);
  EnvironmentSpec spec;  // fallbacks below are the struct's own defaults
  spec.family = parse_family(required_field<std::string>(object, "family", where));
  spec.dimension = field_or<int>(object, "dimension", spec.dimension, where);
  spec.diameter = field_or<double>(object, "diameter", spec.diameter, where);
  spec.gradient_bound = field_or<double>(object, "gradient_bound", spec.gradient_bound, where);
  spec.drift = field_or<double>(object, "drift", spec.drift, where);
  spec.switches = field_or<int>(object, "switches", spec.switches, where);
  spec.segment_length = field_or<int>(object, "segment_length", spec.segment_length, where);
  spec.tau = field_or<double>(object, "tau", spec.tau, where);
  return spec;
}

inline ContractionSpec parse_model(const nlohmann::json& object) {
  if (!object.is_object()) throw std::invalid_argument("config: model must be an object");
  check_keys(object, {"kind", "rho", "angle", "anchor", "blend"}, "model");
  const std::string kind = required_field<std::string>(object, "kind", "model");
  ContractionSpec spec;
  if (kind == "identity") {
    spec.kind = ContractionKind::identity;
  } else if (kind == "shrink") {
    spec.kind = ContractionKind::shrink;
    spec.rho = field_or<double>(object, "rho", 0.5, "model");
  } else if (kind == "rotation") {
    spec.kind = ContractionKind::rotation;
    spec.angle = field_or<double>(object, "angle", 0.5, "model");
  } else if (kind == "toward-point") {
    spec.kind = ContractionKind::toward_point;
    spec.blend = field_or<double>(object, "blend", 0.5, "model");
    if (object.contains("anchor"))
      spec.anchor = field_or<Vector>(object, "anchor", Vector{}, "model");
  } else {
    throw std::invalid_argument(
        "config: unknown model kind '" + kind +
        "' (expected identity, shrink, rotation, or toward-point)");
  }
  return spec;
}

inline ComparatorRegistration parse_comparator(const nlohmann::json& entry,
                                               const std::filesystem::path& base_dir) {
  ComparatorRegistration reg;
  if (entry.is_string()) {
    const std::string name = entry.get<std::string>();
    if (name == "constant-best") {
      reg.kind = ComparatorRegistration::Kind::constant_best;
    } else if (name == "per-round-minimizer") {
      reg.kind = ComparatorRegistration::Kind::per_round_minimizer;
    } else if (name == "block-best") {
      reg.kind = ComparatorRegistration::Kind::block_best;
    } else if (name == "follow-dynamics") {
      reg.kind = ComparatorRegistration::Kind::follow_dynamics;
    } else {
      throw std::invalid_argument(
          "config: unknown comparator '" + name +
          "' (expected constant-best, per-round-minimizer, block-best, follow-dynamics, or an "
          "object with a 'file' key)");
    }
    reg.name = name;
    return reg;
  }
  if (entry.is_object()) {
    check_keys(entry, {"file", "name"}, "comparator entry");
    reg.kind = ComparatorRegistration::Kind::custom_file;
    std::filesystem::path file = required_field<std::string>(entry, "file", "comparator entry");
    if (file.is_relative()) file = base_dir / file;
    if (!std::filesystem::exists(file))
      throw std::invalid_argument("config: comparator file '" + file.string() + "' does not exist");
    reg.file = file;
    reg.name = field_or<std::string>(entry, "name", file.stem().string(), "comparator entry");
    return reg;
  }
  throw std::invalid_argument("config: comparator entries must be strings or objects");
}

}  // namespace detail

inline void validate(const ExperimentConfig& config) {
  require(!config.algorithms.empty(), "config: need at least one algorithm");
  require(!config.environments.empty(), "config: need at least one environment");
  require(!config.horizons.empty(), "config: need at least one horizon");
  require(!config.seeds.empty(), "config: need at least one seed");
  require(!config.comparators.empty(), "config: need at least one comparator");
  for (int t : config.horizons) require(t >= 1, "config: horizons must be >= 1");
  require(config.comparator_blocks >= 1, "config: comparator_blocks must be >= 1");
  require(config.jobs >= 1, "config: jobs must be >= 1");
  const bool wants_dynamics =
      std::any_of(config.algorithms.begin(), config.algorithms.end(),
                  [](AlgorithmVariant v) { return v == AlgorithmVariant::ader_dynamical; });
  if (wants_dynamics)
    require(config.model.has_value(), "config: ader-dynamical requires a model entry");
}

/**
 * Parse a JSON experiment description. Parse failures report the line
 * number; semantic failures name the offending key.
 */
inline ExperimentConfig parse_experiment_config(const std::string& text,
                                                const std::filesystem::path& base_dir) {
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& error) {
    throw std::invalid_argument("config parse error at line " +
                                std::to_string(detail::line_of_byte(text, error.byte)) + ": " +
                                error.what());
  }
  if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");
  detail::check_keys(root,
                     {"algorithms", "environment", "environments", "horizons", "seeds",
                      "comparators", "model", "eta", "comparator_blocks", "out", "jobs"},
                     "the top level");

  ExperimentConfig config;
  for (const std::string& name :
       detail::required_field<std::vector<std::string>>(root, "algorithms", "the top level"))
    config.algorithms.push_back(parse_variant(name));

  if (root.contains("environment") && root.contains("environments"))
    throw std::invalid_argument("config: give 'environment' or 'environments', not both");
  if (root.contains("environment")) {
    config.environments.push_back(detail::parse_environment(root.at("environment"), "environment"));
  } else if (root.contains("environments")) {
    const nlohmann::json& list = root.at("environments");
    if (!list.is_array()) throw std::invalid_argument("config: environments must be an array");
    int index = 0;
    for (const nlohmann::json& entry : list)
      config.environments.push_back(
          detail::parse_environment(entry, "environments[" + std::to_string(index++) + "]"));
  } else {
    throw std::invalid_argument("config: missing required key 'environment' (or 'environments')");
  }

  config.horizons = detail::required_field<std::vector<int>>(root, "horizons", "the top level");
  config.seeds =
      detail::required_field<std::vector<std::uint64_t>>(root, "seeds", "the top level");

  if (root.contains("comparators")) {
    const nlohmann::json& list = root.at("comparators");
    if (!list.is_array()) throw std::invalid_argument("config: comparators must be an array");
    for (const nlohmann::json& entry : list)
      config.comparators.push_back(detail::parse_comparator(entry, base_dir));
  } else {
    config.comparators.push_back({ComparatorRegistration::Kind::constant_best, "constant-best", {}});
  }

  if (root.contains("model")) config.model = detail::parse_model(root.at("model"));
  if (root.contains("eta"))
    config.baseline_eta = detail::field_or<double>(root, "eta", 0.0, "the top level");
  config.comparator_blocks = detail::field_or<int>(root, "comparator_blocks", 10, "the top level");
  if (root.contains("out")) {
    config.out_dir = detail::field_or<std::string>(root, "out", "out", "the top level");
    config.out_dir_from_config = true;
  }
  config.jobs = detail::field_or<int>(root, "jobs", 1, "the top level");

  validate(config);
  return config;
}

inline ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str(), path.parent_path());
}

/** Plain CSV comparator: one row per round, d comma-separated floats. */
inline ComparatorSequence load_comparator_file(const std::filesystem::path& path, int horizon,
                                               const FeasibleSet& set) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open comparator file '" + path.string() + "'");
  ComparatorSequence u;
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    Vector point;
    std::istringstream fields(line);
    std::string token;
    while (std::getline(fields, token, ',')) {
      try {
        point.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw std::invalid_argument("comparator file '" + path.string() + "' line " +
                                    std::to_string(line_number) + ": bad number '" + token + "'");
      }
    }
    if (static_cast<int>(point.size()) != set.dimension())
      throw std::invalid_argument("comparator file '" + path.string() + "' line " +
                                  std::to_string(line_number) + ": expected " +
                                  std::to_string(set.dimension()) + " coordinates");
    if (!set.contains(point))
      throw std::invalid_argument("comparator file '" + path.string() + "' line " +
                                  std::to_string(line_number) + ": point outside the domain");
    u.push_back(std::move(point));
  }
  if (static_cast<int>(u.size()) != horizon)
    throw std::invalid_argument("comparator file '" + path.string() + "' has " +
                                std::to_string(u.size()) + " rows but the horizon is " +
                                std::to_string(horizon));
  return u;
}

}  // namespace ader

#endif  // ADER_CONFIG_JSON_HPP
