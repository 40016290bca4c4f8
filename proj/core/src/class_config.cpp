#include <json.hpp>

#include <fstream>
#include <sstream>

#include "kubilius/assembly_class.hpp"
#include "kubilius/errors.hpp"

namespace kubilius {
namespace {

using nlohmann::json;

const std::string& require_param(const ClassConfig& config, const std::string& key) {
  const auto it = config.params.find(key);
  if (it == config.params.end())
    throw InvalidArgument("formula '" + *config.formula + "' requires parameter '" + key + "'");
  return it->second;
}

Rational nonnegative_param(const ClassConfig& config, const std::string& key) {
  const Rational value = parse_rational(require_param(config, key));
  if (value < 0) throw InvalidArgument("parameter '" + key + "' must be nonnegative");
  return value;
}

std::string json_scalar_text(const json& value, const std::string& field) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number()) return value.dump();
  throw InvalidArgument("field '" + field + "' must be a string or number");
}

AssemblyClass from_weight_list(const ClassConfig& config, const Rho& rho) {
  const auto& texts = *config.weights;
  if (texts.empty()) throw InvalidArgument("empty weight list");
  auto weights = std::make_shared<std::vector<Rational>>();
  weights->reserve(texts.size());
  bool any_positive = false;
  for (std::size_t i = 0; i < texts.size(); ++i) {
    Rational value = parse_rational(texts[i]);
    if (value < 0) throw InvalidArgument("negative weight at j=" + std::to_string(i + 1));
    any_positive = any_positive || value > 0;
    weights->push_back(std::move(value));
  }
  if (!any_positive) throw InvalidArgument("no positive weight");
  return AssemblyClass(config.name, config.description,
                       "explicit list of " + std::to_string(weights->size()) + " weights", rho,
                       [weights](std::size_t j) {
                         return j <= weights->size() ? (*weights)[j - 1] : Rational(0);
                       });
}

AssemblyClass from_formula(const ClassConfig& config, const Rho& rho) {
  const std::string& formula = *config.formula;
  if (formula == "builtin") {
    const AssemblyClass base = builtin_class(require_param(config, "name"));
    return config.rho ? base.with_rho(rho) : base;
  }
  if (formula == "ewens") {
    const Rational theta = nonnegative_param(config, "theta");
    if (theta == 0) throw InvalidArgument("no positive weight");
    return AssemblyClass(config.name, config.description, "lambda_j = " + to_string(theta) + "/j",
                         rho, [theta](std::size_t j) { return Rational(theta / j); });
  }
  if (formula == "cycles") {
    const Rational scale = nonnegative_param(config, "scale");
    const auto min_it = config.params.find("min");
    const std::size_t min_size =
        min_it == config.params.end() ? 1 : std::stoul(min_it->second);
    if (scale == 0) throw InvalidArgument("no positive weight");
    if (min_size == 0) throw InvalidArgument("parameter 'min' must be at least 1");
    return AssemblyClass(config.name, config.description,
                         "lambda_j = " + to_string(scale) + "/j for j >= " +
                             std::to_string(min_size),
                         rho, [scale, min_size](std::size_t j) {
                           return j >= min_size ? Rational(scale / j) : Rational(0);
                         });
  }
  if (formula == "geometric") {
    const Rational scale = nonnegative_param(config, "scale");
    const Rational ratio = nonnegative_param(config, "ratio");
    if (scale == 0 || ratio == 0) throw InvalidArgument("no positive weight");
    return AssemblyClass(config.name, config.description,
                         "lambda_j = " + to_string(scale) + " * (" + to_string(ratio) + ")^j / j",
                         rho, [scale, ratio](std::size_t j) {
                           return Rational(scale * power(ratio, j) / j);
                         });
  }
  throw InvalidArgument("unknown formula '" + formula +
                        "' (expected ewens, cycles, geometric, or builtin)");
}

}  // namespace

AssemblyClass class_from_config(const ClassConfig& config) {
  if (config.weights && config.formula)
    throw InvalidArgument("class config must give either weights or formula, not both");
  if (!config.weights && !config.formula)
    throw InvalidArgument("class config must give weights or formula");
  const bool builtin_formula = config.formula && *config.formula == "builtin";
  if (!config.rho && !builtin_formula) throw InvalidArgument("missing rho");
  const Rho rho = config.rho ? Rho::parse(*config.rho) : Rho();
  return config.weights ? from_weight_list(config, rho) : from_formula(config, rho);
}

ClassConfig parse_class_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("class config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InvalidArgument("class config must be a JSON object");

  ClassConfig config;
  config.name = doc.value("name", std::string("custom"));
  config.description = doc.value("description", std::string());
  if (doc.contains("rho") && !doc["rho"].is_null()) config.rho = json_scalar_text(doc["rho"], "rho");
  if (doc.contains("weights")) {
    if (!doc["weights"].is_array()) throw InvalidArgument("field 'weights' must be an array");
    std::vector<std::string> weights;
    for (const auto& w : doc["weights"]) weights.push_back(json_scalar_text(w, "weights"));
    config.weights = std::move(weights);
  }
  if (doc.contains("formula")) {
    const auto& f = doc["formula"];
    if (f.is_string()) {
      config.formula = f.get<std::string>();
    } else if (f.is_object()) {
      config.formula = f.value("kind", std::string());
      if (f.contains("params")) {
        for (const auto& [key, value] : f["params"].items())
          config.params[key] = json_scalar_text(value, key);
      }
    } else {
      throw InvalidArgument("field 'formula' must be a string or object");
    }
  }
  if (doc.contains("params") && doc["params"].is_object()) {
    for (const auto& [key, value] : doc["params"].items())
      config.params[key] = json_scalar_text(value, key);
  }
  return config;
}

ClassConfig load_class_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read class config '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_class_config(buffer.str());
}

AssemblyClass resolve_class(std::string_view name_or_path) {
  for (const auto& name : builtin_class_names())
    if (name == name_or_path) return builtin_class(name);
  std::ifstream probe{std::string(name_or_path)};
  if (!probe) return builtin_class(name_or_path);  // reports the available names
  return class_from_config(load_class_config(std::string(name_or_path)));
}

}  // namespace kubilius
