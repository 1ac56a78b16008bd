#include "cgpt3d/config.hpp"

#include <cmath>
#include <set>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

double RunConfig::resolved_lambda() const {
  if (lambda && kappa) throw ValidationError("lambda and kappa are mutually exclusive");
  if (lambda) return Contrast(*lambda).lambda();
  if (kappa) return Contrast::from_kappa(*kappa).lambda();
  throw ValidationError("one of lambda or kappa is required");
}

void RunConfig::validate() const {
  if (lambda && kappa) throw ValidationError("lambda and kappa are mutually exclusive");
  if (lambda) (void)Contrast(*lambda);
  if (kappa) (void)Contrast::from_kappa(*kappa);
  if (order < 1 || order > kMaxCliOrder)
    throw ValidationError("order must be in [1, " + std::to_string(kMaxCliOrder) + "], got " + std::to_string(order));
  if (level < 0 || level > 6) throw ValidationError("refinement level must be in [0, 6]");
  if (sensors < 1) throw ValidationError("sensor count must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("sensor radius must be positive");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw ValidationError("noise level must be non-negative");
}

QuadratureRule quadrature_rule_from_string(const std::string& s) {
  if (s == "1pt") return QuadratureRule::Centroid;
  if (s == "3pt") return QuadratureRule::ThreePoint;
  throw ValidationError("quadrature rule must be '1pt' or '3pt', got '" + s + "'");
}

std::string to_string(QuadratureRule rule) { return rule == QuadratureRule::ThreePoint ? "3pt" : "1pt"; }

RunConfig config_from_json(const Json& j, RunConfig base) {
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  static const std::set<std::string> known = {"schema", "lambda", "kappa",  "order", "level", "quadrature",
                                              "sensors", "radius", "noise", "seed",  "output"};
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ValidationError("unknown config key '" + key + "'");
  if (j.contains("schema") && j.at("schema") != kSchemaVersion)
    throw ValidationError("unsupported config schema version");
  try {
    if (j.contains("lambda")) base.lambda = j.at("lambda").get<double>();
    if (j.contains("kappa")) base.kappa = j.at("kappa").get<double>();
    if (j.contains("order")) base.order = j.at("order").get<int>();
    if (j.contains("level")) base.level = j.at("level").get<int>();
    if (j.contains("quadrature")) base.rule = quadrature_rule_from_string(j.at("quadrature").get<std::string>());
    if (j.contains("sensors")) base.sensors = j.at("sensors").get<int>();
    if (j.contains("radius")) base.radius = j.at("radius").get<double>();
    if (j.contains("noise")) base.noise = j.at("noise").get<double>();
    if (j.contains("seed")) base.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("output")) base.output = j.at("output").get<std::string>();
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  base.validate();
  return base;
}

RunConfig load_config(const std::filesystem::path& path) { return config_from_json(read_json(path)); }

}  // namespace cgpt3d
