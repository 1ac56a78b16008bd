#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "cgpt3d/json_io.hpp"
#include "cgpt3d/np_solver.hpp"

namespace cgpt3d {

/// Parameters shared by the command-line subcommands. Either lambda or kappa
/// may be set, not both.
struct RunConfig {
  std::optional<double> lambda;
  std::optional<double> kappa;
  int order = 3;
  int level = 3;
  QuadratureRule rule = QuadratureRule::Centroid;
  int sensors = 128;
  double radius = 5.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string output;

  /// Contrast from lambda or kappa; throws when neither or both are given.
  double resolved_lambda() const;
  void validate() const;
};

inline constexpr int kMaxCliOrder = 5;

QuadratureRule quadrature_rule_from_string(const std::string& s);
std::string to_string(QuadratureRule rule);

/// Overlays the keys present in `j` onto `base`. Unknown keys are rejected.
RunConfig config_from_json(const Json& j, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path);

}  // namespace cgpt3d
