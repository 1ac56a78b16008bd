// Command-line front end: meshes, CGPTs, MSR data, descriptors, dictionaries.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/SVD>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cgpt3d/cgpt.hpp"
#include "cgpt3d/config.hpp"
#include "cgpt3d/descriptors.hpp"
#include "cgpt3d/errors.hpp"
#include "cgpt3d/json_io.hpp"
#include "cgpt3d/mesh.hpp"
#include "cgpt3d/msr.hpp"

using namespace cgpt3d;

namespace {

void apply_thread_cap() {
  const char* env = std::getenv("CGPT3D_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ValidationError("CGPT3D_THREADS must be a positive integer");
#ifdef _OPENMP
  omp_set_num_threads(static_cast<int>(n));
#endif
  Eigen::setNbThreads(static_cast<int>(n));
}

void emit(const Json& j, const std::string& output) {
  if (output.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  write_json(j, output);
}

/// Shared run parameters: an optional --config file overlaid by explicit flags.
struct ConfigFlags {
  std::string config_path;
  std::optional<double> lambda, kappa, radius, noise;
  std::optional<int> order, level, sensors;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> quadrature, output;

  void add_contrast(CLI::App* app) {
    app->add_option("--lambda", lambda, "contrast parameter lambda, |lambda| > 1/2");
    app->add_option("--kappa", kappa, "conductivity ratio kappa (alternative to --lambda)");
  }
  void add_common(CLI::App* app) {
    app->add_option("--config", config_path, "JSON run configuration");
    app->add_option("-o,--output", output, "output path (stdout when omitted)");
  }
  void add_sensors(CLI::App* app) {
    app->add_option("--sensors", sensors, "number of sensors N");
    app->add_option("--radius", radius, "sensor sphere radius");
    app->add_option("--noise", noise, "relative noise level sigma");
    app->add_option("--seed", seed, "noise seed");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (lambda || kappa) {
      c.lambda = lambda;
      c.kappa = kappa;
    }
    if (order) c.order = *order;
    if (level) c.level = *level;
    if (sensors) c.sensors = *sensors;
    if (radius) c.radius = *radius;
    if (noise) c.noise = *noise;
    if (seed) c.seed = *seed;
    if (quadrature) c.rule = quadrature_rule_from_string(*quadrature);
    if (output) c.output = *output;
    c.validate();
    return c;
  }
};

Json load_document(const std::string& path) { return read_json(path); }

ShapeDescriptor descriptor_from_document(const Json& j) {
  if (j.is_object() && j.contains("blocks")) return compute_descriptor(cgpt_from_json(j));
  return descriptor_from_json(j);
}

bool is_json_path(const std::string& path) {
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

double condition_number(const CMatrix& a) {
  const Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  return sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : INFINITY;
}

int run(int argc, char** argv) {
  CLI::App app{"CGPT toolkit for 3D inclusions"};
  app.require_subcommand(1);

  // mesh
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  std::string mesh_path;
  CLI::App* mesh_info = mesh_cmd->add_subcommand("info", "print mesh statistics");
  mesh_info->add_option("mesh", mesh_path, "OFF or OBJ file")->required();
  bool autofix = false;
  mesh_info->add_flag("--fix-orientation", autofix, "flip inward-oriented meshes instead of rejecting them");
  CLI::App* mesh_make = mesh_cmd->add_subcommand("make", "generate a test shape");
  std::string kind;
  std::vector<double> params;
  int make_level = 3;
  std::string make_out;
  mesh_make->add_option("kind", kind, "sphere | ellipsoid | box | torus")->required();
  mesh_make->add_option("--params", params, "shape parameters")->required();
  mesh_make->add_option("--level", make_level, "refinement level");
  mesh_make->add_option("-o,--output", make_out, "OFF or OBJ output")->required();

  // cgpt
  CLI::App* cgpt_cmd = app.add_subcommand("cgpt", "contracted polarization tensors");
  cgpt_cmd->require_subcommand(1);
  ConfigFlags compute_flags;
  CLI::App* cgpt_compute = cgpt_cmd->add_subcommand("compute", "compute CGPTs of a mesh");
  cgpt_compute->add_option("--mesh", mesh_path, "OFF or OBJ file")->required();
  compute_flags.add_contrast(cgpt_compute);
  compute_flags.add_common(cgpt_compute);
  cgpt_compute->add_option("--order", compute_flags.order, "truncation order K (<= 5)");
  cgpt_compute->add_option("--quadrature", compute_flags.quadrature, "1pt | 3pt");

  std::string input_path, output_path;
  double scale = 1.0;
  std::vector<double> euler{0.0, 0.0, 0.0}, shift{0.0, 0.0, 0.0};
  CLI::App* cgpt_transform = cgpt_cmd->add_subcommand("transform", "apply x -> s R x + z to CGPTs");
  cgpt_transform->add_option("--input", input_path, "CGPT JSON")->required();
  cgpt_transform->add_option("--scale", scale, "scale factor s > 0");
  cgpt_transform->add_option("--euler", euler, "Euler angles alpha beta gamma")->expected(3);
  cgpt_transform->add_option("--shift", shift, "translation z")->expected(3);
  cgpt_transform->add_option("-o,--output", output_path, "output path");

  std::optional<double> sphere_radius;
  CLI::App* cgpt_check = cgpt_cmd->add_subcommand("check", "print quality metrics of a CGPT file");
  cgpt_check->add_option("--input", input_path, "CGPT JSON")->required();
  cgpt_check->add_option("--sphere", sphere_radius, "compare against the analytic ball of this radius");

  // msr
  CLI::App* msr_cmd = app.add_subcommand("msr", "multistatic response data");
  msr_cmd->require_subcommand(1);
  ConfigFlags msr_flags;
  CLI::App* msr_simulate = msr_cmd->add_subcommand("simulate", "simulate MSR data from a mesh");
  msr_simulate->add_option("--mesh", mesh_path, "OFF or OBJ file")->required();
  msr_flags.add_contrast(msr_simulate);
  msr_flags.add_common(msr_simulate);
  msr_flags.add_sensors(msr_simulate);
  msr_simulate->add_option("--quadrature", msr_flags.quadrature, "1pt | 3pt");

  CLI::App* msr_synth = msr_cmd->add_subcommand("synthesize", "MSR data V = Y M Y* from CGPTs");
  msr_synth->add_option("--cgpt", input_path, "CGPT JSON")->required();
  msr_flags.add_common(msr_synth);
  msr_flags.add_sensors(msr_synth);

  double rcond = 1e-10;
  bool allow_rank_deficient = false;
  CLI::App* msr_estimate = msr_cmd->add_subcommand("estimate", "least-squares CGPTs from MSR data");
  msr_estimate->add_option("--input", input_path, "MSR JSON")->required();
  msr_flags.add_common(msr_estimate);
  msr_estimate->add_option("--order", msr_flags.order, "truncation order K (<= 5)");
  msr_estimate->add_option("--rcond", rcond, "relative singular value cutoff");
  msr_estimate->add_flag("--allow-rank-deficient", allow_rank_deficient, "truncate instead of failing");

  // desc
  CLI::App* desc_cmd = app.add_subcommand("desc", "shape descriptors");
  desc_cmd->require_subcommand(1);
  std::string compare_path;
  CLI::App* desc_compute = desc_cmd->add_subcommand("compute", "invariant descriptor of a CGPT file");
  desc_compute->add_option("--input", input_path, "CGPT JSON")->required();
  desc_compute->add_option("--compare", compare_path, "CGPT or descriptor JSON to compare against");
  desc_compute->add_option("-o,--output", output_path, "output path");

  // dict
  CLI::App* dict_cmd = app.add_subcommand("dict", "descriptor dictionaries");
  dict_cmd->require_subcommand(1);
  ConfigFlags dict_flags;
  std::vector<std::string> entries;
  CLI::App* dict_build_cmd = dict_cmd->add_subcommand("build", "build a dictionary from meshes or CGPT files");
  dict_build_cmd->add_option("--entry", entries, "name=path (mesh file or CGPT JSON)")->required();
  dict_flags.add_contrast(dict_build_cmd);
  dict_flags.add_common(dict_build_cmd);
  dict_build_cmd->add_option("--order", dict_flags.order, "truncation order K (<= 5)");
  dict_build_cmd->add_option("--quadrature", dict_flags.quadrature, "1pt | 3pt");

  std::string dict_path;
  CLI::App* dict_match_cmd = dict_cmd->add_subcommand("match", "rank dictionary entries against a target");
  dict_match_cmd->add_option("--dict", dict_path, "dictionary JSON")->required();
  dict_match_cmd->add_option("--target", input_path, "CGPT or descriptor JSON")->required();
  dict_match_cmd->add_option("-o,--output", output_path, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  apply_thread_cap();

  if (*mesh_info) {
    const TriangleMesh mesh =
        load_mesh(mesh_path, autofix ? OrientationPolicy::AutoFix : OrientationPolicy::Reject);
    const Json j = {{"vertices", mesh.vertices().size()}, {"faces", mesh.face_count()},
                    {"area", mesh.total_area()},          {"volume", mesh.signed_volume()},
                    {"circumradius", mesh.circumradius()}, {"closure_defect", mesh.closure_defect()}};
    std::cout << j.dump(2) << '\n';
  } else if (*mesh_make) {
    save_mesh(make_primitive(kind, params, make_level), make_out);
  } else if (*cgpt_compute) {
    const RunConfig c = compute_flags.resolve();
    const TriangleMesh mesh = load_mesh(mesh_path);
    emit(to_json(compute_cgpt(mesh, c.resolved_lambda(), c.order, c.rule)), c.output);
  } else if (*cgpt_transform) {
    RigidScaleTransform t;
    t.scale = scale;
    t.angles = {euler[0], euler[1], euler[2]};
    t.shift = Vec3(shift[0], shift[1], shift[2]);
    emit(to_json(transform_full(cgpt_from_json(load_document(input_path)), t)), output_path);
  } else if (*cgpt_check) {
    const CgptBlockMatrix m = cgpt_from_json(load_document(input_path));
    Json blocks = Json::array();
    for (int n = 1; n <= m.order(); ++n)
      blocks.push_back({{"n", n}, {"condition", condition_number(m.block(n, n))}});
    Json j = {{"order", m.order()},
              {"lambda", m.lambda()},
              {"provenance", to_string(m.provenance())},
              {"hermitian_residual", m.hermitian_residual()},
              {"diagonal_blocks", std::move(blocks)}};
    if (sphere_radius) {
      if (!(*sphere_radius > 0.0)) throw ValidationError("sphere radius must be positive");
      double err = 0.0;
      CMatrix exact = CMatrix::Zero(m.matrix().rows(), m.matrix().cols());
      for (int n = 1; n <= m.order(); ++n)
        for (int k = 0; k < 2 * n + 1; ++k)
          exact(CgptBlockMatrix::offset(n) + k, CgptBlockMatrix::offset(n) + k) =
              std::pow(*sphere_radius, 2 * n + 1) * n / (m.lambda() - 1.0 / (2.0 * (2 * n + 1)));
      err = (m.matrix() - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
      j["sphere_oracle_error"] = err;
    }
    std::cout << j.dump(2) << '\n';
  } else if (*msr_simulate) {
    const RunConfig c = msr_flags.resolve();
    const TriangleMesh mesh = load_mesh(mesh_path);
    const SensorArray sensors = SensorArray::fibonacci(c.sensors, c.radius);
    emit(to_json(add_noise(simulate_msr(mesh, c.resolved_lambda(), sensors, c.rule), c.noise, c.seed)), c.output);
  } else if (*msr_synth) {
    const RunConfig c = msr_flags.resolve();
    const SensorArray sensors = SensorArray::fibonacci(c.sensors, c.radius);
    const CgptBlockMatrix m = cgpt_from_json(load_document(input_path));
    emit(to_json(add_noise(msr_from_cgpt(m, sensors), c.noise, c.seed)), c.output);
  } else if (*msr_estimate) {
    const RunConfig c = msr_flags.resolve();
    EstimateOptions options;
    options.rcond = rcond;
    options.allow_rank_deficient = allow_rank_deficient;
    emit(to_json(estimate_cgpt(msr_from_json(load_document(input_path)), c.order, options)), c.output);
  } else if (*desc_compute) {
    const CgptBlockMatrix m = cgpt_from_json(load_document(input_path));
    const RegistrationPoint p = registration_point(m);
    if (!p.reliable)
      std::cerr << "warning: registration point has imaginary residual " << p.imag_residual << '\n';
    const ShapeDescriptor d = compute_descriptor(m);
    if (!compare_path.empty()) {
      const ShapeDescriptor other = descriptor_from_document(load_document(compare_path));
      if (other.order != d.order) throw ValidationError("compared descriptors have different orders");
      double worst = 0.0;
      for (int l = 0; l < d.order; ++l)
        for (int n = 0; n < d.order; ++n)
          if (l != n) worst = std::max(worst, std::abs(d.I(l, n) - other.I(l, n)));
      std::cerr << "max |I_ln - I'_ln| over l != n: " << worst << (worst <= 1e-8 ? " (match)" : " (differ)")
                << '\n';
    }
    emit(to_json(d), output_path);
  } else if (*dict_build_cmd) {
    const RunConfig c = dict_flags.resolve();
    std::vector<DictionaryEntry> list;
    for (const std::string& e : entries) {
      const auto eq = e.find('=');
      if (eq == std::string::npos || eq == 0 || eq + 1 == e.size())
        throw ValidationError("dictionary entry must be name=path, got '" + e + "'");
      DictionaryEntry entry;
      entry.name = e.substr(0, eq);
      entry.source = e.substr(eq + 1);
      if (is_json_path(entry.source)) {
        entry.descriptor = compute_descriptor(cgpt_from_json(load_document(entry.source)));
      } else {
        entry.descriptor = compute_descriptor(compute_cgpt(load_mesh(entry.source), c.resolved_lambda(), c.order, c.rule));
      }
      list.push_back(std::move(entry));
    }
    emit(to_json(dict_build(std::move(list))), c.output);
  } else if (*dict_match_cmd) {
    const Dictionary dict = dictionary_from_json(load_document(dict_path));
    const ShapeDescriptor target = descriptor_from_document(load_document(input_path));
    Json ranking = Json::array();
    int rank = 1;
    for (const MatchResult& r : dict_match(target, dict))
      ranking.push_back({{"rank", rank++}, {"name", r.name}, {"distance", r.distance}});
    emit({{"schema", kSchemaVersion}, {"matches", std::move(ranking)}}, output_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
