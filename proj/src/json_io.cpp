#include "cgpt3d/json_io.hpp"

#include <fstream>
#include <string>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

namespace {

Json real_matrix(const Eigen::MatrixXd& a) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd parse_real_matrix(const Json& j, const std::string& what) {
  if (!j.is_array()) throw ValidationError(what + " must be an array of rows");
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  Eigen::MatrixXd a(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(i);
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError(what + " has ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) a(i, c) = row.at(c).get<double>();
  }
  return a;
}

void check_schema(const Json& j, const std::string& kind) {
  if (!j.is_object()) throw ValidationError(kind + " document must be a JSON object");
  if (!j.contains("schema") || j.at("schema") != kSchemaVersion)
    throw ValidationError(kind + " document has a missing or unsupported schema version");
}

// Runs a parser, turning nlohmann type and key errors into ValidationError.
template <typename F>
auto parse_guarded(const std::string& kind, F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw ValidationError("malformed " + kind + " document: " + e.what());
  }
}

}  // namespace

Json to_json(const CgptBlockMatrix& m) {
  Json blocks = Json::array();
  for (int l = 1; l <= m.order(); ++l) {
    for (int n = 1; n <= m.order(); ++n) {
      const CMatrix b = m.block(l, n);
      blocks.push_back({{"l", l}, {"n", n}, {"re", real_matrix(b.real())}, {"im", real_matrix(b.imag())}});
    }
  }
  return {{"schema", kSchemaVersion},
          {"order", m.order()},
          {"lambda", m.lambda()},
          {"provenance", to_string(m.provenance())},
          {"blocks", std::move(blocks)}};
}

CgptBlockMatrix cgpt_from_json(const Json& j) {
  check_schema(j, "CGPT");
  return parse_guarded("CGPT", [&] {
    CgptBlockMatrix m(j.at("order").get<int>(), j.at("lambda").get<double>(),
                      provenance_from_string(j.at("provenance").get<std::string>()));
    const int k = m.order();
    std::vector<bool> seen(static_cast<std::size_t>(k * k), false);
    for (const Json& b : j.at("blocks")) {
      const int l = b.at("l").get<int>();
      const int n = b.at("n").get<int>();
      CMatrix block(2 * l + 1, 2 * n + 1);
      const Eigen::MatrixXd re = parse_real_matrix(b.at("re"), "block re");
      const Eigen::MatrixXd im = parse_real_matrix(b.at("im"), "block im");
      if (re.rows() != block.rows() || re.cols() != block.cols() || im.rows() != block.rows() ||
          im.cols() != block.cols())
        throw ValidationError("CGPT block (" + std::to_string(l) + "," + std::to_string(n) + ") has the wrong shape");
      block.real() = re;
      block.imag() = im;
      m.set_block(l, n, block);
      seen[static_cast<std::size_t>((l - 1) * k + (n - 1))] = true;
    }
    for (bool s : seen)
      if (!s) throw ValidationError("CGPT document is missing blocks");
    return CgptBlockMatrix(m.order(), m.lambda(), m.provenance(), m.matrix());
  });
}

Json to_json(const MsrDataset& d) {
  Json sensors = Json::array();
  for (const Vec3& x : d.sensors.positions) sensors.push_back({x.x(), x.y(), x.z()});
  return {{"schema", kSchemaVersion}, {"sensors", std::move(sensors)},
          {"radius", d.sensors.radius}, {"lambda", d.lambda},
          {"V", real_matrix(d.v)},      {"sigma", d.sigma},
          {"seed", d.seed}};
}

MsrDataset msr_from_json(const Json& j) {
  check_schema(j, "MSR");
  return parse_guarded("MSR", [&] {
    MsrDataset d;
    for (const Json& x : j.at("sensors")) {
      if (x.size() != 3) throw ValidationError("sensor positions must have three coordinates");
      d.sensors.positions.emplace_back(x.at(0).get<double>(), x.at(1).get<double>(), x.at(2).get<double>());
    }
    d.sensors.radius = j.at("radius").get<double>();
    d.lambda = j.at("lambda").get<double>();
    d.v = parse_real_matrix(j.at("V"), "V");
    d.sigma = j.value("sigma", 0.0);
    d.seed = j.value("seed", std::uint64_t{0});
    const Eigen::Index n = static_cast<Eigen::Index>(d.sensors.size());
    if (d.v.rows() != n || d.v.cols() != n) throw ValidationError("MSR matrix must be N x N for N sensors");
    return d;
  });
}

Json to_json(const ShapeDescriptor& d) {
  return {{"schema", kSchemaVersion},
          {"order", d.order},
          {"lambda", d.lambda},
          {"provenance", to_string(d.provenance)},
          {"I", real_matrix(d.I)}};
}

ShapeDescriptor descriptor_from_json(const Json& j) {
  check_schema(j, "descriptor");
  return parse_guarded("descriptor", [&] {
    ShapeDescriptor d;
    d.order = j.at("order").get<int>();
    d.lambda = j.at("lambda").get<double>();
    d.provenance = provenance_from_string(j.at("provenance").get<std::string>());
    d.I = parse_real_matrix(j.at("I"), "I");
    if (d.order < 2 || d.I.rows() != d.order || d.I.cols() != d.order)
      throw ValidationError("descriptor grid does not match its order");
    return d;
  });
}

Json to_json(const Dictionary& d) {
  Json entries = Json::array();
  for (const auto& e : d.entries)
    entries.push_back({{"name", e.name}, {"I", real_matrix(e.descriptor.I)}, {"source", e.source}});
  return {{"schema", kSchemaVersion}, {"lambda", d.lambda}, {"order", d.order}, {"entries", std::move(entries)}};
}

Dictionary dictionary_from_json(const Json& j) {
  check_schema(j, "dictionary");
  return parse_guarded("dictionary", [&] {
    const double lambda = j.at("lambda").get<double>();
    const int order = j.at("order").get<int>();
    std::vector<DictionaryEntry> entries;
    for (const Json& e : j.at("entries")) {
      DictionaryEntry entry;
      entry.name = e.at("name").get<std::string>();
      entry.source = e.value("source", std::string());
      entry.descriptor.order = order;
      entry.descriptor.lambda = lambda;
      entry.descriptor.I = parse_real_matrix(e.at("I"), "I");
      entries.push_back(std::move(entry));
    }
    return dict_build(std::move(entries));
  });
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

void write_json(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace cgpt3d
