#include "cgpt3d/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>
#include <utility>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

namespace {

std::string edge_name(int a, int b) {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

}  // namespace

TriangleMesh TriangleMesh::create(std::vector<Vec3> vertices, std::vector<Face> faces,
                                  OrientationPolicy policy) {
  if (faces.empty()) throw ValidationError("mesh has no faces");
  const int nv = static_cast<int>(vertices.size());
  for (std::size_t f = 0; f < faces.size(); ++f)
    for (int v : faces[f])
      if (v < 0 || v >= nv)
        throw ValidationError("face " + std::to_string(f) + " references missing vertex " + std::to_string(v));

  // Watertight: every undirected edge used by exactly two faces. Consistent
  // orientation: those two faces traverse it in opposite directions.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& f : faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e];
      const int b = f[(e + 1) % 3];
      if (a == b) throw ValidationError("degenerate face with repeated vertex " + std::to_string(a));
      ++directed[{a, b}];
    }
  }
  for (const auto& [edge, count] : directed) {
    const auto [a, b] = edge;
    const auto it = directed.find({b, a});
    const int reverse = it == directed.end() ? 0 : it->second;
    if (count + reverse != 2)
      throw ValidationError("open or non-manifold surface: edge " + edge_name(a, b) + " is shared by " +
                            std::to_string(count + reverse) + " faces");
    if (count != 1)
      throw ValidationError("inconsistent orientation: edge " + edge_name(a, b) +
                            " is traversed twice in the same direction");
  }

  double scale = 0.0;
  for (const auto& v : vertices) scale = std::max(scale, v.cwiseAbs().maxCoeff());

  TriangleMesh mesh;
  mesh.vertices_ = std::move(vertices);
  mesh.faces_ = std::move(faces);
  const auto compute = [&mesh, scale] {
    const std::size_t nf = mesh.faces_.size();
    mesh.centroids_.resize(nf);
    mesh.areas_.resize(nf);
    mesh.normals_.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) {
      const Vec3& a = mesh.vertices_[mesh.faces_[f][0]];
      const Vec3& b = mesh.vertices_[mesh.faces_[f][1]];
      const Vec3& c = mesh.vertices_[mesh.faces_[f][2]];
      const Vec3 cr = (b - a).cross(c - a);
      const double twice_area = cr.norm();
      if (!(twice_area > 1e-14 * scale * scale))
        throw ValidationError("degenerate face " + std::to_string(f) + " (zero area)");
      mesh.centroids_[f] = (a + b + c) / 3.0;
      mesh.areas_[f] = 0.5 * twice_area;
      mesh.normals_[f] = cr / twice_area;
    }
  };
  compute();

  if (mesh.closure_defect() > 1e-10 * mesh.total_area())
    throw ValidationError("surface is not closed: sum of area-weighted normals does not vanish");
  if (!(mesh.signed_volume() > 0.0)) {
    if (policy == OrientationPolicy::Reject)
      throw ValidationError("inverted orientation: normals point inward (negative signed volume)");
    for (auto& f : mesh.faces_) std::swap(f[1], f[2]);
    compute();
  }
  return mesh;
}

double TriangleMesh::total_area() const {
  double s = 0.0;
  for (double a : areas_) s += a;
  return s;
}

double TriangleMesh::signed_volume() const {
  double v = 0.0;
  for (std::size_t f = 0; f < faces_.size(); ++f) v += centroids_[f].dot(normals_[f]) * areas_[f];
  return v / 3.0;
}

double TriangleMesh::circumradius() const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, v.norm());
  return r;
}

double TriangleMesh::closure_defect() const {
  Vec3 s = Vec3::Zero();
  for (std::size_t f = 0; f < faces_.size(); ++f) s += areas_[f] * normals_[f];
  return s.norm();
}

// --- transforms -------------------------------------------------------------

Mat3 euler_rotation_matrix(const EulerAngles& e) {
  const double ca = std::cos(e.alpha), sa = std::sin(e.alpha);
  const double cb = std::cos(e.beta), sb = std::sin(e.beta);
  const double cg = std::cos(e.gamma), sg = std::sin(e.gamma);
  Mat3 rg, rb, ra;
  rg << cg, -sg, 0, sg, cg, 0, 0, 0, 1;
  rb << cb, 0, -sb, 0, 1, 0, sb, 0, cb;
  ra << ca, -sa, 0, sa, ca, 0, 0, 0, 1;
  return rg * rb * ra;
}

EulerAngles euler_angles_from_matrix(const Mat3& r) {
  // Third row is (sin b cos a, -sin b sin a, cos b); third column is
  // (-cos g sin b, -sin g sin b, cos b).
  EulerAngles e;
  const double sb = std::hypot(r(2, 0), r(2, 1));
  e.beta = std::atan2(sb, r(2, 2));
  if (sb > 1e-12) {
    e.alpha = std::atan2(-r(2, 1), r(2, 0));
    e.gamma = std::atan2(-r(1, 2), -r(0, 2));
  } else if (r(2, 2) > 0.0) {
    e.alpha = std::atan2(r(1, 0), r(0, 0));
  } else {
    e.beta = std::numbers::pi;
    e.alpha = std::atan2(r(1, 0), r(1, 1));
  }
  return e;
}

Vec3 RigidScaleTransform::apply(const Vec3& x) const {
  return scale * (euler_rotation_matrix(angles) * x) + shift;
}

void RigidScaleTransform::validate() const {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw ValidationError("transform scale must be positive");
}

RigidScaleTransform compose(const RigidScaleTransform& outer, const RigidScaleTransform& inner) {
  const Mat3 ro = euler_rotation_matrix(outer.angles);
  const Mat3 ri = euler_rotation_matrix(inner.angles);
  RigidScaleTransform t;
  t.scale = outer.scale * inner.scale;
  t.angles = euler_angles_from_matrix(ro * ri);
  t.shift = outer.scale * (ro * inner.shift) + outer.shift;
  return t;
}

TriangleMesh apply_transform(const TriangleMesh& mesh, const RigidScaleTransform& t) {
  t.validate();
  const Mat3 r = euler_rotation_matrix(t.angles);
  std::vector<Vec3> v;
  v.reserve(mesh.vertices().size());
  for (const auto& x : mesh.vertices()) v.push_back(t.scale * (r * x) + t.shift);
  return TriangleMesh::create(std::move(v), mesh.faces());
}

// --- I/O ----------------------------------------------------------------------

MeshFormat mesh_format_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  if (ext == ".off") return MeshFormat::Off;
  if (ext == ".obj") return MeshFormat::Obj;
  throw ValidationError("cannot infer mesh format from extension '" + ext + "' (expected .off or .obj)");
}

namespace {

// Fan-triangulates a polygon.
void push_polygon(std::vector<Face>& faces, const std::vector<int>& poly) {
  for (std::size_t k = 1; k + 1 < poly.size(); ++k) faces.push_back({poly[0], poly[k], poly[k + 1]});
}

std::pair<std::vector<Vec3>, std::vector<Face>> read_off(std::istream& in, const std::string& name) {
  std::stringstream body;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    body << line << '\n';
  }
  std::string header;
  if (!(body >> header) || header.rfind("OFF", 0) != 0) throw ValidationError(name + ": missing OFF header");
  std::size_t nv = 0, nf = 0, ne = 0;
  if (header.size() > 3) {
    std::istringstream rest(header.substr(3));
    rest >> nv;
  }
  if (!(body >> nv >> nf >> ne)) throw ValidationError(name + ": bad OFF counts");
  std::vector<Vec3> verts(nv);
  for (auto& v : verts)
    if (!(body >> v.x() >> v.y() >> v.z())) throw ValidationError(name + ": truncated vertex list");
  std::vector<Face> faces;
  for (std::size_t f = 0; f < nf; ++f) {
    int count = 0;
    if (!(body >> count) || count < 3) throw ValidationError(name + ": bad face record " + std::to_string(f));
    std::vector<int> poly(static_cast<std::size_t>(count));
    for (auto& idx : poly)
      if (!(body >> idx)) throw ValidationError(name + ": truncated face " + std::to_string(f));
    push_polygon(faces, poly);
  }
  return {std::move(verts), std::move(faces)};
}

std::pair<std::vector<Vec3>, std::vector<Face>> read_obj(std::istream& in, const std::string& name) {
  std::vector<Vec3> verts;
  std::vector<Face> faces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "v") {
      Vec3 v;
      if (!(ls >> v.x() >> v.y() >> v.z()))
        throw ValidationError(name + ":" + std::to_string(lineno) + ": bad vertex");
      verts.push_back(v);
    } else if (tag == "f") {
      std::vector<int> poly;
      std::string tok;
      while (ls >> tok) {
        int idx = 0;
        try {
          idx = std::stoi(tok.substr(0, tok.find('/')));
        } catch (const std::exception&) {
          throw ValidationError(name + ":" + std::to_string(lineno) + ": bad face index '" + tok + "'");
        }
        poly.push_back(idx > 0 ? idx - 1 : static_cast<int>(verts.size()) + idx);
      }
      if (poly.size() < 3) throw ValidationError(name + ":" + std::to_string(lineno) + ": face with < 3 vertices");
      push_polygon(faces, poly);
    }
  }
  return {std::move(verts), std::move(faces)};
}

}  // namespace

TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format, OrientationPolicy policy) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open mesh file " + path.string());
  auto [v, f] = format == MeshFormat::Off ? read_off(in, path.string()) : read_obj(in, path.string());
  try {
    return TriangleMesh::create(std::move(v), std::move(f), policy);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

TriangleMesh load_mesh(const std::filesystem::path& path, OrientationPolicy policy) {
  return load_mesh(path, mesh_format_from_path(path), policy);
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, MeshFormat format) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write mesh file " + path.string());
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  if (format == MeshFormat::Off) {
    out << "OFF\n" << mesh.vertices().size() << ' ' << mesh.faces().size() << " 0\n";
    for (const auto& v : mesh.vertices()) out << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces()) out << "3 " << f[0] << ' ' << f[1] << ' ' << f[2] << '\n';
  } else {
    for (const auto& v : mesh.vertices()) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
    for (const auto& f : mesh.faces()) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  }
  if (!out) throw IoError("failed writing mesh file " + path.string());
}

void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path) {
  save_mesh(mesh, path, mesh_format_from_path(path));
}

// --- primitives ---------------------------------------------------------------

namespace {

void check_level(int level) {
  if (level < 0 || level > 7) throw ValidationError("refinement level must be in [0, 7]");
}

void check_positive(std::initializer_list<double> values, const char* what) {
  for (double v : values)
    if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(std::string(what) + ": parameters must be positive");
}

std::pair<std::vector<Vec3>, std::vector<Face>> unit_icosphere(int level) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                         {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                         {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> mid;
    const auto midpoint = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      const auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int idx = static_cast<int>(v.size()) - 1;
      mid.emplace(key, idx);
      return idx;
    };
    std::vector<Face> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int a = midpoint(tri[0], tri[1]);
      const int b = midpoint(tri[1], tri[2]);
      const int c = midpoint(tri[2], tri[0]);
      next.push_back({tri[0], a, c});
      next.push_back({tri[1], b, a});
      next.push_back({tri[2], c, b});
      next.push_back({a, b, c});
    }
    f = std::move(next);
  }
  return {std::move(v), std::move(f)};
}

}  // namespace

TriangleMesh make_sphere(double radius, int level) { return make_ellipsoid(radius, radius, radius, level); }

TriangleMesh make_ellipsoid(double a, double b, double c, int level) {
  check_positive({a, b, c}, "ellipsoid");
  check_level(level);
  auto [v, f] = unit_icosphere(level);
  for (auto& p : v) p = Vec3(a * p.x(), b * p.y(), c * p.z());
  return TriangleMesh::create(std::move(v), std::move(f), OrientationPolicy::AutoFix);
}

TriangleMesh make_box(double a, double b, double c, int level) {
  check_positive({a, b, c}, "box");
  check_level(level);
  const int d = 1 << level;
  std::map<std::array<int, 3>, int> index;
  std::vector<Vec3> v;
  const auto vertex = [&](std::array<int, 3> ijk) {
    const auto it = index.find(ijk);
    if (it != index.end()) return it->second;
    v.emplace_back(a * (static_cast<double>(ijk[0]) / d - 0.5), b * (static_cast<double>(ijk[1]) / d - 0.5),
                   c * (static_cast<double>(ijk[2]) / d - 0.5));
    const int idx = static_cast<int>(v.size()) - 1;
    index.emplace(ijk, idx);
    return idx;
  };
  std::vector<Face> f;
  for (int axis = 0; axis < 3; ++axis) {
    const int u = (axis + 1) % 3;
    const int w = (axis + 2) % 3;
    for (int side = 0; side <= 1; ++side) {
      for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
          std::array<int, 3> p00{}, p10{}, p11{}, p01{};
          for (auto* p : {&p00, &p10, &p11, &p01}) (*p)[axis] = side * d;
          p00[u] = i, p00[w] = j;
          p10[u] = i + 1, p10[w] = j;
          p11[u] = i + 1, p11[w] = j + 1;
          p01[u] = i, p01[w] = j + 1;
          // (u, w, axis) is right handed, so counter-clockwise in (u, w)
          // points along +axis.
          const int q00 = vertex(p00), q10 = vertex(p10), q11 = vertex(p11), q01 = vertex(p01);
          if (side == 1) {
            f.push_back({q00, q10, q11});
            f.push_back({q00, q11, q01});
          } else {
            f.push_back({q00, q11, q10});
            f.push_back({q00, q01, q11});
          }
        }
      }
    }
  }
  return TriangleMesh::create(std::move(v), std::move(f));
}

TriangleMesh make_torus(double major_radius, double minor_radius, int level) {
  check_positive({major_radius, minor_radius}, "torus");
  if (!(minor_radius < major_radius)) throw ValidationError("torus: minor radius must be below major radius");
  check_level(level);
  const int nu = 4 << level;
  const int nv = 2 << level;
  const double two_pi = 2.0 * std::numbers::pi;
  std::vector<Vec3> v;
  v.reserve(static_cast<std::size_t>(nu * nv));
  for (int i = 0; i < nu; ++i) {
    const double u = two_pi * i / nu;
    for (int j = 0; j < nv; ++j) {
      const double w = two_pi * j / nv;
      const double rho = major_radius + minor_radius * std::cos(w);
      v.emplace_back(rho * std::cos(u), rho * std::sin(u), minor_radius * std::sin(w));
    }
  }
  const auto id = [nu, nv](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
  std::vector<Face> f;
  for (int i = 0; i < nu; ++i) {
    for (int j = 0; j < nv; ++j) {
      f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return TriangleMesh::create(std::move(v), std::move(f), OrientationPolicy::AutoFix);
}

TriangleMesh make_primitive(const std::string& kind, const std::vector<double>& p, int level) {
  const auto need = [&](std::size_t n) {
    if (p.size() != n)
      throw ValidationError(kind + " expects " + std::to_string(n) + " parameters, got " + std::to_string(p.size()));
  };
  if (kind == "sphere") {
    need(1);
    return make_sphere(p[0], level);
  }
  if (kind == "ellipsoid") {
    need(3);
    return make_ellipsoid(p[0], p[1], p[2], level);
  }
  if (kind == "box") {
    need(3);
    return make_box(p[0], p[1], p[2], level);
  }
  if (kind == "torus") {
    need(2);
    return make_torus(p[0], p[1], level);
  }
  throw ValidationError("unknown primitive '" + kind + "' (sphere, ellipsoid, box, torus)");
}

}  // namespace cgpt3d
