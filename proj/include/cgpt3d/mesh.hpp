#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "cgpt3d/harmonics.hpp"

namespace cgpt3d {

using Face = std::array<int, 3>;

enum class MeshFormat { Off, Obj };

/// What to do when a closed, consistently oriented surface has inward normals.
enum class OrientationPolicy { Reject, AutoFix };

/// Closed oriented triangulated surface with per-face quadrature data.
///
/// Construction validates that every edge is shared by exactly two faces with
/// opposite directions, that no face is degenerate and that the normals point
/// outward (positive signed volume). Instances are immutable.
class TriangleMesh {
 public:
  static TriangleMesh create(std::vector<Vec3> vertices, std::vector<Face> faces,
                             OrientationPolicy policy = OrientationPolicy::Reject);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<Face>& faces() const { return faces_; }
  const std::vector<Vec3>& centroids() const { return centroids_; }
  const std::vector<double>& areas() const { return areas_; }
  const std::vector<Vec3>& normals() const { return normals_; }

  std::size_t face_count() const { return faces_.size(); }
  double total_area() const;
  double signed_volume() const;
  /// Largest vertex distance from the origin.
  double circumradius() const;
  /// |sum_f area_f normal_f|, zero for a closed surface.
  double closure_defect() const;

 private:
  TriangleMesh() = default;

  std::vector<Vec3> vertices_;
  std::vector<Face> faces_;
  std::vector<Vec3> centroids_;
  std::vector<double> areas_;
  std::vector<Vec3> normals_;
};

/// x -> s R(angles) x + z.
struct RigidScaleTransform {
  double scale = 1.0;
  EulerAngles angles;
  Vec3 shift = Vec3::Zero();

  Vec3 apply(const Vec3& x) const;
  /// Validates s > 0.
  void validate() const;
};

/// The map x -> outer(inner(x)), with its rotation re-expressed as Euler angles.
RigidScaleTransform compose(const RigidScaleTransform& outer, const RigidScaleTransform& inner);

/// R = Rz(gamma) * [cos b 0 -sin b; 0 1 0; sin b 0 cos b] * Rz(alpha).
Mat3 euler_rotation_matrix(const EulerAngles& angles);

/// Inverse of euler_rotation_matrix() for a proper rotation; beta in [0, pi].
EulerAngles euler_angles_from_matrix(const Mat3& r);

TriangleMesh apply_transform(const TriangleMesh& mesh, const RigidScaleTransform& t);

MeshFormat mesh_format_from_path(const std::filesystem::path& path);
TriangleMesh load_mesh(const std::filesystem::path& path, MeshFormat format,
                       OrientationPolicy policy = OrientationPolicy::Reject);
TriangleMesh load_mesh(const std::filesystem::path& path,
                       OrientationPolicy policy = OrientationPolicy::Reject);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path, MeshFormat format);
void save_mesh(const TriangleMesh& mesh, const std::filesystem::path& path);

// Test shapes. `level` is the refinement level of the generator.

/// Subdivided icosahedron, 20 * 4^level faces.
TriangleMesh make_sphere(double radius, int level);
/// Sphere generator scaled by (a, b, c) along the axes.
TriangleMesh make_ellipsoid(double a, double b, double c, int level);
/// Axis-aligned box centred at the origin with 2^level divisions per edge.
TriangleMesh make_box(double a, double b, double c, int level);
/// Torus around the z axis, 8*2^level x 4*2^level quads split in two.
TriangleMesh make_torus(double major_radius, double minor_radius, int level);

/// Dispatch by name: "sphere" {r}, "ellipsoid" {a,b,c}, "box" {a,b,c},
/// "torus" {R,r}.
TriangleMesh make_primitive(const std::string& kind, const std::vector<double>& params, int level);

}  // namespace cgpt3d
