#pragma once

#include <array>
#include <functional>
#include <vector>

#include <Eigen/LU>

#include "cgpt3d/harmonics.hpp"
#include "cgpt3d/mesh.hpp"

namespace cgpt3d {

enum class QuadratureRule {
  Centroid,    ///< one node per face at the centroid
  ThreePoint,  ///< three interior nodes per face, degree-2 exact
};

/// Nodes, weights and normals of a surface quadrature rule on a mesh.
struct Quadrature {
  QuadratureRule rule = QuadratureRule::Centroid;
  std::vector<Vec3> nodes;
  std::vector<Vec3> normals;
  std::vector<double> weights;
  std::vector<int> face;  ///< owning face of each node

  std::size_t size() const { return nodes.size(); }
  static Quadrature build(const TriangleMesh& mesh, QuadratureRule rule);
};

/// Conductivity contrast parametrised by lambda, |lambda| > 1/2.
class Contrast {
 public:
  explicit Contrast(double lambda);
  static Contrast from_kappa(double kappa);

  double lambda() const { return lambda_; }
  /// kappa = (2 lambda + 1) / (2 lambda - 1).
  double kappa() const { return (2.0 * lambda_ + 1.0) / (2.0 * lambda_ - 1.0); }

 private:
  double lambda_;
};

/// Complex value per quadrature node.
using BoundaryDensity = CVector;

/// Nystrom matrix of the adjoint Neumann-Poincare operator K*_D. The weight
/// of node j is folded into column j.
///
/// Off-diagonal entries are kernel times weight. The diagonal comes from the
/// Gauss identity: the K_D rows are completed to sum to 1/2, and K*_D is the
/// weighted transpose W^{-1} K^T W, so sum_i w_i A_ij = w_j / 2 for every j.
class NpOperator {
 public:
  static NpOperator assemble(const TriangleMesh& mesh, QuadratureRule rule = QuadratureRule::Centroid);

  const Eigen::MatrixXd& matrix() const { return a_; }
  const Quadrature& quadrature() const { return quad_; }
  const TriangleMesh& mesh() const { return mesh_; }
  std::size_t size() const { return quad_.size(); }

  /// max_j |sum_i w_i A_ij / w_j - 1/2|.
  double calibration_residual() const;

 private:
  NpOperator(TriangleMesh mesh, Quadrature quad, Eigen::MatrixXd a)
      : mesh_(std::move(mesh)), quad_(std::move(quad)), a_(std::move(a)) {}

  TriangleMesh mesh_;
  Quadrature quad_;
  Eigen::MatrixXd a_;
};

/// Dense LU of (lambda I - A), reused across right-hand sides. Owns the
/// operator it factorizes.
class Resolvent {
 public:
  Resolvent(NpOperator op, Contrast contrast);

  double lambda() const { return lambda_; }
  const NpOperator& op() const { return op_; }

  /// Solves (lambda I - A) phi = rhs; checks the relative residual.
  BoundaryDensity solve(const BoundaryDensity& rhs) const;
  /// Column-wise solve for a block of real right-hand sides.
  Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;

 private:
  NpOperator op_;
  double lambda_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

/// Convenience one-shot solve; prefer Resolvent for repeated solves.
BoundaryDensity solve(const NpOperator& op, double lambda, const BoundaryDensity& rhs);

/// S_D[phi](x) by the node rule. Throws ValidationError when x is within one
/// local mesh width of a node.
Complex single_layer(const NpOperator& op, const BoundaryDensity& phi, const Vec3& x);

using GradientField = std::function<std::array<Complex, 3>(const Vec3&)>;

/// Normal-derivative data <nu, grad f> at the nodes. For the centroid rule
/// each value is the exact average over the owning face of a gradient that is
/// polynomial of degree <= `degree`; for the three-point rule it is sampled.
BoundaryDensity normal_derivative_data(const NpOperator& op, const GradientField& grad, int degree);

/// <nu, grad(r^n Y_n^m)> from the monomial expansion; zero for n = 0.
BoundaryDensity solid_harmonic_neumann_data(const NpOperator& op, HarmonicIndex idx);

/// Normal derivative of Gamma(. - source) on the boundary.
BoundaryDensity point_source_neumann_data(const NpOperator& op, const Vec3& source);

/// Points and weights of a collapsed Gauss rule on the reference triangle
/// {(u, v): u, v >= 0, u + v <= 1}, exact for total degree <= `degree`.
/// Weights sum to 1/2.
struct TriangleRule {
  std::vector<std::array<double, 2>> points;
  std::vector<double> weights;
};
TriangleRule triangle_rule(int degree);

}  // namespace cgpt3d
