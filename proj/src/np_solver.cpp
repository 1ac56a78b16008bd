#include "cgpt3d/np_solver.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Gauss-Legendre nodes/weights mapped to [0, 1].
void gauss_legendre01(int q, std::vector<double>& x, std::vector<double>& w) {
  x.resize(q);
  w.resize(q);
  for (int i = 0; i < q; ++i) {
    double t = std::cos(std::numbers::pi * (i + 0.75) / (q + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = t;  // P_{k-1}, P_k
      for (int k = 2; k <= q; ++k) {
        const double p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = q * (t * p1 - p0) / (t * t - 1.0);
      const double dt = p1 / dp;
      t -= dt;
      if (std::abs(dt) < 1e-16) break;
    }
    x[i] = 0.5 * (1.0 - t);
    w[i] = 1.0 / ((1.0 - t * t) * dp * dp);  // 2/((1-t^2) P'^2) scaled by 1/2
  }
}

}  // namespace

TriangleRule triangle_rule(int degree) {
  const int q = std::max(1, (degree + 3) / 2);
  std::vector<double> x, w;
  gauss_legendre01(q, x, w);
  TriangleRule rule;
  for (int a = 0; a < q; ++a) {
    for (int b = 0; b < q; ++b) {
      const double u = x[a];
      const double v = x[b] * (1.0 - u);
      rule.points.push_back({u, v});
      rule.weights.push_back(w[a] * w[b] * (1.0 - u));
    }
  }
  return rule;
}

Quadrature Quadrature::build(const TriangleMesh& mesh, QuadratureRule rule) {
  Quadrature q;
  q.rule = rule;
  const std::size_t nf = mesh.face_count();
  if (rule == QuadratureRule::Centroid) {
    q.nodes = mesh.centroids();
    q.normals = mesh.normals();
    q.weights = mesh.areas();
    q.face.resize(nf);
    for (std::size_t f = 0; f < nf; ++f) q.face[f] = static_cast<int>(f);
    return q;
  }
  static constexpr double kBary[3][3] = {
      {2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0}, {1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0}, {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0}};
  for (std::size_t f = 0; f < nf; ++f) {
    const auto& tri = mesh.faces()[f];
    for (const auto& b : kBary) {
      q.nodes.push_back(b[0] * mesh.vertices()[tri[0]] + b[1] * mesh.vertices()[tri[1]] +
                        b[2] * mesh.vertices()[tri[2]]);
      q.normals.push_back(mesh.normals()[f]);
      q.weights.push_back(mesh.areas()[f] / 3.0);
      q.face.push_back(static_cast<int>(f));
    }
  }
  return q;
}

Contrast::Contrast(double lambda) : lambda_(lambda) {
  if (!(std::abs(lambda) > 0.5) || !std::isfinite(lambda))
    throw ValidationError("contrast parameter must satisfy |lambda| > 1/2, got " + std::to_string(lambda));
}

Contrast Contrast::from_kappa(double kappa) {
  if (!(kappa > 0.0) || kappa == 1.0 || !std::isfinite(kappa))
    throw ValidationError("conductivity ratio kappa must be positive, finite and != 1");
  return Contrast((kappa + 1.0) / (2.0 * (kappa - 1.0)));
}

NpOperator NpOperator::assemble(const TriangleMesh& mesh, QuadratureRule rule) {
  Quadrature quad = Quadrature::build(mesh, rule);
  const Eigen::Index n = static_cast<Eigen::Index>(quad.size());
  Eigen::MatrixXd a(n, n);
#pragma omp parallel for schedule(static)
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3& xi = quad.nodes[i];
    const Vec3& ni = quad.normals[i];
    double k_row = 0.0;  // sum_{j != i} of the K_D row
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const Vec3 d = xi - quad.nodes[j];
      const double r = d.norm();
      const double scale = quad.weights[j] / (kFourPi * r * r * r);
      a(i, j) = scale * d.dot(ni);
      k_row -= scale * d.dot(quad.normals[j]);
    }
    a(i, i) = 0.5 - k_row;
  }
  return NpOperator(mesh, std::move(quad), std::move(a));
}

double NpOperator::calibration_residual() const {
  const Eigen::Map<const Eigen::VectorXd> w(quad_.weights.data(), static_cast<Eigen::Index>(quad_.size()));
  const Eigen::VectorXd col = (w.transpose() * a_).transpose();
  return (col.cwiseQuotient(w).array() - 0.5).abs().maxCoeff();
}

Resolvent::Resolvent(NpOperator op, Contrast contrast) : op_(std::move(op)), lambda_(contrast.lambda()) {
  Eigen::MatrixXd m = -op_.matrix();
  m.diagonal().array() += lambda_;
  lu_.compute(m);
}

Eigen::MatrixXd Resolvent::solve(const Eigen::MatrixXd& rhs) const {
  if (rhs.rows() != static_cast<Eigen::Index>(op_.size()))
    throw ValidationError("right-hand side length does not match the number of quadrature nodes");
  Eigen::MatrixXd phi = lu_.solve(rhs);
  const Eigen::MatrixXd res = lambda_ * phi - op_.matrix() * phi - rhs;
  for (Eigen::Index c = 0; c < rhs.cols(); ++c) {
    const double scale = rhs.col(c).norm();
    if (!std::isfinite(res.col(c).norm()) || res.col(c).norm() > 1e-8 * std::max(scale, 1e-300))
      throw NumericalError("resolvent solve failed: relative residual " +
                           std::to_string(res.col(c).norm() / scale) + " (singular system?)");
  }
  return phi;
}

Eigen::MatrixXcd Resolvent::solve(const Eigen::MatrixXcd& rhs) const {
  const Eigen::Index c = rhs.cols();
  Eigen::MatrixXd stacked(rhs.rows(), 2 * c);
  stacked.leftCols(c) = rhs.real();
  stacked.rightCols(c) = rhs.imag();
  const Eigen::MatrixXd sol = solve(stacked);
  Eigen::MatrixXcd out(rhs.rows(), c);
  out.real() = sol.leftCols(c);
  out.imag() = sol.rightCols(c);
  return out;
}

BoundaryDensity Resolvent::solve(const BoundaryDensity& rhs) const {
  return solve(Eigen::MatrixXcd(rhs)).col(0);
}

BoundaryDensity solve(const NpOperator& op, double lambda, const BoundaryDensity& rhs) {
  return Resolvent(op, Contrast(lambda)).solve(rhs);
}

Complex single_layer(const NpOperator& op, const BoundaryDensity& phi, const Vec3& x) {
  const auto& q = op.quadrature();
  if (phi.size() != static_cast<Eigen::Index>(q.size()))
    throw ValidationError("density length does not match the number of quadrature nodes");
  const auto& areas = op.mesh().areas();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    const double r = (x - q.nodes[i]).norm();
    const double width = std::sqrt(4.0 * areas[q.face[i]] / std::sqrt(3.0));
    if (r < width)
      throw ValidationError("single-layer evaluation point lies within one mesh width of the surface");
    sum -= q.weights[i] * phi[static_cast<Eigen::Index>(i)] / (kFourPi * r);
  }
  return sum;
}

BoundaryDensity normal_derivative_data(const NpOperator& op, const GradientField& grad, int degree) {
  const auto& q = op.quadrature();
  BoundaryDensity out(static_cast<Eigen::Index>(q.size()));
  const auto dot = [](const std::array<Complex, 3>& g, const Vec3& n) {
    return g[0] * n.x() + g[1] * n.y() + g[2] * n.z();
  };
  if (q.rule == QuadratureRule::ThreePoint) {
    for (std::size_t i = 0; i < q.size(); ++i) out[static_cast<Eigen::Index>(i)] = dot(grad(q.nodes[i]), q.normals[i]);
    return out;
  }
  const TriangleRule rule = triangle_rule(std::max(degree, 0));
  const auto& mesh = op.mesh();
  for (std::size_t f = 0; f < mesh.face_count(); ++f) {
    const auto& tri = mesh.faces()[f];
    const Vec3& a = mesh.vertices()[tri[0]];
    const Vec3 e1 = mesh.vertices()[tri[1]] - a;
    const Vec3 e2 = mesh.vertices()[tri[2]] - a;
    Complex avg = 0.0;
    for (std::size_t p = 0; p < rule.points.size(); ++p) {
      const Vec3 y = a + rule.points[p][0] * e1 + rule.points[p][1] * e2;
      avg += rule.weights[p] * dot(grad(y), mesh.normals()[f]);
    }
    out[static_cast<Eigen::Index>(f)] = 2.0 * avg;
  }
  return out;
}

BoundaryDensity solid_harmonic_neumann_data(const NpOperator& op, HarmonicIndex idx) {
  if (idx.n() == 0) return BoundaryDensity::Zero(static_cast<Eigen::Index>(op.size()));
  const MonomialExpansion p = solid_harmonic_coeffs(idx);
  return normal_derivative_data(op, [&p](const Vec3& y) { return p.gradient(y); }, idx.n() - 1);
}

BoundaryDensity point_source_neumann_data(const NpOperator& op, const Vec3& source) {
  const auto grad = [&source](const Vec3& y) {
    const Vec3 d = y - source;
    const double r = d.norm();
    const Vec3 g = d / (kFourPi * r * r * r);
    return std::array<Complex, 3>{g.x(), g.y(), g.z()};
  };
  return normal_derivative_data(op, grad, 8);
}

}  // namespace cgpt3d
