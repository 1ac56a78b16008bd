#include "cgpt3d/msr.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include <Eigen/SVD>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

SensorArray SensorArray::fibonacci(int n, double radius) {
  if (n < 1) throw ValidationError("sensor count must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw ValidationError("sensor radius must be positive");
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  SensorArray a;
  a.radius = radius;
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    a.positions.emplace_back(radius * rho * std::cos(phi), radius * rho * std::sin(phi), radius * z);
  }
  return a;
}

MsrDataset simulate_msr(const InclusionSolver& solver, const SensorArray& sensors) {
  const NpOperator& op = solver.op();
  const auto& q = op.quadrature();
  const double reach = op.mesh().circumradius();
  const Eigen::Index n = static_cast<Eigen::Index>(sensors.size());
  if (n == 0) throw ValidationError("sensor array is empty");
  for (const Vec3& x : sensors.positions)
    if (!(x.norm() > reach))
      throw ValidationError("sensor at distance " + std::to_string(x.norm()) +
                            " lies inside the circumscribed sphere of the mesh (radius " + std::to_string(reach) + ")");

  const Eigen::Index nodes = static_cast<Eigen::Index>(q.size());
  Eigen::MatrixXd rhs(nodes, n);
  for (Eigen::Index s = 0; s < n; ++s) rhs.col(s) = point_source_neumann_data(op, sensors.positions[s]).real();
  const Eigen::MatrixXd phi = solver.resolvent().solve(rhs);

  // Single-layer evaluation matrix, S(r, i) = w_i Gamma(x_r - y_i).
  Eigen::MatrixXd single(n, nodes);
  const auto& areas = op.mesh().areas();
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index i = 0; i < nodes; ++i) {
      const double dist = (sensors.positions[r] - q.nodes[i]).norm();
      if (dist < std::sqrt(4.0 * areas[q.face[i]] / std::sqrt(3.0)))
        throw ValidationError("sensor lies within one mesh width of the surface");
      single(r, i) = -q.weights[i] / (4.0 * std::numbers::pi * dist);
    }
  }
  MsrDataset out;
  out.sensors = sensors;
  out.v = single * phi;
  out.lambda = solver.lambda();
  return out;
}

MsrDataset simulate_msr(const TriangleMesh& mesh, double lambda, const SensorArray& sensors, QuadratureRule rule) {
  return simulate_msr(InclusionSolver(mesh, lambda, rule), sensors);
}

CMatrix build_y(const SensorArray& sensors, int order) {
  if (order < 1 || order > kMaxDegree) throw ValidationError("order out of range");
  const Eigen::Index n = static_cast<Eigen::Index>(sensors.size());
  CMatrix y(n, CgptBlockMatrix::dimension(order));
  for (Eigen::Index r = 0; r < n; ++r) {
    const SphericalPoint p = SphericalPoint::from_cartesian(sensors.positions[r]);
    if (!(p.r > 0.0)) throw ValidationError("sensor at the origin");
    for (int l = 1; l <= order; ++l)
      for (int k = -l; k <= l; ++k)
        y(r, CgptBlockMatrix::offset(l) + k + l) =
            sph_harm(HarmonicIndex(l, k), p.theta, p.phi) / ((2.0 * l + 1.0) * std::pow(p.r, l + 1));
  }
  return y;
}

CMatrix synthesize_msr(const CgptBlockMatrix& m, const SensorArray& sensors) {
  const CMatrix y = build_y(sensors, m.order());
  return y * m.matrix() * y.adjoint();
}

MsrDataset msr_from_cgpt(const CgptBlockMatrix& m, const SensorArray& sensors) {
  MsrDataset out;
  out.sensors = sensors;
  out.v = synthesize_msr(m, sensors).real();
  out.lambda = m.lambda();
  return out;
}

CgptBlockMatrix estimate_cgpt(const MsrDataset& data, int order, const EstimateOptions& options) {
  const int dim = CgptBlockMatrix::dimension(order);
  const Eigen::Index n = static_cast<Eigen::Index>(data.sensors.size());
  if (data.v.rows() != n || data.v.cols() != n)
    throw ValidationError("MSR matrix must be N x N for N sensors");
  if (n < dim)
    throw ValidationError("estimation of order " + std::to_string(order) + " needs at least " +
                          std::to_string(dim) + " sensors, got " + std::to_string(n));
  if (!(options.rcond >= 0.0)) throw ValidationError("rcond must be non-negative");

  const CMatrix y = build_y(data.sensors, order);
  const Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double cutoff = options.rcond * sv[0];
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff) {
      inv[i] = 1.0 / sv[i];
      continue;
    }
    if (options.allow_rank_deficient) continue;
    // Name the degree block carrying most of the lost direction.
    const CVector dir = svd.matrixV().col(i);
    int worst = 1;
    double energy = -1.0;
    for (int l = 1; l <= order; ++l) {
      const double e = dir.segment(CgptBlockMatrix::offset(l), 2 * l + 1).squaredNorm();
      if (e > energy) {
        energy = e;
        worst = l;
      }
    }
    throw NumericalError("sensor matrix is rank deficient in degree block " + std::to_string(worst) +
                         " (singular value ratio " + std::to_string(sv[i] / sv[0]) + ")");
  }
  const CMatrix pinv = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
  CMatrix m = pinv * data.v.cast<Complex>() * pinv.adjoint();
  return CgptBlockMatrix(order, data.lambda, Provenance::Estimated, std::move(m));
}

MsrDataset add_noise(const MsrDataset& data, double sigma, std::uint64_t seed) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("noise level must be non-negative");
  MsrDataset out = data;
  out.sigma = sigma;
  out.seed = seed;
  if (sigma == 0.0) return out;
  const double amp = sigma * data.v.norm() / static_cast<double>(data.v.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Eigen::Index j = 0; j < out.v.cols(); ++j)
    for (Eigen::Index i = 0; i < out.v.rows(); ++i) out.v(i, j) += amp * normal(rng);
  return out;
}

double reciprocity_residual(const Eigen::MatrixXd& v) {
  const double norm = v.norm();
  return norm == 0.0 ? 0.0 : (v - v.transpose()).norm() / norm;
}

}  // namespace cgpt3d
