#pragma once

#include <cstdint>
#include <vector>

#include "cgpt3d/cgpt.hpp"

namespace cgpt3d {

/// Coincident sources and receivers on a sphere of radius `radius`.
struct SensorArray {
  std::vector<Vec3> positions;
  double radius = 0.0;

  /// Fibonacci-spiral layout of n points.
  static SensorArray fibonacci(int n, double radius);
  std::size_t size() const { return positions.size(); }
};

/// Multistatic response: V(r, s) is the perturbation measured at receiver r
/// for a point source at sensor s.
struct MsrDataset {
  SensorArray sensors;
  Eigen::MatrixXd v;
  double lambda = 0.0;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// V(r, s) = S_D[phi_s](x_r) with (lambda I - K*_D) phi_s = d Gamma_s / d nu.
MsrDataset simulate_msr(const InclusionSolver& solver, const SensorArray& sensors);
MsrDataset simulate_msr(const TriangleMesh& mesh, double lambda, const SensorArray& sensors,
                        QuadratureRule rule = QuadratureRule::Centroid);

/// N x (K^2+2K) matrix with entries Y_l^k(x_r / |x_r|) / ((2l+1) |x_r|^{l+1}).
CMatrix build_y(const SensorArray& sensors, int order);

/// Y M Y^* (complex; real up to roundoff for CGPTs of real domains).
CMatrix synthesize_msr(const CgptBlockMatrix& m, const SensorArray& sensors);
/// Real part of synthesize_msr() packed as a dataset.
MsrDataset msr_from_cgpt(const CgptBlockMatrix& m, const SensorArray& sensors);

struct EstimateOptions {
  double rcond = 1e-10;
  /// Truncate small singular values silently instead of failing.
  bool allow_rank_deficient = false;
};

/// Least-squares M = Y^+ V (Y^+)^* with a truncated-SVD pseudoinverse.
CgptBlockMatrix estimate_cgpt(const MsrDataset& data, int order, const EstimateOptions& options = {});

/// V + sigma ||V||_F / N * G with G standard normal from mt19937_64(seed).
MsrDataset add_noise(const MsrDataset& data, double sigma, std::uint64_t seed);

/// ||V - V^t||_F / ||V||_F.
double reciprocity_residual(const Eigen::MatrixXd& v);

}  // namespace cgpt3d
