#pragma once

#include <string>
#include <vector>

#include "cgpt3d/cgpt.hpp"

namespace cgpt3d {

/// U_D = M_21 M_11^{-1}, a 5 x 3 matrix. Needs order >= 2.
CMatrix compute_u_matrix(const CgptBlockMatrix& m);

/// Linear map C^{5x3} -> C^3 with u(conj(G_21(z))) = z and
/// u(conj(Q_2) U Q_1^t) = R u(U).
Eigen::Vector3cd u_map(const CMatrix& u);

struct RegistrationPoint {
  Vec3 u = Vec3::Zero();
  double imag_residual = 0.0;  ///< |Im u(U_D)|
  bool reliable = true;        ///< imaginary part within tolerance
};

/// Real part of u(U_D). The imaginary part is kept as a quality metric and
/// compared against 1e-6 relative to |u_D| (with the inclusion size as floor).
RegistrationPoint registration_point(const CgptBlockMatrix& m);

/// J = M(T_{-u_D} D), provenance "J".
CgptBlockMatrix compute_j(const CgptBlockMatrix& m);

/// S_ln = J_nn^{-1} J_nl J_ll^{-1} J_ln, stored at [l-1][n-1].
using SBlocks = std::vector<std::vector<CMatrix>>;
SBlocks compute_s(const CgptBlockMatrix& j);

struct ShapeDescriptor {
  int order = 0;
  double lambda = 0.0;
  Provenance provenance = Provenance::Computed;
  Eigen::MatrixXd I;  ///< I(l-1, n-1) = ||S_ln||_F
};

ShapeDescriptor compute_descriptor(const CgptBlockMatrix& m);

struct DictionaryEntry {
  std::string name;
  ShapeDescriptor descriptor;
  std::string source;
};

struct Dictionary {
  double lambda = 0.0;
  int order = 0;
  std::vector<DictionaryEntry> entries;
};

/// Validates unique names and uniform (lambda, order).
Dictionary dict_build(std::vector<DictionaryEntry> entries);

/// Relative l2 distance over the entries with l != n:
///   ||I_t - I_d|| / (||I_d|| + tau).
double descriptor_distance(const ShapeDescriptor& target, const ShapeDescriptor& reference, double tau = 1e-3);

struct MatchResult {
  std::string name;
  double distance = 0.0;
};

/// Ascending distance, ties broken by name.
std::vector<MatchResult> dict_match(const ShapeDescriptor& target, const Dictionary& dict);

}  // namespace cgpt3d
