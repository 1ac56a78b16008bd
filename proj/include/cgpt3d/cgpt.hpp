#pragma once

#include <functional>
#include <string>

#include "cgpt3d/harmonics.hpp"
#include "cgpt3d/mesh.hpp"
#include "cgpt3d/np_solver.hpp"

namespace cgpt3d {

enum class Provenance { Computed, Transformed, Estimated, Registered };

std::string to_string(Provenance p);
Provenance provenance_from_string(const std::string& s);

/// Contracted GPT block matrix of order K.
///
/// Degree blocks 1..K are stacked degree-major, order-minor, so block (l, n)
/// occupies rows l^2-1 .. l^2+2l-1 and the analogous columns, and
/// (M_ln)_{k+l, m+n} = M_{nmlk}.
class CgptBlockMatrix {
 public:
  CgptBlockMatrix(int order, double lambda, Provenance provenance);
  CgptBlockMatrix(int order, double lambda, Provenance provenance, CMatrix full);

  static int dimension(int order) { return order * order + 2 * order; }
  static int offset(int degree) { return degree * degree - 1; }

  int order() const { return order_; }
  double lambda() const { return lambda_; }
  Provenance provenance() const { return provenance_; }
  void set_provenance(Provenance p) { provenance_ = p; }

  const CMatrix& matrix() const { return m_; }
  CMatrix block(int l, int n) const;
  void set_block(int l, int n, const CMatrix& b);
  /// M_{nmlk}.
  Complex entry(int n, int m, int l, int k) const;

  /// ||M - M^*||_F / ||M||_F.
  double hermitian_residual() const;

 private:
  void check_degree(int d) const;

  int order_;
  double lambda_;
  Provenance provenance_;
  CMatrix m_;
};

/// Discrete transmission problem on a mesh: the Nystrom operator and one LU
/// factorization of (lambda I - K*_D), shared by every right-hand side.
class InclusionSolver {
 public:
  InclusionSolver(const TriangleMesh& mesh, double lambda, QuadratureRule rule = QuadratureRule::Centroid);

  double lambda() const { return resolvent_.lambda(); }
  const Resolvent& resolvent() const { return resolvent_; }
  const NpOperator& op() const { return resolvent_.op(); }

  /// CGPTs M_{nmlk} for 1 <= n, l <= order.
  CgptBlockMatrix cgpt(int order) const;

  /// Monomial GPT M_{alpha beta}.
  double gpt_monomial(const MultiIndex& alpha, const MultiIndex& beta) const;

  /// All monomial GPTs with 1 <= |alpha|, |beta| <= max_degree, indexed by
  /// monomial_index().
  Eigen::MatrixXd gpt_table(int max_degree) const;

 private:
  Resolvent resolvent_;
};

/// Position of alpha in the graded listing of multi-indices of degrees
/// 1, 2, ...; within a degree the order is lexicographic descending.
int monomial_index(const MultiIndex& alpha);

CgptBlockMatrix compute_cgpt(const TriangleMesh& mesh, double lambda, int order,
                             QuadratureRule rule = QuadratureRule::Centroid);

double compute_gpt_monomial(const TriangleMesh& mesh, double lambda, const MultiIndex& alpha,
                            const MultiIndex& beta, QuadratureRule rule = QuadratureRule::Centroid);

using GptProvider = std::function<double(const MultiIndex& alpha, const MultiIndex& beta)>;

/// M_{nmlk} = sum_{|alpha|=n, |beta|=l} a_alpha^{mn} conj(a_beta^{kl}) M_{alpha beta}.
Complex harmonic_combine(const GptProvider& gpt, int n, int m, int l, int k);

/// Block lower-triangular translation matrix G(z) of order K.
CMatrix shift_matrix(int order, const Vec3& z);
/// Block diagonal diag(s^n Q_n(R)).
CMatrix rotation_scale_matrix(int order, double s, const EulerAngles& angles);

/// M_ln(sD) = s^{l+n+1} M_ln(D).
CgptBlockMatrix transform_scale(const CgptBlockMatrix& m, double s);
/// M_ln(D + z) = sum_{i<=l, nu<=n} conj(G_li) M_{i nu} G_{n nu}^t.
CgptBlockMatrix transform_shift(const CgptBlockMatrix& m, const Vec3& z);
/// M_ln(R D) = conj(Q_l) M_ln Q_n^t.
CgptBlockMatrix transform_rotate(const CgptBlockMatrix& m, const EulerAngles& angles);
/// M(T_z T^s R D) = s conj(G) conj(Q(s,R)) M Q(s,R)^t G^t.
CgptBlockMatrix transform_full(const CgptBlockMatrix& m, const RigidScaleTransform& t);

}  // namespace cgpt3d
