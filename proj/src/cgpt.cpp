#include "cgpt3d/cgpt.hpp"

#include <cmath>
#include <string>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Computed: return "computed";
    case Provenance::Transformed: return "transformed";
    case Provenance::Estimated: return "estimated";
    case Provenance::Registered: return "J";
  }
  return "computed";
}

Provenance provenance_from_string(const std::string& s) {
  if (s == "computed") return Provenance::Computed;
  if (s == "transformed") return Provenance::Transformed;
  if (s == "estimated") return Provenance::Estimated;
  if (s == "J") return Provenance::Registered;
  throw ValidationError("unknown CGPT provenance '" + s + "'");
}

CgptBlockMatrix::CgptBlockMatrix(int order, double lambda, Provenance provenance)
    : CgptBlockMatrix(order, lambda, provenance,
                      CMatrix::Zero(dimension(std::max(order, 1)), dimension(std::max(order, 1)))) {}

CgptBlockMatrix::CgptBlockMatrix(int order, double lambda, Provenance provenance, CMatrix full)
    : order_(order), lambda_(lambda), provenance_(provenance), m_(std::move(full)) {
  if (order < 1 || order > kMaxDegree)
    throw ValidationError("CGPT order must be in [1, " + std::to_string(kMaxDegree) + "], got " +
                          std::to_string(order));
  const int d = dimension(order);
  if (m_.rows() != d || m_.cols() != d)
    throw ValidationError("CGPT matrix of order " + std::to_string(order) + " must be " + std::to_string(d) +
                          "x" + std::to_string(d));
  if (!m_.allFinite()) throw NumericalError("CGPT matrix has non-finite entries");
}

void CgptBlockMatrix::check_degree(int d) const {
  if (d < 1 || d > order_)
    throw ValidationError("block degree " + std::to_string(d) + " outside 1.." + std::to_string(order_));
}

CMatrix CgptBlockMatrix::block(int l, int n) const {
  check_degree(l);
  check_degree(n);
  return m_.block(offset(l), offset(n), 2 * l + 1, 2 * n + 1);
}

void CgptBlockMatrix::set_block(int l, int n, const CMatrix& b) {
  check_degree(l);
  check_degree(n);
  if (b.rows() != 2 * l + 1 || b.cols() != 2 * n + 1)
    throw ValidationError("block (" + std::to_string(l) + "," + std::to_string(n) + ") has the wrong shape");
  m_.block(offset(l), offset(n), 2 * l + 1, 2 * n + 1) = b;
}

Complex CgptBlockMatrix::entry(int n, int m, int l, int k) const {
  check_degree(n);
  check_degree(l);
  HarmonicIndex(n, m);
  HarmonicIndex(l, k);
  return m_(offset(l) + k + l, offset(n) + m + n);
}

double CgptBlockMatrix::hermitian_residual() const {
  const double norm = m_.norm();
  if (norm == 0.0) return 0.0;
  return (m_ - m_.adjoint()).norm() / norm;
}

InclusionSolver::InclusionSolver(const TriangleMesh& mesh, double lambda, QuadratureRule rule)
    : resolvent_(NpOperator::assemble(mesh, rule), Contrast(lambda)) {}

CgptBlockMatrix InclusionSolver::cgpt(int order) const {
  if (order < 1 || order > kMaxDegree)
    throw ValidationError("CGPT order must be in [1, " + std::to_string(kMaxDegree) + "]");
  const NpOperator& op = resolvent_.op();
  const auto& q = op.quadrature();
  const Eigen::Index nodes = static_cast<Eigen::Index>(q.size());
  const int dim = CgptBlockMatrix::dimension(order);

  Eigen::MatrixXcd rhs(nodes, dim);
  Eigen::MatrixXcd test(nodes, dim);
  for (int n = 1; n <= order; ++n) {
    for (int m = -n; m <= n; ++m) {
      const int col = CgptBlockMatrix::offset(n) + m + n;
      const HarmonicIndex idx(n, m);
      rhs.col(col) = solid_harmonic_neumann_data(op, idx);
      for (Eigen::Index i = 0; i < nodes; ++i)
        test(i, col) = q.weights[i] * std::conj(solid_harmonic(idx, q.nodes[i]));
    }
  }
  const Eigen::MatrixXcd phi = resolvent_.solve(rhs);
  return CgptBlockMatrix(order, lambda(), Provenance::Computed, test.transpose() * phi);
}

namespace {

int monomial_count(int degree) { return (degree + 1) * (degree + 2) / 2; }

MultiIndex monomial_at(int index) {
  int d = 1;
  while (index >= monomial_count(d)) {
    index -= monomial_count(d);
    ++d;
  }
  for (int a = d; a >= 0; --a) {
    const int span = d - a + 1;
    if (index < span) return {a, d - a - index, index};
    index -= span;
  }
  return {d, 0, 0};
}

double monomial_value(const MultiIndex& b, const Vec3& y) {
  return std::pow(y.x(), b[0]) * std::pow(y.y(), b[1]) * std::pow(y.z(), b[2]);
}

void check_multi_index(const MultiIndex& a) {
  if (a[0] < 0 || a[1] < 0 || a[2] < 0 || a[0] + a[1] + a[2] < 1)
    throw ValidationError("multi-index must be non-negative with |alpha| >= 1");
  if (a[0] + a[1] + a[2] > kMaxDegree) throw ValidationError("multi-index degree exceeds the supported maximum");
}

BoundaryDensity monomial_neumann_data(const NpOperator& op, const MultiIndex& alpha) {
  MonomialExpansion p;
  p.degree = alpha[0] + alpha[1] + alpha[2];
  p.terms[alpha] = 1.0;
  return normal_derivative_data(op, [&p](const Vec3& y) { return p.gradient(y); }, p.degree - 1);
}

}  // namespace

int monomial_index(const MultiIndex& alpha) {
  check_multi_index(alpha);
  const int d = alpha[0] + alpha[1] + alpha[2];
  int index = 0;
  for (int e = 1; e < d; ++e) index += monomial_count(e);
  index += (d - alpha[0]) * (d - alpha[0] + 1) / 2;
  return index + (d - alpha[0] - alpha[1]);
}

double InclusionSolver::gpt_monomial(const MultiIndex& alpha, const MultiIndex& beta) const {
  check_multi_index(alpha);
  check_multi_index(beta);
  const NpOperator& op = resolvent_.op();
  const auto& q = op.quadrature();
  const Eigen::VectorXcd phi = resolvent_.solve(monomial_neumann_data(op, alpha));
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i)
    sum += q.weights[i] * monomial_value(beta, q.nodes[i]) * phi[static_cast<Eigen::Index>(i)].real();
  return sum;
}

Eigen::MatrixXd InclusionSolver::gpt_table(int max_degree) const {
  if (max_degree < 1 || max_degree > kMaxDegree) throw ValidationError("monomial degree out of range");
  const NpOperator& op = resolvent_.op();
  const auto& q = op.quadrature();
  const Eigen::Index nodes = static_cast<Eigen::Index>(q.size());
  int count = 0;
  for (int d = 1; d <= max_degree; ++d) count += monomial_count(d);

  Eigen::MatrixXd rhs(nodes, count);
  Eigen::MatrixXd test(nodes, count);
  for (int c = 0; c < count; ++c) {
    const MultiIndex a = monomial_at(c);
    rhs.col(c) = monomial_neumann_data(op, a).real();
    for (Eigen::Index i = 0; i < nodes; ++i) test(i, c) = q.weights[i] * monomial_value(a, q.nodes[i]);
  }
  // table(alpha, beta) = sum_i w_i y_i^beta phi_alpha(y_i)
  return (test.transpose() * resolvent_.solve(rhs)).transpose();
}

CgptBlockMatrix compute_cgpt(const TriangleMesh& mesh, double lambda, int order, QuadratureRule rule) {
  return InclusionSolver(mesh, lambda, rule).cgpt(order);
}

double compute_gpt_monomial(const TriangleMesh& mesh, double lambda, const MultiIndex& alpha,
                            const MultiIndex& beta, QuadratureRule rule) {
  return InclusionSolver(mesh, lambda, rule).gpt_monomial(alpha, beta);
}

Complex harmonic_combine(const GptProvider& gpt, int n, int m, int l, int k) {
  HarmonicIndex(n, m);
  HarmonicIndex(l, k);
  if (n == 0 || l == 0) return 0.0;
  const MonomialExpansion a = solid_harmonic_coeffs(HarmonicIndex(n, m));
  const MonomialExpansion b = solid_harmonic_coeffs(HarmonicIndex(l, k));
  Complex sum = 0.0;
  for (const auto& [alpha, ca] : a.terms)
    for (const auto& [beta, cb] : b.terms) sum += ca * std::conj(cb) * gpt(alpha, beta);
  return sum;
}

CMatrix shift_matrix(int order, const Vec3& z) {
  const int dim = CgptBlockMatrix::dimension(order);
  CMatrix g = CMatrix::Zero(dim, dim);
  for (int l = 1; l <= order; ++l)
    for (int i = 1; i <= l; ++i)
      g.block(CgptBlockMatrix::offset(l), CgptBlockMatrix::offset(i), 2 * l + 1, 2 * i + 1) = g_matrix(l, i, z);
  return g;
}

CMatrix rotation_scale_matrix(int order, double s, const EulerAngles& angles) {
  const int dim = CgptBlockMatrix::dimension(order);
  CMatrix q = CMatrix::Zero(dim, dim);
  for (int n = 1; n <= order; ++n)
    q.block(CgptBlockMatrix::offset(n), CgptBlockMatrix::offset(n), 2 * n + 1, 2 * n + 1) =
        std::pow(s, n) * wigner_q_matrix(n, angles);
  return q;
}

namespace {

void check_scale(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("scale factor must be positive and finite");
}

CgptBlockMatrix transformed(const CgptBlockMatrix& m, CMatrix full) {
  return CgptBlockMatrix(m.order(), m.lambda(), Provenance::Transformed, std::move(full));
}

}  // namespace

CgptBlockMatrix transform_scale(const CgptBlockMatrix& m, double s) {
  check_scale(s);
  CMatrix out = m.matrix();
  for (int l = 1; l <= m.order(); ++l)
    for (int n = 1; n <= m.order(); ++n)
      out.block(CgptBlockMatrix::offset(l), CgptBlockMatrix::offset(n), 2 * l + 1, 2 * n + 1) *=
          std::pow(s, l + n + 1);
  return transformed(m, std::move(out));
}

CgptBlockMatrix transform_shift(const CgptBlockMatrix& m, const Vec3& z) {
  const CMatrix g = shift_matrix(m.order(), z);
  return transformed(m, g.conjugate() * m.matrix() * g.transpose());
}

CgptBlockMatrix transform_rotate(const CgptBlockMatrix& m, const EulerAngles& angles) {
  const CMatrix q = rotation_scale_matrix(m.order(), 1.0, angles);
  return transformed(m, q.conjugate() * m.matrix() * q.transpose());
}

CgptBlockMatrix transform_full(const CgptBlockMatrix& m, const RigidScaleTransform& t) {
  t.validate();
  const CMatrix g = shift_matrix(m.order(), t.shift);
  const CMatrix q = rotation_scale_matrix(m.order(), t.scale, t.angles);
  const CMatrix left = g.conjugate() * q.conjugate();
  const CMatrix right = q.transpose() * g.transpose();
  return transformed(m, t.scale * (left * m.matrix() * right));
}

}  // namespace cgpt3d
