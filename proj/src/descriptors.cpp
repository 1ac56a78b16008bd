#include "cgpt3d/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <Eigen/SVD>

#include "cgpt3d/errors.hpp"

namespace cgpt3d {

namespace {

constexpr double kMaxCondition = 1e12;

std::string block_name(int l, int n) { return "(" + std::to_string(l) + "," + std::to_string(n) + ")"; }

CMatrix checked_inverse(const CMatrix& a, const std::string& what) {
  const Eigen::JacobiSVD<CMatrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smallest = sv[sv.size() - 1];
  if (!(smallest > 0.0) || sv[0] / smallest > kMaxCondition)
    throw NumericalError(what + " is singular or ill-conditioned (condition number " +
                         std::to_string(smallest > 0.0 ? sv[0] / smallest : INFINITY) + ")");
  return a.partialPivLu().inverse();
}

void require_order2(const CgptBlockMatrix& m) {
  if (m.order() < 2) throw ValidationError("descriptors need CGPTs of order >= 2");
}

}  // namespace

CMatrix compute_u_matrix(const CgptBlockMatrix& m) {
  require_order2(m);
  return m.block(2, 1) * checked_inverse(m.block(1, 1), "block M_11");
}

Eigen::Vector3cd u_map(const CMatrix& u) {
  if (u.rows() != 5 || u.cols() != 3) throw ValidationError("u-map expects a 5x3 matrix");
  const double a = 3.0 / 10.0;
  const double b = std::sqrt(3.0) / (10.0 * std::sqrt(2.0));
  const double c = 3.0 / (10.0 * std::sqrt(2.0));
  const Complex i(0.0, 1.0);
  // U_rc in 1-based indices.
  const auto U = [&u](int r, int col) { return u(r - 1, col - 1); };
  Eigen::Vector3cd out;
  out[0] = -a * U(1, 1) + b * U(3, 1) - c * U(2, 2) + c * U(4, 2) - b * U(3, 3) + a * U(5, 3);
  out[1] = i * (a * U(1, 1) + b * U(3, 1) + c * U(2, 2) + c * U(4, 2) + b * U(3, 3) + a * U(5, 3));
  out[2] = a * U(2, 1) + std::sqrt(3.0) / 5.0 * U(3, 2) + a * U(4, 3);
  return out / std::sqrt(5.0);
}

RegistrationPoint registration_point(const CgptBlockMatrix& m) {
  const Eigen::Vector3cd u = u_map(compute_u_matrix(m));
  RegistrationPoint p;
  p.u = u.real();
  p.imag_residual = u.imag().norm();
  // M_11 scales like the cube of the inclusion size.
  const double size = std::cbrt(m.block(1, 1).norm());
  p.reliable = p.imag_residual <= 1e-6 * std::max(p.u.norm(), size);
  return p;
}

CgptBlockMatrix compute_j(const CgptBlockMatrix& m) {
  CgptBlockMatrix j = transform_shift(m, -registration_point(m).u);
  j.set_provenance(Provenance::Registered);
  return j;
}

SBlocks compute_s(const CgptBlockMatrix& j) {
  require_order2(j);
  const int k = j.order();
  std::vector<CMatrix> inv;
  for (int n = 1; n <= k; ++n) inv.push_back(checked_inverse(j.block(n, n), "diagonal block J_" + block_name(n, n)));
  SBlocks s(k, std::vector<CMatrix>(k));
  for (int l = 1; l <= k; ++l)
    for (int n = 1; n <= k; ++n) s[l - 1][n - 1] = inv[n - 1] * j.block(n, l) * inv[l - 1] * j.block(l, n);
  return s;
}

ShapeDescriptor compute_descriptor(const CgptBlockMatrix& m) {
  const SBlocks s = compute_s(compute_j(m));
  ShapeDescriptor d;
  d.order = m.order();
  d.lambda = m.lambda();
  d.provenance = m.provenance();
  d.I.resize(d.order, d.order);
  for (int l = 0; l < d.order; ++l)
    for (int n = 0; n < d.order; ++n) d.I(l, n) = s[l][n].norm();
  return d;
}

Dictionary dict_build(std::vector<DictionaryEntry> entries) {
  if (entries.empty()) throw ValidationError("dictionary needs at least one entry");
  Dictionary dict;
  dict.lambda = entries.front().descriptor.lambda;
  dict.order = entries.front().descriptor.order;
  std::set<std::string> names;
  for (const auto& e : entries) {
    if (e.name.empty()) throw ValidationError("dictionary entry names must be non-empty");
    if (!names.insert(e.name).second) throw ValidationError("duplicate dictionary entry '" + e.name + "'");
    if (e.descriptor.lambda != dict.lambda || e.descriptor.order != dict.order)
      throw ValidationError("dictionary entry '" + e.name + "' has a different contrast or order");
    if (e.descriptor.I.rows() != dict.order || e.descriptor.I.cols() != dict.order)
      throw ValidationError("dictionary entry '" + e.name + "' has a malformed descriptor");
  }
  dict.entries = std::move(entries);
  return dict;
}

double descriptor_distance(const ShapeDescriptor& target, const ShapeDescriptor& reference, double tau) {
  if (target.order != reference.order || target.I.rows() != reference.I.rows() ||
      target.I.cols() != reference.I.cols())
    throw ValidationError("descriptors of different order cannot be compared");
  double diff = 0.0, ref = 0.0;
  for (Eigen::Index l = 0; l < target.I.rows(); ++l) {
    for (Eigen::Index n = 0; n < target.I.cols(); ++n) {
      if (l == n) continue;
      diff += std::pow(target.I(l, n) - reference.I(l, n), 2);
      ref += std::pow(reference.I(l, n), 2);
    }
  }
  return std::sqrt(diff) / (std::sqrt(ref) + tau);
}

std::vector<MatchResult> dict_match(const ShapeDescriptor& target, const Dictionary& dict) {
  if (dict.entries.empty()) throw ValidationError("dictionary is empty");
  if (target.lambda != dict.lambda)
    throw ValidationError("target contrast " + std::to_string(target.lambda) + " differs from dictionary contrast " +
                          std::to_string(dict.lambda));
  if (target.order != dict.order)
    throw ValidationError("target order " + std::to_string(target.order) + " differs from dictionary order " +
                          std::to_string(dict.order));
  std::vector<MatchResult> out;
  for (const auto& e : dict.entries) out.push_back({e.name, descriptor_distance(target, e.descriptor)});
  std::sort(out.begin(), out.end(), [](const MatchResult& a, const MatchResult& b) {
    return a.distance != b.distance ? a.distance < b.distance : a.name < b.name;
  });
  return out;
}

}  // namespace cgpt3d
