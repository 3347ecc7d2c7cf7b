#include "ucnorm/tensor_core.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace ucnorm {

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double op_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  // JacobiSVD is the accurate choice at desk scale (sizes <= a few hundred).
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

CMatrix hermitian_part(const CMatrix& a) { return 0.5 * (a + a.adjoint()); }

bool is_psd(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) throw dimension_error("is_psd: matrix not square");
  if (a.size() == 0) return true;
  if (op_norm(a - a.adjoint()) > tol) return false;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

CMatrix gram_factor(const CMatrix& p, double tol) {
  if (!is_psd(p, tol)) throw positivity_error("gram_factor: input not PSD at tolerance");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(p));
  const auto& vals = es.eigenvalues();  // ascending
  const double scale = vals.size() > 0 ? std::max(0.0, vals(vals.size() - 1)) : 0.0;
  const double cut = tol * scale;
  Index rank = 0;
  for (Index i = 0; i < vals.size(); ++i)
    if (vals(i) > cut) ++rank;
  CMatrix f(p.rows(), rank);
  Index c = 0;
  for (Index i = 0; i < vals.size(); ++i) {
    if (vals(i) > cut) f.col(c++) = std::sqrt(vals(i)) * es.eigenvectors().col(i);
  }
  return f;
}

CMatrix pair_tuples(const MatrixTuple& s, const MatrixTuple& t) {
  if (s.n() != t.n()) throw arity_error("pair_tuples: tuple lengths differ");
  CMatrix acc = kron(s[0], t[0]);
  for (std::size_t j = 1; j < s.mats.size(); ++j) acc += kron(s[j], t[j]);
  return acc;
}

double commutator_defect(const MatrixTuple& t) {
  double worst = 0.0;
  for (std::size_t i = 0; i < t.mats.size(); ++i)
    for (std::size_t j = i + 1; j < t.mats.size(); ++j)
      worst = std::max(worst, op_norm(t[i] * t[j] - t[j] * t[i]));
  return worst;
}

bool commutes(const MatrixTuple& t, double tol) { return commutator_defect(t) <= tol; }

namespace {

// Append to `basis` an orthonormal completion drawn from e_0, e_1, ... in
// index order.  Assumes existing columns are orthonormal.
CMatrix complete_basis(const CMatrix& basis, Index d) {
  CMatrix full(d, d);
  Index have = basis.cols();
  full.leftCols(have) = basis;
  for (Index k = 0; k < d && have < d; ++k) {
    CVector v = CVector::Zero(d);
    v(k) = 1.0;
    // Two rounds of Gram-Schmidt to keep orthogonality at machine precision.
    for (int round = 0; round < 2; ++round)
      v -= full.leftCols(have) * (full.leftCols(have).adjoint() * v);
    const double nrm = v.norm();
    if (nrm > 1e-8) full.col(have++) = v / nrm;
  }
  if (have != d) throw error("basis completion failed");  // cannot happen for consistent input
  return full;
}

// Symmetric (Loewdin) orthogonalization: the closest matrix with orthonormal
// columns, preserving the column span.
CMatrix loewdin(const CMatrix& m) {
  if (m.cols() == 0) return m;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m.adjoint() * m);
  CMatrix inv_sqrt = es.eigenvectors() *
                     es.eigenvalues().cwiseMax(1e-300).cwiseSqrt().cwiseInverse().asDiagonal() *
                     es.eigenvectors().adjoint();
  return m * inv_sqrt;
}

}  // namespace

UnitaryExtension extend_isometry(const IsometryData& iso, double gram_tol) {
  const Index d = iso.ambient_dim;
  const Index m = iso.domain.cols();
  if (m == 0) return {CMatrix::Identity(d, d), d};

  const CMatrix gram_dom = iso.domain.adjoint() * iso.domain;
  const CMatrix gram_img = iso.image.adjoint() * iso.image;
  if (op_norm(gram_dom - gram_img) > gram_tol)
    throw isometry_error("extend_isometry: Gram matrices disagree beyond tolerance");

  // Orthonormal basis q_j = domain * c_j of span(domain) via pivoted QR;
  // the same coefficients applied to the image give the matched basis,
  // orthonormal up to the Gram mismatch.
  Eigen::ColPivHouseholderQR<CMatrix> qr(iso.domain);
  qr.setThreshold(1e-12);
  const Index r = qr.rank();

  CMatrix q_basis(d, r), p_basis(d, r);
  if (r > 0) {
    // coefficients C with domain * C orthonormal: C = P * [R11^{-1}; 0]
    CMatrix r11 = qr.matrixR().topLeftCorner(r, r).template triangularView<Eigen::Upper>();
    CMatrix coef = CMatrix::Zero(m, r);
    coef.topRows(r) = r11.inverse();
    coef = qr.colsPermutation() * coef;
    // The same coefficients on the image side give the matched basis, which
    // the Gram identity makes orthonormal up to the mismatch tolerance.
    q_basis = loewdin(iso.domain * coef);
    p_basis = loewdin(iso.image * coef);
  }

  const CMatrix q_full = complete_basis(q_basis, d);
  const CMatrix p_full = complete_basis(p_basis, d);
  return {p_full * q_full.adjoint(), d};
}

CMatrix shuffle_permutation(Index p, Index q) {
  CMatrix perm = CMatrix::Zero(p * q, p * q);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < q; ++j) perm(j * p + i, i * q + j) = 1.0;
  return perm;
}

}  // namespace ucnorm
