#ifndef UCNORM_REALIZATION_HPP
#define UCNORM_REALIZATION_HPP

#include "ucnorm/polyeval.hpp"
#include "ucnorm/tensor_core.hpp"
#include "ucnorm/types.hpp"

#include <vector>

namespace ucnorm {

/// Unitary colligation U = [[A,B],[C,D]] on C^k (+) C^N; the transfer
/// function is z -> D + C (I - sigma(z) A)^{-1} sigma(z) B for a linear
/// pencil sigma(z) = sum z_j T_j on C^k supplied at evaluation time.
struct Colligation {
  CMatrix a, b, c, d;

  Index k() const { return a.rows(); }
  Index n_out() const { return d.rows(); }
  CMatrix assemble() const;
  double unitarity_defect() const;  // ||U^*U - I||
  void validate(double tol = 1e-9) const;
};

/// One side of an Agler-Nevanlinna factorization restricted to a finite
/// point set: points, F-values, the pencil tuple, and p-values.
struct FactorizationData {
  std::vector<CVector> points;    // lambda_i in C^n
  std::vector<CMatrix> f_values;  // N x k
  MatrixTuple sigma;              // n matrices, k x k
  std::vector<CMatrix> p_values;  // N x N

  Index n_points() const { return static_cast<Index>(points.size()); }
  Index n_vars() const { return sigma.n(); }
  Index k() const { return sigma.dim(); }
  Index n_out() const { return p_values.empty() ? 0 : p_values.front().rows(); }
  void validate() const;
};

struct FactorizationCheck {
  double residual = 0.0;
  bool pass = false;
};

/// Largest deviation over point pairs of
/// (I - p_i p_j^*) - F_i (I - sigma(l_i) sigma(l_j)^*) F_j^*.
FactorizationCheck verify_factorization(const FactorizationData& d, double tol);

/// Lurking-isometry construction: reads the isometry off the rearranged
/// factorization identity, extends it to a unitary, and returns the
/// colligation whose transfer function reproduces the p-values.
/// Throws isometry_error when the data is not a factorization.
Colligation build_colligation(const FactorizationData& d, double gram_tol = 1e-9);

/// D + C (I - sigma(z) A)^{-1} sigma(z) B with sigma(z) = sum z_j T_j.
/// Requires ||sigma(z)|| < 1.
CMatrix eval_transfer(const Colligation& c, const MatrixTuple& t, const CVector& z);

/// Residual of the defect identity
/// (I - Q^*Q) - B~^* (I-A~X)^{-*} (I - X^*X) (I-A~X)^{-1} B~,  Q = transfer
/// at X, tildes lifting blocks by kron(I_L, .).  Requires ||X|| < 1.
double defect_check(const Colligation& c, const CMatrix& x);

/// Transfer function lifted to X = r * sum S_j (x) T_j for a commuting
/// tuple s; requires ||X|| < 1.
CMatrix eval_transfer_on_tuple(const Colligation& c, const MatrixTuple& t,
                               const MatrixTuple& s, double r);

/// Degree-truncated polynomial expansion of the transfer function,
/// D + sum_{m>=1} C sigma(z) (A sigma(z))^{m-1} B collected by multi-index.
MatrixPolynomial transfer_polynomial(const Colligation& c, const MatrixTuple& t, int max_degree);

/// The explicit 6x6 pencil tuple with sigma(z) realizing the factorization
/// of 1 - 4 z_1 z_2 conj(w_1 w_2) on the l2 ball.
MatrixTuple two_z1z2_sigma_tuple();

/// F(z) = (1 0 0 0 z1 z2) as a 1x6 row.
CMatrix two_z1z2_f_value(const CVector& z);

/// p(z1, z2) = 2 z1 z2.
MatrixPolynomial two_z1z2_polynomial();

/// Factorization data for 2 z1 z2 sampled at the given points of the ball.
FactorizationData two_z1z2_factorization(const std::vector<CVector>& points);

}  // namespace ucnorm

#endif  // UCNORM_REALIZATION_HPP
