#ifndef UCNORM_TENSOR_CORE_HPP
#define UCNORM_TENSOR_CORE_HPP

#include "ucnorm/types.hpp"

namespace ucnorm {

/// Kronecker tensor product, entry ((i*b.rows+p),(j*b.cols+q)) = a(i,j)*b(p,q).
CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Largest singular value.
double op_norm(const CMatrix& a);

/// Hermitian part (a + a*)/2.
CMatrix hermitian_part(const CMatrix& a);

/// True iff ||a - a*|| <= tol and lambda_min((a+a*)/2) >= -tol.
bool is_psd(const CMatrix& a, double tol);

/// Factor a PSD matrix as p = F F* with cols(F) = numerical rank of p at
/// threshold tol*||p||.  Throws positivity_error if !is_psd(p, tol).
CMatrix gram_factor(const CMatrix& p, double tol);

/// sum_j kron(S_j, T_j); the minimal-tensor-norm pairing matrix of two tuples.
CMatrix pair_tuples(const MatrixTuple& s, const MatrixTuple& t);

/// True iff all pairwise commutators satisfy ||T_i T_j - T_j T_i|| <= tol.
bool commutes(const MatrixTuple& t, double tol);

/// Largest commutator norm over all pairs (0 for a single matrix).
double commutator_defect(const MatrixTuple& t);

struct UnitaryExtension {
  CMatrix u;  // square unitary with u * domain_k = image_k for all k
  Index dim;  // size of the space the extension acts on
};

/// Extend the isometry (domain_k -> image_k) to a unitary on the whole
/// ambient space.  Bases of the spans are built by column-pivoted QR with
/// symmetric orthogonalization, complements are completed from the standard
/// basis in index order, so the result is reproducible.  Throws
/// isometry_error when the Gram matrices disagree beyond gram_tol.
UnitaryExtension extend_isometry(const IsometryData& iso, double gram_tol = 1e-9);

/// Permutation matrix K with K * kron(A, B) * K^T = kron(B, A)
/// for A of size p x p and B of size q x q.
CMatrix shuffle_permutation(Index p, Index q);

}  // namespace ucnorm

#endif  // UCNORM_TENSOR_CORE_HPP
