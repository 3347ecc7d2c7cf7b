#ifndef UCNORM_AGLER_CONE_HPP
#define UCNORM_AGLER_CONE_HPP

#include "ucnorm/opspace.hpp"
#include "ucnorm/polyeval.hpp"
#include "ucnorm/realization.hpp"
#include "ucnorm/types.hpp"

#include <vector>

namespace ucnorm {

/// Finite-set cone membership problem: does the block Hermitian matrix
/// P_ij = I_N - p(l_i) p(l_j)^* factor over the node set for the given
/// space family?  Supported: MAX(L1) (polydisk Agler cone), ROW/COLUMN
/// (Drury-Arveson kernel), and n = 1 (classical Schur cone, either route).
struct ConeProblem {
  OperatorSpaceSpec spec;
  std::vector<CVector> points;
  CMatrix target;                 // (k*N) x (k*N), Hermitian blockwise
  std::vector<CMatrix> p_values;  // N x N at each node (target = I - p p^*)
  Index n_out = 1;

  Index n_points() const { return static_cast<Index>(points.size()); }
  void validate() const;
};

ConeProblem make_cone_problem(const MatrixPolynomial& p, const OperatorSpaceSpec& spec,
                              const std::vector<CVector>& pts);

enum class ConeStatus { Feasible, Undecided };
std::string cone_status_name(ConeStatus s);

struct ConeCertificate {
  ConeStatus status = ConeStatus::Undecided;
  std::vector<CMatrix> kernels;  // one PSD kernel per cone slot
  double residual = 0.0;
  long iterations = 0;
  std::vector<double> residual_history;  // recorded once per iteration
};

/// Closed form for the row/column (Drury-Arveson) cone:
/// Gamma_ij = P_ij / (1 - <l_i, conj(l_j)>); FEASIBLE iff Gamma is PSD.
ConeCertificate row_cone_check(const ConeProblem& prob, double tol = 1e-9);

/// Projection splitting (Douglas-Rachford reflections) between the affine
/// slice sum_m (1 - l_i^m conj(l_j^m)) Gamma_m,ij = P_ij and the product of
/// PSD cones, tracking the best cone-feasible iterate.  FEASIBLE when its
/// affine residual drops below tol; UNDECIDED after max_iter (projection
/// methods cannot certify infeasibility).
ConeCertificate agler_feasibility(const ConeProblem& prob, long max_iter, double tol);

/// Gram-factor the certificate kernels and assemble factorization data whose
/// sigma is the corresponding coordinate model (block-diagonal coordinates
/// for the Agler cone, the row embedding for the Drury-Arveson kernel).
FactorizationData cone_to_factorization(const ConeCertificate& cert, const ConeProblem& prob,
                                        Index dim_cap = 4096);

}  // namespace ucnorm

#endif  // UCNORM_AGLER_CONE_HPP
