#ifndef UCNORM_PICK_HPP
#define UCNORM_PICK_HPP

#include "ucnorm/agler_cone.hpp"
#include "ucnorm/opspace.hpp"
#include "ucnorm/realization.hpp"
#include "ucnorm/types.hpp"

#include <optional>
#include <vector>

namespace ucnorm {

/// Scalar Nevanlinna-Pick interpolation data: distinct nodes inside the
/// domain ball and scalar targets.
struct PickProblem {
  OperatorSpaceSpec spec;
  std::vector<CVector> nodes;
  std::vector<Complex> targets;

  Index n_nodes() const { return static_cast<Index>(nodes.size()); }
  void validate() const;
};

enum class PickStatus { Feasible, Infeasible, Undecided };
std::string pick_status_name(PickStatus s);

/// Witness of the kernel identity 1 - w_i conj(w_j) =
/// v_i [I - sigma(l_i) sigma(l_j)^*] v_j^*.
struct PickWitness {
  MatrixTuple t;                        // pencil tuple, sigma cc for the spec family
  std::vector<Eigen::RowVectorXcd> v;   // one row vector per node
};

struct PickResult {
  PickStatus status = PickStatus::Undecided;
  std::optional<PickWitness> witness;
  std::optional<Colligation> interpolant;  // evaluate with witness->t
  double pick_min_eig = 0.0;               // diagnostic for the PSD routes
  double solver_residual = 0.0;            // diagnostic for the MAX(L1) route
};

struct PickOptions {
  long max_iter = 20000;   // MAX(L1) solver budget
  double tol = 1e-9;       // PSD / solver tolerance
};

/// Feasibility and interpolant construction:
///   n = 1            classical Pick matrix (FEASIBLE/INFEASIBLE),
///   ROW / COLUMN     Drury-Arveson Pick matrix (FEASIBLE/INFEASIBLE),
///   MAX(L1)          cone solver (FEASIBLE/UNDECIDED, never INFEASIBLE).
/// FEASIBLE results carry a witness and a transfer-function interpolant
/// defined on the whole domain.
PickResult pick_solve(const PickProblem& prob, const PickOptions& opts = {});

/// max over node pairs of |(1 - w_i conj(w_j)) - v_i [I - s_i s_j^*] v_j^*|.
double np_residual(const PickWitness& witness, const PickProblem& prob);

}  // namespace ucnorm

#endif  // UCNORM_PICK_HPP
