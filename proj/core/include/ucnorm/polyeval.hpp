#ifndef UCNORM_POLYEVAL_HPP
#define UCNORM_POLYEVAL_HPP

#include "ucnorm/opspace.hpp"
#include "ucnorm/tensor_core.hpp"
#include "ucnorm/types.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace ucnorm {

using MultiIndex = std::vector<int>;

/// Graded lexicographic order: by total degree, then lexicographically.
/// Fixed project-wide so iteration and serialization are reproducible.
struct GradedLexLess {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

int total_degree(const MultiIndex& m);

/// Analytic polynomial with matrix coefficients, p(z) = sum_m A_m z^m.
struct MatrixPolynomial {
  Index n = 0;           // variables
  Index coeff_size = 1;  // N, coefficients in M_N
  std::map<MultiIndex, CMatrix, GradedLexLess> terms;

  MatrixPolynomial() = default;
  MatrixPolynomial(Index vars, Index coeff) : n(vars), coeff_size(coeff) {}

  /// Accumulate a term (adds to an existing coefficient); drops nothing.
  void add_term(const MultiIndex& m, const CMatrix& a);
  /// Convenience for scalar-coefficient polynomials.
  void add_term(const MultiIndex& m, Complex a);

  int degree() const;
  bool is_scalar() const { return coeff_size == 1; }
  CMatrix constant_term() const;
  void validate() const;
};

/// Product of two polynomials in the same variables (coefficients multiply
/// as matrices, so both must share the coefficient size).
MatrixPolynomial multiply(const MatrixPolynomial& p, const MatrixPolynomial& q);

CMatrix eval_point(const MatrixPolynomial& p, const CVector& z);

/// p(T) = sum_m kron(A_m, T^m) on a commuting tuple.
CMatrix eval_tuple(const MatrixPolynomial& p, const MatrixTuple& t, double comm_tol = 1e-9);

/// Sampling plan for sup-norm estimation.  A positive grid_per_dim adds a
/// deterministic torus tensor grid (Linf base); random draws are
/// boundary-biased per base.  Supersets of plans give >= results.
struct SamplingPlan {
  long random_points = 4096;
  long grid_per_dim = 0;
  std::uint64_t seed = 7;
};

/// Lower bound of sup_{z in ball} ||p(z)|| by sampling.
double sup_norm_lb(const MatrixPolynomial& p, const OperatorSpaceSpec& spec,
                   const SamplingPlan& grid);

struct UcSearchBudget {
  long draws = 400;             // random tuple candidates
  Index max_dim = 6;            // matrix size cap for generated tuples
  int da_degree_cap = 5;        // truncation degree of library shift tuples
  long refine_steps = 4000;     // local polish of the best scalar point
  std::uint64_t seed = 11;
  bool include_library_tuples = true;
};

struct UcBound {
  double bound = 0.0;
  MatrixTuple witness;
};

/// Lower bound of the UC-norm of p over commuting tuples S whose sigma_S has
/// a VERIFIED cc verdict for e, with the witness achieving the bound.
/// Generation: admissible scalar points and joint-diagonal tuples, commuting
/// perturbation families built from polynomials in a nilpotent, and library
/// tuples (Kaijser-Varopoulos, truncated Drury-Arveson shifts).
UcBound uc_norm_lb(const MatrixPolynomial& p, const OperatorSpaceSpec& e,
                   const UcSearchBudget& search);

/// ||z^alpha||^2 in the Drury-Arveson space, alpha!/|alpha|!.
double da_norm_sq(const MultiIndex& alpha);

/// Monomial multi-indices of total degree <= degree, in graded-lex order.
std::vector<MultiIndex> monomials_up_to(Index n, int degree);

/// Coordinate multipliers of the Drury-Arveson space compressed to total
/// degree <= degree_cap: a commuting row contraction.
MatrixTuple truncated_da_shifts(Index n, int degree_cap);

/// Norm of the compression of M_p to polynomials of total degree <=
/// degree_cap in the Drury-Arveson inner product; a lower bound of the
/// multiplier norm, nondecreasing in degree_cap.  Scalar p only.
double da_multiplier_lb(const MatrixPolynomial& p, int degree_cap);

}  // namespace ucnorm

#endif  // UCNORM_POLYEVAL_HPP
