#ifndef UCNORM_OPSPACE_HPP
#define UCNORM_OPSPACE_HPP

#include "ucnorm/rng.hpp"
#include "ucnorm/tensor_core.hpp"
#include "ucnorm/types.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace ucnorm {

enum class Base { L1, L2, Linf };
enum class SpaceKind { Min, Max, Row, Column, Concrete };

Base dual_base(Base b);
std::string base_name(Base b);
std::string kind_name(SpaceKind k);

/// An operator space structure over C^n: MIN/MAX over a classical norm,
/// the row or column space, or the span of a concrete generating tuple.
struct OperatorSpaceSpec {
  SpaceKind kind = SpaceKind::Min;
  Base base = Base::L2;  // meaningful for Min/Max only
  Index n = 0;
  std::optional<MatrixTuple> generators;  // Concrete only

  static OperatorSpaceSpec min(Base b, Index n);
  static OperatorSpaceSpec max(Base b, Index n);
  static OperatorSpaceSpec row(Index n);
  static OperatorSpaceSpec column(Index n);
  static OperatorSpaceSpec concrete(MatrixTuple generators);

  /// MIN(V)* = MAX(V*), ROW* = COLUMN; an involution on those kinds.
  /// Throws unsupported_error for Concrete (no closed-form dual).
  OperatorSpaceSpec dual() const;

  std::string describe() const;
};

/// The Banach-space norm underlying the spec (the norm whose open unit
/// ball is the domain Omega).
double vector_norm(const OperatorSpaceSpec& spec, const CVector& z);

/// Norm of the evaluation domain paired with the spec in von Neumann
/// statements: the region of points whose evaluation functional is cc for
/// the spec (dual-base ball for MIN/MAX, l2 ball for ROW/COLUMN).  E.g. the
/// polydisk for MAX(L1).  Unsupported for CONCRETE (no closed-form dual).
double domain_norm(const OperatorSpaceSpec& spec, const CVector& z);

/// Spec whose base ball equals that evaluation domain (for sup-norm
/// sampling plans paired with a von Neumann search over `spec`).
OperatorSpaceSpec scalar_domain(const OperatorSpaceSpec& spec);

enum class CcStatus { Verified, Falsified, Unknown };
std::string cc_status_name(CcStatus s);

/// Outcome of a complete-contractivity test.  VERIFIED comes only from a
/// closed-form criterion; FALSIFIED always carries a dual-side witness tuple
/// whose pairing with the tested tuple exceeds 1 + tol.
struct CcVerdict {
  CcStatus status = CcStatus::Unknown;
  std::optional<MatrixTuple> witness;
  std::optional<double> bound;
};

struct SampleBudget {
  long draws = 2000;
  Index max_dim = 4;
  std::uint64_t seed = 1;
};

/// Decide whether sigma_T is completely contractive for the spec.
/// Closed forms: MAX(L1) is exact (max_j ||T_j|| <= 1); MAX(L2)/MAX(Linf)
/// have sufficient certificates (row-block norm, norm sum); ROW/COLUMN are
/// exact PSD tests.  MIN and CONCRETE can only be falsified by sampling
/// dual-side tuples, so the honest third value UNKNOWN is common there.
CcVerdict is_cc(const OperatorSpaceSpec& spec, const MatrixTuple& t, double tol = 1e-9,
                const SampleBudget& effort = {});

/// Search tuples T with sigma_T cc for e and report the largest pairing norm
/// ||sum S_j (x) T_j|| found; FALSIFIED with the witness if it exceeds
/// 1 + tol.  By the duality pairing this probes whether sigma_S is cc for e*.
CcVerdict duality_falsifier(const OperatorSpaceSpec& e, const MatrixTuple& s,
                            const SampleBudget& budget = {}, double tol = 1e-9);

/// Draw a tuple whose sigma is cc for `spec` by a closed-form construction
/// (each family satisfies its criterion exactly, so falsifications built on
/// these draws are sound).
MatrixTuple sample_cc_tuple(const OperatorSpaceSpec& spec, Rng& rng, Index dim);

/// The 1x1 tuple sitting at the point z.
MatrixTuple scalar_tuple(const CVector& z);

/// Joint-diagonal tuple with the given points as joint spectrum.
MatrixTuple diagonal_tuple(const std::vector<CVector>& points);

/// The Kaijser-Varopoulos commuting contractions: 5x5 matrices
/// T_j = e_{j+1} e_1^* + e_5 v_j^* with the classical unit vectors v_j.
MatrixTuple kv_tuple();

/// Structural norm test for sum A_j (x) T_j against the KV tuple: checks the
/// block-norm identity (the norm equals the max of the first block column and
/// the last block row) and, when the sign combinations and the column
/// condition I - sum A_j^* A_j >= 0 hold, that the norm is at most 1.
bool kv_structural_check(const MatrixTuple& a, double tol = 1e-9);

}  // namespace ucnorm

#endif  // UCNORM_OPSPACE_HPP
