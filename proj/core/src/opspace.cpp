#include "ucnorm/opspace.hpp"

#include <algorithm>
#include <cmath>

namespace ucnorm {

Base dual_base(Base b) {
  switch (b) {
    case Base::L1: return Base::Linf;
    case Base::Linf: return Base::L1;
    case Base::L2: return Base::L2;
  }
  throw error("bad base");
}

std::string base_name(Base b) {
  switch (b) {
    case Base::L1: return "l1";
    case Base::L2: return "l2";
    case Base::Linf: return "linf";
  }
  throw error("bad base");
}

std::string kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Min: return "min";
    case SpaceKind::Max: return "max";
    case SpaceKind::Row: return "row";
    case SpaceKind::Column: return "column";
    case SpaceKind::Concrete: return "concrete";
  }
  throw error("bad kind");
}

OperatorSpaceSpec OperatorSpaceSpec::min(Base b, Index n) { return {SpaceKind::Min, b, n, {}}; }
OperatorSpaceSpec OperatorSpaceSpec::max(Base b, Index n) { return {SpaceKind::Max, b, n, {}}; }
OperatorSpaceSpec OperatorSpaceSpec::row(Index n) { return {SpaceKind::Row, Base::L2, n, {}}; }
OperatorSpaceSpec OperatorSpaceSpec::column(Index n) { return {SpaceKind::Column, Base::L2, n, {}}; }

OperatorSpaceSpec OperatorSpaceSpec::concrete(MatrixTuple generators) {
  OperatorSpaceSpec s{SpaceKind::Concrete, Base::L2, generators.n(), std::move(generators)};
  return s;
}

OperatorSpaceSpec OperatorSpaceSpec::dual() const {
  switch (kind) {
    case SpaceKind::Min: return max(dual_base(base), n);
    case SpaceKind::Max: return min(dual_base(base), n);
    case SpaceKind::Row: return column(n);
    case SpaceKind::Column: return row(n);
    case SpaceKind::Concrete:
      throw unsupported_error("dual of a concrete operator space has no closed form here");
  }
  throw error("bad kind");
}

std::string OperatorSpaceSpec::describe() const {
  std::string s = kind_name(kind) + "(n=" + std::to_string(n);
  if (kind == SpaceKind::Min || kind == SpaceKind::Max) s += "," + base_name(base);
  return s + ")";
}

double vector_norm(const OperatorSpaceSpec& spec, const CVector& z) {
  if (z.size() != spec.n) throw dimension_error("vector_norm: length mismatch");
  switch (spec.kind) {
    case SpaceKind::Min:
    case SpaceKind::Max:
      switch (spec.base) {
        case Base::L1: return z.cwiseAbs().sum();
        case Base::L2: return z.norm();
        case Base::Linf: return z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
      }
      throw error("bad base");
    case SpaceKind::Row:
    case SpaceKind::Column:
      return z.norm();
    case SpaceKind::Concrete:
      return op_norm(spec.generators->sigma(z));
  }
  throw error("bad kind");
}

OperatorSpaceSpec scalar_domain(const OperatorSpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Min:
    case SpaceKind::Max:
      return OperatorSpaceSpec::min(dual_base(spec.base), spec.n);
    case SpaceKind::Row:
    case SpaceKind::Column:
      return OperatorSpaceSpec::min(Base::L2, spec.n);
    case SpaceKind::Concrete:
      throw unsupported_error("scalar_domain: no closed form for a concrete space");
  }
  throw error("bad kind");
}

double domain_norm(const OperatorSpaceSpec& spec, const CVector& z) {
  return vector_norm(scalar_domain(spec), z);
}

std::string cc_status_name(CcStatus s) {
  switch (s) {
    case CcStatus::Verified: return "VERIFIED";
    case CcStatus::Falsified: return "FALSIFIED";
    case CcStatus::Unknown: return "UNKNOWN";
  }
  throw error("bad status");
}

MatrixTuple scalar_tuple(const CVector& z) {
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(z.size()));
  for (Index j = 0; j < z.size(); ++j) {
    CMatrix m(1, 1);
    m(0, 0) = z(j);
    mats.push_back(m);
  }
  return MatrixTuple(std::move(mats));
}

MatrixTuple diagonal_tuple(const std::vector<CVector>& points) {
  if (points.empty()) throw arity_error("diagonal_tuple: no points");
  const Index n = points.front().size();
  const Index d = static_cast<Index>(points.size());
  std::vector<CMatrix> mats(static_cast<std::size_t>(n), CMatrix::Zero(d, d));
  for (Index i = 0; i < d; ++i) {
    const CVector& p = points[static_cast<std::size_t>(i)];
    if (p.size() != n) throw dimension_error("diagonal_tuple: ragged point list");
    for (Index j = 0; j < n; ++j) mats[static_cast<std::size_t>(j)](i, i) = p(j);
  }
  return MatrixTuple(std::move(mats));
}

namespace {

bool is_zero_tuple(const MatrixTuple& t) {
  for (const auto& m : t.mats)
    if (m.cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

// Points z whose evaluation functional is completely contractive for the
// spec; for MIN/MAX/ROW/COLUMN this is exactly the ball of the dual norm.
CVector cc_point(const OperatorSpaceSpec& spec, Rng& rng) {
  switch (spec.kind) {
    case SpaceKind::Max:
      switch (spec.base) {
        case Base::L1: return rng.linf_ball_point(spec.n);
        case Base::L2: return rng.l2_ball_point(spec.n);
        case Base::Linf: return rng.l1_ball_point(spec.n);
      }
      throw error("bad base");
    case SpaceKind::Min:
      switch (spec.base) {
        case Base::L1: return rng.linf_ball_point(spec.n);
        case Base::L2: return rng.l2_ball_point(spec.n);
        case Base::Linf: return rng.l1_ball_point(spec.n);
      }
      throw error("bad base");
    case SpaceKind::Row:
    case SpaceKind::Column:
      return rng.l2_ball_point(spec.n);
    case SpaceKind::Concrete: {
      // Functionals are cc iff the point lies in the dual ball, which has no
      // closed form for a concrete space; fall back to the predual ball
      // scaled into it via |<z,w>| <= ||z|| ||w|| in l2.  Sound but small.
      CVector z = rng.l2_ball_point(spec.n);
      const double nv = vector_norm(spec, z);
      if (nv > 0) z *= std::min(1.0, 1.0 / nv) * rng.uniform();
      return z;
    }
  }
  throw error("bad kind");
}

MatrixTuple row_contraction_family(Rng& rng, Index n, Index dim) {
  // T_j = V_j^* D with [V_1;...;V_n] an isometry column and D a contraction:
  // sum T_j T_j^* = sum V_j^* D D^* V_j <= sum V_j^* V_j = I.
  const CMatrix g = rng.gaussian_matrix(n * dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix v = q.leftCols(dim);  // n*dim x dim, orthonormal columns
  const CMatrix d = rng.contraction(dim);
  std::vector<CMatrix> mats;
  mats.reserve(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) mats.push_back(v.block(j * dim, 0, dim, dim).adjoint() * d);
  return MatrixTuple(std::move(mats));
}

}  // namespace

MatrixTuple sample_cc_tuple(const OperatorSpaceSpec& spec, Rng& rng, Index dim) {
  const Index n = spec.n;
  // Every kind except Concrete admits joint-diagonal draws with spectrum in
  // the dual ball (direct sums of evaluation functionals); mix them in so the
  // search also covers commuting normal witnesses.
  if (spec.kind != SpaceKind::Concrete && rng.uniform() < 0.34) {
    std::vector<CVector> pts;
    pts.reserve(static_cast<std::size_t>(dim));
    for (Index i = 0; i < dim; ++i) pts.push_back(cc_point(spec, rng));
    return diagonal_tuple(pts);
  }
  switch (spec.kind) {
    case SpaceKind::Max:
      switch (spec.base) {
        case Base::L1: {
          // cc for MAX(l1) iff every T_j is a contraction.  Mix in
          // single-slot unitaries; they expose per-slot norm violations in
          // one pairing.
          std::vector<CMatrix> mats;
          if (rng.uniform() < 0.34) {
            const Index slot = static_cast<Index>(rng.uniform() * static_cast<double>(n));
            for (Index j = 0; j < n; ++j)
              mats.push_back(j == slot ? rng.unitary(dim) : CMatrix::Zero(dim, dim));
          } else {
            for (Index j = 0; j < n; ++j) mats.push_back(rng.contraction(dim));
          }
          return MatrixTuple(std::move(mats));
        }
        case Base::L2: {
          // Row-block norm <= 1 certifies contractivity on the l2 ball.
          CMatrix g = rng.gaussian_matrix(dim, n * dim);
          g *= rng.uniform() / std::max(op_norm(g), 1e-300);
          std::vector<CMatrix> mats;
          for (Index j = 0; j < n; ++j) mats.push_back(g.middleCols(j * dim, dim));
          return MatrixTuple(std::move(mats));
        }
        case Base::Linf: {
          // sum ||T_j|| <= 1 certifies contractivity on the polydisk.
          Eigen::VectorXd w(n);
          double s = 0.0;
          for (Index j = 0; j < n; ++j) {
            w(j) = -std::log(1.0 - rng.uniform());
            s += w(j);
          }
          const double radius = rng.uniform();
          std::vector<CMatrix> mats;
          for (Index j = 0; j < n; ++j) mats.push_back((radius * w(j) / s) * rng.unitary(dim));
          return MatrixTuple(std::move(mats));
        }
      }
      throw error("bad base");
    case SpaceKind::Row:
      return row_contraction_family(rng, n, dim);
    case SpaceKind::Column:
      return row_contraction_family(rng, n, dim).adjoint();
    case SpaceKind::Min: {
      // Joint-diagonal normal tuples with joint spectrum in the dual ball:
      // direct sums of evaluation functionals, cc for every structure over V.
      std::vector<CVector> pts;
      pts.reserve(static_cast<std::size_t>(dim));
      for (Index i = 0; i < dim; ++i) pts.push_back(cc_point(spec, rng));
      MatrixTuple d = diagonal_tuple(pts);
      const CMatrix u = rng.unitary(dim);
      for (auto& m : d.mats) m = u * m * u.adjoint();
      return d;
    }
    case SpaceKind::Concrete: {
      // Transforms of the generating tuple that preserve complete
      // contractivity: scaling, unitary conjugation, compression.
      const MatrixTuple& g = *spec.generators;
      const Index gd = g.dim();
      const double r = rng.uniform();
      const CMatrix u = rng.unitary(gd);
      const Index keep = std::max<Index>(1, std::min(gd, 1 + static_cast<Index>(rng.uniform() * static_cast<double>(gd))));
      std::vector<CMatrix> mats;
      for (const auto& m : g.mats)
        mats.push_back((r * (u.adjoint() * m * u)).topLeftCorner(keep, keep));
      return MatrixTuple(std::move(mats));
    }
  }
  throw error("bad kind");
}

namespace {

// Sampling loop shared by is_cc (MIN/CONCRETE branch) and duality_falsifier:
// draw tuples cc for `family_spec`, pair against `t`, falsify past 1 + tol.
CcVerdict pairing_search(const OperatorSpaceSpec& family_spec, const MatrixTuple& t,
                         const SampleBudget& budget, double tol) {
  double best = 0.0;
  for (long i = 0; i < budget.draws; ++i) {
    Rng rng = Rng::derive(budget.seed, static_cast<std::uint64_t>(i));
    const Index dim = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(budget.max_dim));
    MatrixTuple b = sample_cc_tuple(family_spec, rng, dim);
    const double val = op_norm(pair_tuples(t, b));
    best = std::max(best, val);
    if (val > 1.0 + tol) return {CcStatus::Falsified, std::move(b), best};
  }
  return {CcStatus::Unknown, {}, best};
}

MatrixTuple single_slot_scalar(Index n, Index slot) {
  CVector z = CVector::Zero(n);
  z(slot) = 1.0;
  return scalar_tuple(z);
}

// Matrix-unit tuple B_j = e_1 e_j^* (n x n).  Column contractive with
// sum B_j^* B_j = I, and the pairing with T has exactly the row-block norm
// sqrt(||sum T_j T_j^*||).
MatrixTuple row_unit_tuple(Index n) {
  std::vector<CMatrix> mats;
  for (Index j = 0; j < n; ++j) {
    CMatrix m = CMatrix::Zero(n, n);
    m(0, j) = 1.0;
    mats.push_back(m);
  }
  return MatrixTuple(std::move(mats));
}

CcVerdict row_kind_verdict(const MatrixTuple& t, double tol, bool column) {
  const MatrixTuple w = column ? t.adjoint() : t;
  CMatrix gram = CMatrix::Zero(w.dim(), w.dim());
  for (const auto& m : w.mats) gram += m * m.adjoint();
  const CMatrix defect = CMatrix::Identity(w.dim(), w.dim()) - gram;
  if (is_psd(defect, tol)) return {CcStatus::Verified, {}, 1.0};
  const double mu = std::sqrt(op_norm(gram));
  if (mu > 1.0 + tol) {
    MatrixTuple units = row_unit_tuple(t.n());
    if (column) units = units.adjoint();
    return {CcStatus::Falsified, std::move(units), mu};
  }
  return {CcStatus::Unknown, {}, mu};  // borderline sliver of width ~tol^2
}

}  // namespace

CcVerdict is_cc(const OperatorSpaceSpec& spec, const MatrixTuple& t, double tol,
                const SampleBudget& effort) {
  if (t.n() != spec.n) throw arity_error("is_cc: tuple length != space dimension");
  if (is_zero_tuple(t)) return {CcStatus::Verified, {}, 0.0};

  switch (spec.kind) {
    case SpaceKind::Max: {
      if (spec.base == Base::L1) {
        double worst = 0.0;
        Index arg = 0;
        for (Index j = 0; j < t.n(); ++j) {
          const double nj = op_norm(t[static_cast<std::size_t>(j)]);
          if (nj > worst) {
            worst = nj;
            arg = j;
          }
        }
        if (worst <= 1.0 + tol) return {CcStatus::Verified, {}, worst};
        return {CcStatus::Falsified, single_slot_scalar(t.n(), arg), worst};
      }
      // L2 / Linf: certify by a convex upper bound, otherwise try to falsify
      // plain contractivity on the base ball.
      double certificate;
      if (spec.base == Base::L2) {
        CMatrix row(t.dim(), t.n() * t.dim());
        for (Index j = 0; j < t.n(); ++j) row.middleCols(j * t.dim(), t.dim()) = t[static_cast<std::size_t>(j)];
        certificate = op_norm(row);
      } else {
        certificate = 0.0;
        for (const auto& m : t.mats) certificate += op_norm(m);
      }
      if (certificate <= 1.0 + tol) return {CcStatus::Verified, {}, certificate};
      double best = 0.0;
      for (long i = 0; i < effort.draws; ++i) {
        Rng rng = Rng::derive(effort.seed, static_cast<std::uint64_t>(i));
        const CVector z = spec.base == Base::L2 ? rng.l2_ball_point(spec.n) : rng.linf_ball_point(spec.n);
        const double val = op_norm(t.sigma(z));
        if (val > best) best = val;
        if (val > 1.0 + tol) return {CcStatus::Falsified, scalar_tuple(z), val};
      }
      return {CcStatus::Unknown, {}, best};
    }
    case SpaceKind::Row:
      return row_kind_verdict(t, tol, false);
    case SpaceKind::Column:
      return row_kind_verdict(t, tol, true);
    case SpaceKind::Min:
      return pairing_search(spec.dual(), t, effort, tol);
    case SpaceKind::Concrete: {
      // No closed-form dual; probe with diagonal tuples over points of the
      // predual ball (evaluation functionals are cc for the dual space).
      double best = 0.0;
      for (long i = 0; i < effort.draws; ++i) {
        Rng rng = Rng::derive(effort.seed, static_cast<std::uint64_t>(i));
        const Index d = 1 + static_cast<Index>(rng.uniform() * static_cast<double>(effort.max_dim));
        std::vector<CVector> pts;
        for (Index q = 0; q < d; ++q) {
          CVector z = rng.sphere_point(spec.n);
          const double nv = vector_norm(spec, z);
          if (nv > 0) z *= rng.uniform() / nv;
          pts.push_back(z);
        }
        MatrixTuple b = diagonal_tuple(pts);
        const double val = op_norm(pair_tuples(t, b));
        if (val > best) best = val;
        if (val > 1.0 + tol) return {CcStatus::Falsified, std::move(b), val};
      }
      return {CcStatus::Unknown, {}, best};
    }
  }
  throw error("bad kind");
}

CcVerdict duality_falsifier(const OperatorSpaceSpec& e, const MatrixTuple& s,
                            const SampleBudget& budget, double tol) {
  if (s.n() != e.n) throw arity_error("duality_falsifier: tuple length != space dimension");
  if (is_zero_tuple(s)) return {CcStatus::Unknown, {}, 0.0};
  return pairing_search(e, s, budget, tol);
}

MatrixTuple kv_tuple() {
  const double c = 1.0 / std::sqrt(3.0);
  // v_1 = c(-e2+e3+e4), v_2 = c(e2-e3+e4), v_3 = c(e2+e3-e4)
  const double sign[3][3] = {{-1, 1, 1}, {1, -1, 1}, {1, 1, -1}};
  std::vector<CMatrix> mats;
  for (int j = 0; j < 3; ++j) {
    CMatrix t = CMatrix::Zero(5, 5);
    t(j + 1, 0) = 1.0;  // e_{j+1} (x) e_1
    for (int k = 0; k < 3; ++k) t(4, k + 1) = sign[j][k] * c;  // e_5 (x) v_j
    mats.push_back(t);
  }
  return MatrixTuple(std::move(mats));
}

bool kv_structural_check(const MatrixTuple& a, double tol) {
  if (a.n() != 3) throw arity_error("kv_structural_check: expected a 3-tuple");
  const MatrixTuple t = kv_tuple();
  const Index m = a.dim();
  const double c = 1.0 / std::sqrt(3.0);

  const CMatrix block = pair_tuples(t, a);  // the 5x5 block layout, A_j blocks below the diagonal
  const double block_norm = op_norm(block);

  CMatrix first_col(3 * m, m);
  for (int j = 0; j < 3; ++j) first_col.middleRows(j * m, m) = a[static_cast<std::size_t>(j)];
  const double col_norm = op_norm(first_col);

  const CMatrix b1 = c * (-a[0] + a[1] + a[2]);
  const CMatrix b2 = c * (a[0] - a[1] + a[2]);
  const CMatrix b3 = c * (a[0] + a[1] - a[2]);
  CMatrix last_row(m, 3 * m);
  last_row.middleCols(0, m) = b1;
  last_row.middleCols(m, m) = b2;
  last_row.middleCols(2 * m, m) = b3;
  const double row_norm = op_norm(last_row);

  const bool identity_ok = std::abs(block_norm - std::max(col_norm, row_norm)) <= 1e-10;

  // Premises of the contractivity conclusion: the three sign combinations
  // sqrt(3) B_k are contractions and the column condition holds.
  CMatrix col_gram = CMatrix::Zero(m, m);
  for (const auto& aj : a.mats) col_gram += aj.adjoint() * aj;
  const bool column_condition = is_psd(CMatrix::Identity(m, m) - col_gram, tol);
  const bool combos_ok = op_norm(std::sqrt(3.0) * b1) <= 1.0 + tol &&
                         op_norm(std::sqrt(3.0) * b2) <= 1.0 + tol &&
                         op_norm(std::sqrt(3.0) * b3) <= 1.0 + tol;

  bool bounded_ok = true;
  if (column_condition && combos_ok) bounded_ok = block_norm <= 1.0 + std::max(1e-10, tol);

  return identity_ok && bounded_ok;
}

}  // namespace ucnorm
