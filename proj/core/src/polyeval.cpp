#include "ucnorm/polyeval.hpp"

#include "ucnorm/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

namespace ucnorm {

bool GradedLexLess::operator()(const MultiIndex& a, const MultiIndex& b) const {
  const int da = total_degree(a);
  const int db = total_degree(b);
  if (da != db) return da < db;
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

int total_degree(const MultiIndex& m) {
  int d = 0;
  for (int k : m) d += k;
  return d;
}

void MatrixPolynomial::add_term(const MultiIndex& m, const CMatrix& a) {
  if (static_cast<Index>(m.size()) != n) throw dimension_error("polynomial term: wrong multi-index length");
  if (a.rows() != coeff_size || a.cols() != coeff_size)
    throw dimension_error("polynomial term: wrong coefficient size");
  for (int k : m)
    if (k < 0) throw error("polynomial term: negative exponent");
  auto it = terms.find(m);
  if (it == terms.end())
    terms.emplace(m, a);
  else
    it->second += a;
}

void MatrixPolynomial::add_term(const MultiIndex& m, Complex a) {
  CMatrix c(1, 1);
  c(0, 0) = a;
  add_term(m, c);
}

int MatrixPolynomial::degree() const {
  int d = 0;
  for (const auto& [m, a] : terms) d = std::max(d, total_degree(m));
  return d;
}

CMatrix MatrixPolynomial::constant_term() const {
  const MultiIndex zero(static_cast<std::size_t>(n), 0);
  auto it = terms.find(zero);
  if (it == terms.end()) return CMatrix::Zero(coeff_size, coeff_size);
  return it->second;
}

void MatrixPolynomial::validate() const {
  for (const auto& [m, a] : terms) {
    if (static_cast<Index>(m.size()) != n) throw dimension_error("polynomial: ragged multi-index");
    if (a.rows() != coeff_size || a.cols() != coeff_size)
      throw dimension_error("polynomial: coefficient size mismatch");
    if (!a.allFinite()) throw error("polynomial: non-finite coefficient");
  }
}

MatrixPolynomial multiply(const MatrixPolynomial& p, const MatrixPolynomial& q) {
  if (p.n != q.n) throw arity_error("multiply: variable counts differ");
  if (p.coeff_size != q.coeff_size) throw dimension_error("multiply: coefficient sizes differ");
  MatrixPolynomial out(p.n, p.coeff_size);
  for (const auto& [mp, ap] : p.terms)
    for (const auto& [mq, aq] : q.terms) {
      MultiIndex m(mp.size());
      for (std::size_t i = 0; i < m.size(); ++i) m[i] = mp[i] + mq[i];
      out.add_term(m, CMatrix(ap * aq));
    }
  return out;
}

CMatrix eval_point(const MatrixPolynomial& p, const CVector& z) {
  if (z.size() != p.n) throw dimension_error("eval_point: wrong point length");
  CMatrix acc = CMatrix::Zero(p.coeff_size, p.coeff_size);
  for (const auto& [m, a] : p.terms) {
    Complex mono = 1.0;
    for (Index j = 0; j < p.n; ++j)
      for (int k = 0; k < m[static_cast<std::size_t>(j)]; ++k) mono *= z(j);
    acc += mono * a;
  }
  return acc;
}

CMatrix eval_tuple(const MatrixPolynomial& p, const MatrixTuple& t, double comm_tol) {
  if (t.n() != p.n) throw arity_error("eval_tuple: tuple length != variable count");
  if (!commutes(t, comm_tol)) throw commutativity_error("eval_tuple: tuple does not commute at tolerance");
  const Index d = t.dim();

  // Per-variable power tables up to the degree actually used.
  std::vector<int> maxdeg(static_cast<std::size_t>(p.n), 0);
  for (const auto& [m, a] : p.terms)
    for (std::size_t j = 0; j < m.size(); ++j) maxdeg[j] = std::max(maxdeg[j], m[j]);
  std::vector<std::vector<CMatrix>> powers(static_cast<std::size_t>(p.n));
  for (std::size_t j = 0; j < powers.size(); ++j) {
    powers[j].push_back(CMatrix::Identity(d, d));
    for (int k = 1; k <= maxdeg[j]; ++k) powers[j].push_back(powers[j].back() * t[j]);
  }

  CMatrix acc = CMatrix::Zero(p.coeff_size * d, p.coeff_size * d);
  for (const auto& [m, a] : p.terms) {
    CMatrix mono = CMatrix::Identity(d, d);
    for (std::size_t j = 0; j < m.size(); ++j)
      if (m[j] > 0) mono = mono * powers[j][static_cast<std::size_t>(m[j])];
    acc += kron(a, mono);
  }
  return acc;
}

namespace {

// Ball to draw evaluation points from: the region of scalar points whose
// evaluation tuple gets a VERIFIED cc verdict for the spec.
Base scalar_region_base(const OperatorSpaceSpec& spec) {
  switch (spec.kind) {
    case SpaceKind::Min:
    case SpaceKind::Max:
      return dual_base(spec.base);
    case SpaceKind::Row:
    case SpaceKind::Column:
      return Base::L2;
    case SpaceKind::Concrete:
      return Base::L2;  // conservative; exact dual ball has no closed form
  }
  throw error("bad kind");
}

double base_norm(Base b, const CVector& z) {
  switch (b) {
    case Base::L1: return z.cwiseAbs().sum();
    case Base::L2: return z.norm();
    case Base::Linf: return z.size() ? z.cwiseAbs().maxCoeff() : 0.0;
  }
  throw error("bad base");
}

CVector draw_ball_point(Base b, Rng& rng, Index n) {
  switch (b) {
    case Base::L1: return rng.l1_ball_point(n);
    case Base::L2: return rng.l2_ball_point(n);
    case Base::Linf: return rng.linf_ball_point(n);
  }
  throw error("bad base");
}

CVector clamp_to_ball(Base b, CVector z) {
  const double nv = base_norm(b, z);
  if (nv > 1.0) z /= nv;
  return z;
}

}  // namespace

double sup_norm_lb(const MatrixPolynomial& p, const OperatorSpaceSpec& spec,
                   const SamplingPlan& plan) {
  const Index n = p.n;
  double best = op_norm(p.constant_term());  // z = 0 is always in the ball

  const Base region = (spec.kind == SpaceKind::Row || spec.kind == SpaceKind::Column)
                          ? Base::L2
                          : (spec.kind == SpaceKind::Concrete ? Base::L2 : spec.base);

  if (plan.grid_per_dim > 0 && region == Base::Linf && n >= 1) {
    // Deterministic tensor grid on the torus.
    const long g = plan.grid_per_dim;
    long total = 1;
    for (Index j = 0; j < n; ++j) total *= g;
    best = std::max(best, parallel_max(total, [&](long flat) {
                      CVector z(n);
                      long rem = flat;
                      for (Index j = 0; j < n; ++j) {
                        const long kj = rem % g;
                        rem /= g;
                        const double th = 2.0 * std::numbers::pi * static_cast<double>(kj) / static_cast<double>(g);
                        z(j) = Complex(std::cos(th), std::sin(th));
                      }
                      return op_norm(eval_point(p, z));
                    }));
  }

  best = std::max(best, parallel_max(plan.random_points, [&](long i) {
                    Rng rng = Rng::derive(plan.seed, static_cast<std::uint64_t>(i));
                    CVector z;
                    if (spec.kind == SpaceKind::Concrete) {
                      z = rng.sphere_point(n);
                      const double nv = vector_norm(spec, z);
                      if (nv > 0) z /= nv;  // boundary of the concrete norm ball
                    } else {
                      switch (region) {
                        case Base::Linf: z = rng.torus_point(n); break;
                        case Base::L2: z = rng.sphere_point(n); break;
                        case Base::L1: {
                          z = rng.l1_ball_point(n);
                          const double nv = base_norm(Base::L1, z);
                          if (nv > 0) z /= nv;
                          break;
                        }
                      }
                    }
                    return op_norm(eval_point(p, z));
                  }));
  return best;
}

namespace {

struct Candidate {
  MatrixTuple tuple;
  bool scalar = false;
  CVector point;  // set when scalar
};

double scalar_point_norm(const OperatorSpaceSpec& e, const CVector& z) {
  return base_norm(scalar_region_base(e), z);
}

}  // namespace

UcBound uc_norm_lb(const MatrixPolynomial& p, const OperatorSpaceSpec& e,
                   const UcSearchBudget& search) {
  if (p.n != e.n) throw arity_error("uc_norm_lb: variable count != space dimension");
  const Index n = p.n;
  const double cc_tol = 1e-9;
  const SampleBudget verdict_budget{0, 1, search.seed};  // closed forms only

  auto admissible = [&](const MatrixTuple& s) {
    return is_cc(e, s, cc_tol, verdict_budget).status == CcStatus::Verified;
  };

  UcBound best;
  best.bound = -1.0;
  CVector best_point;
  bool best_is_point = false;

  auto consider = [&](const MatrixTuple& s, const CVector* pt) {
    if (!commutes(s, 1e-9)) return;
    if (!admissible(s)) return;
    const double val = op_norm(eval_tuple(p, s));
    if (val > best.bound) {
      best.bound = val;
      best.witness = s;
      best_is_point = (pt != nullptr);
      if (pt) best_point = *pt;
    }
  };

  // The zero tuple is admissible for every space and gives the constant term.
  {
    CVector z0 = CVector::Zero(n);
    consider(scalar_tuple(z0), &z0);
  }

  // Library tuples.
  if (search.include_library_tuples) {
    if (n == 3) consider(kv_tuple(), nullptr);
    const MatrixTuple shifts = truncated_da_shifts(n, search.da_degree_cap);
    consider(shifts, nullptr);
    MatrixTuple scaled = shifts;
    for (auto& m : scaled.mats) m *= 0.999;
    consider(scaled, nullptr);
  }

  const Base region = scalar_region_base(e);
  for (long i = 0; i < search.draws; ++i) {
    Rng rng = Rng::derive(search.seed, 0x5ca1ab1e ^ static_cast<std::uint64_t>(i));
    switch (i % 3) {
      case 0: {  // scalar point
        CVector z = draw_ball_point(region, rng, n);
        consider(scalar_tuple(z), &z);
        break;
      }
      case 1: {  // joint-diagonal normal tuple (point evaluations)
        const Index d = 2 + static_cast<Index>(rng.uniform() * static_cast<double>(std::max<Index>(1, search.max_dim - 2)));
        std::vector<CVector> pts;
        for (Index q = 0; q < d; ++q) pts.push_back(draw_ball_point(region, rng, n));
        consider(diagonal_tuple(pts), nullptr);
        break;
      }
      case 2: {  // commuting non-normals: polynomials in one nilpotent
        const Index d = std::max<Index>(2, search.max_dim);
        CMatrix nil = CMatrix::Zero(d, d);
        for (Index r = 0; r < d; ++r)
          for (Index c2 = r + 1; c2 < d; ++c2) nil(r, c2) = rng.cgaussian();
        std::vector<CMatrix> mats;
        for (Index j = 0; j < n; ++j) {
          CMatrix q = rng.cgaussian() * CMatrix::Identity(d, d);
          CMatrix pw = CMatrix::Identity(d, d);
          for (Index deg = 1; deg < d; ++deg) {
            pw = pw * nil;
            q += rng.cgaussian() * pw;
          }
          mats.push_back(q);
        }
        MatrixTuple s(std::move(mats));
        // Scale the whole tuple until the closed-form certificate accepts it.
        double scale = 1.0;
        switch (e.kind) {
          case SpaceKind::Max:
            if (e.base == Base::L1) {
              scale = 0.0;
              for (const auto& m : s.mats) scale = std::max(scale, op_norm(m));
            } else if (e.base == Base::L2) {
              CMatrix row(d, n * d);
              for (Index j = 0; j < n; ++j) row.middleCols(j * d, d) = s[static_cast<std::size_t>(j)];
              scale = op_norm(row);
            } else {
              scale = 0.0;
              for (const auto& m : s.mats) scale += op_norm(m);
            }
            break;
          case SpaceKind::Row: {
            CMatrix gram = CMatrix::Zero(d, d);
            for (const auto& m : s.mats) gram += m * m.adjoint();
            scale = std::sqrt(op_norm(gram));
            break;
          }
          case SpaceKind::Column: {
            CMatrix gram = CMatrix::Zero(d, d);
            for (const auto& m : s.mats) gram += m.adjoint() * m;
            scale = std::sqrt(op_norm(gram));
            break;
          }
          default:
            scale = 0.0;  // MIN/CONCRETE never verify non-zero tuples
        }
        if (scale <= 0.0) break;
        for (auto& m : s.mats) m *= (1.0 - 1e-12) / scale;
        consider(s, nullptr);
        break;
      }
    }
  }

  // Local polish of the best scalar point (suprema attained at points are
  // found to much higher accuracy than raw sampling provides).
  if (best_is_point && search.refine_steps > 0) {
    double radius = 0.5;
    CVector z = best_point;
    double val = best.bound;
    for (long step = 0; step < search.refine_steps; ++step) {
      Rng rng = Rng::derive(search.seed, 0xf00d ^ static_cast<std::uint64_t>(step));
      CVector cand = z;
      for (Index j = 0; j < n; ++j) cand(j) += radius * rng.cgaussian();
      cand = clamp_to_ball(region, cand);
      const double v = op_norm(eval_point(p, cand));
      if (v > val) {
        val = v;
        z = cand;
      } else {
        radius *= 0.998;
      }
      if (radius < 1e-12) break;
    }
    if (val > best.bound) {
      best.bound = val;
      best.witness = scalar_tuple(z);
    }
  }

  if (best.bound < 0.0) {  // no admissible tuple at all (cannot happen: zero tuple)
    best.bound = 0.0;
    best.witness = scalar_tuple(CVector::Zero(n));
  }
  return best;
}

double da_norm_sq(const MultiIndex& alpha) {
  // alpha!/|alpha|! = 1 / multinomial(|alpha|; alpha), via binomials.
  double multinomial = 1.0;
  long acc = 0;
  for (int a : alpha) {
    for (int r = 1; r <= a; ++r) {
      multinomial *= static_cast<double>(acc + r) / static_cast<double>(r);
    }
    acc += a;
  }
  return 1.0 / multinomial;
}

std::vector<MultiIndex> monomials_up_to(Index n, int degree) {
  std::vector<MultiIndex> out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  // enumerate all with total degree <= degree, then sort graded-lex
  std::function<void(Index, int)> rec = [&](Index pos, int left) {
    if (pos == n) {
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= left; ++k) {
      cur[static_cast<std::size_t>(pos)] = k;
      rec(pos + 1, left - k);
    }
    cur[static_cast<std::size_t>(pos)] = 0;
  };
  rec(0, degree);
  std::sort(out.begin(), out.end(), GradedLexLess{});
  return out;
}

MatrixTuple truncated_da_shifts(Index n, int degree_cap) {
  const std::vector<MultiIndex> basis = monomials_up_to(n, degree_cap);
  std::map<MultiIndex, Index, GradedLexLess> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Index>(i);
  const Index m = static_cast<Index>(basis.size());
  std::vector<CMatrix> mats(static_cast<std::size_t>(n), CMatrix::Zero(m, m));
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex& alpha = basis[i];
    if (total_degree(alpha) >= degree_cap) continue;
    for (Index j = 0; j < n; ++j) {
      MultiIndex beta = alpha;
      ++beta[static_cast<std::size_t>(j)];
      const double w = std::sqrt(da_norm_sq(beta) / da_norm_sq(alpha));
      mats[static_cast<std::size_t>(j)](pos[beta], static_cast<Index>(i)) = w;
    }
  }
  return MatrixTuple(std::move(mats));
}

double da_multiplier_lb(const MatrixPolynomial& p, int degree_cap) {
  if (!p.is_scalar()) throw unsupported_error("da_multiplier_lb: scalar-coefficient polynomials only");
  const std::vector<MultiIndex> basis = monomials_up_to(p.n, degree_cap);
  std::map<MultiIndex, Index, GradedLexLess> pos;
  for (std::size_t i = 0; i < basis.size(); ++i) pos[basis[i]] = static_cast<Index>(i);
  const Index m = static_cast<Index>(basis.size());
  CMatrix mult = CMatrix::Zero(m, m);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const MultiIndex& alpha = basis[i];
    for (const auto& [gamma, coeff] : p.terms) {
      MultiIndex beta(alpha.size());
      for (std::size_t q = 0; q < alpha.size(); ++q) beta[q] = alpha[q] + gamma[q];
      if (total_degree(beta) > degree_cap) continue;
      mult(pos[beta], static_cast<Index>(i)) +=
          coeff(0, 0) * std::sqrt(da_norm_sq(beta) / da_norm_sq(alpha));
    }
  }
  return op_norm(mult);
}

}  // namespace ucnorm
