#include "ucnorm/realization.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace ucnorm {

CMatrix Colligation::assemble() const {
  const Index kk = k();
  const Index nn = n_out();
  CMatrix u(kk + nn, kk + nn);
  u.topLeftCorner(kk, kk) = a;
  u.topRightCorner(kk, nn) = b;
  u.bottomLeftCorner(nn, kk) = c;
  u.bottomRightCorner(nn, nn) = d;
  return u;
}

double Colligation::unitarity_defect() const {
  const CMatrix u = assemble();
  return op_norm(u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols()));
}

void Colligation::validate(double tol) const {
  if (a.rows() != a.cols() || d.rows() != d.cols()) throw dimension_error("colligation: A, D must be square");
  if (b.rows() != a.rows() || b.cols() != d.cols()) throw dimension_error("colligation: B block size");
  if (c.rows() != d.rows() || c.cols() != a.cols()) throw dimension_error("colligation: C block size");
  if (unitarity_defect() > tol) throw error("colligation: block matrix is not unitary at tolerance");
}

void FactorizationData::validate() const {
  const Index pts = n_points();
  if (static_cast<Index>(f_values.size()) != pts || static_cast<Index>(p_values.size()) != pts)
    throw dimension_error("factorization data: list lengths differ");
  if (pts == 0) throw dimension_error("factorization data: empty point set");
  const Index nn = sigma.n();
  const Index kk = sigma.dim();
  const Index nout = p_values.front().rows();
  for (const auto& z : points)
    if (z.size() != nn) throw dimension_error("factorization data: point length != sigma arity");
  for (const auto& f : f_values)
    if (f.rows() != nout || f.cols() != kk) throw dimension_error("factorization data: F value size");
  for (const auto& p : p_values)
    if (p.rows() != nout || p.cols() != nout) throw dimension_error("factorization data: p value size");
}

FactorizationCheck verify_factorization(const FactorizationData& d, double tol) {
  d.validate();
  const Index pts = d.n_points();
  const Index nout = d.n_out();
  std::vector<CMatrix> sig(static_cast<std::size_t>(pts));
  for (Index i = 0; i < pts; ++i) sig[static_cast<std::size_t>(i)] = d.sigma.sigma(d.points[static_cast<std::size_t>(i)]);
  const CMatrix eye = CMatrix::Identity(nout, nout);
  const CMatrix eyek = CMatrix::Identity(d.k(), d.k());
  double worst = 0.0;
  for (Index i = 0; i < pts; ++i)
    for (Index j = 0; j < pts; ++j) {
      const auto& fi = d.f_values[static_cast<std::size_t>(i)];
      const auto& fj = d.f_values[static_cast<std::size_t>(j)];
      const CMatrix lhs = eye - d.p_values[static_cast<std::size_t>(i)] * d.p_values[static_cast<std::size_t>(j)].adjoint();
      const CMatrix rhs = fi * (eyek - sig[static_cast<std::size_t>(i)] * sig[static_cast<std::size_t>(j)].adjoint()) * fj.adjoint();
      worst = std::max(worst, op_norm(lhs - rhs));
    }
  return {worst, worst <= tol};
}

Colligation build_colligation(const FactorizationData& d, double gram_tol) {
  const FactorizationCheck chk = verify_factorization(d, 1e-8);
  if (!chk.pass)
    throw isometry_error("build_colligation: data is not a factorization (residual " +
                         std::to_string(chk.residual) + ")");
  const Index kk = d.k();
  const Index nout = d.n_out();
  const Index pts = d.n_points();
  const Index ambient = kk + nout;

  // Columns (sigma(l)^* F(l)^* x ; x) -> (F(l)^* x ; p(l)^* x) over the
  // standard basis x of C^N at every point.
  CMatrix dom(ambient, pts * nout), img(ambient, pts * nout);
  for (Index i = 0; i < pts; ++i) {
    const CMatrix fs = d.f_values[static_cast<std::size_t>(i)].adjoint();  // k x N
    const CMatrix ss = d.sigma.sigma(d.points[static_cast<std::size_t>(i)]).adjoint();
    const CMatrix ps = d.p_values[static_cast<std::size_t>(i)].adjoint();  // N x N
    dom.block(0, i * nout, kk, nout) = ss * fs;
    dom.block(kk, i * nout, nout, nout) = CMatrix::Identity(nout, nout);
    img.block(0, i * nout, kk, nout) = fs;
    img.block(kk, i * nout, nout, nout) = ps;
  }

  const UnitaryExtension ext = extend_isometry(IsometryData(ambient, dom, img), gram_tol);
  // ext.u acts as U^* = [[A^*, C^*], [B^*, D^*]]; read the blocks off U.
  const CMatrix u = ext.u.adjoint();
  Colligation col{u.topLeftCorner(kk, kk), u.topRightCorner(kk, nout),
                  u.bottomLeftCorner(nout, kk), u.bottomRightCorner(nout, nout)};
  col.validate(1e-9);

  for (Index i = 0; i < pts; ++i) {
    const CMatrix back = eval_transfer(col, d.sigma, d.points[static_cast<std::size_t>(i)]);
    if (op_norm(back - d.p_values[static_cast<std::size_t>(i)]) > 1e-7)
      throw error("build_colligation: transfer function fails to reproduce the data");
  }
  return col;
}

CMatrix eval_transfer(const Colligation& c, const MatrixTuple& t, const CVector& z) {
  if (t.dim() != c.k()) throw dimension_error("eval_transfer: pencil size != internal dimension");
  const CMatrix sig = t.sigma(z);
  if (op_norm(sig) >= 1.0) throw domain_error("eval_transfer: ||sigma(z)|| >= 1");
  const CMatrix lhs = CMatrix::Identity(c.k(), c.k()) - sig * c.a;
  return c.d + c.c * lhs.partialPivLu().solve(sig * c.b);
}

double defect_check(const Colligation& c, const CMatrix& x) {
  if (x.rows() != x.cols()) throw dimension_error("defect_check: X not square");
  if (c.k() == 0 || x.rows() % c.k() != 0)
    throw dimension_error("defect_check: X size not a multiple of the internal dimension");
  const double xn = op_norm(x);
  if (xn >= 1.0) throw domain_error("defect_check: ||X|| >= 1");
  const Index lift = x.rows() / c.k();
  const CMatrix il = CMatrix::Identity(lift, lift);
  const CMatrix at = kron(il, c.a), bt = kron(il, c.b), ct = kron(il, c.c), dt = kron(il, c.d);
  const CMatrix eye = CMatrix::Identity(x.rows(), x.cols());
  const CMatrix resolvent = (eye - at * x).partialPivLu().solve(bt);
  const CMatrix q = dt + ct * x * resolvent;
  const CMatrix lhs = CMatrix::Identity(q.cols(), q.cols()) - q.adjoint() * q;
  const CMatrix rhs = resolvent.adjoint() * (eye - x.adjoint() * x) * resolvent;
  return op_norm(lhs - rhs);
}

CMatrix eval_transfer_on_tuple(const Colligation& c, const MatrixTuple& t,
                               const MatrixTuple& s, double r) {
  if (!commutes(s, 1e-9)) throw commutativity_error("eval_transfer_on_tuple: tuple does not commute");
  if (s.n() != t.n()) throw arity_error("eval_transfer_on_tuple: tuple lengths differ");
  if (t.dim() != c.k()) throw dimension_error("eval_transfer_on_tuple: pencil size != internal dimension");
  const CMatrix x = r * pair_tuples(s, t);
  if (op_norm(x) >= 1.0) throw domain_error("eval_transfer_on_tuple: ||<rS,T>|| >= 1");
  const Index lift = s.dim();
  const CMatrix il = CMatrix::Identity(lift, lift);
  const CMatrix at = kron(il, c.a), bt = kron(il, c.b), ct = kron(il, c.c), dt = kron(il, c.d);
  const CMatrix eye = CMatrix::Identity(x.rows(), x.cols());
  return dt + ct * x * (eye - at * x).partialPivLu().solve(bt);
}

MatrixPolynomial transfer_polynomial(const Colligation& c, const MatrixTuple& t, int max_degree) {
  if (t.dim() != c.k()) throw dimension_error("transfer_polynomial: pencil size != internal dimension");
  MatrixPolynomial out(t.n(), c.n_out());
  out.add_term(MultiIndex(static_cast<std::size_t>(t.n()), 0), CMatrix(c.d));
  // layer_m holds the coefficients of sigma(z) (A sigma(z))^{m-1} B.
  std::map<MultiIndex, CMatrix, GradedLexLess> layer;
  for (Index j = 0; j < t.n(); ++j) {
    MultiIndex m(static_cast<std::size_t>(t.n()), 0);
    m[static_cast<std::size_t>(j)] = 1;
    layer[m] = t[static_cast<std::size_t>(j)] * c.b;
  }
  for (int deg = 1; deg <= max_degree; ++deg) {
    for (const auto& [m, w] : layer) out.add_term(m, CMatrix(c.c * w));
    if (deg == max_degree) break;
    std::map<MultiIndex, CMatrix, GradedLexLess> next;
    for (const auto& [m, w] : layer) {
      for (Index j = 0; j < t.n(); ++j) {
        MultiIndex mm = m;
        ++mm[static_cast<std::size_t>(j)];
        const CMatrix contrib = t[static_cast<std::size_t>(j)] * (c.a * w);
        auto it = next.find(mm);
        if (it == next.end())
          next.emplace(mm, contrib);
        else
          it->second += contrib;
      }
    }
    layer.swap(next);
  }
  return out;
}

MatrixTuple two_z1z2_sigma_tuple() {
  // sigma(z1,z2) has two identical 3x3 blocks
  //   [ 0  z1 z2 ]
  //   [ z2  0  0 ]
  //   [ z1  0  0 ]
  CMatrix t1 = CMatrix::Zero(6, 6), t2 = CMatrix::Zero(6, 6);
  for (Index off : {Index(0), Index(3)}) {
    t1(off + 0, off + 1) = 1.0;
    t1(off + 2, off + 0) = 1.0;
    t2(off + 0, off + 2) = 1.0;
    t2(off + 1, off + 0) = 1.0;
  }
  return MatrixTuple({t1, t2});
}

CMatrix two_z1z2_f_value(const CVector& z) {
  if (z.size() != 2) throw dimension_error("two_z1z2_f_value: expected a point of C^2");
  CMatrix f = CMatrix::Zero(1, 6);
  f(0, 0) = 1.0;
  f(0, 4) = z(0);
  f(0, 5) = z(1);
  return f;
}

MatrixPolynomial two_z1z2_polynomial() {
  MatrixPolynomial p(2, 1);
  p.add_term({1, 1}, Complex(2.0, 0.0));
  return p;
}

FactorizationData two_z1z2_factorization(const std::vector<CVector>& points) {
  FactorizationData d;
  d.sigma = two_z1z2_sigma_tuple();
  d.points = points;
  for (const auto& z : points) {
    d.f_values.push_back(two_z1z2_f_value(z));
    CMatrix p(1, 1);
    p(0, 0) = 2.0 * z(0) * z(1);
    d.p_values.push_back(p);
  }
  return d;
}

}  // namespace ucnorm
