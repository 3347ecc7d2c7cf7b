#include "ucnorm/pick.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace ucnorm {

std::string pick_status_name(PickStatus s) {
  switch (s) {
    case PickStatus::Feasible: return "FEASIBLE";
    case PickStatus::Infeasible: return "INFEASIBLE";
    case PickStatus::Undecided: return "UNDECIDED";
  }
  throw error("bad status");
}

void PickProblem::validate() const {
  if (nodes.empty() || nodes.size() != targets.size())
    throw dimension_error("pick problem: need |nodes| = |targets| >= 1");
  for (const auto& z : nodes) {
    if (z.size() != spec.n) throw dimension_error("pick problem: node length != space dimension");
    if (domain_norm(spec, z) >= 1.0) throw domain_error("pick problem: node outside the open domain");
  }
  for (std::size_t i = 0; i < nodes.size(); ++i)
    for (std::size_t j = i + 1; j < nodes.size(); ++j)
      if ((nodes[i] - nodes[j]).cwiseAbs().maxCoeff() <= 1e-14)
        throw duplicate_node_error("pick problem: coincident nodes");
}

double np_residual(const PickWitness& witness, const PickProblem& prob) {
  const Index npts = prob.n_nodes();
  std::vector<CMatrix> sig(static_cast<std::size_t>(npts));
  for (Index i = 0; i < npts; ++i) sig[static_cast<std::size_t>(i)] = witness.t.sigma(prob.nodes[static_cast<std::size_t>(i)]);
  const CMatrix eye = CMatrix::Identity(witness.t.dim(), witness.t.dim());
  double worst = 0.0;
  for (Index i = 0; i < npts; ++i)
    for (Index j = 0; j < npts; ++j) {
      const Complex want = 1.0 - prob.targets[static_cast<std::size_t>(i)] * std::conj(prob.targets[static_cast<std::size_t>(j)]);
      const Complex have = (witness.v[static_cast<std::size_t>(i)] *
                            (eye - sig[static_cast<std::size_t>(i)] * sig[static_cast<std::size_t>(j)].adjoint()) *
                            witness.v[static_cast<std::size_t>(j)].adjoint())(0, 0);
      worst = std::max(worst, std::abs(want - have));
    }
  return worst;
}

namespace {

// Pick matrix with kernel denominator 1 - <l_i, conj(l_j)> (n = 1 reduces to
// the classical 1 - l_i conj(l_j)).
CMatrix pick_matrix(const PickProblem& prob) {
  const Index npts = prob.n_nodes();
  CMatrix pk(npts, npts);
  for (Index i = 0; i < npts; ++i)
    for (Index j = 0; j < npts; ++j) {
      const Complex denom = 1.0 - prob.nodes[static_cast<std::size_t>(j)].dot(prob.nodes[static_cast<std::size_t>(i)]);
      pk(i, j) = (1.0 - prob.targets[static_cast<std::size_t>(i)] * std::conj(prob.targets[static_cast<std::size_t>(j)])) / denom;
    }
  return pk;
}

// FactorizationData for the PSD-kernel routes (classical disk and
// Drury-Arveson): F_i = [G_i 0...0] with the row-embedding pencil, which
// reproduces the kernel identity exactly.
FactorizationData kernel_route_data(const PickProblem& prob, const CMatrix& gram) {
  const Index n = prob.spec.n;
  const Index npts = prob.n_nodes();
  const Index r = gram.cols();
  FactorizationData d;
  d.points = prob.nodes;
  for (Index i = 0; i < npts; ++i) {
    CMatrix p(1, 1);
    p(0, 0) = prob.targets[static_cast<std::size_t>(i)];
    d.p_values.push_back(p);
  }
  if (n == 1) {
    // sigma(z) = z I_r.
    std::vector<CMatrix> sig{CMatrix::Identity(r, r)};
    d.sigma = MatrixTuple(std::move(sig));
    for (Index i = 0; i < npts; ++i) d.f_values.push_back(gram.row(i));
  } else {
    const Index k = r * (n + 1);
    std::vector<CMatrix> sig(static_cast<std::size_t>(n), CMatrix::Zero(k, k));
    for (Index m = 0; m < n; ++m)
      sig[static_cast<std::size_t>(m)].block(0, (m + 1) * r, r, r) = CMatrix::Identity(r, r);
    d.sigma = MatrixTuple(std::move(sig));
    for (Index i = 0; i < npts; ++i) {
      CMatrix f = CMatrix::Zero(1, k);
      f.leftCols(r) = gram.row(i);
      d.f_values.push_back(f);
    }
  }
  return d;
}

PickResult kernel_route(const PickProblem& prob, const PickOptions& opts) {
  const CMatrix pk = pick_matrix(prob);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(pk), Eigen::EigenvaluesOnly);
  const double mineig = es.eigenvalues().minCoeff();
  PickResult res;
  res.pick_min_eig = mineig;
  if (mineig < -opts.tol) {
    res.status = PickStatus::Infeasible;
    return res;
  }
  const CMatrix gram = gram_factor(pk, std::max(opts.tol, 1e-12));
  FactorizationData d = kernel_route_data(prob, gram);
  PickWitness w;
  w.t = d.sigma;
  for (Index i = 0; i < prob.n_nodes(); ++i) w.v.push_back(d.f_values[static_cast<std::size_t>(i)].row(0));
  res.witness = std::move(w);
  res.interpolant = build_colligation(d, 1e-9);
  res.status = PickStatus::Feasible;
  return res;
}

PickResult agler_route(const PickProblem& prob, const PickOptions& opts) {
  // Cone problem with scalar target kernel 1 - w_i conj(w_j).
  ConeProblem cone;
  cone.spec = prob.spec;
  cone.points = prob.nodes;
  cone.n_out = 1;
  const Index npts = prob.n_nodes();
  cone.target = CMatrix(npts, npts);
  for (Index i = 0; i < npts; ++i) {
    CMatrix p(1, 1);
    p(0, 0) = prob.targets[static_cast<std::size_t>(i)];
    cone.p_values.push_back(p);
    for (Index j = 0; j < npts; ++j)
      cone.target(i, j) = 1.0 - prob.targets[static_cast<std::size_t>(i)] * std::conj(prob.targets[static_cast<std::size_t>(j)]);
  }
  cone.validate();

  PickResult res;
  const ConeCertificate cert = agler_feasibility(cone, opts.max_iter, opts.tol);
  res.solver_residual = cert.residual;
  if (cert.status != ConeStatus::Feasible) {
    res.status = PickStatus::Undecided;
    return res;
  }
  FactorizationData d = cone_to_factorization(cert, cone);
  PickWitness w;
  w.t = d.sigma;
  for (Index i = 0; i < npts; ++i) w.v.push_back(d.f_values[static_cast<std::size_t>(i)].row(0));
  res.witness = std::move(w);
  res.interpolant = build_colligation(d, 1e-7);
  res.status = PickStatus::Feasible;
  return res;
}

}  // namespace

PickResult pick_solve(const PickProblem& prob, const PickOptions& opts) {
  prob.validate();
  if (prob.spec.n == 1 || prob.spec.kind == SpaceKind::Row || prob.spec.kind == SpaceKind::Column)
    return kernel_route(prob, opts);
  if (prob.spec.kind == SpaceKind::Max && prob.spec.base == Base::L1)
    return agler_route(prob, opts);
  throw unsupported_error("pick_solve: supported families are n=1, row/column, max(l1)");
}

}  // namespace ucnorm
