#include <doctest.h>

#include "ucnorm/agler_cone.hpp"
#include "ucnorm/rng.hpp"

#include <cmath>

using namespace ucnorm;

namespace {

MatrixPolynomial zero_poly(Index n) {
  MatrixPolynomial p(n, 1);
  p.add_term(MultiIndex(static_cast<std::size_t>(n), 0), Complex(0, 0));
  return p;
}

MatrixPolynomial coord_poly(Index n, int which, Complex scale = Complex(1, 0)) {
  MatrixPolynomial p(n, 1);
  MultiIndex m(static_cast<std::size_t>(n), 0);
  m[static_cast<std::size_t>(which)] = 1;
  p.add_term(m, scale);
  return p;
}

MatrixPolynomial z1z2(Complex scale = Complex(1, 0)) {
  MatrixPolynomial p(2, 1);
  p.add_term({1, 1}, scale);
  return p;
}

std::vector<CVector> l2_points(std::uint64_t seed, int count, double radius) {
  std::vector<CVector> pts;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    pts.push_back(radius * rng.l2_ball_point(2));
  }
  return pts;
}

std::vector<CVector> polydisk_points(std::uint64_t seed, int count, double radius) {
  std::vector<CVector> pts;
  for (int i = 0; i < count; ++i) {
    Rng rng = Rng::derive(seed, static_cast<std::uint64_t>(i));
    pts.push_back(radius * rng.linf_ball_point(2));
  }
  return pts;
}

}  // namespace

TEST_CASE("row cone: zero polynomial gives the reproducing kernel, always feasible") {
  const auto prob = make_cone_problem(zero_poly(2), OperatorSpaceSpec::row(2), l2_points(71, 8, 0.9));
  const auto cert = row_cone_check(prob);
  CHECK(cert.status == ConeStatus::Feasible);
  CHECK(cert.residual <= 1e-12);
}

TEST_CASE("row cone: the coordinate function is a contractive multiplier") {
  for (int trial = 0; trial < 10; ++trial) {
    const auto prob = make_cone_problem(coord_poly(2, 0), OperatorSpaceSpec::row(2),
                                        l2_points(72 + static_cast<std::uint64_t>(trial), 10, 0.95));
    CHECK(row_cone_check(prob).status == ConeStatus::Feasible);
  }
}

TEST_CASE("row cone: 2 z1 z2 fails PSD on node sets found by search") {
  bool found = false;
  double most_negative = 0.0;
  for (int attempt = 0; attempt < 20 && !found; ++attempt) {
    const auto pts = l2_points(73 + static_cast<std::uint64_t>(attempt), 10, 0.9);
    const auto prob = make_cone_problem(z1z2(Complex(2, 0)), OperatorSpaceSpec::row(2), pts);
    const auto cert = row_cone_check(prob);
    if (cert.status == ConeStatus::Undecided && cert.residual > 1e-6) {
      found = true;
      most_negative = cert.residual;
    }
  }
  CHECK(found);
  CHECK(most_negative > 1e-3);
}

TEST_CASE("row cone feasibility is monotone under node restriction") {
  const auto pts = l2_points(74, 10, 0.9);
  const auto full = make_cone_problem(coord_poly(2, 1), OperatorSpaceSpec::row(2), pts);
  REQUIRE(row_cone_check(full).status == ConeStatus::Feasible);
  std::vector<CVector> subset(pts.begin(), pts.begin() + 4);
  const auto sub = make_cone_problem(coord_poly(2, 1), OperatorSpaceSpec::row(2), subset);
  CHECK(row_cone_check(sub).status == ConeStatus::Feasible);
}

TEST_CASE("row cone rejects duplicate nodes") {
  auto pts = l2_points(75, 4, 0.8);
  pts.push_back(pts.front());
  CHECK_THROWS_AS(make_cone_problem(coord_poly(2, 0), OperatorSpaceSpec::row(2), pts),
                  duplicate_node_error);
}

TEST_CASE("agler feasibility: single-variable cancellation converges fast") {
  const auto prob = make_cone_problem(coord_poly(2, 0), OperatorSpaceSpec::max(Base::L1, 2),
                                      polydisk_points(76, 6, 0.8));
  const auto cert = agler_feasibility(prob, 2000, 1e-8);
  CHECK(cert.status == ConeStatus::Feasible);
  CHECK(cert.iterations < 500);
  for (const auto& k : cert.kernels) CHECK(is_psd(k, 1e-10));
}

TEST_CASE("agler feasibility: z1 z2 on the bidisk is feasible (Ando)") {
  const auto prob = make_cone_problem(z1z2(), OperatorSpaceSpec::max(Base::L1, 2),
                                      polydisk_points(77, 8, 0.85));
  const auto cert = agler_feasibility(prob, 10000, 1e-6);
  CHECK(cert.status == ConeStatus::Feasible);
  CHECK(cert.residual <= 1e-6);
}

TEST_CASE("agler feasibility: 1.2 z1 stalls and stays undecided") {
  auto pts = polydisk_points(78, 6, 0.8);
  CVector hot(2);
  hot << Complex(0.9, 0), Complex(0.1, 0.2);
  pts.push_back(hot);  // make the diagonal constraint clearly violated
  const auto prob = make_cone_problem(coord_poly(2, 0, Complex(1.2, 0)),
                                      OperatorSpaceSpec::max(Base::L1, 2), pts);
  const auto cert = agler_feasibility(prob, 3000, 1e-6);
  CHECK(cert.status == ConeStatus::Undecided);
  CHECK(cert.residual > 1e-3);
}

TEST_CASE("agler residual history is nonincreasing") {
  for (std::uint64_t seed : {79ULL, 80ULL}) {
    const auto prob = make_cone_problem(z1z2(), OperatorSpaceSpec::max(Base::L1, 2),
                                        polydisk_points(seed, 6, 0.8));
    const auto cert = agler_feasibility(prob, 4000, 1e-7);
    for (std::size_t i = 1; i < cert.residual_history.size(); ++i)
      CHECK(cert.residual_history[i] <= cert.residual_history[i - 1] * (1.0 + 1e-9) + 1e-14);
  }
  // also on an infeasible run
  const auto bad = make_cone_problem(coord_poly(2, 0, Complex(1.3, 0)),
                                     OperatorSpaceSpec::max(Base::L1, 2), polydisk_points(81, 5, 0.85));
  const auto cert = agler_feasibility(bad, 500, 1e-8);
  for (std::size_t i = 1; i < cert.residual_history.size(); ++i)
    CHECK(cert.residual_history[i] <= cert.residual_history[i - 1] * (1.0 + 1e-9) + 1e-14);
}

TEST_CASE("cone_to_factorization: row certificate reproduces the data") {
  const auto prob = make_cone_problem(coord_poly(2, 0), OperatorSpaceSpec::row(2), l2_points(82, 8, 0.9));
  const auto cert = row_cone_check(prob);
  REQUIRE(cert.status == ConeStatus::Feasible);
  const FactorizationData d = cone_to_factorization(cert, prob);
  const auto chk = verify_factorization(d, 1e-8);
  CHECK(chk.pass);
  // feeds directly into the realization step; the transfer function matches
  // the data at the nodes and stays contractive elsewhere (interpolants are
  // not unique away from the nodes)
  const Colligation c = build_colligation(d);
  for (Index i = 0; i < prob.n_points(); ++i) {
    const CMatrix f = eval_transfer(c, d.sigma, prob.points[static_cast<std::size_t>(i)]);
    CHECK(std::abs(f(0, 0) - prob.points[static_cast<std::size_t>(i)](0)) <= 1e-7);
  }
  for (const auto& z : l2_points(83, 10, 0.85)) {
    CHECK(op_norm(eval_transfer(c, d.sigma, z)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("cone_to_factorization: zero polynomial gives zero p-values") {
  const auto prob = make_cone_problem(zero_poly(2), OperatorSpaceSpec::row(2), l2_points(84, 5, 0.8));
  const auto cert = row_cone_check(prob);
  const FactorizationData d = cone_to_factorization(cert, prob);
  for (const auto& p : d.p_values) CHECK(op_norm(p) == 0.0);
  CHECK(verify_factorization(d, 1e-9).pass);
}

TEST_CASE("cone_to_factorization: bidisk certificate realizes z1 z2 at held-out points") {
  const auto prob = make_cone_problem(z1z2(), OperatorSpaceSpec::max(Base::L1, 2),
                                      polydisk_points(85, 8, 0.8));
  const auto cert = agler_feasibility(prob, 20000, 1e-9);
  REQUIRE(cert.status == ConeStatus::Feasible);
  const FactorizationData d = cone_to_factorization(cert, prob);
  const auto chk = verify_factorization(d, 1e-8);  // 10x the solver tolerance
  CHECK(chk.pass);
  const Colligation c = build_colligation(d, 1e-7);
  for (Index i = 0; i < prob.n_points(); ++i) {
    const CMatrix f = eval_transfer(c, d.sigma, prob.points[static_cast<std::size_t>(i)]);
    CHECK(std::abs(f(0, 0) - prob.points[static_cast<std::size_t>(i)](0) * prob.points[static_cast<std::size_t>(i)](1)) <= 1e-5);
  }
  for (const auto& z : polydisk_points(86, 12, 0.75)) {
    CHECK(op_norm(eval_transfer(c, d.sigma, z)) <= 1.0 + 1e-9);
  }
}

TEST_CASE("cone_to_factorization requires a feasible certificate") {
  const auto prob = make_cone_problem(z1z2(Complex(2, 0)), OperatorSpaceSpec::row(2), l2_points(73, 10, 0.9));
  const auto cert = row_cone_check(prob);
  if (cert.status == ConeStatus::Undecided) CHECK_THROWS_AS(cone_to_factorization(cert, prob), ucnorm::error);
}

TEST_CASE("n = 1: classical Pick, row kernel, and the projection solver agree") {
  int feasible_count = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng rng = Rng::derive(87, trial);
    // two nodes, targets sampled to produce both verdicts
    std::vector<CVector> pts;
    for (int i = 0; i < 2; ++i) {
      CVector z(1);
      z(0) = 0.85 * rng.l2_ball_point(1)(0);
      pts.push_back(z);
    }
    if ((pts[0] - pts[1]).norm() < 1e-3) continue;
    MatrixPolynomial p(1, 1);  // affine polynomial a + b z
    p.add_term({0}, 0.5 * rng.cgaussian());
    p.add_term({1}, 0.7 * rng.cgaussian());

    // classical Pick matrix verdict
    CMatrix pick(2, 2);
    bool classical;
    {
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const Complex wi = eval_point(p, pts[static_cast<std::size_t>(i)])(0, 0);
          const Complex wj = eval_point(p, pts[static_cast<std::size_t>(j)])(0, 0);
          pick(i, j) = (1.0 - wi * std::conj(wj)) /
                       (1.0 - pts[static_cast<std::size_t>(i)](0) * std::conj(pts[static_cast<std::size_t>(j)](0)));
        }
      classical = is_psd(pick, 1e-9);
    }

    const auto row_prob = make_cone_problem(p, OperatorSpaceSpec::row(1), pts);
    const bool row_ok = row_cone_check(row_prob).status == ConeStatus::Feasible;
    CHECK(row_ok == classical);

    const auto agler_prob = make_cone_problem(p, OperatorSpaceSpec::max(Base::L1, 1), pts);
    const bool agler_ok = agler_feasibility(agler_prob, 400, 1e-7).status == ConeStatus::Feasible;
    CHECK(agler_ok == classical);

    feasible_count += classical ? 1 : 0;
  }
  CHECK(feasible_count > 10);        // both verdicts actually exercised
  CHECK(feasible_count < 95);
}
