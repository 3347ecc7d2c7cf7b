#include "ucnorm/rng.hpp"

#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace ucnorm {

namespace {
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

Rng Rng::derive(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t s = seed;
  std::uint64_t a = splitmix64(s);
  s ^= index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  return Rng(a ^ (b + 0x9e3779b97f4a7c15ULL));
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Complex Rng::cgaussian() {
  const double a = gaussian();
  const double b = gaussian();
  return {a / std::sqrt(2.0), b / std::sqrt(2.0)};
}

CMatrix Rng::gaussian_matrix(Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = cgaussian();
  return m;
}

CMatrix Rng::unitary(Index dim) {
  const CMatrix g = gaussian_matrix(dim, dim);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    q.col(j) *= (a > 0) ? d / a : Complex(1.0, 0.0);
  }
  return q;
}

CMatrix Rng::contraction(Index dim) { return uniform() * unitary(dim); }

CVector Rng::sphere_point(Index n) {
  CVector v(n);
  for (Index j = 0; j < n; ++j) v(j) = cgaussian();
  const double nrm = v.norm();
  if (nrm == 0.0) return sphere_point(n);
  return v / nrm;
}

CVector Rng::torus_point(Index n) {
  CVector v(n);
  for (Index j = 0; j < n; ++j) {
    const double th = uniform(0.0, 2.0 * std::numbers::pi);
    v(j) = Complex(std::cos(th), std::sin(th));
  }
  return v;
}

CVector Rng::l2_ball_point(Index n) {
  CVector v = sphere_point(n);
  if (uniform() < 0.5) return v;  // boundary-biased
  return std::pow(uniform(), 1.0 / (2.0 * static_cast<double>(n))) * v;
}

CVector Rng::linf_ball_point(Index n) {
  CVector v = torus_point(n);
  if (uniform() < 0.5) return v;
  for (Index j = 0; j < n; ++j) v(j) *= uniform();
  return v;
}

CVector Rng::l1_ball_point(Index n) {
  // Dirichlet weights on moduli, independent phases.
  CVector v = torus_point(n);
  Eigen::VectorXd w(n);
  double s = 0.0;
  for (Index j = 0; j < n; ++j) {
    double e = -std::log(1.0 - uniform());
    w(j) = e;
    s += e;
  }
  v.array() *= (w / s).array().cast<Complex>();
  if (uniform() < 0.5) return v;
  return uniform() * v;
}

}  // namespace ucnorm
