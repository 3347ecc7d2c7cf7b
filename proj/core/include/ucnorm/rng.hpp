#ifndef UCNORM_RNG_HPP
#define UCNORM_RNG_HPP

#include "ucnorm/types.hpp"

#include <cstdint>

namespace ucnorm {

/// Deterministic generator with hand-rolled distributions so that draws are
/// reproducible across standard libraries.  Each independent sampling task
/// should use a fresh stream derived via derive().
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Stream for draw `index` of the task seeded by `seed`; statistically
  /// independent of neighbouring indices (splitmix-style mixing).
  static Rng derive(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64();
  double uniform();                       // [0, 1)
  double uniform(double lo, double hi);   // [lo, hi)
  double gaussian();                      // standard normal (Box-Muller)
  Complex cgaussian();                    // complex standard normal

  CMatrix gaussian_matrix(Index rows, Index cols);
  /// Haar-ish unitary: QR of a complex Gaussian matrix with the phase
  /// convention that R has a positive diagonal.
  CMatrix unitary(Index dim);
  /// Random contraction: unitary scaled by a uniform radius.
  CMatrix contraction(Index dim);

  /// Point on the unit sphere of l2 (complex coordinates).
  CVector sphere_point(Index n);
  /// Point on the torus |z_j| = 1.
  CVector torus_point(Index n);
  /// Point in the closed unit ball of l1 / l2 / linf (boundary-biased:
  /// half the draws land on the unit sphere of the respective norm).
  CVector l1_ball_point(Index n);
  CVector l2_ball_point(Index n);
  CVector linf_ball_point(Index n);

 private:
  std::uint64_t state_;
};

}  // namespace ucnorm

#endif  // UCNORM_RNG_HPP
