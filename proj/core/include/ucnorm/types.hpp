#ifndef UCNORM_TYPES_HPP
#define UCNORM_TYPES_HPP

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ucnorm {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Index = Eigen::Index;

// Error hierarchy. The CLI maps these onto its exit codes, library callers
// can catch the base class.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct dimension_error : error {
  using error::error;
};

// Tuples of different length where equal length is required.
struct arity_error : dimension_error {
  using dimension_error::dimension_error;
};

struct positivity_error : error {
  using error::error;
};

// Gram matrices of domain and image disagree: the data does not define an
// isometry, so no unitary extension exists.
struct isometry_error : error {
  using error::error;
};

struct commutativity_error : error {
  using error::error;
};

// Evaluation requested outside the region where the formula is valid
// (e.g. a transfer function at a point with ||sigma(z)|| >= 1).
struct domain_error : error {
  using error::error;
};

struct capacity_error : error {
  using error::error;
};

struct duplicate_node_error : error {
  using error::error;
};

struct unsupported_error : error {
  using error::error;
};

struct parse_error : error {
  parse_error(const std::string& msg, long line)
      : error(msg + " (line " + std::to_string(line) + ")"), line_number(line) {}
  long line_number;
};

/// An n-tuple (T_1,...,T_n) of equally sized square complex matrices.
struct MatrixTuple {
  std::vector<CMatrix> mats;

  MatrixTuple() = default;
  explicit MatrixTuple(std::vector<CMatrix> ms) : mats(std::move(ms)) { validate(); }

  Index n() const { return static_cast<Index>(mats.size()); }
  Index dim() const { return mats.empty() ? 0 : mats.front().rows(); }
  const CMatrix& operator[](std::size_t j) const { return mats[j]; }
  CMatrix& operator[](std::size_t j) { return mats[j]; }

  void validate() const {
    if (mats.empty()) throw arity_error("matrix tuple must have n >= 1");
    const Index d = mats.front().rows();
    for (const auto& m : mats) {
      if (m.rows() != m.cols()) throw dimension_error("tuple entries must be square");
      if (m.rows() != d) throw dimension_error("tuple entries must have a common size");
      if (!m.allFinite()) throw error("tuple entry contains a non-finite value");
    }
  }

  /// sigma_T(z) = sum_j z_j T_j.
  CMatrix sigma(const CVector& z) const {
    if (z.size() != n()) throw arity_error("sigma: coordinate count != tuple length");
    CMatrix s = CMatrix::Zero(dim(), dim());
    for (Index j = 0; j < n(); ++j) s += z(j) * mats[static_cast<std::size_t>(j)];
    return s;
  }

  MatrixTuple adjoint() const {
    std::vector<CMatrix> out;
    out.reserve(mats.size());
    for (const auto& m : mats) out.push_back(m.adjoint());
    return MatrixTuple(std::move(out));
  }
};

/// Matched lists of vectors (as matrix columns) with equal Gram matrices;
/// the data defining a lurking isometry.  `ambient_dim` must be carried
/// explicitly so the empty list still knows its space.
struct IsometryData {
  Index ambient_dim = 0;
  CMatrix domain;  // ambient_dim x m
  CMatrix image;   // ambient_dim x m

  IsometryData() = default;
  IsometryData(Index d, CMatrix dom, CMatrix img)
      : ambient_dim(d), domain(std::move(dom)), image(std::move(img)) {
    if (domain.cols() != image.cols())
      throw dimension_error("isometry data: domain/image vector counts differ");
    if ((domain.size() > 0 && domain.rows() != d) || (image.size() > 0 && image.rows() != d))
      throw dimension_error("isometry data: vectors not in the stated ambient space");
  }
};

}  // namespace ucnorm

#endif  // UCNORM_TYPES_HPP
