#ifndef UCNORM_IO_HPP
#define UCNORM_IO_HPP

#include "ucnorm/agler_cone.hpp"
#include "ucnorm/opspace.hpp"
#include "ucnorm/pick.hpp"
#include "ucnorm/polyeval.hpp"
#include "ucnorm/realization.hpp"
#include "ucnorm/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ucnorm::io {

/// 17-significant-digit decimal rendering; the inverse of parse_real for
/// every finite double, and byte-stable across runs.
std::string format_real(double x);
/// Complex scalar as "[re, im]" with format_real components.
std::string format_complex(Complex z);

/// Write-to-temp-then-rename so partially written outputs never appear.
void atomic_write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

std::string write_tuple(const MatrixTuple& t);
MatrixTuple read_tuple(std::istream& in);

std::string write_polynomial(const MatrixPolynomial& p);
MatrixPolynomial read_polynomial(std::istream& in);

std::string write_points(const std::vector<CVector>& pts, Index n);
std::vector<CVector> read_points(std::istream& in);

std::string write_factorization(const FactorizationData& d);
FactorizationData read_factorization(std::istream& in);

std::string write_colligation(const Colligation& c);
/// Re-validates unitarity on load.
Colligation read_colligation(std::istream& in);

std::string write_cone_certificate(const ConeCertificate& cert);
ConeCertificate read_cone_certificate(std::istream& in);

std::string write_pick_problem(const PickProblem& p);
PickProblem read_pick_problem(std::istream& in);

/// Compact spec tag used by the CLI --space flag and in file records:
/// min-l1, max-linf, row, column, ... (concrete specs carry a tuple file
/// reference and are resolved by the caller).
std::string space_token(const OperatorSpaceSpec& s);
OperatorSpaceSpec parse_space_token(const std::string& token, Index n);

// Convenience file loaders (wrap the stream readers).
MatrixTuple load_tuple(const std::string& path);
MatrixPolynomial load_polynomial(const std::string& path);
std::vector<CVector> load_points(const std::string& path);
FactorizationData load_factorization(const std::string& path);
Colligation load_colligation(const std::string& path);
PickProblem load_pick_problem(const std::string& path);

}  // namespace ucnorm::io

#endif  // UCNORM_IO_HPP
