#include "ucnorm/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace ucnorm::io {

std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

std::string format_complex(Complex z) {
  return "[" + format_real(z.real()) + ", " + format_real(z.imag()) + "]";
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw error("cannot open for writing: " + tmp);
    out << content;
    if (!out) throw error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// Line-oriented scanner that carries the line number for diagnostics.
class Scanner {
 public:
  explicit Scanner(std::istream& in) : in_(in) {}

  long line_number() const { return line_; }

  std::string next_line() {
    std::string s;
    while (std::getline(in_, s)) {
      ++line_;
      if (!s.empty() && s.back() == '\r') s.pop_back();
      if (!s.empty()) return s;
    }
    throw parse_error("unexpected end of file", line_);
  }

  // Splits on whitespace.
  std::vector<std::string> next_tokens() {
    std::istringstream ss(next_line());
    std::vector<std::string> toks;
    std::string t;
    while (ss >> t) toks.push_back(t);
    return toks;
  }

  void expect_header(const std::string& kind) {
    const auto toks = next_tokens();
    if (toks.size() != 3 || toks[0] != "ucnorm" || toks[1] != kind || toks[2] != "v1")
      throw parse_error("expected header 'ucnorm " + kind + " v1'", line_);
  }

  void expect_keyword(const std::string& kw) {
    const auto toks = next_tokens();
    if (toks.size() != 1 || toks[0] != kw) throw parse_error("expected '" + kw + "'", line_);
  }

  long parse_count(const std::string& tok) {
    char* end = nullptr;
    const long v = std::strtol(tok.c_str(), &end, 10);
    if (end == tok.c_str() || *end != '\0' || v < 0) throw parse_error("expected a count, got '" + tok + "'", line_);
    return v;
  }

  double parse_real_tok(const std::string& tok) {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0') throw parse_error("expected a number, got '" + tok + "'", line_);
    return v;
  }

  // Parses exactly `count` complex entries "[re, im]" from one line.
  std::vector<Complex> complex_row(Index count) {
    const std::string s = next_line();
    std::vector<Complex> out;
    std::size_t pos = 0;
    for (Index k = 0; k < count; ++k) out.push_back(scan_complex(s, pos));
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos != s.size()) throw parse_error("trailing characters after row entries", line_);
    return out;
  }

  Complex scan_complex(const std::string& s, std::size_t& pos) {
    auto skip_ws = [&] {
      while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    };
    skip_ws();
    if (pos >= s.size() || s[pos] != '[') throw parse_error("expected '[' of a complex entry", line_);
    ++pos;
    const double re = scan_real(s, pos);
    skip_ws();
    if (pos >= s.size() || s[pos] != ',') throw parse_error("expected ',' in a complex entry", line_);
    ++pos;
    const double im = scan_real(s, pos);
    skip_ws();
    if (pos >= s.size() || s[pos] != ']') throw parse_error("expected ']' of a complex entry", line_);
    ++pos;
    return {re, im};
  }

  double scan_real(const std::string& s, std::size_t& pos) {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    char* end = nullptr;
    const double v = std::strtod(s.c_str() + pos, &end);
    if (end == s.c_str() + pos) throw parse_error("expected a number", line_);
    pos = static_cast<std::size_t>(end - s.c_str());
    return v;
  }

 private:
  std::istream& in_;
  long line_ = 0;
};

void append_matrix_rows(std::string& out, const CMatrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out += ' ';
      out += format_complex(m(i, j));
    }
    out += '\n';
  }
}

CMatrix read_matrix_rows(Scanner& sc, Index rows, Index cols) {
  CMatrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const auto row = sc.complex_row(cols);
    for (Index j = 0; j < cols; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
  }
  if (!m.allFinite()) throw parse_error("non-finite matrix entry", sc.line_number());
  return m;
}

}  // namespace

std::string write_tuple(const MatrixTuple& t) {
  std::string out = "ucnorm tuple v1\n";
  out += "n " + std::to_string(t.n()) + " dim " + std::to_string(t.dim()) + "\n";
  for (Index j = 0; j < t.n(); ++j) {
    out += "matrix " + std::to_string(j) + "\n";
    append_matrix_rows(out, t[static_cast<std::size_t>(j)]);
  }
  return out;
}

MatrixTuple read_tuple(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("tuple");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 4 || hdr[0] != "n" || hdr[2] != "dim")
    throw parse_error("expected 'n <count> dim <count>'", sc.line_number());
  const long n = sc.parse_count(hdr[1]);
  const long dim = sc.parse_count(hdr[3]);
  std::vector<CMatrix> mats;
  for (long j = 0; j < n; ++j) {
    const auto mk = sc.next_tokens();
    if (mk.size() != 2 || mk[0] != "matrix" || sc.parse_count(mk[1]) != j)
      throw parse_error("expected 'matrix " + std::to_string(j) + "'", sc.line_number());
    mats.push_back(read_matrix_rows(sc, dim, dim));
  }
  return MatrixTuple(std::move(mats));
}

std::string write_polynomial(const MatrixPolynomial& p) {
  std::string out = "ucnorm poly v1\n";
  out += "vars " + std::to_string(p.n) + " coeff " + std::to_string(p.coeff_size) +
         " terms " + std::to_string(p.terms.size()) + "\n";
  for (const auto& [m, a] : p.terms) {  // graded-lex order by the map's comparator
    std::string line;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) line += ' ';
      line += std::to_string(m[i]);
    }
    line += " :";
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) line += ' ' + format_complex(a(i, j));
    out += line + "\n";
  }
  return out;
}

MatrixPolynomial read_polynomial(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("poly");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 6 || hdr[0] != "vars" || hdr[2] != "coeff" || hdr[4] != "terms")
    throw parse_error("expected 'vars <n> coeff <N> terms <count>'", sc.line_number());
  const long n = sc.parse_count(hdr[1]);
  const long coeff = sc.parse_count(hdr[3]);
  const long nterms = sc.parse_count(hdr[5]);
  MatrixPolynomial p(n, coeff);
  for (long t = 0; t < nterms; ++t) {
    const std::string line = sc.next_line();
    const std::size_t colon = line.find(':');
    if (colon == std::string::npos) throw parse_error("expected ':' in term line", sc.line_number());
    std::istringstream expos(line.substr(0, colon));
    MultiIndex m;
    std::string tok;
    while (expos >> tok) m.push_back(static_cast<int>(sc.parse_count(tok)));
    if (static_cast<long>(m.size()) != n) throw parse_error("wrong exponent count in term", sc.line_number());
    CMatrix a(coeff, coeff);
    std::size_t pos = colon + 1;
    for (Index i = 0; i < coeff; ++i)
      for (Index j = 0; j < coeff; ++j) a(i, j) = sc.scan_complex(line, pos);
    p.add_term(m, a);
  }
  p.validate();
  return p;
}

std::string write_points(const std::vector<CVector>& pts, Index n) {
  std::string out = "ucnorm points v1\n";
  out += "n " + std::to_string(n) + " count " + std::to_string(pts.size()) + "\n";
  for (const auto& z : pts) {
    for (Index j = 0; j < z.size(); ++j) {
      if (j) out += ' ';
      out += format_complex(z(j));
    }
    out += '\n';
  }
  return out;
}

std::vector<CVector> read_points(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("points");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 4 || hdr[0] != "n" || hdr[2] != "count")
    throw parse_error("expected 'n <n> count <count>'", sc.line_number());
  const long n = sc.parse_count(hdr[1]);
  const long count = sc.parse_count(hdr[3]);
  std::vector<CVector> pts;
  for (long i = 0; i < count; ++i) {
    const auto row = sc.complex_row(n);
    CVector z(n);
    for (long j = 0; j < n; ++j) z(j) = row[static_cast<std::size_t>(j)];
    pts.push_back(z);
  }
  return pts;
}

std::string write_factorization(const FactorizationData& d) {
  d.validate();
  std::string out = "ucnorm fact v1\n";
  out += "n " + std::to_string(d.n_vars()) + " k " + std::to_string(d.k()) + " N " +
         std::to_string(d.n_out()) + " points " + std::to_string(d.n_points()) + "\n";
  for (Index i = 0; i < d.n_points(); ++i) {
    out += "point " + std::to_string(i) + "\n";
    const CVector& z = d.points[static_cast<std::size_t>(i)];
    for (Index j = 0; j < z.size(); ++j) {
      if (j) out += ' ';
      out += format_complex(z(j));
    }
    out += '\n';
    out += "F " + std::to_string(i) + "\n";
    append_matrix_rows(out, d.f_values[static_cast<std::size_t>(i)]);
    out += "p " + std::to_string(i) + "\n";
    append_matrix_rows(out, d.p_values[static_cast<std::size_t>(i)]);
  }
  out += "sigma\n";
  for (Index j = 0; j < d.sigma.n(); ++j) {
    out += "matrix " + std::to_string(j) + "\n";
    append_matrix_rows(out, d.sigma[static_cast<std::size_t>(j)]);
  }
  return out;
}

FactorizationData read_factorization(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("fact");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 8 || hdr[0] != "n" || hdr[2] != "k" || hdr[4] != "N" || hdr[6] != "points")
    throw parse_error("expected 'n <n> k <k> N <N> points <count>'", sc.line_number());
  const long n = sc.parse_count(hdr[1]);
  const long k = sc.parse_count(hdr[3]);
  const long nout = sc.parse_count(hdr[5]);
  const long pts = sc.parse_count(hdr[7]);
  FactorizationData d;
  for (long i = 0; i < pts; ++i) {
    auto toks = sc.next_tokens();
    if (toks.size() != 2 || toks[0] != "point" || sc.parse_count(toks[1]) != i)
      throw parse_error("expected 'point " + std::to_string(i) + "'", sc.line_number());
    const auto row = sc.complex_row(n);
    CVector z(n);
    for (long j = 0; j < n; ++j) z(j) = row[static_cast<std::size_t>(j)];
    d.points.push_back(z);
    toks = sc.next_tokens();
    if (toks.size() != 2 || toks[0] != "F") throw parse_error("expected 'F <i>'", sc.line_number());
    d.f_values.push_back(read_matrix_rows(sc, nout, k));
    toks = sc.next_tokens();
    if (toks.size() != 2 || toks[0] != "p") throw parse_error("expected 'p <i>'", sc.line_number());
    d.p_values.push_back(read_matrix_rows(sc, nout, nout));
  }
  sc.expect_keyword("sigma");
  std::vector<CMatrix> mats;
  for (long j = 0; j < n; ++j) {
    const auto mk = sc.next_tokens();
    if (mk.size() != 2 || mk[0] != "matrix" || sc.parse_count(mk[1]) != j)
      throw parse_error("expected 'matrix " + std::to_string(j) + "'", sc.line_number());
    mats.push_back(read_matrix_rows(sc, k, k));
  }
  d.sigma = MatrixTuple(std::move(mats));
  d.validate();
  return d;
}

std::string write_colligation(const Colligation& c) {
  std::string out = "ucnorm colligation v1\n";
  out += "k " + std::to_string(c.k()) + " N " + std::to_string(c.n_out()) + "\n";
  out += "A\n";
  append_matrix_rows(out, c.a);
  out += "B\n";
  append_matrix_rows(out, c.b);
  out += "C\n";
  append_matrix_rows(out, c.c);
  out += "D\n";
  append_matrix_rows(out, c.d);
  return out;
}

Colligation read_colligation(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("colligation");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 4 || hdr[0] != "k" || hdr[2] != "N")
    throw parse_error("expected 'k <k> N <N>'", sc.line_number());
  const long k = sc.parse_count(hdr[1]);
  const long nout = sc.parse_count(hdr[3]);
  Colligation c;
  sc.expect_keyword("A");
  c.a = read_matrix_rows(sc, k, k);
  sc.expect_keyword("B");
  c.b = read_matrix_rows(sc, k, nout);
  sc.expect_keyword("C");
  c.c = read_matrix_rows(sc, nout, k);
  sc.expect_keyword("D");
  c.d = read_matrix_rows(sc, nout, nout);
  c.validate(1e-9);
  return c;
}

std::string write_cone_certificate(const ConeCertificate& cert) {
  std::string out = "ucnorm cone-certificate v1\n";
  const Index size = cert.kernels.empty() ? 0 : cert.kernels.front().rows();
  out += "status " + cone_status_name(cert.status) + " kernels " + std::to_string(cert.kernels.size()) +
         " size " + std::to_string(size) + " residual " + format_real(cert.residual) +
         " iterations " + std::to_string(cert.iterations) + "\n";
  for (std::size_t m = 0; m < cert.kernels.size(); ++m) {
    out += "kernel " + std::to_string(m) + "\n";
    append_matrix_rows(out, cert.kernels[m]);
  }
  return out;
}

ConeCertificate read_cone_certificate(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("cone-certificate");
  const auto hdr = sc.next_tokens();
  if (hdr.size() != 10 || hdr[0] != "status" || hdr[2] != "kernels" || hdr[4] != "size" ||
      hdr[6] != "residual" || hdr[8] != "iterations")
    throw parse_error("malformed certificate header", sc.line_number());
  ConeCertificate cert;
  if (hdr[1] == "FEASIBLE")
    cert.status = ConeStatus::Feasible;
  else if (hdr[1] == "UNDECIDED")
    cert.status = ConeStatus::Undecided;
  else
    throw parse_error("unknown status '" + hdr[1] + "'", sc.line_number());
  const long kernels = sc.parse_count(hdr[3]);
  const long size = sc.parse_count(hdr[5]);
  cert.residual = sc.parse_real_tok(hdr[7]);
  cert.iterations = sc.parse_count(hdr[9]);
  for (long m = 0; m < kernels; ++m) {
    const auto mk = sc.next_tokens();
    if (mk.size() != 2 || mk[0] != "kernel" || sc.parse_count(mk[1]) != m)
      throw parse_error("expected 'kernel " + std::to_string(m) + "'", sc.line_number());
    cert.kernels.push_back(read_matrix_rows(sc, size, size));
  }
  return cert;
}

std::string space_token(const OperatorSpaceSpec& s) {
  switch (s.kind) {
    case SpaceKind::Min: return "min-" + base_name(s.base);
    case SpaceKind::Max: return "max-" + base_name(s.base);
    case SpaceKind::Row: return "row";
    case SpaceKind::Column: return "column";
    case SpaceKind::Concrete: return "concrete";
  }
  throw error("bad kind");
}

OperatorSpaceSpec parse_space_token(const std::string& token, Index n) {
  if (token == "row") return OperatorSpaceSpec::row(n);
  if (token == "column") return OperatorSpaceSpec::column(n);
  const auto dash = token.find('-');
  if (dash != std::string::npos) {
    const std::string kind = token.substr(0, dash);
    const std::string base = token.substr(dash + 1);
    Base b;
    if (base == "l1")
      b = Base::L1;
    else if (base == "l2")
      b = Base::L2;
    else if (base == "linf")
      b = Base::Linf;
    else
      throw error("unknown base '" + base + "' in space token");
    if (kind == "min") return OperatorSpaceSpec::min(b, n);
    if (kind == "max") return OperatorSpaceSpec::max(b, n);
  }
  throw error("unknown space token '" + token + "' (expected min-*/max-*/row/column)");
}

std::string write_pick_problem(const PickProblem& p) {
  std::string out = "ucnorm pick v1\n";
  out += "space " + space_token(p.spec) + " " + std::to_string(p.spec.n) + "\n";
  out += "nodes " + std::to_string(p.nodes.size()) + "\n";
  for (std::size_t i = 0; i < p.nodes.size(); ++i) {
    out += "node";
    for (Index j = 0; j < p.nodes[i].size(); ++j) out += ' ' + format_complex(p.nodes[i](j));
    out += " target " + format_complex(p.targets[i]) + "\n";
  }
  return out;
}

PickProblem read_pick_problem(std::istream& in) {
  Scanner sc(in);
  sc.expect_header("pick");
  auto toks = sc.next_tokens();
  if (toks.size() != 3 || toks[0] != "space")
    throw parse_error("expected 'space <token> <n>'", sc.line_number());
  const long n = sc.parse_count(toks[2]);
  PickProblem p;
  try {
    p.spec = parse_space_token(toks[1], n);
  } catch (const error& e) {
    throw parse_error(e.what(), sc.line_number());
  }
  toks = sc.next_tokens();
  if (toks.size() != 2 || toks[0] != "nodes") throw parse_error("expected 'nodes <count>'", sc.line_number());
  const long count = sc.parse_count(toks[1]);
  for (long i = 0; i < count; ++i) {
    const std::string line = sc.next_line();
    if (line.rfind("node", 0) != 0) throw parse_error("expected 'node ...'", sc.line_number());
    const std::size_t tpos = line.find(" target ");
    if (tpos == std::string::npos) throw parse_error("expected 'target' in node line", sc.line_number());
    std::size_t pos = 4;
    CVector z(n);
    for (long j = 0; j < n; ++j) z(j) = sc.scan_complex(line, pos);
    if (pos > tpos) throw parse_error("malformed node coordinates", sc.line_number());
    pos = tpos + 8;
    p.nodes.push_back(z);
    p.targets.push_back(sc.scan_complex(line, pos));
  }
  p.validate();
  return p;
}

namespace {
template <typename F>
auto load_with(const std::string& path, F readfn) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open: " + path);
  return readfn(in);
}
}  // namespace

MatrixTuple load_tuple(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_tuple(in); });
}
MatrixPolynomial load_polynomial(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_polynomial(in); });
}
std::vector<CVector> load_points(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_points(in); });
}
FactorizationData load_factorization(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_factorization(in); });
}
Colligation load_colligation(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_colligation(in); });
}
PickProblem load_pick_problem(const std::string& path) {
  return load_with(path, [](std::istream& in) { return read_pick_problem(in); });
}

}  // namespace ucnorm::io
