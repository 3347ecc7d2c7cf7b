// Command-line front end: factorization checks, realizations, polynomial
// evaluation, von Neumann searches, Pick interpolation, cone feasibility,
// and the bundled explicit matrix examples.
//
// Exit codes: 0 ok / 2 negative verdict / 3 undecided / 64 parse / 65 dimension.

#include <CLI11.hpp>

#include "ucnorm/io.hpp"
#include "ucnorm/parallel.hpp"

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace ucnorm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 2;
constexpr int kExitUndecided = 3;
constexpr int kExitParse = 64;
constexpr int kExitDimension = 65;

struct RunConfig {
  std::uint64_t seed = 20240601;
  std::map<std::string, double> tolerances;
  std::map<std::string, long> budgets;
  std::string out;

  double tol(const std::string& name, double fallback) const {
    auto it = tolerances.find(name);
    return it == tolerances.end() ? fallback : it->second;
  }
  long budget(const std::string& name, long fallback) const {
    auto it = budgets.find(name);
    return it == budgets.end() ? fallback : it->second;
  }
};

struct ConfigFlags {
  std::vector<std::string> tol_kv;
  std::vector<std::string> budget_kv;
};

void add_config_flags(CLI::App* cmd, RunConfig& cfg, ConfigFlags& raw) {
  cmd->add_option("--seed", cfg.seed, "master seed for all sampling");
  cmd->add_option("--tol", raw.tol_kv,
                  "named tolerance, e.g. --tol fact=1e-8 (names: fact, gram, psd, cc, vn, solver)");
  cmd->add_option("--budget", raw.budget_kv,
                  "named budget, e.g. --budget draws=2000 (names: draws, dim, refine, samples)");
  cmd->add_option("--out", cfg.out, "report file (written atomically; default stdout)");
}

void apply_config_flags(RunConfig& cfg, const ConfigFlags& raw) {
  for (const auto& v : raw.tol_kv) {
    const auto eq = v.find('=');
    if (eq == std::string::npos) throw error("--tol expects name=value, got '" + v + "'");
    cfg.tolerances[v.substr(0, eq)] = std::strtod(v.c_str() + eq + 1, nullptr);
  }
  for (const auto& v : raw.budget_kv) {
    const auto eq = v.find('=');
    if (eq == std::string::npos) throw error("--budget expects name=value, got '" + v + "'");
    cfg.budgets[v.substr(0, eq)] = std::strtol(v.c_str() + eq + 1, nullptr, 10);
  }
}

void emit(const RunConfig& cfg, const std::string& report) {
  if (cfg.out.empty())
    std::cout << report;
  else
    io::atomic_write_file(cfg.out, report);
}

OperatorSpaceSpec resolve_space(const std::string& token, Index n) {
  const std::string prefix = "concrete:";
  if (token.rfind(prefix, 0) == 0) {
    MatrixTuple gens = io::load_tuple(token.substr(prefix.size()));
    return OperatorSpaceSpec::concrete(std::move(gens));
  }
  return io::parse_space_token(token, n);
}

int cmd_verify_factorization(const RunConfig& cfg, const std::string& path) {
  const FactorizationData d = io::load_factorization(path);
  const double tol = cfg.tol("fact", 1e-8);
  const FactorizationCheck chk = verify_factorization(d, tol);
  std::string rep = "ucnorm verify-factorization report\n";
  rep += "input " + path + "\n";
  rep += "dimensions n " + std::to_string(d.n_vars()) + " k " + std::to_string(d.k()) + " N " +
         std::to_string(d.n_out()) + " points " + std::to_string(d.n_points()) + "\n";
  rep += "tolerance " + io::format_real(tol) + "\n";
  rep += "residual " + io::format_real(chk.residual) + "\n";
  rep += std::string("pass ") + (chk.pass ? "true" : "false") + "\n";
  emit(cfg, rep);
  return chk.pass ? kExitOk : kExitNegative;
}

int cmd_realize(const RunConfig& cfg, const std::string& path, const std::string& col_out) {
  const FactorizationData d = io::load_factorization(path);
  Colligation col;
  try {
    col = build_colligation(d, cfg.tol("gram", 1e-9));
  } catch (const isometry_error& e) {
    std::string rep = "ucnorm realize report\ninput " + path + "\nstatus infeasible\nreason " +
                      std::string(e.what()) + "\n";
    emit(cfg, rep);
    return kExitNegative;
  }
  double reproduce = 0.0;
  for (Index i = 0; i < d.n_points(); ++i) {
    const CMatrix back = eval_transfer(col, d.sigma, d.points[static_cast<std::size_t>(i)]);
    reproduce = std::max(reproduce, op_norm(back - d.p_values[static_cast<std::size_t>(i)]));
  }
  std::string rep = "ucnorm realize report\n";
  rep += "input " + path + "\n";
  rep += "status ok\n";
  rep += "internal-dimension " + std::to_string(col.k()) + "\n";
  rep += "unitarity-defect " + io::format_real(col.unitarity_defect()) + "\n";
  rep += "reproduction-error " + io::format_real(reproduce) + "\n";
  emit(cfg, rep);
  if (!col_out.empty()) io::atomic_write_file(col_out, io::write_colligation(col));
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg, const std::string& poly_path, const std::string& points_path,
             const std::string& tuple_path) {
  const MatrixPolynomial p = io::load_polynomial(poly_path);
  std::string rep = "ucnorm eval report\n";
  rep += "poly " + poly_path + "\n";
  if (!tuple_path.empty()) {
    const MatrixTuple t = io::load_tuple(tuple_path);
    const CMatrix val = eval_tuple(p, t);
    rep += "tuple " + tuple_path + " dim " + std::to_string(t.dim()) + "\n";
    rep += "norm " + io::format_real(op_norm(val)) + "\n";
    emit(cfg, rep);
    return kExitOk;
  }
  const std::vector<CVector> pts = io::load_points(points_path);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CMatrix val = eval_point(p, pts[i]);
    rep += "point " + std::to_string(i) + " norm " + io::format_real(op_norm(val)) + " value";
    for (Index r = 0; r < val.rows(); ++r)
      for (Index c = 0; c < val.cols(); ++c) rep += ' ' + io::format_complex(val(r, c));
    rep += '\n';
  }
  emit(cfg, rep);
  return kExitOk;
}

int cmd_vn_search(const RunConfig& cfg, const std::string& poly_path, const std::string& space_tok,
                  int degree_cap, long grid, bool include_library, const std::string& witness_out) {
  const MatrixPolynomial p = io::load_polynomial(poly_path);
  const OperatorSpaceSpec e = resolve_space(space_tok, p.n);

  UcSearchBudget budget;
  budget.seed = cfg.seed;
  budget.draws = cfg.budget("draws", 400);
  budget.max_dim = cfg.budget("dim", 6);
  budget.refine_steps = cfg.budget("refine", 4000);
  budget.da_degree_cap = degree_cap;
  budget.include_library_tuples = include_library;
  const UcBound uc = uc_norm_lb(p, e, budget);

  SamplingPlan plan;
  plan.seed = cfg.seed + 1;
  plan.random_points = cfg.budget("samples", 4096);
  plan.grid_per_dim = grid;
  OperatorSpaceSpec domain = e;
  if (e.kind != SpaceKind::Concrete) domain = scalar_domain(e);
  const double sup = sup_norm_lb(p, domain, plan);

  const double tol = cfg.tol("vn", 1e-6);
  const bool violation = uc.bound > sup + tol;
  const CcVerdict verdict = is_cc(e, uc.witness, cfg.tol("cc", 1e-9), {0, 1, cfg.seed});

  std::string rep = "ucnorm vn-search report\n";
  rep += "poly " + poly_path + "\n";
  rep += "space " + e.describe() + "\n";
  rep += "uc-norm-lb " + io::format_real(uc.bound) + "\n";
  rep += "witness-dim " + std::to_string(uc.witness.dim()) + "\n";
  rep += "witness-cc-verdict " + cc_status_name(verdict.status) + "\n";
  rep += "sup-norm-estimate " + io::format_real(sup) + "\n";
  rep += std::string("violation ") + (violation ? "true" : "false") + "\n";
  emit(cfg, rep);
  if (!witness_out.empty()) io::atomic_write_file(witness_out, io::write_tuple(uc.witness));
  return violation ? kExitNegative : kExitOk;
}

int cmd_pick(const RunConfig& cfg, const std::string& problem_path, long max_iter,
             const std::string& col_out) {
  const PickProblem prob = io::load_pick_problem(problem_path);
  PickOptions opts;
  opts.max_iter = max_iter;
  opts.tol = cfg.tol("solver", 1e-9);
  const PickResult res = pick_solve(prob, opts);

  std::string rep = "ucnorm pick report\n";
  rep += "input " + problem_path + "\n";
  rep += "space " + prob.spec.describe() + " nodes " + std::to_string(prob.n_nodes()) + "\n";
  rep += "status " + pick_status_name(res.status) + "\n";
  rep += "pick-min-eig " + io::format_real(res.pick_min_eig) + "\n";
  if (res.witness) {
    rep += "np-residual " + io::format_real(np_residual(*res.witness, prob)) + "\n";
    double node_err = 0.0;
    for (Index i = 0; i < prob.n_nodes(); ++i) {
      const CMatrix f = eval_transfer(*res.interpolant, res.witness->t, prob.nodes[static_cast<std::size_t>(i)]);
      node_err = std::max(node_err, std::abs(f(0, 0) - prob.targets[static_cast<std::size_t>(i)]));
    }
    rep += "node-error " + io::format_real(node_err) + "\n";
    rep += "interpolant-dim " + std::to_string(res.interpolant->k()) + "\n";
  }
  emit(cfg, rep);
  if (res.status == PickStatus::Feasible && !col_out.empty())
    io::atomic_write_file(col_out, io::write_colligation(*res.interpolant));
  if (res.status == PickStatus::Feasible) return kExitOk;
  if (res.status == PickStatus::Infeasible) return kExitNegative;
  return kExitUndecided;
}

int cmd_cone(const RunConfig& cfg, const std::string& poly_path, const std::string& points_path,
             const std::string& space_tok, long max_iter, const std::string& fact_out) {
  const MatrixPolynomial p = io::load_polynomial(poly_path);
  const std::vector<CVector> pts = io::load_points(points_path);
  const OperatorSpaceSpec spec = resolve_space(space_tok, p.n);
  const ConeProblem prob = make_cone_problem(p, spec, pts);

  ConeCertificate cert;
  if (spec.kind == SpaceKind::Row || spec.kind == SpaceKind::Column)
    cert = row_cone_check(prob, cfg.tol("psd", 1e-9));
  else
    cert = agler_feasibility(prob, max_iter, cfg.tol("solver", 1e-6));

  std::string rep = "ucnorm cone report\n";
  rep += "poly " + poly_path + "\npoints " + points_path + "\n";
  rep += "space " + spec.describe() + " nodes " + std::to_string(prob.n_points()) + "\n";
  rep += "status " + cone_status_name(cert.status) + "\n";
  rep += "residual " + io::format_real(cert.residual) + "\n";
  rep += "iterations " + std::to_string(cert.iterations) + "\n";
  emit(cfg, rep);
  if (cert.status == ConeStatus::Feasible && !fact_out.empty()) {
    const FactorizationData d = cone_to_factorization(cert, prob);
    io::atomic_write_file(fact_out, io::write_factorization(d));
  }
  return cert.status == ConeStatus::Feasible ? kExitOk : kExitUndecided;
}

int cmd_examples(const RunConfig& cfg, const std::string& name, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  if (name == "kv") {
    io::atomic_write_file((fs::path(dir) / "kv.tuple").string(), io::write_tuple(kv_tuple()));
    MatrixPolynomial p(3, 1);
    p.add_term({2, 0, 0}, Complex(1, 0));
    p.add_term({0, 2, 0}, Complex(1, 0));
    p.add_term({0, 0, 2}, Complex(1, 0));
    p.add_term({1, 1, 0}, Complex(-2, 0));
    p.add_term({1, 0, 1}, Complex(-2, 0));
    p.add_term({0, 1, 1}, Complex(-2, 0));
    io::atomic_write_file((fs::path(dir) / "kv.poly").string(), io::write_polynomial(p));
    std::cout << "wrote kv.tuple kv.poly to " << dir << "\n";
    return kExitOk;
  }
  if (name == "twozw") {
    io::atomic_write_file((fs::path(dir) / "twozw.tuple").string(),
                          io::write_tuple(two_z1z2_sigma_tuple()));
    io::atomic_write_file((fs::path(dir) / "twozw.poly").string(),
                          io::write_polynomial(two_z1z2_polynomial()));
    std::vector<CVector> pts;
    for (int i = 0; i < 12; ++i) {
      Rng rng = Rng::derive(cfg.seed, 0x2b2b ^ static_cast<std::uint64_t>(i));
      pts.push_back(0.95 * rng.l2_ball_point(2));
    }
    io::atomic_write_file((fs::path(dir) / "twozw.fact").string(),
                          io::write_factorization(two_z1z2_factorization(pts)));
    std::cout << "wrote twozw.tuple twozw.poly twozw.fact to " << dir << "\n";
    return kExitOk;
  }
  throw unsupported_error("unknown example '" + name + "' (available: kv, twozw)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical toolkit for universal commutative operator algebra norms"};
  app.require_subcommand(1);

  RunConfig cfg;
  ConfigFlags raw;

  // verify-factorization
  std::string vf_input;
  auto* vf = app.add_subcommand("verify-factorization", "check a factorization data file");
  vf->add_option("input", vf_input, "factorization data file")->required();
  add_config_flags(vf, cfg, raw);

  // realize
  std::string rz_input, rz_col_out;
  auto* rz = app.add_subcommand("realize", "build a unitary colligation from factorization data");
  rz->add_option("input", rz_input, "factorization data file")->required();
  rz->add_option("--colligation-out", rz_col_out, "write the colligation here");
  add_config_flags(rz, cfg, raw);

  // eval
  std::string ev_poly, ev_points, ev_tuple;
  auto* ev = app.add_subcommand("eval", "evaluate a polynomial at points or on a tuple");
  ev->add_option("--poly", ev_poly, "polynomial file")->required();
  ev->add_option("--points", ev_points, "points file");
  ev->add_option("--tuple", ev_tuple, "matrix tuple file");
  add_config_flags(ev, cfg, raw);

  // vn-search
  std::string vn_poly, vn_space = "max-l1", vn_witness_out;
  int vn_degree_cap = 5;
  long vn_grid = 0;
  bool vn_library = false;
  auto* vn = app.add_subcommand("vn-search", "search for von Neumann inequality violations");
  vn->add_option("--poly", vn_poly, "polynomial file")->required();
  vn->add_option("--space", vn_space, "operator space (min-*/max-*/row/column/concrete:<tuple>)");
  vn->add_option("--degree-cap", vn_degree_cap, "truncation degree for library shift tuples");
  vn->add_option("--grid", vn_grid, "torus grid points per dimension for the sup-norm side");
  vn->add_flag("--include-library-tuples", vn_library, "include KV and shift tuples in the search");
  vn->add_option("--witness-out", vn_witness_out, "write the best witness tuple here");
  add_config_flags(vn, cfg, raw);

  // pick
  std::string pk_input, pk_col_out;
  long pk_max_iter = 20000;
  auto* pk = app.add_subcommand("pick", "Nevanlinna-Pick feasibility and interpolation");
  pk->add_option("input", pk_input, "pick problem file")->required();
  pk->add_option("--max-iter", pk_max_iter, "iteration cap for the max-l1 solver");
  pk->add_option("--interpolant-out", pk_col_out, "write the interpolant colligation here");
  add_config_flags(pk, cfg, raw);

  // cone
  std::string cn_poly, cn_points, cn_space = "max-l1", cn_fact_out;
  long cn_max_iter = 10000;
  auto* cn = app.add_subcommand("cone", "finite-set Agler cone / kernel feasibility");
  cn->add_option("--poly", cn_poly, "polynomial file")->required();
  cn->add_option("--points", cn_points, "points file")->required();
  cn->add_option("--space", cn_space, "operator space (max-l1, row, column)");
  cn->add_option("--max-iter", cn_max_iter, "iteration cap for the projection solver");
  cn->add_option("--factorization-out", cn_fact_out, "write factorization data on FEASIBLE");
  add_config_flags(cn, cfg, raw);

  // examples
  std::string ex_name, ex_dir = ".";
  auto* ex = app.add_subcommand("examples", "materialize bundled example data (kv, twozw)");
  ex->add_option("name", ex_name, "kv | twozw")->required();
  ex->add_option("--dir", ex_dir, "output directory");
  add_config_flags(ex, cfg, raw);

  CLI11_PARSE(app, argc, argv);

  try {
    apply_config_flags(cfg, raw);
    if (vf->parsed()) return cmd_verify_factorization(cfg, vf_input);
    if (rz->parsed()) return cmd_realize(cfg, rz_input, rz_col_out);
    if (ev->parsed()) {
      if (ev_points.empty() && ev_tuple.empty())
        throw error("eval: need --points or --tuple");
      return cmd_eval(cfg, ev_poly, ev_points, ev_tuple);
    }
    if (vn->parsed()) return cmd_vn_search(cfg, vn_poly, vn_space, vn_degree_cap, vn_grid, vn_library, vn_witness_out);
    if (pk->parsed()) return cmd_pick(cfg, pk_input, pk_max_iter, pk_col_out);
    if (cn->parsed()) return cmd_cone(cfg, cn_poly, cn_points, cn_space, cn_max_iter, cn_fact_out);
    if (ex->parsed()) return cmd_examples(cfg, ex_name, ex_dir);
  } catch (const parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const dimension_error& e) {
    std::cerr << "dimension error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const unsupported_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitParse;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
