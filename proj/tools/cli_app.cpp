#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "treeshift/analysis.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/json_io.hpp"
#include "treeshift/multiplier.hpp"
#include "treeshift/oracle.hpp"
#include "treeshift/verify.hpp"

namespace treeshift {

namespace {

using nlohmann::ordered_json;

struct CommonOpts {
  std::string tree;
  std::string weights;
  int depth = -1;
  std::size_t budget = DirectedTree::kDefaultVertexBudget;
  int threads = 1;
  std::string out_path;
};

void add_common(CLI::App* sub, CommonOpts& o) {
  sub->add_option("--tree", o.tree,
                  "tree profile (t20, ray, kary:<k>) or path to a tree JSON file")
      ->required();
  sub->add_option("--weights", o.weights,
                  "weights JSON path (default: the profile's own weights)");
  sub->add_option("--depth", o.depth, "truncation horizon override");
  sub->add_option("--budget", o.budget, "vertex budget for tree builds");
  sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1, 256));
  sub->add_option("--out", o.out_path, "write the result to this file instead of stdout");
}

Model build_model(const CommonOpts& o, bool allow_thinned) {
  ModelOptions mo;
  if (o.depth >= 0) mo.depth = o.depth;
  mo.allow_thinned = allow_thinned;
  mo.budget = o.budget;
  return load_model(o.tree, o.weights, mo);
}

ExecPolicy exec_of(const CommonOpts& o) { return ExecPolicy{o.threads}; }

Complex parse_point(const std::string& text) {
  double re = 0.0, im = 0.0;
  const auto comma = text.find(',');
  try {
    std::size_t pos = 0;
    if (comma == std::string::npos) {
      re = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
    } else {
      re = std::stod(text.substr(0, comma), &pos);
      if (pos != comma) throw std::invalid_argument(text);
      im = std::stod(text.substr(comma + 1), &pos);
      if (pos != text.size() - comma - 1) throw std::invalid_argument(text);
    }
  } catch (const std::exception&) {
    throw SpecFormatError("bad point '" + text + "': expected re or re,im");
  }
  return {re, im};
}

ordered_json cplx(Complex z) { return ordered_json::array({z.real(), z.imag()}); }

std::string csv_num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int emit_text(const std::string& text, const CommonOpts& o, std::ostream& out,
              std::ostream& err) {
  if (o.out_path.empty()) {
    out << text;
    return 0;
  }
  std::ofstream f(o.out_path, std::ios::binary);
  if (!f) {
    err << "error: cannot write " << o.out_path << "\n";
    return 2;
  }
  f << text;
  return f.good() ? 0 : 2;
}

int emit_json(const ordered_json& j, const CommonOpts& o, std::ostream& out,
              std::ostream& err) {
  return emit_text(j.dump(2) + "\n", o, out, err);
}

ordered_json model_header(const char* command, const Model& m) {
  ordered_json j;
  j["command"] = command;
  j["tree"] = m.source;
  j["depth"] = m.tree->horizon();
  j["vertices"] = m.tree->vertex_count();
  if (m.tree->thinned_from().has_value()) {
    j["thinned_from"] = *m.tree->thinned_from();
  } else {
    j["thinned_from"] = nullptr;
  }
  return j;
}

ordered_json path_json(const PathRadius& p) {
  ordered_json j;
  j["r2"] = p.r2;
  j["tail_max"] = p.tail_max;
  j["r2_at_half"] = p.r2_at_half;
  j["half_gap_rel"] = p.half_gap_rel;
  j["bpe_radius"] = p.bpe_radius;
  j["length"] = p.path.empty() ? 0 : p.path.size() - 1;
  auto head = ordered_json::array();
  for (std::size_t i = 0; i < p.path.size() && i < 8; ++i) head.push_back(p.path[i]);
  j["head"] = std::move(head);
  return j;
}

ordered_json bpe_json(const BpeProfile& profile) {
  ordered_json j;
  j["radius"] = profile.radius;
  j["window_low"] = profile.window_low;
  j["window_high"] = profile.window_high;
  j["window_spread_rel"] = profile.window_spread_rel;
  j["unstable"] = profile.unstable;
  j["radius_at_half"] = profile.radius_at_half;
  j["half_gap_rel"] = profile.half_gap_rel;
  auto head = ordered_json::array();
  for (std::size_t k = 0; k < profile.c.size() && k < 13; ++k) head.push_back(profile.c[k]);
  j["c_head"] = std::move(head);
  return j;
}

// ---- subcommand bodies ----

struct NormOpts {
  CommonOpts common;
  int k = 1;
  int gelfand = 0;
};

int cmd_norm(const NormOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  const ExecPolicy exec = exec_of(o.common);
  const auto pn = S.power_norm(o.k, exec);

  ordered_json j = model_header("norm", m);
  j["k"] = o.k;
  j["norm"] = pn.norm;
  j["sup_sq"] = pn.sup_sq;
  if (pn.argmax == kNoVertex) {
    j["argmax"] = nullptr;
  } else {
    j["argmax"] = pn.argmax;
  }
  j["stabilized_depth"] = pn.stabilized_depth;
  j["scan_limit"] = pn.scan_limit;
  if (o.gelfand > 0) {
    const auto ge = S.spectral_radius_estimate(std::min(o.gelfand, m.tree->horizon()), exec);
    j["gelfand"] = ge.seq;
    j["gelfand_estimate"] = ge.estimate;
    j["gelfand_nonincreasing"] = ge.nonincreasing;
  }
  return emit_json(j, o.common, out, err);
}

struct BpeOpts {
  CommonOpts common;
  std::vector<std::string> at;
  double guard = 1e-3;
  std::string format = "json";
};

int cmd_bpe(const BpeOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  const BpeProfile profile = bpe_profile(S, exec_of(o.common));

  if (o.format == "csv") {
    std::string text = "k,c_k\n";
    for (std::size_t k = 0; k < profile.c.size(); ++k) {
      text += std::to_string(k) + "," + csv_num(profile.c[k]) + "\n";
    }
    return emit_text(text, o.common, out, err);
  }

  ordered_json j = model_header("bpe", m);
  const ordered_json pj = bpe_json(profile);
  for (const auto& [key, value] : pj.items()) j[key] = value;
  auto at = ordered_json::array();
  for (const auto& text : o.at) {
    const Complex w = parse_point(text);
    const BpeDecision d = is_bpe(profile, w, o.guard);
    ordered_json e;
    e["w"] = cplx(w);
    e["abs"] = std::abs(w);
    e["verdict"] = to_string(d.verdict);
    e["ratio"] = d.ratio;
    auto sums = ordered_json::array();
    for (std::size_t i = 0; i < d.partial_sums.size() && i < 5; ++i) {
      sums.push_back(d.partial_sums[i]);
    }
    e["partial_sums_head"] = std::move(sums);
    at.push_back(std::move(e));
  }
  j["at"] = std::move(at);
  return emit_json(j, o.common, out, err);
}

struct PathsOpts {
  CommonOpts common;
  std::size_t path_budget = 16;
};

int cmd_paths(const PathsOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, true);
  const ShiftOperator S(*m.tree, *m.weights);
  const R2PlusEstimate r2 = r2_plus(S, o.path_budget, exec_of(o.common));

  ordered_json j = model_header("paths", m);
  j["r2_plus"] = r2.estimate;
  j["path_max"] = r2.path_max;
  j["frontier_proxy"] = r2.frontier_proxy;
  j["enumeration_complete"] = r2.enumeration_complete;
  auto paths = ordered_json::array();
  for (const auto& p : r2.paths) paths.push_back(path_json(p));
  j["paths"] = std::move(paths);
  return emit_json(j, o.common, out, err);
}

struct KernelOpts {
  CommonOpts common;
  std::string at;
};

int cmd_kernel(const KernelOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  const ExecPolicy exec = exec_of(o.common);
  const Complex w = parse_point(o.at);
  const BpeProfile profile = bpe_profile(S, exec);
  const BpeDecision d = is_bpe(profile, w);
  const EvaluationKernel ker = evaluation_kernel(S, w, &profile);

  KahanSum norm_sq;
  for (VertexId v = 0; v < m.tree->vertex_count(); ++v) {
    norm_sq.add(std::norm(ker.values[v]) * m.weights->beta(v));
  }

  ordered_json j = model_header("kernel", m);
  j["w"] = cplx(w);
  j["abs"] = std::abs(w);
  j["radius"] = profile.radius;
  j["verdict"] = to_string(d.verdict);
  j["ratio"] = d.ratio;
  j["radius_warning"] = ker.radius_warning;
  j["norm_sq"] = norm_sq.value();
  if (m.weights->lambdas_positive() && m.weights->is_normalized(1e-9)) {
    j["adjoint_eigen_residual"] = adjoint_eigen_residual(S, w, m.tree->horizon() - 1);
  } else {
    j["adjoint_eigen_residual"] = nullptr;
  }
  auto head = ordered_json::array();
  for (VertexId v = 0; v < m.tree->vertex_count() && v < 12; ++v) {
    ordered_json e;
    e["v"] = v;
    e["value"] = cplx(ker.values[v]);
    head.push_back(std::move(e));
  }
  j["head"] = std::move(head);
  return emit_json(j, o.common, out, err);
}

struct MultOpts {
  CommonOpts common;
  std::string symbol;
  std::string symbol2;
  int kmax = 8;
  int order = 32;
  int grid = 4096;
};

int cmd_mult(const MultOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  const ExecPolicy exec = exec_of(o.common);
  const Symbol c = load_symbol(o.symbol);
  const int kmax = std::min(o.kmax, m.tree->horizon());

  ordered_json j = model_header("mult", m);
  j["symbol"] = o.symbol;
  const double norm_s = S.power_norm(1, exec).norm;
  j["shift_norm"] = norm_s;

  const NormUpperEstimate upper = multiplier_norm_upper(c, norm_s, o.grid);
  j["upper"] = ordered_json{{"value", upper.value},
                            {"coarse", upper.coarse},
                            {"rel_change", upper.rel_change},
                            {"grid", upper.grid}};

  double lower = 0.0;
  for (int k = 0; k <= kmax; ++k) {
    const double pk = k == 0 ? 1.0 : S.power_norm(k, exec).norm;
    lower = std::max(lower, std::abs(c.coeff(k)) * pk);
  }
  j["lower_from_coefficients"] = lower;

  if (m.tree->vertex_count() <= kDenseBudget) {
    const double oracle = operator_norm(materialize_multiplier(S, c)).value;
    j["oracle_norm"] = oracle;
    j["margins_reference"] = "oracle";
    j["margins"] = coefficient_bound_check(S, c, oracle, kmax, exec);
  } else {
    j["oracle_norm"] = nullptr;
    j["margins_reference"] = "upper";
    j["margins"] = coefficient_bound_check(S, c, upper.value, kmax, exec);
  }

  if (!o.symbol2.empty()) {
    const Symbol c2 = load_symbol(o.symbol2);
    const Symbol prod = (c.finitely_supported() && c2.finitely_supported())
                            ? cauchy_mult(c, c2)
                            : cauchy_mult_truncated(c, c2, o.order);
    auto coeffs = ordered_json::array();
    const int top = prod.support_bound().value_or(o.order);
    for (int k = 0; k <= top; ++k) coeffs.push_back(cplx(prod.coeff(k)));
    j["product_symbol"] = o.symbol2;
    j["product_coeffs"] = std::move(coeffs);
  }
  return emit_json(j, o.common, out, err);
}

struct ReportOpts {
  CommonOpts common;
  int gelfand = 6;
  std::size_t path_budget = 16;
  std::string format = "json";
};

int cmd_report(const ReportOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  ReportOptions ro;
  ro.gelfand_kmax = o.gelfand;
  ro.path_budget = o.path_budget;
  ro.exec = exec_of(o.common);
  const SpectralReport rep = spectral_report(S, ro);

  if (o.format == "csv") {
    std::string text = "k,c_k,gelfand_k\n";
    for (std::size_t k = 0; k < rep.bpe.c.size(); ++k) {
      text += std::to_string(k) + "," + csv_num(rep.bpe.c[k]) + ",";
      if (k >= 1 && k <= rep.gelfand_seq.size()) {
        text += csv_num(rep.gelfand_seq[k - 1]);
      }
      text += "\n";
    }
    return emit_text(text, o.common, out, err);
  }

  ordered_json j = model_header("report", m);
  j["norm"] = rep.norm;
  if (rep.norm_argmax == kNoVertex) {
    j["argmax"] = nullptr;
  } else {
    j["argmax"] = rep.norm_argmax;
  }
  j["stabilized_depth"] = rep.norm_stabilized_depth;
  j["gelfand"] = rep.gelfand_seq;
  j["spectral_radius_estimate"] = rep.spectral_radius_estimate;
  j["bpe"] = bpe_json(rep.bpe);
  ordered_json r2;
  r2["estimate"] = rep.r2.estimate;
  r2["path_max"] = rep.r2.path_max;
  r2["frontier_proxy"] = rep.r2.frontier_proxy;
  r2["enumeration_complete"] = rep.r2.enumeration_complete;
  auto paths = ordered_json::array();
  for (const auto& p : rep.r2.paths) paths.push_back(path_json(p));
  r2["paths"] = std::move(paths);
  j["r2"] = std::move(r2);
  j["normalized"] = rep.normalized;
  j["branching_depth_max"] = rep.branching_depth_max;
  auto inc = ordered_json::array();
  for (const auto& claim : rep.inclusions) {
    inc.push_back(ordered_json{
        {"kind", claim.kind}, {"radius", claim.radius}, {"status", claim.status}});
  }
  j["inclusions"] = std::move(inc);
  return emit_json(j, o.common, out, err);
}

struct VerifyOpts {
  CommonOpts common;
};

int cmd_verify(const VerifyOpts& o, std::ostream& out, std::ostream& err) {
  const Model m = build_model(o.common, false);
  const ShiftOperator S(*m.tree, *m.weights);
  const VerifyReport rep = run_verification(S, exec_of(o.common));

  ordered_json j = model_header("verify", m);
  j["all_passed"] = rep.all_passed();
  auto checks = ordered_json::array();
  for (const auto& c : rep.checks) {
    ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["measure"] = c.measure;
    e["tol"] = c.tol;
    e["note"] = c.note;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  const int rc = emit_json(j, o.common, out, err);
  if (rc != 0) return rc;
  return rep.all_passed() ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted shifts on truncated rooted trees: norms, evaluation "
               "discs, multipliers, and path radii."};
  app.require_subcommand(1);

  NormOpts norm_opts;
  auto* norm = app.add_subcommand("norm", "operator norm of a shift power");
  add_common(norm, norm_opts.common);
  norm->add_option("--k", norm_opts.k, "power to measure")->check(CLI::Range(1, 1 << 20));
  norm->add_option("--gelfand", norm_opts.gelfand,
                   "also report ||S^k||^(1/k) for k up to this");

  BpeOpts bpe_opts;
  auto* bpe = app.add_subcommand("bpe", "bounded point evaluation profile");
  add_common(bpe, bpe_opts.common);
  bpe->add_option("--at", bpe_opts.at, "evaluation points re[,im] (repeatable)");
  bpe->add_option("--guard", bpe_opts.guard, "relative guard band at the boundary");
  bpe->add_option("--format", bpe_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  PathsOpts paths_opts;
  auto* paths = app.add_subcommand(
      "paths", "path compression radii (accepts budget-thinned deep builds)");
  add_common(paths, paths_opts.common);
  paths->add_option("--path-budget", paths_opts.path_budget,
                    "maximum number of enumerated paths");

  KernelOpts kernel_opts;
  auto* kernel = app.add_subcommand("kernel", "evaluation kernel at one point");
  add_common(kernel, kernel_opts.common);
  kernel->add_option("--at", kernel_opts.at, "evaluation point re[,im]")->required();

  MultOpts mult_opts;
  auto* mult = app.add_subcommand("mult", "multiplier norm bounds for a symbol");
  add_common(mult, mult_opts.common);
  mult->add_option("--symbol", mult_opts.symbol,
                   "symbol: JSON path, 'c0,c1,...', 'geom:a,r', or 'ind:n'")
      ->required();
  mult->add_option("--symbol2", mult_opts.symbol2, "second symbol: also emit the product");
  mult->add_option("--kmax", mult_opts.kmax, "coefficient bound depth")
      ->check(CLI::Range(0, 1 << 20));
  mult->add_option("--order", mult_opts.order, "truncation order for infinite products");
  mult->add_option("--grid", mult_opts.grid, "boundary grid for the sup-norm bound");

  ReportOpts report_opts;
  auto* report = app.add_subcommand("report", "full spectral summary");
  add_common(report, report_opts.common);
  report->add_option("--gelfand", report_opts.gelfand, "Gelfand sequence length");
  report->add_option("--path-budget", report_opts.path_budget,
                     "maximum number of enumerated paths");
  report->add_option("--format", report_opts.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  VerifyOpts verify_opts;
  auto* verify = app.add_subcommand("verify", "run the internal consistency checks");
  add_common(verify, verify_opts.common);

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("treeshift");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const bool help = e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success);
    app.exit(e, out, err);
    return help ? 0 : 2;
  }

  try {
    if (norm->parsed()) return cmd_norm(norm_opts, out, err);
    if (bpe->parsed()) return cmd_bpe(bpe_opts, out, err);
    if (paths->parsed()) return cmd_paths(paths_opts, out, err);
    if (kernel->parsed()) return cmd_kernel(kernel_opts, out, err);
    if (mult->parsed()) return cmd_mult(mult_opts, out, err);
    if (report->parsed()) return cmd_report(report_opts, out, err);
    if (verify->parsed()) return cmd_verify(verify_opts, out, err);
  } catch (const SpecFormatError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "error: no command\n";
  return 2;
}

}  // namespace treeshift
