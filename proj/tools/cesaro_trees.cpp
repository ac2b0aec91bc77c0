// cesaro-trees: command-line front end for the averaging-operator library.
// Exit codes: 0 success, 2 bad spec/usage, 3 I/O failure, 4 iteration did not
// converge, 5 reproduction or envelope check failed.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cesaro/decomp.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/io.hpp"
#include "cesaro/operator.hpp"
#include "cesaro/series.hpp"
#include "cesaro/spectral.hpp"
#include "cesaro/tree.hpp"

namespace {

using cesaro::Complex;
using Json = cesaro::io::Json;

// A verification row whose claim did not hold; mapped to exit code 5.
struct ReproduceFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string spec_path;
  std::int64_t depth = -1;  // < 0: keep the spec file's truncation depth
  double tol = cesaro::kDefaultTolerance;
  std::int64_t max_iters = cesaro::kDefaultMaxIters;
  std::string format = "json";
  std::string out;
  std::int64_t series_cap = cesaro::kDefaultSeriesCap;
  std::int64_t dense_cap = cesaro::kDefaultDenseCap;

  std::string vec_path;
  std::string lambda_text;
  std::int64_t path_index = 0;
  std::int64_t basis_index = -1;
  std::int64_t seed = -1;
  std::int64_t rows = 60;
  std::string grid_path;

  std::string pert_csv;
  std::int64_t pert_k = 1;
  std::int64_t pert_m = 64;
  std::string diag_csv;
  std::int64_t diag_k = 1;
  std::int64_t diag_m = 64;
};

void emit_text(const Options& o, const std::string& s) {
  if (o.out.empty()) {
    std::fwrite(s.data(), 1, s.size(), stdout);
  } else {
    cesaro::io::write_file(o.out, s);
  }
}

void emit_json(const Options& o, const Json& j) {
  emit_text(o, j.dump(2) + "\n");
}

void require_json_format(const Options& o) {
  if (o.format != "json")
    throw cesaro::MalformedSpec("this command only emits json");
}

cesaro::TreeGenSpec load_spec(const Options& o) {
  if (o.spec_path.empty())
    throw cesaro::MalformedSpec("this command needs --spec FILE");
  cesaro::TreeGenSpec spec = cesaro::io::load_tree_spec(o.spec_path);
  if (o.depth >= 0 && spec.kind != cesaro::TreeKind::explicit_edges)
    spec.truncate_depth = o.depth;
  return spec;
}

Complex parse_lambda(const std::string& text) {
  std::istringstream ss(text);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re))
    throw cesaro::MalformedSpec("--lambda expects \"re\" or \"re,im\"");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im))
      throw cesaro::MalformedSpec("--lambda expects \"re\" or \"re,im\"");
  }
  return {re, im};
}

// ---- commands -------------------------------------------------------------

int cmd_tree_stats(const Options& o) {
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::TreeMetrics metrics = cesaro::compute_metrics(tree, spec);

  const double alphas[] = {0.0, 0.5, 1.0, 2.0};
  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "alpha,j,value\n";
    for (double a : alphas) {
      cesaro::MAlphaResult r =
          cesaro::m_alpha_sequence(tree, a, tree.truncation_depth);
      for (std::size_t j = 0; j < r.values.size(); ++j) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", r.values[j]);
        csv << a << "," << j << "," << buf << "\n";
      }
    }
    emit_text(o, csv.str());
    return 0;
  }
  require_json_format(o);

  Json j;
  j["schema_version"] = cesaro::io::kSchemaVersion;
  j["spec"] = cesaro::io::spec_to_json(spec);
  j["vertex_count"] = tree.vertex_count;
  j["truncation_depth"] = tree.truncation_depth;
  j["metrics"] = cesaro::io::metrics_to_json(metrics);
  Json ma;
  for (double a : alphas) {
    char key[16];
    std::snprintf(key, sizeof key, "%g", a);
    ma[key] = cesaro::io::m_alpha_to_json(
        cesaro::m_alpha_sequence(tree, a, tree.truncation_depth));
  }
  j["m_alpha"] = ma;
  emit_json(o, j);
  return 0;
}

int cmd_norm(const Options& o) {
  require_json_format(o);
  cesaro::TreeGenSpec spec = load_spec(o);
  if (spec.kind == cesaro::TreeKind::widening)
    throw cesaro::MalformedSpec(
        "norm needs a family of finite width; the widening family grows "
        "without bound");
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::CesaroContext ctx(tree);
  cesaro::NormReport rep =
      cesaro::section_norm(ctx, spec, o.tol, o.max_iters);
  Json j = cesaro::io::norm_report_to_json(rep);
  emit_json(o, j);
  if (!j["envelope"]["ok"].get<bool>())
    throw ReproduceFailure("norm envelope violated: a certificate exceeds "
                           "the section norm or the norm exceeds its bound");
  return 0;
}

int cmd_apply(const Options& o, bool adjoint) {
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  if (o.vec_path.empty())
    throw cesaro::MalformedSpec("apply/adjoint need --vec FILE");
  std::vector<Complex> in = cesaro::io::load_vector(o.vec_path);
  if (static_cast<std::int64_t>(in.size()) != tree.vertex_count)
    throw cesaro::MalformedSpec(
        "vector length " + std::to_string(in.size()) +
        " does not match vertex count " + std::to_string(tree.vertex_count));

  cesaro::CesaroContext ctx(tree);
  cesaro::StateVector f = cesaro::make_state(tree, std::move(in));
  cesaro::StateVector g =
      adjoint ? cesaro::apply_C_adjoint(ctx, f) : cesaro::apply_C(ctx, f);

  if (o.format == "csv") {
    std::ostringstream csv;
    csv << "id,re,im\n";
    for (std::size_t i = 0; i < g.amp.size(); ++i) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", i, g.amp[i].real(),
                    g.amp[i].imag());
      csv << buf;
    }
    emit_text(o, csv.str());
    return 0;
  }
  require_json_format(o);
  Json j;
  j["schema_version"] = cesaro::io::kSchemaVersion;
  j["operation"] = adjoint ? "adjoint" : "apply";
  j["vertex_count"] = tree.vertex_count;
  j["input_norm"] = f.norm();
  j["output_norm"] = g.norm();
  j["vector"] = cesaro::io::vector_to_json(g.amp);
  emit_json(o, j);
  return 0;
}

int cmd_eigvec(const Options& o) {
  require_json_format(o);
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::CesaroContext ctx(tree);
  if (o.lambda_text.empty())
    throw cesaro::MalformedSpec("eigvec needs --lambda \"re,im\"");
  cesaro::EigenCertificate cert = cesaro::adjoint_path_eigenvector(
      ctx, parse_lambda(o.lambda_text), o.path_index);
  emit_json(o, cesaro::io::eigen_certificate_to_json(cert));
  return 0;
}

int cmd_hypo(const Options& o) {
  require_json_format(o);
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::HypoVectorChoice choice;
  if (o.basis_index >= 0) {
    choice.kind = cesaro::HypoVectorChoice::Kind::basis;
    choice.basis_n = o.basis_index;
  }
  cesaro::HypoReport rep =
      cesaro::hyponormality_gap(tree, spec, choice, o.series_cap);
  emit_json(o, cesaro::io::hypo_report_to_json(rep));
  return 0;
}

int cmd_pointspec(const Options& o) {
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::CesaroContext ctx(tree);
  const bool have_seed = o.seed >= 0;
  const bool have_grid = !o.grid_path.empty();
  if (have_seed == have_grid)
    throw cesaro::MalformedSpec(
        "pointspec needs exactly one of --seed N or --grid FILE");

  if (have_seed) {
    cesaro::ForwardSolveResult res =
        cesaro::point_spectrum_forward_solve(ctx, o.seed, o.rows);
    if (o.format == "csv") {
      std::ostringstream csv;
      csv << "n,vertex,coefficient,matches_binomial,partial_sum_sq\n";
      for (const auto& row : res.rows) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%lld,%lld,%llu,%d,%.17g\n",
                      static_cast<long long>(row.n),
                      static_cast<long long>(row.vertex),
                      static_cast<unsigned long long>(row.coefficient),
                      row.matches_binomial ? 1 : 0, row.partial_sum_sq);
        csv << buf;
      }
      emit_text(o, csv.str());
      return 0;
    }
    require_json_format(o);
    emit_json(o, cesaro::io::forward_solve_to_json(res));
    return 0;
  }

  std::vector<Complex> grid = cesaro::io::load_lambda_grid(o.grid_path);
  std::vector<cesaro::SpectrumPoint> pts =
      cesaro::spectrum_certificates(ctx, grid, o.tol, o.max_iters);
  if (o.format == "csv") {
    emit_text(o, cesaro::io::spectrum_points_to_csv(pts));
  } else {
    require_json_format(o);
    emit_json(o, cesaro::io::spectrum_points_to_json(pts));
  }
  return 0;
}

int cmd_decomp(const Options& o) {
  require_json_format(o);
  cesaro::TreeGenSpec spec = load_spec(o);
  cesaro::RootedTree tree = cesaro::build_tree(spec);
  cesaro::DecompositionReport rep =
      cesaro::decompose(tree, spec, o.dense_cap);
  emit_json(o, cesaro::io::decomposition_to_json(rep));
  if (!o.pert_csv.empty()) {
    cesaro::PerturbationMatrix p =
        cesaro::perturbation_entries(o.pert_k, o.pert_m);
    cesaro::io::write_file(o.pert_csv, cesaro::io::perturbation_to_csv(p));
  }
  if (!o.diag_csv.empty()) {
    cesaro::CompactnessDiagnostics d =
        cesaro::compactness_diagnostics(o.diag_k, o.diag_m, o.series_cap);
    cesaro::io::write_file(o.diag_csv, cesaro::io::diagnostics_to_csv(d));
  }
  return 0;
}

int cmd_demo_unbounded(const Options& o) {
  // Hardcoded widening-family demo: f(v_n) = 1/n for n >= 1 and f = 0
  // elsewhere (in particular f(v_0) = 0, so the ancestor prefix sums are the
  // harmonic numbers), ||f||^2 = pi^2/6, and the level-weighted lower bound
  // S_N = sum_{n<=N} n*(H_n/(n+2))^2 must keep growing.
  std::vector<std::int64_t> schedule;
  for (std::int64_t n = 1; n <= o.series_cap; n *= 10) schedule.push_back(n);
  std::vector<cesaro::GrowthRow> rows =
      cesaro::widening_divergence_sums(schedule);
  bool growing = true;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (!(rows[i].S > rows[i - 1].S)) growing = false;

  if (o.format == "csv") {
    emit_text(o, cesaro::io::growth_rows_to_csv(rows));
  } else {
    require_json_format(o);
    Json j;
    j["schema_version"] = cesaro::io::kSchemaVersion;
    j["f_convention"] =
        "f(v_n)=1/n for n>=1, f(v_0)=0, f=0 off the trunk; prefix averages "
        "are then harmonic numbers";
    j["f_norm_sq"] = cesaro::kBasel;
    Json arr = Json::array();
    for (const auto& r : rows) arr.push_back(Json{{"N", r.N}, {"S", r.S}});
    j["rows"] = arr;
    j["strictly_increasing"] = growing;
    emit_json(o, j);
  }
  if (!growing)
    throw ReproduceFailure("divergence demo: S_N failed to grow strictly");
  return 0;
}

int cmd_reproduce(const Options& o) {
  require_json_format(o);
  struct Row {
    std::string claim;
    double target;
    double computed;
    double tolerance;
    std::string comparison;  // "<=", ">=", "within"
    bool pass;
  };
  std::vector<Row> table;
  auto check_le = [&](std::string claim, double computed, double bound,
                      double tol) {
    table.push_back({std::move(claim), bound, computed, tol, "<=",
                     computed <= bound + tol});
  };
  auto check_within = [&](std::string claim, double computed, double target,
                          double tol) {
    table.push_back({std::move(claim), target, computed, tol, "within",
                     std::abs(computed - target) <= tol});
  };

  {
    cesaro::TreeGenSpec spec = cesaro::path_spec(1024);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::CesaroContext ctx(tree);
    cesaro::NormReport r = cesaro::section_norm(ctx, spec, o.tol, o.max_iters);
    check_le("classical section norm stays under 2 (depth 1024)",
             r.section_norm, 2.0, 1e-9);
  }
  {
    cesaro::TreeGenSpec spec = cesaro::kary_spec(4, 256);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::CesaroContext ctx(tree);
    cesaro::NormReport r = cesaro::section_norm(ctx, spec, o.tol, o.max_iters);
    check_le("4-ary-root section norm stays under 2*sqrt(4) (depth 256)",
             r.section_norm, 4.0, 1e-9);
  }
  {
    cesaro::TreeGenSpec spec = cesaro::kary_spec(5, 64);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::NormSqResult r =
        cesaro::basis_image_norm_sq(tree, spec, tree.root, o.series_cap);
    check_within("5-ary-root image norm^2 at the root = 1 + 5*(pi^2/6 - 1)",
                 r.value, 1.0 + 5.0 * (cesaro::kBasel - 1.0), 1e-6);
  }
  {
    cesaro::TreeGenSpec spec = cesaro::kary_spec(2, 64);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::HypoReport r = cesaro::hyponormality_gap(
        tree, spec, cesaro::HypoVectorChoice{}, o.series_cap);
    check_within("hyponormality gap at branching depth 1 = pi^2/3 - 7/2",
                 r.gap.mid(), cesaro::kPi * cesaro::kPi / 3.0 - 3.5, 1e-6);
  }
  {
    // Chains of length d meeting a fork: branching index d, pure chains below.
    bool all_neg = true;
    double worst = -1.0;
    for (std::int64_t d = 2; d <= 6; ++d) {
      std::vector<std::pair<std::int64_t, std::int64_t>> edges;
      std::int64_t label = 1;
      std::int64_t tip = 0;
      for (std::int64_t i = 0; i < d - 1; ++i) {
        edges.emplace_back(tip, label);
        tip = label++;
      }
      std::int64_t left = label++;
      std::int64_t right = label++;
      edges.emplace_back(tip, left);
      edges.emplace_back(tip, right);
      for (std::int64_t i = 0; i < 8; ++i) {
        edges.emplace_back(left, label);
        left = label++;
        edges.emplace_back(right, label);
        right = label++;
      }
      cesaro::TreeGenSpec spec = cesaro::explicit_spec(edges);
      cesaro::RootedTree tree = cesaro::build_tree(spec);
      cesaro::HypoReport r = cesaro::hyponormality_gap(
          tree, spec, cesaro::HypoVectorChoice{}, o.series_cap);
      worst = std::max(worst, r.gap.hi);
      if (!(r.gap.hi < 0.0)) all_neg = false;
    }
    table.push_back({"hyponormality gaps at branching depths 2..6 stay "
                     "negative (interval upper ends)",
                     0.0, worst, 0.0, "<", all_neg});
  }
  {
    cesaro::TreeGenSpec spec = cesaro::path_spec(256);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::CesaroContext ctx(tree);
    cesaro::EigenCertificate cert =
        cesaro::adjoint_path_eigenvector(ctx, Complex{0.5, 0.0}, 0);
    check_le("adjoint eigenvector residual at lambda = 1/2 (finite support)",
             cert.residual, 0.0, 1e-12);
  }
  {
    cesaro::CompactnessDiagnostics d =
        cesaro::compactness_diagnostics(3, 8, o.series_cap);
    check_le("perturbation row/column sums match closed forms (k = 3)",
             d.max_direct_closed_dev, 0.0, 1e-10);
  }
  {
    cesaro::TreeGenSpec spec = cesaro::path_spec(80);
    cesaro::RootedTree tree = cesaro::build_tree(spec);
    cesaro::CesaroContext ctx(tree);
    cesaro::ForwardSolveResult r =
        cesaro::point_spectrum_forward_solve(ctx, 2, 60);
    double crossing = r.sum_crossing_index ? static_cast<double>(*r.sum_crossing_index)
                                           : 1e18;
    check_le("depth-2 forward solve: squared sums cross 1e6 by n = 60",
             crossing, 60.0, 0.0);
  }
  {
    std::vector<cesaro::GrowthRow> rows =
        cesaro::widening_divergence_sums({100});
    table.push_back({"divergence demo: S_100 exceeds 4*||f||^2", 6.58,
                     rows[0].S, 0.0, ">", rows[0].S > 6.58});
  }

  Json j;
  j["schema_version"] = cesaro::io::kSchemaVersion;
  Json arr = Json::array();
  bool all_pass = true;
  for (const auto& r : table) {
    arr.push_back(Json{{"claim", r.claim},
                       {"target", r.target},
                       {"computed", r.computed},
                       {"tolerance", r.tolerance},
                       {"comparison", r.comparison},
                       {"pass", r.pass}});
    if (!r.pass) all_pass = false;
  }
  j["rows"] = arr;
  j["all_pass"] = all_pass;
  emit_json(o, j);
  if (!all_pass) throw ReproduceFailure("reproduction table has failing rows");
  return 0;
}

template <typename F>
int run_guard(F&& f) {
  try {
    return f();
  } catch (const cesaro::NoConvergence& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const cesaro::IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const ReproduceFailure& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 5;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"averaging operators on truncated rooted trees"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&](CLI::App* sub, bool with_spec) {
    if (with_spec) {
      sub->add_option("--spec", o.spec_path, "tree spec JSON file");
      sub->add_option("--depth", o.depth, "override the truncation depth")
          ->check(CLI::NonNegativeNumber);
    }
    sub->add_option("--tol", o.tol, "iteration tolerance")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iters", o.max_iters, "iteration budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--series-cap", o.series_cap, "series summation budget")
        ->check(CLI::PositiveNumber);
    sub->add_option("--dense-cap", o.dense_cap,
                    "largest dense section allowed")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* ts = app.add_subcommand("tree-stats",
                                    "level metrics and occupancy tables");
  add_common(ts, true);
  CLI::App* nm = app.add_subcommand("norm",
                                    "section norm with certificates");
  add_common(nm, true);
  CLI::App* ap = app.add_subcommand("apply", "apply the operator to a vector");
  add_common(ap, true);
  ap->add_option("--vec", o.vec_path, "input vector JSON file");
  CLI::App* ad = app.add_subcommand("adjoint",
                                    "apply the adjoint to a vector");
  add_common(ad, true);
  ad->add_option("--vec", o.vec_path, "input vector JSON file");
  CLI::App* ev = app.add_subcommand("eigvec",
                                    "adjoint eigenvector certificate");
  add_common(ev, true);
  ev->add_option("--lambda", o.lambda_text, "eigenvalue \"re,im\"");
  ev->add_option("--path-index", o.path_index, "which maximal chain")
      ->check(CLI::NonNegativeNumber);
  CLI::App* hy = app.add_subcommand("hypo", "hyponormality gap report");
  add_common(hy, true);
  hy->add_option("--basis-index", o.basis_index,
                 "test a basis vector at this vertex instead of the "
                 "canonical pair");
  CLI::App* ps = app.add_subcommand(
      "pointspec", "forward solve from a seed, or spectrum indicators on a "
                   "lambda grid");
  add_common(ps, true);
  ps->add_option("--seed", o.seed, "seed vertex id");
  ps->add_option("--rows", o.rows, "forward-solve table length")
      ->check(CLI::PositiveNumber);
  ps->add_option("--grid", o.grid_path, "lambda grid CSV file (re,im lines)");
  CLI::App* dc = app.add_subcommand("decomp",
                                    "trunk/branch block decomposition");
  add_common(dc, true);
  dc->add_option("--pert-csv", o.pert_csv,
                 "also write the perturbation matrix to this CSV file");
  dc->add_option("--pert-k", o.pert_k, "perturbation branching index")
      ->check(CLI::NonNegativeNumber);
  dc->add_option("--pert-m", o.pert_m, "perturbation matrix size")
      ->check(CLI::PositiveNumber);
  dc->add_option("--diag-csv", o.diag_csv,
                 "also write row/column sum diagnostics to this CSV file");
  dc->add_option("--diag-k", o.diag_k, "diagnostics branching index")
      ->check(CLI::NonNegativeNumber);
  dc->add_option("--diag-m", o.diag_m, "diagnostics table length")
      ->check(CLI::PositiveNumber);
  CLI::App* du = app.add_subcommand("demo-unbounded",
                                    "divergence demo on the widening family");
  add_common(du, false);
  CLI::App* rp = app.add_subcommand("reproduce",
                                    "consolidated verification table");
  add_common(rp, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (ts->parsed()) return run_guard([&] { return cmd_tree_stats(o); });
  if (nm->parsed()) return run_guard([&] { return cmd_norm(o); });
  if (ap->parsed()) return run_guard([&] { return cmd_apply(o, false); });
  if (ad->parsed()) return run_guard([&] { return cmd_apply(o, true); });
  if (ev->parsed()) return run_guard([&] { return cmd_eigvec(o); });
  if (hy->parsed()) return run_guard([&] { return cmd_hypo(o); });
  if (ps->parsed()) return run_guard([&] { return cmd_pointspec(o); });
  if (dc->parsed()) return run_guard([&] { return cmd_decomp(o); });
  if (du->parsed()) return run_guard([&] { return cmd_demo_unbounded(o); });
  if (rp->parsed()) return run_guard([&] { return cmd_reproduce(o); });
  return 2;
}
