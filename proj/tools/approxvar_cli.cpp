// Batch front end: classical variation reports, eps-variation profiles and
// witnesses, family generation, selection runs, condition checks, the
// reference-formula verification table, and brute-force certification runs.
//
// Exit codes: 0 success, 1 verification/verdict failure, 2 usage or input
// error, 3 capacity exceeded.

#include <atomic>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "approxvar/approxvar.hpp"
#include "approxvar/io.hpp"

namespace av = approxvar;
using av::json;

namespace {

void parallel_for(size_t n, unsigned jobs, const std::function<void(size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::vector<std::thread> pool;
  unsigned count = std::min<unsigned>(jobs, std::thread::hardware_concurrency());
  for (unsigned t = 0; t < std::max(1u, count); ++t)
    pool.emplace_back([&] {
      for (size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

void emit(const std::string& output, const std::string& content) {
  if (output.empty() || output == "-")
    std::cout << content;
  else
    av::write_file(output, content);
}

std::string json_doc(const av::RunManifest& m, json payload) {
  return av::with_manifest(m, std::move(payload)).dump(2) + "\n";
}

std::string csv_doc(const av::RunManifest& m, const std::string& body) {
  return "# manifest: " + m.to_json().dump() + "\n" + body;
}

struct CommonOpts {
  std::string output;
  std::string format = "json";
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
};

int run_compute(const std::string& input, int n_max, const std::string& eps_spec,
                const std::string& lambda_spec, const std::string& phi_spec,
                const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "compute";
  man.seed = opt.seed;
  man.add_input(input);
  man.stamp();
  man.parameters = {{"n_max", n_max}, {"eps", eps_spec}};
  av::SampledFunction f =
      av::function_from_json(av::load_document(input));
  std::vector<double> eps_list =
      eps_spec.empty() ? std::vector<double>{0.5 * av::oscillation(f)}
                       : av::parse_eps_grid(eps_spec);
  std::optional<av::WatermanSequence> lam;
  if (!lambda_spec.empty()) {
    av::WatermanSequence w;
    w.lambda = av::parse_eps_grid(lambda_spec);
    lam = w;
  }
  std::optional<av::PhiGauge> phi;
  if (!phi_spec.empty()) {
    auto colon = phi_spec.find(':');
    av::PhiGauge g;
    g.name = phi_spec.substr(0, colon);
    if (colon != std::string::npos) g.param = std::stod(phi_spec.substr(colon + 1));
    phi = g;
  }
  av::ClassicalVariationReport rep =
      av::classical_report(f, n_max, eps_list, lam, phi);
  if (opt.format == "csv")
    emit(opt.output, csv_doc(man, av::classical_to_csv(rep)));
  else
    emit(opt.output, json_doc(man, av::classical_to_json(rep)));
  return 0;
}

int run_profile(const std::string& input, const std::string& grid_spec,
                const std::string& emit_witness, const std::string& emit_gnuplot,
                const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "profile";
  man.seed = opt.seed;
  man.add_input(input);
  man.stamp();
  man.parameters = {{"eps", grid_spec}};
  av::SampledFunction f =
      av::function_from_json(av::load_document(input));
  std::vector<double> grid = av::parse_eps_grid(grid_spec);
  std::vector<av::EpsilonVariationResult> results(grid.size());
  parallel_for(grid.size(), opt.jobs,
               [&](size_t i) { results[i] = av::approx_variation(f, grid[i]); });
  av::VariationProfile prof = av::assemble_profile(grid, std::move(results));
  if (!emit_witness.empty()) {
    av::WitnessResult w = av::witness(f, grid.front());
    av::write_file(emit_witness, av::function_to_json(w.g).dump(2) + "\n");
  }
  if (!emit_gnuplot.empty()) {
    std::ostringstream dat;
    for (const av::ProfileRow& r : prof.rows)
      dat << av::format_number(r.eps) << ' ' << av::format_number(r.res.value)
          << '\n';
    av::write_file(emit_gnuplot + ".dat", dat.str());
    std::ostringstream gp;
    gp << "set xlabel 'eps'\nset ylabel 'eps-variation'\n"
       << "plot '" << emit_gnuplot << ".dat' with linespoints title 'profile'\n";
    av::write_file(emit_gnuplot + ".gp", gp.str());
  }
  if (opt.format == "csv")
    emit(opt.output, csv_doc(man, av::profile_to_csv(prof)));
  else
    emit(opt.output, json_doc(man, av::profile_to_json(prof)));
  return 0;
}

int run_witness(const std::string& input, double eps, const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "witness";
  man.seed = opt.seed;
  man.add_input(input);
  man.stamp();
  man.parameters = {{"eps", eps}};
  av::SampledFunction f =
      av::function_from_json(av::load_document(input));
  av::WitnessResult w = av::witness(f, eps);
  json payload;
  payload["attained"] = w.attained;
  payload["slack"] = w.slack;
  payload["variation"] = av::jordan_variation(w.g);
  payload["witness"] = av::function_to_json(w.g);
  emit(opt.output, json_doc(man, payload));
  return 0;
}

int run_family(const av::GeneratorSpec& spec, int j0, int j1,
               const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "family";
  man.seed = opt.seed;
  man.stamp();
  man.parameters = {{"generator", spec.name}, {"j_range", {j0, j1}}};
  av::FunctionFamily fam = av::make_family(spec, j0, j1);
  emit(opt.output, json_doc(man, av::family_to_json(fam)));
  return 0;
}

int run_select(const std::string& family_path, const std::string& mode,
               const av::EpsilonLadder& ladder, int bisect, double tol,
               double tail_fraction, const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "select";
  man.seed = opt.seed;
  man.add_input(family_path);
  man.stamp();
  man.parameters = {{"mode", mode},     {"eps1", ladder.eps1},
                    {"ratio", ladder.ratio}, {"depth", ladder.depth},
                    {"bisect", bisect}, {"tol", tol},
                    {"tail_fraction", tail_fraction}};
  av::FunctionFamily fam =
      av::family_from_json(av::load_document(family_path));
  av::SelectionReport rep;
  if (mode == "sp")
    rep = av::sp_extract(fam, ladder, tol, tail_fraction);
  else if (mode == "irregular")
    rep = av::irregular_extract(fam, ladder, bisect, tol, tail_fraction);
  else if (mode == "helly-monotone")
    rep = av::helly_monotone(fam, tol, tail_fraction);
  else if (mode == "helly-bv")
    rep = av::helly_bv(fam, tol, tail_fraction);
  else
    av::fail(av::ErrorKind::parse, "unknown mode: " + mode);
  emit(opt.output, json_doc(man, av::selection_to_json(rep)));
  return rep.verdict == av::Verdict::fails_at_scale ? 1 : 0;
}

int run_check(const std::string& family_path, const std::string& condition,
              const av::CheckParams& params, const std::string& exclude,
              const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "check";
  man.seed = opt.seed;
  man.add_input(family_path);
  man.stamp();
  man.parameters = {{"condition", condition},
                    {"eps1", params.ladder.eps1},
                    {"ratio", params.ladder.ratio},
                    {"depth", params.ladder.depth},
                    {"n_max", params.n_max},
                    {"tail_fraction", params.tail_fraction}};
  av::FunctionFamily fam =
      av::family_from_json(av::load_document(family_path));
  json payload;
  av::Verdict verdict;
  if (!exclude.empty()) {
    std::vector<size_t> idx;
    for (double v : av::parse_eps_grid(exclude))
      idx.push_back(static_cast<size_t>(v));
    av::ExceptionalSubsetReport rep =
        av::check_exceptional_subset(fam, idx, condition, params);
    payload["full"] = av::condition_to_json(rep.full);
    payload["reduced"] = av::condition_to_json(rep.reduced);
    verdict = rep.reduced.overall;
  } else {
    av::ConditionReport rep = av::check_condition(fam, condition, params);
    payload = av::condition_to_json(rep);
    verdict = rep.overall;
  }
  emit(opt.output, json_doc(man, payload));
  return verdict == av::Verdict::fails_at_scale ? 1 : 0;
}

int run_verify(const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "verify-paper";
  man.seed = opt.seed;
  man.stamp();
  std::vector<av::ComparisonRecord> recs = av::verify_catalog();
  json rows = json::array();
  bool all_pass = true;
  std::ostringstream table;
  for (const av::ComparisonRecord& r : recs) {
    rows.push_back(av::comparison_to_json(r));
    all_pass = all_pass && r.pass;
    table << (r.pass ? "PASS" : "FAIL") << "  " << r.c.id << "  formula["
          << r.expected.formula << "]  engine=" << av::format_number(r.engine_value)
          << "  delta=" << av::format_number(r.delta) << '\n';
  }
  std::cout << table.str()
            << (all_pass ? "all cases PASS\n" : "some cases FAIL\n");
  if (!opt.output.empty())
    av::write_file(opt.output, json_doc(man, rows));
  return all_pass ? 0 : 1;
}

int run_oracle(const std::string& engine, int instances, std::uint64_t seed,
               int max_points, double step_scale, const CommonOpts& opt) {
  av::RunManifest man;
  man.subcommand = "oracle";
  man.stamp();
  man.seed = seed;
  man.parameters = {{"engine", engine},
                    {"instances", instances},
                    {"max_points", max_points},
                    {"step_scale", step_scale}};
  av::oracle::CertificationOutcome out;
  if (engine == "taut" || engine == "candidate")
    out = av::oracle::certify_real_engines(instances, seed,
                                           static_cast<size_t>(max_points),
                                           step_scale);
  else if (engine == "finite")
    out = av::oracle::certify_finite_engines(instances, seed);
  else if (engine == "interval")
    out = av::oracle::certify_interval_functionals(
        instances, seed, static_cast<size_t>(std::min(max_points, 8)));
  else
    av::fail(av::ErrorKind::parse, "unknown engine: " + engine);
  json payload;
  payload["instances"] = out.instances;
  payload["failures"] = out.failures;
  payload["max_diff"] = out.max_diff;
  payload["failing_seeds"] = out.failing_seeds;
  std::cout << (out.ok() ? "PASS" : "FAIL") << "  " << engine << "  "
            << out.instances << " instances, " << out.failures
            << " failures, max diff " << av::format_number(out.max_diff) << '\n';
  if (!opt.output.empty()) emit(opt.output, json_doc(man, payload));
  return out.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact variation functionals of sampled metric-space data"};
  app.require_subcommand(1);
  CommonOpts opt;
  app.add_option("--jobs", opt.jobs, "worker threads for independent evaluations");
  app.add_option("--seed", opt.seed, "base seed for randomized runs");

  // compute
  auto* compute = app.add_subcommand("compute", "classical variation report");
  std::string in_path, eps_spec, lambda_spec, phi_spec;
  int n_max = 8;
  compute->add_option("--input", in_path)->required();
  compute->add_option("--n-max", n_max);
  compute->add_option("--eps-list", eps_spec);
  compute->add_option("--lambda", lambda_spec);
  compute->add_option("--phi", phi_spec, "identity | power:p | exp");
  compute->add_option("--format", opt.format);
  compute->add_option("--output", opt.output);

  // profile
  auto* profile = app.add_subcommand("profile", "eps-variation profile");
  std::string grid_spec, emit_witness, emit_gnuplot;
  profile->add_option("--input", in_path)->required();
  profile->add_option("--eps-grid", grid_spec);
  profile->add_option("--eps-list", grid_spec);
  profile->add_option("--emit-witness", emit_witness);
  profile->add_option("--emit-gnuplot", emit_gnuplot);
  profile->add_option("--format", opt.format);
  profile->add_option("--output", opt.output);

  // witness
  auto* witness = app.add_subcommand("witness", "minimal-variation tube witness");
  double eps = 0.1;
  witness->add_option("--input", in_path)->required();
  witness->add_option("--eps", eps)->required();
  witness->add_option("--output", opt.output);

  // family
  auto* family = app.add_subcommand("family", "materialize a generator family");
  av::GeneratorSpec spec;
  std::string space_kind = "real", j_range = "1:8";
  double xval = 0.0, yval = 1.0, hole_lo = 0.0, hole_hi = 0.0, two_point_d = 0.0;
  bool hole_closed = false;
  family->add_option("--generator", spec.name)->required();
  family->add_option("--x", xval);
  family->add_option("--y", yval);
  family->add_option("--alpha", spec.alpha);
  family->add_option("--tau", spec.tau);
  family->add_option("--alternations", spec.alternations);
  family->add_option("--resolution", spec.resolution);
  family->add_option("--rule", spec.rule);
  family->add_option("--rate", spec.rate);
  family->add_option("--space", space_kind, "real | punctured | two-point");
  family->add_option("--hole-lo", hole_lo);
  family->add_option("--hole-hi", hole_hi);
  family->add_flag("--hole-closed-removed", hole_closed);
  family->add_option("--two-point-d", two_point_d);
  family->add_option("--j-range", j_range, "a:b");
  family->add_option("--output", opt.output);

  // select
  auto* select = app.add_subcommand("select", "subsequence extraction");
  std::string mode = "sp";
  av::EpsilonLadder ladder;
  int bisect = 3;
  double tol = 1e-6, tail_fraction = 0.5;
  select->add_option("--family", in_path)->required();
  select->add_option("--mode", mode, "sp | irregular | helly-monotone | helly-bv");
  select->add_option("--eps1", ladder.eps1);
  select->add_option("--ratio", ladder.ratio);
  select->add_option("--depth", ladder.depth);
  select->add_option("--bisect", bisect);
  select->add_option("--tol", tol);
  select->add_option("--tail-fraction", tail_fraction);
  select->add_option("--output", opt.output);

  // check
  auto* check = app.add_subcommand("check", "asymptotic condition checker");
  std::string condition = "vep", exclude;
  av::CheckParams params;
  check->add_option("--family", in_path)->required();
  check->add_option("--condition", condition,
                    "bv | nu | neps | vep | pairwise | schrader");
  check->add_option("--eps1", params.ladder.eps1);
  check->add_option("--ratio", params.ladder.ratio);
  check->add_option("--depth", params.ladder.depth);
  check->add_option("--n-max", params.n_max);
  check->add_option("--tail-fraction", params.tail_fraction);
  check->add_option("--exclude", exclude, "grid indices to drop");
  check->add_option("--output", opt.output);

  // verify-paper
  auto* verify = app.add_subcommand(
      "verify-paper", "run the reference-formula catalog against the engines");
  verify->add_option("--output", opt.output);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "brute-force certification run");
  std::string engine = "taut";
  int instances = 1000, max_points = 10;
  std::uint64_t oseed = 20240901;
  double step_scale = 1e-3;
  oracle->add_option("--engine", engine, "taut | candidate | finite | interval");
  oracle->add_option("--instances", instances);
  oracle->add_option("--seed", oseed);
  oracle->add_option("--max-points", max_points);
  oracle->add_option("--step-scale", step_scale);
  oracle->add_option("--output", opt.output);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (compute->parsed())
      return run_compute(in_path, n_max, eps_spec, lambda_spec, phi_spec, opt);
    if (profile->parsed()) {
      av::require(!grid_spec.empty(), av::ErrorKind::parse,
                  "profile needs --eps-grid or --eps-list");
      return run_profile(in_path, grid_spec, emit_witness, emit_gnuplot, opt);
    }
    if (witness->parsed()) return run_witness(in_path, eps, opt);
    if (family->parsed()) {
      if (space_kind == "punctured")
        spec.space = av::MetricSpace::punctured(hole_lo, hole_hi, hole_closed);
      else if (space_kind == "two-point") {
        spec.space = av::MetricSpace::two_point(two_point_d);
        spec.x = av::Point::finite(0);
        spec.y = av::Point::finite(1);
      }
      if (spec.space.scalar_kind()) {
        spec.x = av::Point::real(xval);
        spec.y = av::Point::real(yval);
      }
      auto colon = j_range.find(':');
      av::require(colon != std::string::npos, av::ErrorKind::parse,
                  "--j-range must look like a:b");
      return run_family(spec, std::stoi(j_range.substr(0, colon)),
                        std::stoi(j_range.substr(colon + 1)), opt);
    }
    if (select->parsed())
      return run_select(in_path, mode, ladder, bisect, tol, tail_fraction, opt);
    if (check->parsed())
      return run_check(in_path, condition, params, exclude, opt);
    if (verify->parsed()) return run_verify(opt);
    if (oracle->parsed())
      return run_oracle(engine, instances, oseed, max_points, step_scale, opt);
  } catch (const av::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == av::ErrorKind::capacity ? 3 : 2;
  } catch (const json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
