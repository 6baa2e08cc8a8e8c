// gwsdp: Max-Cut SDP solver with extended-precision CG, GW rounding and an
// accelerator time model.
//
// Subcommands: solve, round, bench, estimate, oracle.
// Exit codes: 0 success, 1 non-convergence, 2 usage/IO error, 3 internal
// invariant violation.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "gwsdp/graph.hpp"
#include "gwsdp/hwmodel.hpp"
#include "gwsdp/ipm.hpp"
#include "gwsdp/rounding.hpp"

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "gwsdp 0.1.0";

struct RunConfig {
  std::vector<std::string> graphs;
  std::vector<int> precisions = {64};
  double tol_sdp = 0.005;
  double tol_cg = 1e-8;
  double eta = 0.5;
  double theta = 0.0;  // 0 means unset
  int max_iter = 200;
  std::uint64_t seed = 1;
  int trials = 10;
  std::string out_dir = ".";
  int jobs = 1;
  double best_known = 0.0;
  double hw_bandwidth = 2.4e12;
  double hw_clock = 2e9;
};

json config_json(const RunConfig& c) {
  return json{{"graphs", c.graphs},
              {"precisions", c.precisions},
              {"tol_sdp", c.tol_sdp},
              {"tol_cg", c.tol_cg},
              {"eta", c.eta},
              {"theta", c.theta == 0.0 ? json(nullptr) : json(c.theta)},
              {"max_iter", c.max_iter},
              {"seed", c.seed},
              {"trials", c.trials},
              {"out", c.out_dir},
              {"jobs", c.jobs},
              {"hw_bandwidth", c.hw_bandwidth},
              {"hw_clock", c.hw_clock}};
}

gwsdp::IPMConfig ipm_config(const RunConfig& c, int bits) {
  gwsdp::IPMConfig cfg;
  cfg.tol_sdp = c.tol_sdp;
  cfg.tol_cg = c.tol_cg;
  cfg.eta = c.eta;
  if (c.theta != 0.0) cfg.theta = c.theta;
  cfg.bits = bits;
  cfg.max_iter = c.max_iter;
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_error(const std::string& kind, const std::string& msg) {
  std::cout << json{{"error", kind}, {"message", msg}, {"version", kVersion}}.dump()
            << "\n";
}

// One '#'-prefixed provenance block precedes every CSV header.
std::string csv_preamble(const RunConfig& c, const json& extra = {}) {
  json meta = {{"version", kVersion}, {"config", config_json(c)}};
  for (auto& [k, v] : extra.items()) meta[k] = v;
  return "# " + meta.dump() + "\n";
}

struct SolveJob {
  std::string graph_path;
  int bits = 0;
  gwsdp::SolveResult result{gwsdp::IPMState{gwsdp::SymMatrix(0, gwsdp::PrecisionContext::make(64)),
                                            {},
                                            gwsdp::SymMatrix(0, gwsdp::PrecisionContext::make(64)),
                                            gwsdp::ExtFloat{},
                                            0},
                            {},
                            gwsdp::IPMStatus::IterationLimit,
                            0.0};
  int n = 0;
  bool failed = false;
  std::string error;
};

void run_job(SolveJob& job, const RunConfig& rc) {
  try {
    gwsdp::Graph g = gwsdp::load_gset_file(job.graph_path);
    job.n = g.n;
    gwsdp::SDPProblem prob = gwsdp::make_problem(g);
    job.result = gwsdp::solve(prob, ipm_config(rc, job.bits));
  } catch (const std::exception& e) {
    job.failed = true;
    job.error = e.what();
  }
}

void run_jobs(std::vector<SolveJob>& jobs, const RunConfig& rc) {
  if (rc.jobs <= 1) {
    for (auto& j : jobs) run_job(j, rc);
    return;
  }
  for (std::size_t base = 0; base < jobs.size(); base += rc.jobs) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = base; i < std::min(jobs.size(), base + rc.jobs); ++i) {
      batch.push_back(std::async(std::launch::async, run_job, std::ref(jobs[i]), std::cref(rc)));
    }
    for (auto& f : batch) f.get();
  }
}

json solution_json(const RunConfig& rc, const SolveJob& job, const gwsdp::Graph& g) {
  const auto& st = job.result.state;
  std::vector<double> x_flat;
  x_flat.reserve(static_cast<std::size_t>(job.n) * job.n);
  for (int i = 0; i < job.n; ++i)
    for (int j = 0; j < job.n; ++j) x_flat.push_back(st.x.at(i, j).to_double());
  return json{{"version", kVersion},
              {"config", config_json(rc)},
              {"graph", job.graph_path},
              {"n", job.n},
              {"bits", job.bits},
              {"status", gwsdp::to_string(job.result.status)},
              {"steps", job.result.trace.size()},
              {"mu_final", st.mu.to_double()},
              {"tr_cx", job.result.tr_cx},
              {"sdp_cut_bound", gwsdp::sdp_cut_bound(g, job.result.tr_cx)},
              {"y", gwsdp::to_double_vector(st.y)},
              {"x", x_flat}};
}

int cmd_solve(const RunConfig& rc) {
  fs::create_directories(rc.out_dir);
  std::vector<SolveJob> jobs;
  for (int bits : rc.precisions) jobs.push_back(SolveJob{rc.graphs.at(0), bits});
  run_jobs(jobs, rc);

  bool all_converged = true;
  for (auto& job : jobs) {
    if (job.failed) {
      emit_error("solve-failure", job.error);
      return 2;
    }
    gwsdp::Graph g = gwsdp::load_gset_file(job.graph_path);
    json extra = {{"bits", job.bits}, {"n", job.n}};
    write_file(fs::path(rc.out_dir) / ("trace_" + std::to_string(job.bits) + ".csv"),
               csv_preamble(rc, extra) + gwsdp::trace_to_csv(job.result.trace));
    write_file(fs::path(rc.out_dir) / ("solution_" + std::to_string(job.bits) + ".json"),
               solution_json(rc, job, g).dump(2) + "\n");
    if (job.result.status != gwsdp::IPMStatus::Converged) all_converged = false;
    std::cout << "solve " << job.graph_path << " bits=" << job.bits << " status="
              << gwsdp::to_string(job.result.status) << " steps=" << job.result.trace.size()
              << " tr_cx=" << job.result.tr_cx << "\n";
  }
  return all_converged ? 0 : 1;
}

int cmd_round(const RunConfig& rc, const std::string& solution_path) {
  gwsdp::Graph g = gwsdp::load_gset_file(rc.graphs.at(0));
  std::ifstream in(solution_path);
  if (!in) {
    emit_error("io", "cannot open solution file: " + solution_path);
    return 2;
  }
  json sol = json::parse(in);
  const int n = sol.at("n").get<int>();
  if (n != g.n) {
    emit_error("usage", "solution order does not match graph");
    return 2;
  }
  auto ctx = gwsdp::PrecisionContext::make(64);
  gwsdp::SymMatrix x(n, ctx);
  const auto& flat = sol.at("x");
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) x.set(i, j, flat.at(static_cast<std::size_t>(i) * n + j).get<double>());

  gwsdp::CutResult cut = gwsdp::best_of_rounds(g, x, rc.trials, rc.seed);
  json out = {{"version", kVersion},
              {"config", config_json(rc)},
              {"assignment", cut.assignment},
              {"cut", cut.cut_value},
              {"trials", cut.trials},
              {"seed", cut.seed},
              {"mean_cut", cut.mean_cut}};
  if (rc.best_known != 0.0) out["ratio_to_best_known"] = cut.cut_value / rc.best_known;
  fs::create_directories(rc.out_dir);
  write_file(fs::path(rc.out_dir) / "cut.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_bench(const RunConfig& rc) {
  fs::create_directories(rc.out_dir);
  std::vector<SolveJob> jobs;
  for (const auto& gpath : rc.graphs)
    for (int bits : rc.precisions) jobs.push_back(SolveJob{gpath, bits});
  run_jobs(jobs, rc);

  std::ostringstream steps, totals;
  steps << csv_preamble(rc) << "graph,bits,k,mu,cg_iters,kappa\n";
  totals << csv_preamble(rc) << "graph,bits,total_cg_iters,normalized_vs_64b,status\n";

  std::map<std::string, long long> total64;
  for (const auto& job : jobs) {
    if (job.failed || job.bits != 64) continue;
    long long t = 0;
    for (const auto& r : job.result.trace) t += r.cg_iters;
    total64[job.graph_path] = t;
  }
  for (const auto& job : jobs) {
    if (job.failed) {
      totals << job.graph_path << ',' << job.bits << ",,," << "error:" << job.error << "\n";
      continue;
    }
    long long total = 0;
    for (const auto& r : job.result.trace) {
      steps << job.graph_path << ',' << job.bits << ',' << r.k << ',' << fmt17(r.mu) << ','
            << r.cg_iters << ',' << fmt17(r.kappa) << "\n";
      total += r.cg_iters;
    }
    totals << job.graph_path << ',' << job.bits << ',' << total << ',';
    if (auto it = total64.find(job.graph_path); it != total64.end() && it->second > 0) {
      totals << fmt17(static_cast<double>(total) / static_cast<double>(it->second));
    }
    totals << ',' << gwsdp::to_string(job.result.status) << "\n";
  }
  write_file(fs::path(rc.out_dir) / "bench_steps.csv", steps.str());
  write_file(fs::path(rc.out_dir) / "bench_totals.csv", totals.str());

  bool any_failed = false, all_converged = true;
  for (const auto& job : jobs) {
    any_failed |= job.failed;
    if (!job.failed && job.result.status != gwsdp::IPMStatus::Converged) all_converged = false;
  }
  if (any_failed) return 2;
  return all_converged ? 0 : 1;
}

struct ParsedTrace {
  int bits = 0;
  int n = 0;
  std::vector<int> cg_iters;
};

ParsedTrace parse_trace_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace: " + path);
  ParsedTrace t;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      json meta = json::parse(line.substr(1));
      if (meta.contains("bits")) t.bits = meta["bits"].get<int>();
      if (meta.contains("n")) t.n = meta["n"].get<int>();
      continue;
    }
    if (line.rfind("k,", 0) == 0) continue;  // header
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() < 6) throw std::runtime_error("trace schema mismatch in " + path);
    t.cg_iters.push_back(std::stoi(fields[5]));
  }
  if (t.bits == 0) throw std::runtime_error("trace missing bits metadata: " + path);
  return t;
}

int cmd_estimate(const RunConfig& rc, const std::vector<std::string>& trace_paths, int n_override) {
  gwsdp::HwParams hw;
  hw.mem_bandwidth = rc.hw_bandwidth;
  hw.clock_hz = rc.hw_clock;

  std::map<int, std::vector<int>> traces;
  int n = n_override;
  for (const auto& p : trace_paths) {
    ParsedTrace t = parse_trace_csv(p);
    if (n == 0) n = t.n;
    if (t.n != 0 && n != 0 && t.n != n && n_override == 0) {
      throw std::runtime_error("trace schema mismatch: differing n across traces");
    }
    traces[t.bits] = t.cg_iters;
  }
  if (n == 0) throw std::runtime_error("problem order unknown; pass --n");

  fs::create_directories(rc.out_dir);
  std::ostringstream csv;
  csv << csv_preamble(rc, {{"n", n}}) << "k,bits,est_seconds\n";
  for (const auto& [bits, iters] : traces) {
    for (std::size_t k = 0; k < iters.size(); ++k) {
      csv << k << ',' << bits << ','
          << fmt17(iters[k] * gwsdp::cg_iter_time(n, bits, hw)) << "\n";
    }
  }
  write_file(fs::path(rc.out_dir) / "hw_times.csv", csv.str());

  gwsdp::PrecisionSchedule sched = gwsdp::adaptive_schedule(traces, n, hw);
  json per_precision;
  for (const auto& [bits, total] : sched.fixed_totals)
    per_precision[std::to_string(bits)] = total;
  json out = {{"version", kVersion},
              {"config", config_json(rc)},
              {"n", n},
              {"per_precision_total_s", per_precision},
              {"adaptive_total_s", sched.total_seconds},
              {"adaptive_bits_per_step", sched.bits_per_step},
              {"gain_vs_64b", sched.gain_vs_64b},
              {"gain_vs_1024b", sched.gain_vs_1024b}};
  write_file(fs::path(rc.out_dir) / "hw_summary.json", out.dump(2) + "\n");
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_oracle(const RunConfig& rc, const std::string& solution_path) {
  gwsdp::Graph g = gwsdp::load_gset_file(rc.graphs.at(0));
  if (g.n > 22) {
    emit_error("usage", "oracle: n > 22 exceeds the enumeration guard");
    return 2;
  }
  auto [value, assignment] = gwsdp::brute_force_maxcut(g);
  json out = {{"version", kVersion},
              {"config", config_json(rc)},
              {"maxcut", value},
              {"assignment", assignment}};
  if (!solution_path.empty()) {
    std::ifstream in(solution_path);
    if (!in) {
      emit_error("io", "cannot open solution file: " + solution_path);
      return 2;
    }
    json sol = json::parse(in);
    double bound = gwsdp::sdp_cut_bound(g, sol.at("tr_cx").get<double>());
    out["sdp_cut_bound"] = bound;
    out["bound_minus_maxcut"] = bound - value;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) + " - Goemans-Williamson Max-Cut SDP toolkit"};
  app.require_subcommand(1);

  RunConfig rc;
  std::string solution_path;
  std::vector<std::string> trace_paths;
  int n_override = 0;
  std::string precisions_csv = "64";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--tol-sdp", rc.tol_sdp, "SDP stopping tolerance (absolute)");
    sub->add_option("--tol-cg", rc.tol_cg, "CG relative residual tolerance");
    sub->add_option("--eta", rc.eta, "barrier damping in (0,1)");
    sub->add_option("--theta", rc.theta, "barrier init scale (default: Tr(X0 S0))");
    sub->add_option("--max-iter", rc.max_iter, "Newton-step cap");
    sub->add_option("--seed", rc.seed, "RNG seed");
    sub->add_option("--out", rc.out_dir, "output directory");
    sub->add_option("--jobs", rc.jobs, "max concurrent (graph, precision) jobs");
  };

  auto* solve = app.add_subcommand("solve", "run the interior-point solver");
  solve->add_option("--graph", rc.graphs, "Gset graph file")->required()->expected(1);
  solve->add_option("--precisions", precisions_csv, "comma-separated mantissa widths");
  add_common(solve);

  auto* round = app.add_subcommand("round", "hyperplane-round a solved X");
  round->add_option("--graph", rc.graphs, "Gset graph file")->required()->expected(1);
  round->add_option("--solution", solution_path, "solution JSON from solve")->required();
  round->add_option("--trials", rc.trials, "rounding trials")->check(CLI::PositiveNumber);
  round->add_option("--best-known", rc.best_known, "best-known cut for ratio reporting");
  add_common(round);

  auto* bench = app.add_subcommand("bench", "precision sweep over graphs");
  bench->add_option("--graph", rc.graphs, "Gset graph file (repeatable)")->required();
  bench->add_option("--precisions", precisions_csv, "comma-separated mantissa widths");
  add_common(bench);

  auto* estimate = app.add_subcommand("estimate", "accelerator time model from traces");
  estimate->add_option("--trace", trace_paths, "trace CSV from solve (repeatable)")->required();
  estimate->add_option("--n", n_override, "problem order override for synthetic traces");
  estimate->add_option("--hw-bandwidth", rc.hw_bandwidth, "memory bandwidth, bytes/s");
  estimate->add_option("--hw-clock", rc.hw_clock, "core clock, Hz");
  estimate->add_option("--out", rc.out_dir, "output directory");

  auto* oracle = app.add_subcommand("oracle", "brute-force Max-Cut (n <= 22)");
  oracle->add_option("--graph", rc.graphs, "Gset graph file")->required()->expected(1);
  oracle->add_option("--solution", solution_path, "solution JSON for bound comparison");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    rc.precisions.clear();
    std::istringstream ps(precisions_csv);
    std::string tok;
    while (std::getline(ps, tok, ',')) rc.precisions.push_back(std::stoi(tok));
    if (rc.precisions.empty()) throw std::invalid_argument("need at least one precision");

    if (solve->parsed()) return cmd_solve(rc);
    if (round->parsed()) return cmd_round(rc, solution_path);
    if (bench->parsed()) return cmd_bench(rc);
    if (estimate->parsed()) return cmd_estimate(rc, trace_paths, n_override);
    if (oracle->parsed()) return cmd_oracle(rc, solution_path);
  } catch (const gwsdp::GraphParseError& e) {
    emit_error("parse", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    emit_error("usage", e.what());
    return 2;
  } catch (const std::runtime_error& e) {
    emit_error("io", e.what());
    return 2;
  } catch (const std::exception& e) {
    emit_error("internal", e.what());
    return 3;
  }
  return 3;
}
