// maxreg_cli: verification suites, constants, refinement studies and benchmarks.
//
//   maxreg_cli verify --config configs/default.ini --out out
//
// Exit codes: 0 all checks pass, 1 check failures, 2 config error, 3 IO error.

#include "report_io.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <random>

namespace {

using namespace maxreg;
using namespace maxreg::tools;

enum Exit { kPass = 0, kFail = 1, kConfig = 2, kIo = 3 };

struct Flags {
  std::string config;
  std::string out;
  std::optional<int> jobs;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
};

Config load(const Flags& f) {
  Config c = load_config(f.config, f.seed);
  if (f.jobs) {
    if (*f.jobs < 1) throw ConfigError("--jobs must be >= 1");
    c.jobs = *f.jobs;
  }
  if (f.tolerance) {
    if (!(*f.tolerance >= 0.0)) throw ConfigError("--tolerance must be non-negative");
    c.tolerance = *f.tolerance;
  }
  if (!f.out.empty()) c.out_dir = f.out;
  return c;
}

void print_report(const VerificationReport& r) {
  std::printf("%-7s %-9s %-10s N=%d rel=%.3e%s\n", r.skipped ? "SKIP" : r.pass ? "PASS" : "FAIL", r.identity_id.c_str(),
              r.operator_name.c_str(), r.n_param, r.rel_error, r.note.empty() ? "" : ("  (" + r.note + ")").c_str());
}

// Runs the jobs, writes reports.jsonl / summary.csv / timings.json and returns the verdict.
int run_reports(const Config& c, const std::vector<Job>& jobs) {
  const std::filesystem::path dir = c.out_dir;
  prepare_output_dir(dir);
  const auto results = run_jobs(jobs, c.jobs);
  std::vector<VerificationReport> reports;
  std::vector<TimingRecord> timings;
  for (const auto& res : results) {
    for (const auto& r : res.reports) reports.push_back(r);
    timings.push_back({res.label, res.nodes, res.dim, res.seconds});
  }
  write_file(dir, "reports.jsonl", [&](std::ostream& os) { write_jsonl(os, reports); });
  write_file(dir, "summary.csv", [&](std::ostream& os) { write_summary_csv(os, reports); });
  write_file(dir, "timings.json", [&](std::ostream& os) { write_timings(os, timings); });
  int failed = 0;
  int skipped = 0;
  for (const auto& r : reports) {
    print_report(r);
    if (r.skipped)
      ++skipped;
    else if (!r.pass)
      ++failed;
  }
  std::printf("%zu reports, %d failed, %d skipped\n", reports.size(), failed, skipped);
  return failed ? kFail : kPass;
}

int cmd_verify(const Flags& f) {
  const Config c = load(f);
  return run_reports(c, verify_jobs(c));
}

int cmd_constants(const Flags& f) {
  const Config c = load(f);
  return run_reports(c, constants_jobs(c));
}

int cmd_convergence(const Flags& f) {
  const Config c = load(f);
  const std::filesystem::path dir = c.out_dir;
  prepare_output_dir(dir);
  std::vector<VerificationReport> reports;
  const auto rows = run_convergence(c, &reports);
  write_file(dir, "reports.jsonl", [&](std::ostream& os) { write_jsonl(os, reports); });
  write_file(dir, "summary.csv", [&](std::ostream& os) { write_summary_csv(os, reports); });
  write_file(dir, "convergence.csv", [&](std::ostream& os) {
    os << "operator,identity_id,N_param,nodes,rel_error,order\n";
    for (const auto& row : rows) {
      for (const auto& p : row.study.points) {
        os << row.operator_name << ',' << row.identity_id << ',' << row.n_param << ',' << p.nodes << ','
           << detail::fmt_double(p.rel_error) << ',';
        if (row.study.order) os << detail::fmt_double(*row.study.order);
        os << '\n';
      }
    }
  });
  int failed = 0;
  for (const auto& row : rows) {
    std::printf("%-4s %-10s %-6s N=%d", row.pass ? "PASS" : "FAIL", row.operator_name.c_str(), row.identity_id.c_str(),
                row.n_param);
    for (const auto& p : row.study.points) std::printf("  %d:%.2e", p.nodes, p.rel_error);
    if (row.study.order) std::printf("  order=%.2f", *row.study.order);
    if (row.at_floor) std::printf("  (below error floor)");
    std::printf("\n");
    failed += row.pass ? 0 : 1;
  }
  return failed ? kFail : kPass;
}

int cmd_bench(const Flags& f) {
  const Config c = load(f);
  const std::filesystem::path dir = c.out_dir;
  prepare_output_dir(dir);
  std::vector<TimingRecord> timings;
  bool agree = true;
  std::printf("%6s %4s %12s %12s %9s %10s\n", "N", "d", "fast [s]", "direct [s]", "speedup", "rel diff");
  for (int d : c.bench_dims) {
    const SectorialOperator a = bench_operator(d, c.seed);
    for (int n : c.bench_nodes) {
      const TimeGrid grid = make_log_grid(c.t_min, c.t_max, n);
      std::mt19937_64 rng(c.seed);
      std::normal_distribution<double> normal;
      GridFunction in(grid, d);
      for (int k = 0; k < n; ++k)
        for (int i = 0; i < d; ++i) in.value(k)(i) = Complex(normal(rng), normal(rng));
      for (bool plus : {true, false}) {
        const auto fast = plus ? mplus_fast(a, in) : mminus_fast(a, in);
        const auto direct = plus ? mplus_direct(a, in) : mminus_direct(a, in);
        const double diff = weighted_norm(fast.values - direct.values, {0.0}) / weighted_norm(direct.values, {0.0});
        const std::string name = plus ? "mplus" : "mminus";
        if (!(diff <= c.bench_agreement)) {
          std::printf("%6d %4d %s: fast/direct disagree, rel diff %.3e > %.1e\n", n, d, name.c_str(), diff,
                      c.bench_agreement);
          agree = false;
          continue;
        }
        const double tf = seconds_of([&] { (void)(plus ? mplus_fast(a, in) : mminus_fast(a, in)); }, 5);
        const double td = seconds_of([&] { (void)(plus ? mplus_direct(a, in) : mminus_direct(a, in)); });
        timings.push_back({name + "_fast", n, d, tf});
        timings.push_back({name + "_direct", n, d, td});
        std::printf("%6d %4d %12.5f %12.5f %9.1f %10.2e  %s\n", n, d, tf, td, td / tf, diff, name.c_str());
      }
    }
  }
  write_file(dir, "timings.json", [&](std::ostream& os) { write_timings(os, timings); });
  return agree ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal regularity operators: verification, constants, convergence, benchmarks"};
  app.require_subcommand(1);
  Flags flags;
  auto add_flags = [&](CLI::App* sub) {
    sub->add_option("--config", flags.config, "INI configuration file")->required();
    sub->add_option("--out", flags.out, "Output directory (overrides [output] dir)");
    sub->add_option("--jobs", flags.jobs, "Worker threads");
    sub->add_option("--seed", flags.seed, "RNG seed (overrides [run] seed)");
    sub->add_option("--tolerance", flags.tolerance, "Identity tolerance (overrides [tolerances] identity)");
  };
  std::function<int(const Flags&)> command;
  auto add = [&](const char* name, const char* help, int (*fn)(const Flags&)) {
    auto* sub = app.add_subcommand(name, help);
    add_flags(sub);
    sub->callback([&command, fn] { command = fn; });
  };
  add("verify", "Run the configured identity checks over the operator zoo", cmd_verify);
  add("constants", "Estimate quadratic constants and operator norms", cmd_constants);
  add("convergence", "Grid-refinement study with fitted orders", cmd_convergence);
  add("bench", "Time fast against direct evaluation", cmd_bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }
  try {
    return command(flags);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
}
