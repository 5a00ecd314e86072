#ifndef MAXREG_RUNNER_HPP
#define MAXREG_RUNNER_HPP

#include "maxreg/config.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace maxreg {

struct Job {
  std::string label;
  std::function<std::vector<VerificationReport>()> run;
  int nodes = 0;
  int dim = 0;
};

struct JobResult {
  std::string label;
  std::vector<VerificationReport> reports;
  double seconds = 0.0;
  int nodes = 0;
  int dim = 0;
};

/// Runs jobs on `threads` workers; results come back in job order whatever the schedule.
/// The first exception thrown by a job is rethrown after all workers stop.
inline std::vector<JobResult> run_jobs(const std::vector<Job>& jobs, int threads) {
  std::vector<JobResult> out(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        const auto start = std::chrono::steady_clock::now();
        out[i].label = jobs[i].label;
        out[i].nodes = jobs[i].nodes;
        out[i].dim = jobs[i].dim;
        out[i].reports = jobs[i].run();
        out[i].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int n = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  std::vector<std::thread> pool;
  for (int t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

/// Unit-norm probe vector (1, ..., 1)/sqrt(d).
inline HVector probe_vector(int d) { return HVector::Ones(d) / std::sqrt(static_cast<double>(d)); }

namespace detail {

inline std::vector<VerificationReport> one(VerificationReport r) { return {std::move(r)}; }

// Reports of one identity for one operator; empty for ids outside the identity suite.
inline std::vector<Job> identity_jobs(const Config& c, const ZooEntry& z, const std::string& id, const TimeGrid& grid) {
  const auto& a = z.op;
  const HVector h = probe_vector(a.dim());
  const CheckOptions opt = c.options(z.name);
  const std::string tag = id + " " + z.name;
  std::vector<Job> jobs;
  auto per_n = [&](auto check) {
    for (int n : c.n_values) jobs.push_back({tag + " N=" + std::to_string(n), [=] { return one(check(n)); }});
  };
  if (id == ids::evolution_plus) {
    per_n([=](int n) { return check_evolution_plus(a, h, n, grid, opt); });
  } else if (id == ids::evolution_minus) {
    per_n([=](int n) { return check_evolution_minus(a, h, n, grid, opt); });
  } else if (id == ids::balayage_plus) {
    per_n([=](int n) { return check_balayage_plus(a, symbol_function(Symbol::psi1, a, 1, h), n, grid, opt); });
  } else if (id == ids::balayage_minus) {
    per_n([=](int n) { return check_balayage_minus(a, symbol_function(Symbol::exp_N, a, 1, h), n, grid, opt); });
  } else if (id == ids::endpoint_plus) {
    per_n([=](int n) { return check_endpoint_plus(a, symbol_function(Symbol::exp_N, a, 1, h), n, grid, opt); });
  } else if (id == ids::endpoint_minus) {
    per_n([=](int n) { return check_endpoint_minus(a, h, n, grid, opt); });
  } else if (id == ids::weighted_plus || id == ids::weighted_minus) {
    const auto which = id == ids::weighted_plus ? MaxRegOperator::plus : MaxRegOperator::minus;
    for (double alpha : c.alphas)
      jobs.push_back({tag + " alpha=" + detail::fmt_double(alpha),
                      [=] { return one(check_weighted_desimon(which, a, alpha, grid, opt)); }});
  } else if (id == ids::reduction_plus) {
    const TimeFunction f = [a, h](double s) { return HVector(semigroup_apply(a, s, h) / s); };
    jobs.push_back({tag, [=] { return one(check_reduction_plus(a, f, grid, opt)); }});
  } else if (id == ids::reduction_minus) {
    jobs.push_back({tag, [=] { return one(check_reduction_minus(a, symbol_function(Symbol::psi1, a, 1, h), grid, opt)); }});
  } else if (id == ids::trace) {
    jobs.push_back({tag + " psi1", [=] { return one(check_trace(a, symbol_function(Symbol::psi1, a, 1, h), grid, opt)); }});
    jobs.push_back({tag + " zero", [=] { return one(check_trace(a, zero_balayage_function(a, h), grid, opt)); }});
  } else if (id == ids::desimon) {
    jobs.push_back({tag, [=] { return one(check_desimon(a, grid, opt)); }});
  } else if (id == ids::quadratic || id == ids::quadratic_adjoint) {
    const bool adjoint = id == ids::quadratic_adjoint;
    for (Symbol s : c.symbols)
      per_n([=](int n) { return check_quadratic(a, adjoint, s, n, grid, opt); });
  } else if (id == ids::constant_data) {
    jobs.push_back({tag, [=] { return one(check_constant_data(a, h, grid, opt)); }});
  }
  for (auto& j : jobs) {
    j.nodes = grid.size();
    j.dim = a.dim();
  }
  return jobs;
}

}  // namespace detail

/// The configured checks over the zoo, operators outermost.
inline std::vector<Job> verify_jobs(const Config& c) {
  const TimeGrid grid = c.grid();
  std::vector<Job> jobs;
  for (const auto& z : c.zoo)
    for (const auto& id : c.checks) {
      auto more = detail::identity_jobs(c, z, id, grid);
      jobs.insert(jobs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
  return jobs;
}

/// Quadratic constants for every (symbol, N) and operator norms for alpha = 0 and each
/// configured alpha, per operator.
inline std::vector<Job> constants_jobs(const Config& c) {
  const TimeGrid grid = c.grid();
  std::vector<Job> jobs;
  for (const auto& z : c.zoo) {
    for (const char* id : {ids::quadratic, ids::quadratic_adjoint}) {
      auto more = detail::identity_jobs(c, z, id, grid);
      jobs.insert(jobs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
    auto more = detail::identity_jobs(c, z, ids::desimon, grid);
    jobs.insert(jobs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    for (const char* id : {ids::weighted_plus, ids::weighted_minus}) {
      more = detail::identity_jobs(c, z, id, grid);
      jobs.insert(jobs.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    }
  }
  return jobs;
}

struct ConvergenceRow {
  std::string operator_name;
  std::string identity_id;
  int n_param = 0;
  ConvergenceStudy study;
  /// Every error already below kConvergenceFloor, where the log step no longer dominates
  /// (roundoff, or the fixed truncation at t_min) and an order is meaningless.
  bool at_floor = false;
  bool pass = false;
};

/// Three decades below the default identity tolerance; errors under it are not log-step
/// discretization error.
inline constexpr double kConvergenceFloor = 1e-6;
inline constexpr double kMinimumOrder = 1.5;

/// Refinement study of the configured identities. A row passes when its fitted order is at
/// least 1.5, or when all errors sit below kConvergenceFloor; constant data must stay within
/// 1e-10 at every node count.
inline std::vector<ConvergenceRow> run_convergence(const Config& c, std::vector<VerificationReport>* reports = nullptr) {
  std::vector<ConvergenceRow> rows;
  std::vector<Job> jobs;
  struct Key {
    std::size_t row;
    int nodes;
  };
  std::vector<Key> keys;
  for (const auto& z : c.zoo) {
    for (const auto& id : c.convergence_checks) {
      const std::vector<int> ns = id == ids::constant_data ? std::vector<int>{0} : c.n_values;
      for (int n : ns) {
        rows.push_back({z.name, id, n, {}, false, false});
        for (int nodes : c.convergence_nodes) {
          Config single = c;
          single.nodes = nodes;
          single.n_values = {std::max(n, 1)};
          auto js = detail::identity_jobs(single, z, id, single.grid());
          if (js.empty()) throw ConfigError("convergence.identities: '" + id + "' has no refinement study");
          for (auto& j : js) {
            keys.push_back({rows.size() - 1, nodes});
            jobs.push_back(std::move(j));
          }
        }
      }
    }
  }
  const auto results = run_jobs(jobs, c.jobs);
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const auto& r : results[i].reports) {
      rows[keys[i].row].study.points.push_back({keys[i].nodes, r.rel_error});
      if (reports) reports->push_back(r);
    }
  }
  for (auto& row : rows) {
    auto& pts = row.study.points;
    row.study.order = fitted_order(pts);
    row.at_floor = std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.rel_error <= kConvergenceFloor; });
    if (row.identity_id == ids::constant_data)
      row.pass = std::all_of(pts.begin(), pts.end(), [](const auto& p) { return p.rel_error <= 1e-10; });
    else
      row.pass = row.at_floor || !row.study.order || *row.study.order >= kMinimumOrder;
  }
  return rows;
}

struct BenchRecord {
  std::string method;
  int nodes = 0;
  int dim = 0;
  double seconds = 0.0;
  /// Relative h_0 difference between fast and direct on the same input.
  double difference = 0.0;
};

inline double seconds_of(const std::function<void()>& f, int repeats = 1) {
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < repeats; ++i) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / repeats;
}

/// Seeded diagonalizable operator of dimension d with complex spectrum, the bench workload.
inline SectorialOperator bench_operator(int d, std::uint64_t seed) {
  boost::property_tree::ptree sec;
  sec.put("dimension", d);
  sec.put("seed", seed);
  return detail::build_operator("bench", "random", sec, ".", seed);
}

}  // namespace maxreg

#endif  // MAXREG_RUNNER_HPP
