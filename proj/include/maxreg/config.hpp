#ifndef MAXREG_CONFIG_HPP
#define MAXREG_CONFIG_HPP

#include "maxreg/io.hpp"
#include "maxreg/verify.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxreg {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ZooEntry {
  std::string name;
  std::string kind;
  SectorialOperator op;
};

struct Config {
  double t_min = 1e-4;
  double t_max = 1e3;
  int nodes = 2000;
  std::vector<ZooEntry> zoo;

  std::vector<std::string> checks;
  std::vector<int> n_values{1, 2, 3};
  std::vector<double> alphas{0.5};
  std::vector<Symbol> symbols{Symbol::psi1, Symbol::psi2};

  double tolerance = 1e-3;
  double certificate_tolerance = 1e-6;
  double stability_tolerance = 0.10;

  std::string out_dir = "out";
  std::uint64_t seed = 1;
  int jobs = 1;
  int iterations = 200;

  std::vector<int> convergence_nodes{500, 1000, 2000, 4000};
  std::vector<std::string> convergence_checks{ids::evolution_plus, ids::evolution_minus, ids::balayage_plus,
                                              ids::endpoint_plus,  ids::endpoint_minus,  ids::constant_data};

  std::vector<int> bench_nodes{500, 1000, 2000, 4000};
  std::vector<int> bench_dims{4, 16};
  /// Largest admissible relative fast/direct difference before timing.
  double bench_agreement = 1e-10;

  TimeGrid grid() const { return make_log_grid(t_min, t_max, nodes); }

  CheckOptions options(const std::string& name) const {
    CheckOptions o;
    o.operator_name = name;
    o.tolerance = tolerance;
    o.certificate_tolerance = certificate_tolerance;
    o.stability_tolerance = stability_tolerance;
    o.iterations = iterations;
    o.seed = seed;
    return o;
  }
};

inline const std::vector<std::string>& all_check_ids() {
  static const std::vector<std::string> v{
      ids::evolution_plus, ids::evolution_minus, ids::balayage_plus, ids::balayage_minus, ids::endpoint_plus,
      ids::endpoint_minus, ids::weighted_plus, ids::weighted_minus, ids::reduction_plus, ids::reduction_minus,
      ids::trace,          ids::desimon,         ids::quadratic,     ids::quadratic_adjoint, ids::constant_data};
  return v;
}

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::istringstream is(text);
  std::string tok;
  while (is >> tok) {
    std::istringstream ts(tok);
    T v{};
    if (!(ts >> v) || !(ts >> std::ws).eof()) throw ConfigError(key + ": cannot parse '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

template <class T>
T get_value(const boost::property_tree::ptree& sec, const std::string& key, T fallback) {
  const auto node = sec.get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
  if (!node) return fallback;
  const auto v = parse_list<T>(node->data(), key);
  if (v.size() != 1) throw ConfigError(key + ": expected a single value");
  return v.front();
}

template <class T>
std::vector<T> get_list(const boost::property_tree::ptree& sec, const std::string& key, std::vector<T> fallback) {
  const auto node = sec.get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
  if (!node) return fallback;
  return parse_list<T>(node->data(), key);
}

inline const boost::property_tree::ptree* section(const boost::property_tree::ptree& root, const std::string& name) {
  const auto node = root.get_child_optional(boost::property_tree::ptree::path_type(name, '\0'));
  return node ? &*node : nullptr;
}

inline Matrix orthogonal_basis(int d, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q.cast<Complex>();
}

inline SectorialOperator build_operator(const std::string& name, const std::string& kind,
                                        const boost::property_tree::ptree& sec, const std::filesystem::path& base,
                                        std::uint64_t run_seed) {
  const int dim = get_value<int>(sec, "dimension", -1);
  if (dim == 0 || dim < -1) throw ConfigError("operator." + name + ": dimension must be >= 1");
  const auto seed = get_value<std::uint64_t>(sec, "seed", run_seed);
  if (kind == "scalar") {
    if (dim > 1) throw ConfigError("operator." + name + ": scalar operators have dimension 1");
    return make_scalar(get_value<Complex>(sec, "eigenvalue", Complex(1.0)));
  }
  if (kind == "laplacian") {
    return make_discrete_laplacian(dim < 0 ? 8 : dim, get_value<double>(sec, "mesh", 0.5));
  }
  if (kind == "rotated") {
    // eigenvalues (k+1) r e^{+-i angle}, orthogonal eigenbasis: normal, not self-adjoint
    const int d = dim < 0 ? 2 : dim;
    const double angle = get_value<double>(sec, "angle", std::numbers::pi / 3);
    const double radius = get_value<double>(sec, "radius", 1.0);
    std::vector<Complex> ev;
    for (int k = 0; static_cast<int>(ev.size()) < d; ++k) {
      ev.push_back(std::polar(radius * (k + 1), angle));
      if (static_cast<int>(ev.size()) < d) ev.push_back(std::polar(radius * (k + 1), -angle));
    }
    return make_diagonalizable(orthogonal_basis(d, seed), ev);
  }
  if (kind == "nonnormal") {
    // V = I + skew * (ones above the diagonal), eigenvalues 1..d
    const int d = dim < 0 ? 2 : dim;
    const double skew = get_value<double>(sec, "skew", 1.0);
    Matrix v = Matrix::Identity(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = i + 1; j < d; ++j) v(i, j) = skew;
    std::vector<Complex> ev;
    for (int k = 0; k < d; ++k) ev.emplace_back(k + 1.0);
    return make_diagonalizable(v, get_list<Complex>(sec, "eigenvalues", ev));
  }
  if (kind == "diagonalizable") {
    const auto ev = get_list<Complex>(sec, "eigenvalues", {});
    if (ev.empty()) throw ConfigError("operator." + name + ": eigenvalues required");
    if (dim > 0 && dim != static_cast<int>(ev.size())) throw ConfigError("operator." + name + ": dimension mismatch");
    const int d = static_cast<int>(ev.size());
    const auto basis = get_list<Complex>(sec, "basis", {});
    Matrix v = Matrix::Identity(d, d);
    if (!basis.empty()) {
      if (static_cast<int>(basis.size()) != d * d) throw ConfigError("operator." + name + ": basis needs d*d entries");
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) v(i, j) = basis[i * d + j];
    }
    return make_diagonalizable(v, ev);
  }
  if (kind == "random") {
    // spectrum in the sector |arg| <= angle with real parts in [1, 10], V = I + spread * Gaussian
    const int d = dim < 0 ? 4 : dim;
    const double angle = get_value<double>(sec, "angle", std::numbers::pi / 4);
    const double spread = get_value<double>(sec, "spread", 0.2);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> normal;
    std::vector<Complex> ev;
    for (int k = 0; k < d; ++k) {
      const double re = 1.0 + 9.0 * unit(rng);
      ev.emplace_back(re, re * std::tan(angle) * (2.0 * unit(rng) - 1.0));
    }
    Matrix v = Matrix::Identity(d, d);
    for (int j = 0; j < d; ++j)
      for (int i = 0; i < d; ++i) v(i, j) += spread * Complex(normal(rng), normal(rng));
    return make_diagonalizable(v, ev);
  }
  if (kind == "matrix") {
    const auto file = sec.get<std::string>(boost::property_tree::ptree::path_type("file", '\0'), "");
    if (file.empty()) throw ConfigError("operator." + name + ": file required");
    const auto path = std::filesystem::path(file).is_absolute() ? std::filesystem::path(file) : base / file;
    Matrix m;
    try {
      m = read_matrix_csv(path.string());
    } catch (const IoError& e) {
      throw ConfigError("operator." + name + ": " + e.what());
    }
    if (dim > 0 && dim != m.rows()) throw ConfigError("operator." + name + ": dimension mismatch");
    return SectorialOperator::from_matrix(m);
  }
  throw ConfigError("operator." + name + ": unknown kind '" + kind + "'");
}

}  // namespace detail

/// Sections: [grid] [operator.NAME]... [checks] [tolerances] [output] [run] [convergence] [bench].
/// Lists are whitespace separated; complex numbers are written 1.5 or (1.5,-2).
/// A seed override replaces [run] seed before any seeded zoo member is built.
inline Config parse_config(std::istream& is, const std::filesystem::path& base = ".",
                           std::optional<std::uint64_t> seed_override = std::nullopt) {
  namespace pt = boost::property_tree;
  pt::ptree root;
  try {
    pt::read_ini(is, root);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  Config c;
  const pt::ptree empty;
  auto sec = [&](const char* name) -> const pt::ptree& {
    const auto* s = detail::section(root, name);
    return s ? *s : empty;
  };

  const auto& run = sec("run");
  c.seed = seed_override.value_or(detail::get_value<std::uint64_t>(run, "seed", c.seed));
  c.jobs = detail::get_value<int>(run, "jobs", c.jobs);
  c.iterations = detail::get_value<int>(run, "iterations", c.iterations);
  if (c.jobs < 1) throw ConfigError("run.jobs must be >= 1");
  if (c.iterations < 10) throw ConfigError("run.iterations must be >= 10");

  const auto& grid = sec("grid");
  c.t_min = detail::get_value<double>(grid, "t_min", c.t_min);
  c.t_max = detail::get_value<double>(grid, "t_max", c.t_max);
  c.nodes = detail::get_value<int>(grid, "nodes", c.nodes);
  try {
    (void)c.grid();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }

  for (const auto& [key, child] : root) {
    if (key.rfind("operator.", 0) != 0) continue;
    const std::string name = key.substr(9);
    if (name.empty()) throw ConfigError("operator section without a name");
    const auto kind = child.get<std::string>(pt::ptree::path_type("kind", '\0'), "");
    try {
      c.zoo.push_back({name, kind, detail::build_operator(name, kind, child, base, c.seed)});
    } catch (const std::invalid_argument& e) {
      throw ConfigError("operator." + name + ": " + e.what());
    }
  }

  const auto& checks = sec("checks");
  c.checks = detail::get_list<std::string>(checks, "identities", all_check_ids());
  for (const auto& id : c.checks)
    if (std::find(all_check_ids().begin(), all_check_ids().end(), id) == all_check_ids().end())
      throw ConfigError("checks.identities: unknown check '" + id + "'");
  c.n_values = detail::get_list<int>(checks, "n_values", c.n_values);
  for (int n : c.n_values)
    if (n < 1) throw ConfigError("checks.n_values must be >= 1");
  c.alphas = detail::get_list<double>(checks, "alpha", c.alphas);
  if (const auto names = detail::get_list<std::string>(checks, "symbols", {}); !names.empty()) {
    c.symbols.clear();
    for (const auto& s : names) {
      if (s != "psi1" && s != "psi2") throw ConfigError("checks.symbols: psi1 or psi2 expected");
      c.symbols.push_back(parse_symbol(s));
    }
  }

  const auto& tol = sec("tolerances");
  c.tolerance = detail::get_value<double>(tol, "identity", c.tolerance);
  c.certificate_tolerance = detail::get_value<double>(tol, "certificate", c.certificate_tolerance);
  c.stability_tolerance = detail::get_value<double>(tol, "stability", c.stability_tolerance);
  if (!(c.tolerance >= 0.0) || !(c.certificate_tolerance >= 0.0) || !(c.stability_tolerance >= 0.0))
    throw ConfigError("tolerances must be non-negative");

  c.out_dir = sec("output").get<std::string>(pt::ptree::path_type("dir", '\0'), c.out_dir);

  const auto& conv = sec("convergence");
  c.convergence_nodes = detail::get_list<int>(conv, "nodes", c.convergence_nodes);
  c.convergence_checks = detail::get_list<std::string>(conv, "identities", c.convergence_checks);
  for (int n : c.convergence_nodes)
    if (n < 2) throw ConfigError("convergence.nodes must be >= 2");

  const auto& bench = sec("bench");
  c.bench_nodes = detail::get_list<int>(bench, "nodes", c.bench_nodes);
  c.bench_dims = detail::get_list<int>(bench, "dims", c.bench_dims);
  for (int n : c.bench_nodes)
    if (n < 2) throw ConfigError("bench.nodes must be >= 2");
  c.bench_agreement = detail::get_value<double>(bench, "agreement", c.bench_agreement);
  if (!(c.bench_agreement >= 0.0)) throw ConfigError("bench.agreement must be non-negative");
  for (int d : c.bench_dims)
    if (d < 1) throw ConfigError("bench.dims must be >= 1");
  return c;
}

inline Config load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config " + path.string());
  return parse_config(in, path.parent_path(), seed_override);
}

}  // namespace maxreg

#endif  // MAXREG_CONFIG_HPP
