#ifndef MAXREG_TOOLS_REPORT_IO_HPP
#define MAXREG_TOOLS_REPORT_IO_HPP

#include "maxreg/runner.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

namespace maxreg::tools {

using json = nlohmann::ordered_json;

inline json to_json(const VerificationReport& r) {
  json constants = json::object();
  for (const auto& [k, v] : r.constants) constants[k] = v;
  return json{{"identity_id", r.identity_id},
              {"operator", r.operator_name},
              {"grid", {{"t_min", r.grid.t_min}, {"t_max", r.grid.t_max}, {"N", r.grid.nodes}}},
              {"N_param", r.n_param},
              {"lhs_norm", r.lhs_norm},
              {"rhs_norm", r.rhs_norm},
              {"abs_error", r.abs_error},
              {"rel_error", r.rel_error},
              {"scale", r.scale},
              {"tolerance", r.tolerance},
              {"constants", constants},
              {"pass", r.pass},
              {"skipped", r.skipped},
              {"seed", r.seed},
              {"note", r.note}};
}

inline void write_jsonl(std::ostream& os, const std::vector<VerificationReport>& reports) {
  for (const auto& r : reports) os << to_json(r).dump() << '\n';
}

inline void write_summary_csv(std::ostream& os, const std::vector<VerificationReport>& reports) {
  os << "identity_id,operator,N_param,rel_error,pass\n";
  for (const auto& r : reports)
    os << r.identity_id << ',' << r.operator_name << ',' << r.n_param << ',' << detail::fmt_double(r.rel_error) << ','
       << (r.skipped ? "skipped" : r.pass ? "true" : "false") << '\n';
}

struct TimingRecord {
  std::string method;
  int nodes = 0;
  int dim = 0;
  double seconds = 0.0;
};

inline void write_timings(std::ostream& os, const std::vector<TimingRecord>& records) {
  json arr = json::array();
  for (const auto& t : records) arr.push_back({{"method", t.method}, {"N", t.nodes}, {"d", t.dim}, {"seconds", t.seconds}});
  os << arr.dump(2) << '\n';
}

/// Writes `body` to dir/name; throws IoError on any failure.
template <class Body>
void write_file(const std::filesystem::path& dir, const std::string& name, Body&& body) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw IoError("cannot write " + (dir / name).string());
  body(out);
  out.flush();
  if (!out) throw IoError("write failed: " + (dir / name).string());
}

inline void prepare_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
}

}  // namespace maxreg::tools

#endif  // MAXREG_TOOLS_REPORT_IO_HPP
