#pragma once

// Benchmark sweeps: every (instance, mode, width, filter) cell of a suite
// is solved once and reported as one CSV row.
//
// Suite file:
//   {"instances": [{"id": "h3", "gen": "hanoi", "disks": 3},
//                  {"id": "bw", "gen": "blocksworld", "blocks": 4, "seed": 7},
//                  {"id": "f", "path": "instance.json"}],
//    "modes": ["macro", "baseline"], "widths": [7], "filters": ["consistent"],
//    "ball_cap": 5000000}

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "macroforge/domains.hpp"
#include "macroforge/io.hpp"
#include "macroforge/solver.hpp"

namespace macroforge {

struct BenchRecord {
  std::string instance;
  std::string mode;  ///< macro | baseline
  std::size_t k = 0;
  std::string filter;  ///< consistent | none
  std::size_t ball_size = 0;  ///< largest ball over the run's iterations
  std::uint64_t edges = 0;
  std::uint64_t label_changes = 0;
  std::string outcome;
  std::string expanded_length;  ///< decimal; empty unless solved
  double wall_ms = 0;
};

inline constexpr const char* kBenchHeader =
    "instance,mode,k,filter,ball_size,edges,label_changes,outcome,expanded_length,wall_ms";

inline void write_csv_row(std::ostream& os, const BenchRecord& r) {
  std::ostringstream ms;
  ms.setf(std::ios::fixed);
  ms.precision(3);
  ms << r.wall_ms;
  os << r.instance << ',' << r.mode << ',' << r.k << ',' << r.filter << ',' << r.ball_size << ','
     << r.edges << ',' << r.label_changes << ',' << r.outcome << ',' << r.expanded_length << ','
     << ms.str() << '\n';
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& rows) {
  os << kBenchHeader << '\n';
  for (const auto& r : rows) write_csv_row(os, r);
}

inline StateFilter filter_by_name(const std::string& name, const PlanningInstance& inst) {
  if (name == "none") return StateFilter::none();
  if (name == "consistent") return consistency_filter(inst);
  throw InputError("unknown filter '" + name + "' (expected consistent or none)");
}

inline BenchRecord run_cell(const std::string& id, const PlanningInstance& inst,
                            const std::string& mode, std::size_t k, const std::string& filter,
                            const SolveOptions& opt = {}) {
  const StateFilter f = filter_by_name(filter, inst);
  SolveOutcome out;
  if (mode == "macro") {
    out = solve_mph(inst, k, f, opt);
  } else if (mode == "baseline") {
    out = baseline_reach(inst, k, f, opt);
  } else {
    throw InputError("unknown mode '" + mode + "' (expected macro or baseline)");
  }
  BenchRecord r;
  r.instance = id;
  r.mode = mode;
  r.k = k;
  r.filter = filter;
  r.ball_size = out.stats.max_ball();
  r.edges = out.stats.edges;
  r.label_changes = out.stats.label_changes;
  r.outcome = to_string(out.status);
  if (out.status == SolveStatus::solved) r.expanded_length = expanded_length(out.plan).str();
  r.wall_ms = out.stats.wall_ms;
  return r;
}

struct BenchInstance {
  std::string id;
  PlanningInstance instance;
};

inline std::vector<BenchInstance> suite_instances(const Json& suite,
                                                  const std::filesystem::path& base_dir) {
  using namespace detail;
  const std::string path = "$.instances";
  const Json& list = field(suite, "instances", "$");
  expect_array(list, path);
  std::vector<BenchInstance> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string at = item(path, i);
    const Json& e = list[i];
    expect_object(e, at);
    BenchInstance b;
    b.id = as_string(field(e, "id", at), member(at, "id"));
    if (auto p = e.find("path"); p != e.end()) {
      std::ifstream in(base_dir / as_string(*p, member(at, "path")));
      if (!in) fail_at(member(at, "path"), "cannot open instance file");
      std::stringstream ss;
      ss << in.rdbuf();
      b.instance = parse_instance(ss.str());
    } else {
      const auto& gen = as_string(field(e, "gen", at), member(at, "gen"));
      if (gen == "hanoi") {
        b.instance = gen_hanoi({as_index(field(e, "disks", at), member(at, "disks"))});
      } else if (gen == "blocksworld") {
        const auto n = as_index(field(e, "blocks", at), member(at, "blocks"));
        const auto seed = e.contains("seed") ? as_index(e["seed"], member(at, "seed")) : 0;
        b.instance = random_blocksworld(n, seed);
      } else {
        fail_at(member(at, "gen"), "unknown generator '" + gen + "'");
      }
    }
    out.push_back(std::move(b));
  }
  return out;
}

/// Cells in suite order: instances outermost, then modes, widths, filters.
inline std::vector<BenchRecord> run_bench(const Json& suite, const std::filesystem::path& base_dir,
                                          std::ostream* progress = nullptr) {
  using namespace detail;
  expect_object(suite, "$");
  auto strings = [&](const char* key, std::vector<std::string> dflt) {
    if (!suite.contains(key)) return dflt;
    const std::string at = member("$", key);
    expect_array(suite[key], at);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < suite[key].size(); ++i)
      out.push_back(as_string(suite[key][i], item(at, i)));
    return out;
  };
  const auto modes = strings("modes", {"macro"});
  const auto filters = strings("filters", {"consistent"});
  const Json& widths = field(suite, "widths", "$");
  expect_array(widths, "$.widths");
  SolveOptions opt;
  if (suite.contains("ball_cap")) opt.ball_cap = as_index(suite["ball_cap"], "$.ball_cap");

  std::vector<BenchRecord> rows;
  for (const auto& inst : suite_instances(suite, base_dir))
    for (const auto& mode : modes)
      for (std::size_t wi = 0; wi < widths.size(); ++wi)
        for (const auto& filter : filters) {
          const auto k = as_index(widths[wi], item("$.widths", wi));
          rows.push_back(run_cell(inst.id, inst.instance, mode, k, filter, opt));
          if (progress) write_csv_row(*progress, rows.back());
        }
  return rows;
}

}  // namespace macroforge
