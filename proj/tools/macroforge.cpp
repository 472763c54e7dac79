// macroforge command-line driver.
//
// Exit codes: 0 solved / ok, 1 input or usage error, 2 unknown ("?"),
// 3 resource exceeded, 4 plan rejected by validate.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "macroforge.hpp"

namespace mf = macroforge;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kUnknown = 2;
constexpr int kResource = 3;
constexpr int kInvalidPlan = 4;

std::string read_file(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mf::InputError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mf::InputError("cannot write '" + path + "'");
  out << text;
}

// Plans carry conditions by variable name; without the instance the table
// is rebuilt from the names and values the plan itself mentions.
mf::VariableTable vars_from_plan(const mf::Json& plan) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::string>> domains;
  auto note = [&](const mf::Json& p) {
    if (!p.is_object()) return;
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (!it.value().is_string()) continue;
      auto [pos, fresh] = domains.try_emplace(it.key());
      if (fresh) order.push_back(it.key());
      const auto& v = it.value().get_ref<const std::string&>();
      if (std::find(pos->second.begin(), pos->second.end(), v) == pos->second.end())
        pos->second.push_back(v);
    }
  };
  if (plan.contains("actions") && plan["actions"].is_array())
    for (const auto& a : plan["actions"]) {
      if (!a.is_object()) continue;
      if (a.contains("pre")) note(a["pre"]);
      if (a.contains("post")) note(a["post"]);
    }
  mf::VariableTable vars;
  for (const auto& name : order) vars.add(name, domains[name]);
  return vars;
}

int exit_for(mf::SolveStatus s) {
  switch (s) {
    case mf::SolveStatus::solved: return kOk;
    case mf::SolveStatus::unknown: return kUnknown;
    default: return kResource;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Macro-action planner over Hamming balls"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Emit a generated instance as JSON");
  gen->require_subcommand(1);
  auto* gen_bw = gen->add_subcommand("blocksworld", "Blocksworld with an arm");
  std::size_t blocks = 3;
  std::uint64_t seed = 0;
  bool stacked = false;
  gen_bw->add_option("--blocks", blocks, "Number of blocks")->check(CLI::PositiveNumber);
  gen_bw->add_option("--seed", seed, "Seed for random init and goal layouts");
  gen_bw->add_flag("--stacked", stacked,
                   "Init: one tower b1 on b2 on ... ; goal: every block on the table");
  auto* gen_hanoi = gen->add_subcommand("hanoi", "Towers of Hanoi");
  std::size_t disks = 3;
  bool all_moves = false;
  gen_hanoi->add_option("--disks", disks, "Number of disks")->check(CLI::PositiveNumber);
  gen_hanoi->add_flag("--all-moves", all_moves,
                      "Also emit moves from positions that can never hold the disk");
  std::string gen_out;
  gen->add_option("--out,-o", gen_out, "Output file (default stdout)");

  // macros
  auto* macros = app.add_subcommand("macros", "Run compute_macros over a Hamming ball");
  std::string m_instance, m_state = "init", m_filter = "none", m_out;
  std::size_t m_width = 1;
  bool m_strict = false, m_timing = false;
  macros->add_option("--instance", m_instance, "Instance JSON file ('-' for stdin)")->required();
  macros->add_option("--state", m_state, "Ball center: 'init' or a JSON object {var: value}");
  macros->add_option("--width", m_width, "Ball radius k")->required();
  macros->add_option("--filter", m_filter, "Ball filter")->check(CLI::IsMember({"consistent", "none"}));
  macros->add_flag("--strict-scan", m_strict, "Use only the literal nested-loop schedule");
  macros->add_flag("--timing", m_timing, "Include wall time in the output");
  macros->add_option("--out,-o", m_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve an instance; writes a succinct plan");
  std::string s_instance = "-", s_filter = "none", s_mode = "macro", s_out;
  std::size_t s_width = 1, s_cap = mf::kDefaultBallCap;
  solve->add_option("--instance", s_instance, "Instance JSON file (default stdin)");
  solve->add_option("--width", s_width, "Ball radius k")->required();
  solve->add_option("--filter", s_filter, "Ball filter")->check(CLI::IsMember({"consistent", "none"}));
  solve->add_option("--mode", s_mode, "macro or baseline")
      ->check(CLI::IsMember({"macro", "baseline"}));
  solve->add_option("--ball-cap", s_cap, "Abort when a ball would exceed this many states");
  solve->add_option("--out,-o", s_out, "Output file (default stdout)");

  // expand
  auto* expand = app.add_subcommand("expand", "Print the primitive plan of a succinct plan");
  std::string e_plan, e_instance;
  bool e_count = false;
  expand->add_option("--plan", e_plan, "Plan JSON file ('-' for stdin)")->required();
  expand->add_option("--instance", e_instance, "Instance the plan was made for (optional)");
  expand->add_flag("--count-only", e_count, "Print only the expanded length");

  // validate
  auto* validate = app.add_subcommand("validate", "Check a plan against an instance");
  std::string v_instance, v_plan;
  bool v_strict = false;
  validate->add_option("--instance", v_instance, "Instance JSON file")->required();
  validate->add_option("--plan", v_plan, "Plan JSON file")->required();
  validate->add_flag("--strict", v_strict, "Reject inapplicable steps instead of skipping them");

  // bench
  auto* bench = app.add_subcommand("bench", "Sweep a suite and write CSV records");
  std::string b_suite, b_out;
  bench->add_option("--suite", b_suite, "Suite JSON file")->required();
  bench->add_option("--out", b_out, "CSV output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  try {
    if (*gen) {
      mf::PlanningInstance inst;
      if (*gen_bw) {
        if (stacked) {
          const auto names = mf::default_block_names(blocks);
          inst = mf::gen_blocksworld(
              {names, mf::stacked_layout(names, names), mf::stacked_layout(names, {})});
        } else {
          inst = mf::random_blocksworld(blocks, seed);
        }
      } else {
        inst = mf::gen_hanoi({disks, all_moves});
      }
      write_output(gen_out, mf::dump(mf::instance_to_json(inst)));
      return kOk;
    }

    if (*macros) {
      const auto inst = mf::parse_instance(read_file(m_instance));
      const mf::State center =
          m_state == "init" ? inst.init
                            : mf::state_from_json(mf::detail::parse_text(m_state), inst.vars, "$");
      mf::StateFilter filter = mf::filter_by_name(m_filter, inst);
      auto region = mf::ball(inst.vars, center, m_width, filter);
      mf::MacroOptions opt;
      opt.strict_scan = m_strict;
      const auto r = mf::compute_macros(inst.vars, std::move(region), inst.actions, opt);
      write_output(m_out, mf::dump(mf::macro_result_to_json(r, inst.vars, m_timing)));
      return kOk;
    }

    if (*solve) {
      const auto inst = mf::parse_instance(read_file(s_instance));
      const auto filter = mf::filter_by_name(s_filter, inst);
      mf::SolveOptions opt;
      opt.ball_cap = s_cap;
      const auto out = s_mode == "macro" ? mf::solve_mph(inst, s_width, filter, opt)
                                         : mf::baseline_reach(inst, s_width, filter, opt);
      if (out.status == mf::SolveStatus::solved) {
        write_output(s_out, mf::dump(mf::plan_to_json(out.plan, inst.vars)));
      } else {
        std::cout << "?\n";
        mf::log::warn(std::string(mf::to_string(out.status)) + ": " + out.detail);
      }
      return exit_for(out.status);
    }

    if (*expand) {
      const auto doc = mf::detail::parse_text(read_file(e_plan));
      const auto vars = e_instance.empty() ? vars_from_plan(doc)
                                           : mf::parse_instance(read_file(e_instance)).vars;
      const auto plan = mf::plan_from_json(doc, vars);
      if (e_count) {
        std::cout << mf::expanded_length(plan).str() << '\n';
      } else {
        std::ostream& os = std::cout;
        mf::expand(plan, [&](mf::ActionId a) { os << plan.library.display_name(a) << '\n'; });
      }
      return kOk;
    }

    if (*validate) {
      const auto inst = mf::parse_instance(read_file(v_instance));
      const auto plan = mf::parse_plan(read_file(v_plan), inst.vars);
      const bool ok = mf::validate(inst, plan, v_strict);
      std::cout << (ok ? "valid" : "invalid") << '\n';
      return ok ? kOk : kInvalidPlan;
    }

    if (*bench) {
      const auto suite = mf::detail::parse_text(read_file(b_suite));
      const auto base = std::filesystem::path(b_suite).parent_path();
      std::ostringstream csv;
      mf::write_csv(csv, mf::run_bench(suite, base));
      write_output(b_out, csv.str());
      return kOk;
    }
  } catch (const mf::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const mf::ResourceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kResource;
  } catch (const mf::MisuseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInputError;
  }
  return kInputError;
}
