// Command line front end for the solver library.
//
// Exit codes, shared by every subcommand:
//   0  success
//   1  input problem (malformed file, bad flags, out-of-contract config)
//   2  verification failure (an allocation flunked the requested check)
//   3  internal invariant breach (a bug in the solver, never user error)
//   4  an enumeration budget was exceeded

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "efx/core.hpp"
#include "efx/io.hpp"
#include "efx/oracle.hpp"
#include "efx/rules.hpp"
#include "efx/verifier.hpp"

namespace {

using namespace efx;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitVerify = 2;
constexpr int kExitEngine = 3;
constexpr int kExitBudget = 4;

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open instance file: " + path);
  return parse_instance(in);
}

std::ofstream open_for_write(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  return out;
}

std::string ratio_str(Ratio r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

// The guarantee tops out at factor 1, so anything above 1 (including the
// infinite factor of an envy-free result) is reported as exactly 1/1.
Ratio reported_alpha_squared(const Instance& inst,
                             const std::map<AgentId, Bundle>& allocation) {
  const Ratio raw = allocation_alpha_squared(inst, allocation);
  const Ratio one{1, 1};
  if (compare(raw, one) > 0) return one;
  return normalized(raw);
}

std::string witness_line(const Verdict& v) {
  std::string line = "violation kind=" + v.kind;
  if (v.agents.size() >= 1) line += " i=" + std::to_string(v.agents[0]);
  if (v.agents.size() >= 2) line += " j=" + std::to_string(v.agents[1]);
  if (v.good) line += " drop=" + std::to_string(*v.good);
  line += " lhs2=" + std::to_string(v.lhs_sq);
  line += " rhs2=" + std::to_string(v.rhs_sq);
  return line;
}

// Every good of the instance must sit in exactly one final bundle.
bool allocation_complete(const Instance& inst,
                         const std::map<AgentId, Bundle>& allocation) {
  std::size_t covered = 0;
  for (const auto& [agent, bundle] : allocation) covered += bundle.size();
  return covered == static_cast<std::size_t>(inst.good_count());
}

// Drives an engine to completion, streaming trace lines as they happen so a
// crashed run still leaves a parseable partial trace behind.
RunReport run_streaming(const Instance& inst, RunConfig cfg,
                        std::ostream* trace) {
  Engine engine(inst, cfg);
  if (trace) *trace << trace_header_line(inst) << std::endl;
  RunReport report;
  while (auto event = engine.step()) {
    if (trace) *trace << trace_event_line(*event, cfg.check_invariants)
                      << std::endl;
    const RuleKind rule = event->rule;
    report.events.push_back(std::move(*event));
    if (rule != RuleKind::kBasicFeasible && rule != RuleKind::kFinal) {
      ++report.iterations;
    }
  }
  report.final_allocation = engine.state().bundles_final;
  return report;
}

// ----------------------------------------------------------------- gen --

struct GenArgs {
  GenConfig cfg;
  std::string out = "-";
};

int run_gen(const GenArgs& args) {
  const Instance inst = generate(args.cfg);
  if (args.out == "-") {
    write_instance(std::cout, inst);
  } else {
    auto out = open_for_write(args.out);
    write_instance(out, inst);
  }
  return kExitOk;
}

// --------------------------------------------------------------- solve --

struct SolveArgs {
  std::string instance_path;
  std::string allocation_out;
  std::string trace_out;
  bool check = false;
};

int run_solve(const SolveArgs& args) {
  const Instance inst = load_instance(args.instance_path);
  RunConfig cfg;
  cfg.check_invariants = args.check;
  std::optional<std::ofstream> trace;
  if (!args.trace_out.empty()) trace.emplace(open_for_write(args.trace_out));
  const RunReport report =
      run_streaming(inst, cfg, trace ? &*trace : nullptr);

  if (!allocation_complete(inst, report.final_allocation)) {
    throw EngineError("solver produced an incomplete allocation");
  }
  const Verdict efx =
      is_alpha_efx(inst, report.final_allocation, EfxLevel::kInvSqrt2);
  if (!efx.ok) {
    std::cout << witness_line(efx) << '\n';
    return kExitVerify;
  }

  std::cout << "alpha2 "
            << ratio_str(reported_alpha_squared(inst, report.final_allocation))
            << '\n';
  if (!args.allocation_out.empty()) {
    auto out = open_for_write(args.allocation_out);
    write_allocation(out, inst, report.final_allocation);
  }
  return kExitOk;
}

// -------------------------------------------------------------- verify --

struct VerifyArgs {
  std::string instance_path;
  std::string allocation_path;
  std::string alpha = "inv-sqrt2";
};

int run_verify(const VerifyArgs& args) {
  const Instance inst = load_instance(args.instance_path);
  std::ifstream in(args.allocation_path);
  if (!in) {
    throw InputError("cannot open allocation file: " + args.allocation_path);
  }
  const std::map<AgentId, Bundle> allocation = parse_allocation(in, inst);
  const EfxLevel level =
      args.alpha == "1" ? EfxLevel::kOne : EfxLevel::kInvSqrt2;
  const Verdict verdict = is_alpha_efx(inst, allocation, level);
  if (!verdict.ok) {
    std::cout << witness_line(verdict) << '\n';
    return kExitVerify;
  }
  std::cout << "ok alpha=" << args.alpha << '\n';
  return kExitOk;
}

// -------------------------------------------------------------- oracle --

struct OracleArgs {
  std::string instance_path;
  std::string allocation_out;
  std::uint64_t budget = kDefaultOracleBudget;
};

int run_oracle(const OracleArgs& args) {
  const Instance inst = load_instance(args.instance_path);
  const OracleResult result = best_alpha_squared(inst, args.budget);
  std::cout << "alpha2 " << ratio_str(normalized(result.alpha_sq)) << '\n'
            << "enumerated " << result.enumerated << '\n';
  if (!args.allocation_out.empty()) {
    auto out = open_for_write(args.allocation_out);
    write_allocation(out, inst, result.best);
  }
  return kExitOk;
}

// --------------------------------------------------------------- batch --

struct BatchArgs {
  int count = 100;
  std::uint64_t seed = 0;
  int n_min = 1;
  int n_max = 6;
  int m_min = 1;
  int m_max = 12;
  Value value_max = 100;
  double share_prob = 0.5;
  int q_cap = 0;  // 0 means uncapped
  bool check = false;
  bool oracle = false;
  std::uint64_t oracle_budget = kDefaultOracleBudget;
  std::string dump_dir;
};

int run_batch(const BatchArgs& args) {
  if (args.count < 1) throw InputError("batch count must be >= 1");
  if (args.n_min < 1 || args.n_min > args.n_max) {
    throw InputError("batch needs 1 <= n-min <= n-max");
  }
  if (args.m_min > args.m_max || args.m_max < args.n_max) {
    throw InputError("batch needs m-min <= m-max and m-max >= n-max");
  }
  if (!args.dump_dir.empty()) {
    std::filesystem::create_directories(args.dump_dir);
  }

  std::map<std::string, std::uint64_t> rule_hist;
  std::optional<Ratio> min_alpha;
  int failed_verify = 0;
  int failed_engine = 0;
  int stopped_budget = 0;
  int oracle_checked = 0;
  int oracle_skipped = 0;

  for (int idx = 0; idx < args.count; ++idx) {
    const std::uint64_t case_seed = mix_seed(args.seed, static_cast<std::uint64_t>(idx));
    std::mt19937_64 meta(case_seed);
    const int n = args.n_min +
                  static_cast<int>(meta() % static_cast<std::uint64_t>(
                                                args.n_max - args.n_min + 1));
    const int m_lo = std::max(n, args.m_min);
    const int m = m_lo + static_cast<int>(meta() % static_cast<std::uint64_t>(
                                                      args.m_max - m_lo + 1));
    GenConfig gen_cfg;
    gen_cfg.agents = n;
    gen_cfg.goods = m;
    gen_cfg.value_max = args.value_max;
    gen_cfg.share_prob = args.share_prob;
    if (args.q_cap > 0) gen_cfg.q_cap = args.q_cap;
    gen_cfg.seed = meta();
    const Instance inst = generate(gen_cfg);

    const std::string case_name = [&] {
      char buf[32];
      std::snprintf(buf, sizeof buf, "case-%06d", idx);
      return std::string(buf);
    }();
    if (!args.dump_dir.empty()) {
      auto out = open_for_write(args.dump_dir + "/" + case_name + ".instance");
      write_instance(out, inst);
    }

    try {
      RunConfig cfg;
      cfg.check_invariants = args.check;
      std::optional<std::ofstream> trace;
      if (!args.dump_dir.empty()) {
        trace.emplace(
            open_for_write(args.dump_dir + "/" + case_name + ".trace"));
      }
      const RunReport report =
          run_streaming(inst, cfg, trace ? &*trace : nullptr);
      for (const RuleEvent& event : report.events) {
        ++rule_hist[rule_name(event.rule)];
      }
      if (!args.dump_dir.empty()) {
        auto alloc =
            open_for_write(args.dump_dir + "/" + case_name + ".allocation");
        write_allocation(alloc, inst, report.final_allocation);
      }

      bool ok = true;
      if (!allocation_complete(inst, report.final_allocation)) {
        std::cout << "case " << idx << " seed " << case_seed
                  << " incomplete allocation\n";
        ++failed_engine;
        ok = false;
      }
      if (ok) {
        const Verdict efx =
            is_alpha_efx(inst, report.final_allocation, EfxLevel::kInvSqrt2);
        if (!efx.ok) {
          std::cout << "case " << idx << " seed " << case_seed << " "
                    << witness_line(efx) << '\n';
          ++failed_verify;
          ok = false;
        }
      }
      if (ok) {
        const Ratio raw = allocation_alpha_squared(inst, report.final_allocation);
        if (compare(raw, Ratio{1, 2}) < 0) {
          std::cout << "case " << idx << " seed " << case_seed
                    << " alpha2 below 1/2: " << ratio_str(normalized(raw))
                    << '\n';
          ++failed_verify;
          ok = false;
        } else {
          if (!min_alpha || compare(raw, *min_alpha) < 0) min_alpha = raw;
          if (args.oracle) {
            try {
              const OracleResult best = best_alpha_squared(inst, args.oracle_budget);
              ++oracle_checked;
              if (compare(raw, best.alpha_sq) > 0) {
                std::cout << "case " << idx << " seed " << case_seed
                          << " solver alpha2 " << ratio_str(normalized(raw))
                          << " exceeds oracle best "
                          << ratio_str(normalized(best.alpha_sq)) << '\n';
                ++failed_verify;
              }
            } catch (const BudgetError&) {
              ++oracle_skipped;
            }
          }
        }
      }
    } catch (const EngineError& bug) {
      std::cout << "case " << idx << " seed " << case_seed
                << " engine-error: " << bug.what() << '\n';
      ++failed_engine;
    } catch (const BudgetError& stop) {
      std::cout << "case " << idx << " seed " << case_seed
                << " budget-stop: " << stop.what() << '\n';
      ++stopped_budget;
    }
  }

  std::cout << "instances " << args.count << '\n';
  std::cout << "rules";
  for (const char* name :
       {"BasicFeasible", "R1", "R2", "R3", "R4", "R5", "Final"}) {
    std::cout << ' ' << name << '=' << rule_hist[name];
  }
  std::cout << '\n';
  std::cout << "alpha2_min "
            << (min_alpha ? ratio_str(normalized(*min_alpha))
                          : std::string("none"))
            << '\n';
  if (args.oracle) {
    std::cout << "oracle_checked " << oracle_checked << '\n'
              << "oracle_skipped " << oracle_skipped << '\n';
  }
  std::cout << "failures " << failed_verify + failed_engine << '\n'
            << "budget_stops " << stopped_budget << '\n';

  if (failed_engine > 0) return kExitEngine;
  if (failed_verify > 0) return kExitVerify;
  if (stopped_budget > 0) return kExitBudget;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"complete (1/sqrt2)-EFX allocation solver for instances "
               "where every good matters to at most two agents"};
  app.require_subcommand(1);

  GenArgs gen_args;
  CLI::App* gen = app.add_subcommand("gen", "generate a random instance");
  gen->add_option("-n,--agents", gen_args.cfg.agents, "number of agents");
  gen->add_option("-m,--goods", gen_args.cfg.goods, "number of goods");
  gen->add_option("--value-max", gen_args.cfg.value_max,
                  "values are uniform in [1, value-max]");
  gen->add_option("--share-prob", gen_args.cfg.share_prob,
                  "chance a good is relevant to two agents");
  int gen_q_cap = 0;
  gen->add_option("--q-cap", gen_q_cap,
                  "cap on goods sharing one relevant agent set (0 = none)");
  gen->add_option("--seed", gen_args.cfg.seed, "RNG seed");
  gen->add_option("output", gen_args.out, "output path ('-' for stdout)");

  SolveArgs solve_args;
  CLI::App* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("instance", solve_args.instance_path, "instance file")
      ->required();
  solve->add_option("-o,--output", solve_args.allocation_out,
                    "write the final allocation here");
  solve->add_option("--trace", solve_args.trace_out,
                    "write a JSONL event trace here");
  solve->add_flag("--check", solve_args.check,
                  "re-verify every invariant after every event");

  VerifyArgs verify_args;
  CLI::App* verify = app.add_subcommand("verify", "check an allocation");
  verify->add_option("instance", verify_args.instance_path, "instance file")
      ->required();
  verify
      ->add_option("allocation", verify_args.allocation_path,
                   "allocation file")
      ->required();
  verify
      ->add_option("--alpha", verify_args.alpha,
                   "EFX level to check: 1 or inv-sqrt2")
      ->check(CLI::IsMember({"1", "inv-sqrt2"}));

  OracleArgs oracle_args;
  CLI::App* oracle =
      app.add_subcommand("oracle", "exhaustive best envy factor");
  oracle->add_option("instance", oracle_args.instance_path, "instance file")
      ->required();
  oracle->add_option("-o,--output", oracle_args.allocation_out,
                     "write the best allocation here");
  oracle->add_option("--budget", oracle_args.budget,
                     "max complete allocations to enumerate");

  BatchArgs batch_args;
  CLI::App* batch =
      app.add_subcommand("batch", "generate, solve and verify many instances");
  batch->add_option("--count", batch_args.count, "number of instances");
  batch->add_option("--seed", batch_args.seed, "master seed");
  batch->add_option("--n-min", batch_args.n_min, "minimum agents");
  batch->add_option("--n-max", batch_args.n_max, "maximum agents");
  batch->add_option("--m-min", batch_args.m_min, "minimum goods");
  batch->add_option("--m-max", batch_args.m_max, "maximum goods");
  batch->add_option("--value-max", batch_args.value_max, "maximum value");
  batch->add_option("--share-prob", batch_args.share_prob,
                    "chance a good is relevant to two agents");
  batch->add_option("--q-cap", batch_args.q_cap,
                    "cap on goods sharing one relevant agent set (0 = none)");
  batch->add_flag("--check", batch_args.check,
                  "re-verify every invariant after every event");
  batch->add_flag("--oracle", batch_args.oracle,
                  "cross-check against the exhaustive oracle");
  batch->add_option("--oracle-budget", batch_args.oracle_budget,
                    "max complete allocations per oracle call");
  batch->add_option("--dump-dir", batch_args.dump_dir,
                    "write per-case instance/allocation/trace files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (gen->parsed()) {
      if (gen_q_cap > 0) gen_args.cfg.q_cap = gen_q_cap;
      return run_gen(gen_args);
    }
    if (solve->parsed()) return run_solve(solve_args);
    if (verify->parsed()) return run_verify(verify_args);
    if (oracle->parsed()) return run_oracle(oracle_args);
    if (batch->parsed()) return run_batch(batch_args);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const EngineError& e) {
    std::cerr << "engine error: " << e.what() << '\n';
    return kExitEngine;
  } catch (const BudgetError& e) {
    std::cerr << "budget error: " << e.what() << '\n';
    return kExitBudget;
  }
  return kExitInput;
}
