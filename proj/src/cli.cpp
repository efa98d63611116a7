#include "parslab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "parslab/asymptotics.hpp"
#include "parslab/checkers.hpp"
#include "parslab/lambda.hpp"
#include "parslab/parse_error.hpp"
#include "parslab/records.hpp"
#include "parslab/rulefile.hpp"

namespace parslab {

namespace {

constexpr int kOk = 0;
constexpr int kRefuted = 1;
constexpr int kSyntax = 2;
constexpr int kUsage = 3;

struct CliError {
  std::string message;
};

struct Opts {
  std::string file, lambda_file, term_text;
  std::string start, dist;
  std::string policy, vs = "full";
  std::string property;
  std::string obs = "nf";
  std::string out_path, witness_path;
  std::size_t depth = 8;
  std::size_t cap = 10000;
  bool all = false;
  bool decimal = false;
};

std::string show_multi(const ParsSystem& sys, const MultiDistribution& m) {
  std::string s = "[";
  bool first = true;
  for (const auto& [p, e] : m.pairs()) {
    if (!first) s += ", ";
    first = false;
    s += p.str() + " " + sys.display(e);
  }
  return s + "]";
}

std::string show_sub(const ParsSystem& sys, const SubDistribution& d) {
  ObsValue v;
  v.kind = ObsKind::Nf;
  v.dist = d;
  return render_obs(sys, v);
}

std::string dec(const Rat& r, bool on) {
  if (!on) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, " (~%.6f)", r.approx());
  return buf;
}

// Inputs resolved to a live system plus the starting distribution. The
// vectors own whatever policy systems a command builds on top.
struct Session {
  LoadedSystem loaded;
  std::unique_ptr<TermUniverse> universe;
  std::vector<std::unique_ptr<ParsSystem>> owned;
  ParsSystem* base = nullptr;
  std::string name;
  bool lambda = false;
  MultiDistribution start;
};

MultiDistribution parse_dist(TableSystem& sys, const std::string& text) {
  std::vector<std::pair<Prob, ElementId>> pairs;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    std::istringstream ps(part);
    std::string ptext, name, extra;
    if (!(ps >> ptext >> name) || (ps >> extra))
      throw CliError{"bad distribution entry '" + part +
                     "', expected '<prob> <element>'"};
    auto p = Prob::parse(ptext);
    if (!p) throw CliError{"bad probability '" + ptext + "'"};
    auto id = sys.resolve(name);
    if (!id) throw CliError{"unknown element '" + name + "'"};
    pairs.emplace_back(*p, *id);
  }
  if (pairs.empty()) throw CliError{"empty distribution"};
  return MultiDistribution(std::move(pairs));
}

LambdaStrategy parse_lambda_strategy(const std::string& token,
                                     std::uint64_t* seed) {
  if (token == "full") return LambdaStrategy::Full;
  if (token == "leftmost") return LambdaStrategy::Leftmost;
  if (token == "rightmost") return LambdaStrategy::Rightmost;
  if (token.rfind("random(", 0) == 0 && token.back() == ')') {
    std::string inner = token.substr(7, token.size() - 8);
    try {
      *seed = std::stoull(inner);
    } catch (const std::exception&) {
      throw CliError{"bad seed in '" + token + "'"};
    }
    return LambdaStrategy::Random;
  }
  throw CliError{"unknown policy '" + token +
                 "' (lambda policies: full, leftmost, rightmost, random(<seed>))"};
}

Session build_session(const Opts& o, bool need_start) {
  int sources = !o.file.empty() + !o.lambda_file.empty() + !o.term_text.empty();
  if (sources != 1)
    throw CliError{"give exactly one of --file, --lambda, --term"};

  Session s;
  if (!o.file.empty()) {
    s.loaded = load_rule_file(o.file);
    s.base = s.loaded.system.get();
    s.name = s.loaded.name;
    if (need_start) {
      if (!o.start.empty() == !o.dist.empty())
        throw CliError{"give exactly one of --start, --dist"};
      if (!o.start.empty()) {
        auto id = s.loaded.system->resolve(o.start);
        if (!id) throw CliError{"unknown element '" + o.start + "'"};
        s.start = MultiDistribution::point(*id);
      } else {
        s.start = parse_dist(*s.loaded.system, o.dist);
      }
    }
    return s;
  }

  s.lambda = true;
  if (!o.start.empty() || !o.dist.empty())
    throw CliError{"--start/--dist apply to rule files; lambda runs start at the term"};
  std::string text;
  if (!o.term_text.empty()) {
    text = o.term_text;
    s.name = "lambda";
  } else {
    std::ifstream in(o.lambda_file, std::ios::binary);
    if (!in) throw CliError{"cannot read " + o.lambda_file};
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
    s.name = o.lambda_file;
  }
  TermPtr t = parse_term(text);
  s.universe = std::make_unique<TermUniverse>();
  auto full = std::make_unique<LambdaSystem>(*s.universe, LambdaStrategy::Full);
  s.base = full.get();
  s.owned.push_back(std::move(full));
  if (need_start) s.start = MultiDistribution::point(s.universe->intern(t));
  return s;
}

// A single-sequence driver: the system to run under plus its resolver.
struct Driver {
  ParsSystem* sys;
  ChoiceResolver choose;
};

Driver make_driver(Session& s, const std::string& token_in) {
  std::string token = token_in;
  if (token.empty()) token = s.lambda ? "leftmost" : "all-r0";
  if (s.lambda) {
    if (token == "full")
      throw CliError{"'full' is not a single-sequence policy; pick leftmost, "
                     "rightmost or random(<seed>)"};
    std::uint64_t seed = 0;
    auto strat = parse_lambda_strategy(token, &seed);
    auto sys = std::make_unique<LambdaSystem>(*s.universe, strat, seed);
    Driver d{sys.get(), uniform_rule(*sys, 0)};
    s.owned.push_back(std::move(sys));
    return d;
  }
  if (token == "greedy-nnorm") return {s.base, greedy_nnorm(*s.base)};
  if (token.rfind("all-r", 0) == 0) {
    try {
      return {s.base, uniform_rule(*s.base, std::stoul(token.substr(5)))};
    } catch (const std::exception&) {
      throw CliError{"bad rule index in '" + token + "'"};
    }
  }
  if (token.rfind("lex(", 0) == 0 && token.back() == ')') {
    std::string bits = token.substr(4, token.size() - 5);
    try {
      return {s.base, lex_bits(*s.base, bits)};
    } catch (const std::invalid_argument& e) {
      throw CliError{e.what()};
    }
  }
  throw CliError{"unknown policy '" + token +
                 "' (rule-file policies: all-r<k>, lex(<bits>), greedy-nnorm)"};
}

// Per-element fixed choice of the rule with the most settled mass.
std::unique_ptr<ParsSystem> greedy_system(const ParsSystem& base) {
  const ParsSystem* b = &base;
  return std::make_unique<StrategySystem>(
      base, [b](ElementId e, std::size_t) {
        const auto& rs = b->rules(e);
        std::size_t best = 0;
        Rat best_mass;
        for (std::size_t j = 0; j < rs.size(); ++j) {
          Rat settled;
          for (const auto& [target, q] : rs[j].entries())
            if (b->is_normal(target)) settled = settled + q.rat();
          if (j == 0 || settled > best_mass) {
            best = j;
            best_mass = settled;
          }
        }
        return std::vector<std::size_t>{best};
      });
}

// The sub-relation a policy denotes, for the relation-level checkers.
ParsSystem* make_policy_system(Session& s, const std::string& token_in) {
  std::string token = token_in.empty() ? "full" : token_in;
  if (token == "full") return s.base;
  if (s.lambda) {
    std::uint64_t seed = 0;
    auto strat = parse_lambda_strategy(token, &seed);
    auto sys = std::make_unique<LambdaSystem>(*s.universe, strat, seed);
    ParsSystem* out = sys.get();
    s.owned.push_back(std::move(sys));
    return out;
  }
  if (token == "greedy-nnorm") {
    s.owned.push_back(greedy_system(*s.base));
    return s.owned.back().get();
  }
  if (token.rfind("all-r", 0) == 0) {
    std::size_t k = 0;
    try {
      k = std::stoul(token.substr(5));
    } catch (const std::exception&) {
      throw CliError{"bad rule index in '" + token + "'"};
    }
    s.owned.push_back(strategy_single_rule(*s.base, k));
    return s.owned.back().get();
  }
  throw CliError{"policy '" + token + "' does not name a sub-relation"};
}

struct Sink {
  std::optional<std::ofstream> file;
  void open(const std::string& path) {
    if (path.empty()) return;
    file.emplace(path, std::ios::binary);
    if (!*file) throw CliError{"cannot write " + path};
  }
  void emit(const Json& j) {
    if (file) *file << j.dump() << '\n';
  }
};

int do_run(const Opts& o, std::ostream& out) {
  Session s = build_session(o, true);
  Driver d = make_driver(s, o.policy);
  Sink sink;
  sink.open(o.out_path);
  auto trace = run(*d.sys, s.start, d.choose, o.depth);
  out << "system " << s.name << ", policy "
      << (o.policy.empty() ? (s.lambda ? "leftmost" : "all-r0") : o.policy)
      << ", depth " << o.depth << "\n";
  for (std::size_t n = 0; n < trace.states.size(); ++n) {
    out << "step " << n << ": " << show_multi(*d.sys, trace.states[n]) << " | nf "
        << show_sub(*d.sys, trace.nf_states[n]) << " | nnorm "
        << trace.nnorm_states[n].str() << dec(trace.nnorm_states[n].rat(), o.decimal)
        << "\n";
    Json rec = step_record(*d.sys, trace, n);
    rec["record"] = "step";
    rec["system"] = s.name;
    sink.emit(rec);
  }
  return kOk;
}

int do_limit(const Opts& o, std::ostream& out) {
  Session s = build_session(o, true);
  Sink sink;
  sink.open(o.out_path);
  if (!o.all) {
    Driver d = make_driver(s, o.policy);
    auto trace = run(*d.sys, s.start, d.choose, o.depth);
    auto b = limit_bound(*d.sys, trace);
    out << "lower bound after " << b.depth << " steps: " << show_sub(*d.sys, b.lower)
        << "\n";
    out << "residual: " << b.residual.str() << dec(b.residual, o.decimal) << "\n";
    Json rec = to_json(*d.sys, b);
    rec["record"] = "bound";
    rec["system"] = s.name;
    sink.emit(rec);
    return kOk;
  }

  ParsSystem* sys = make_policy_system(s, o.policy);
  SearchLimits limits{o.cap, o.cap};
  auto report = classify(*sys, s.start, o.depth, limits);
  out << "explored " << report.path_count << " endpoints at depth " << report.depth
      << " (truncated: " << (report.truncated ? "yes" : "no") << ")\n";
  for (const auto& b : report.bounds) {
    out << "bound: " << show_sub(*sys, b.lower) << " residual " << b.residual.str()
        << dec(b.residual, o.decimal) << "\n";
    Json rec = to_json(*sys, b);
    rec["record"] = "bound";
    rec["system"] = s.name;
    sink.emit(rec);
  }
  out << "unique limit: " << un_verdict_name(report.un) << "\n";
  if (report.un_witness)
    out << "witness: bound " << report.un_witness->first << " vs bound "
        << report.un_witness->second << "\n";
  out << "residual range: [" << report.min_residual.str() << ", "
      << report.max_residual.str() << "]\n";
  out << "all paths settled: " << (report.sn_refuted_at_depth ? "no" : "yes") << "\n";
  out << "best settled mass: " << report.wn_best.str()
      << dec(report.wn_best, o.decimal) << "\n";
  Json rec = to_json(*sys, report);
  rec["record"] = "classify";
  rec["system"] = s.name;
  sink.emit(rec);
  return kOk;
}

int do_meantime(const Opts& o, std::ostream& out) {
  Session s = build_session(o, true);
  Driver d = make_driver(s, o.policy);
  Sink sink;
  sink.open(o.out_path);
  auto trace = run(*d.sys, s.start, d.choose, o.depth);
  MeanTimeBound b;
  try {
    b = meantime_bound(*d.sys, trace);
  } catch (const std::invalid_argument& e) {
    throw CliError{e.what()};
  }
  out << "mean-time partial sum after " << b.depth << " steps: " << b.partial.str()
      << dec(b.partial, o.decimal) << "\n";
  out << "plateau: " << (b.plateau ? "yes" : "no") << "\n";
  Json rec{{"record", "meantime"},
           {"system", s.name},
           {"depth", b.depth},
           {"partial", b.partial.str()},
           {"plateau", b.plateau}};
  sink.emit(rec);
  return kOk;
}

void print_verdict(std::ostream& out, const ParsSystem& sys, const CheckVerdict& v) {
  if (v.holds) {
    out << "verdict: holds ("
        << (v.conclusive ? "conclusive"
                         : "evidence up to depth " + std::to_string(v.checked_depth))
        << ")\n";
  } else if (v.conclusive) {
    out << "verdict: refuted (conclusive)\n";
  } else {
    out << "verdict: not established (search exhausted at depth "
        << std::to_string(v.checked_depth) << ")\n";
  }
  if (v.truncated) out << "note: enumeration hit the cap; results are partial\n";
  if (v.witness) {
    const auto& w = *v.witness;
    out << "witness (step " << w.step << "):\n";
    out << "  origin: " << show_multi(sys, w.origin) << "\n";
    out << "  left:   " << show_multi(sys, w.left) << " | obs " << w.left_obs << "\n";
    out << "  right:  " << show_multi(sys, w.right) << " | obs " << w.right_obs
        << "\n";
    out << "  note: " << w.note << "\n";
  }
}

int do_check(const Opts& o, std::ostream& out) {
  if (o.obs != "nf" && o.obs != "nnorm")
    throw CliError{"unknown observation '" + o.obs + "' (nf or nnorm)"};
  Observation obs{o.obs == "nf" ? ObsKind::Nf : ObsKind::Nnorm};
  SearchLimits limits{o.cap, o.cap};

  Session s = build_session(o, true);
  Sink sink;
  sink.open(o.out_path);

  CheckVerdict v;
  ParsSystem* shown = s.base;
  if (o.property == "locally-better") {
    ParsSystem* better = make_policy_system(s, o.policy);
    ParsSystem* base = make_policy_system(s, o.vs);
    v = check_locally_better(*better, *base, s.start, obs, o.depth, limits);
    shown = base;
  } else {
    ParsSystem* sys = make_policy_system(s, o.policy);
    shown = sys;
    if (o.property == "diamond") {
      std::vector<ElementId> roots;
      for (const auto& [p, e] : s.start.pairs()) roots.push_back(e);
      auto elems = reachable_elements(*sys, roots, o.depth, o.cap);
      v = check_pointed_diamond(*sys, elems, obs, limits);
    } else if (o.property == "local-rd") {
      v = check_local_rd(*sys, s.start, obs, o.depth, limits);
    } else if (o.property == "rd") {
      v = check_rd_global(*sys, s.start, obs, o.depth, limits);
    } else if (o.property == "skew") {
      v = check_skew_confluence(*sys, s.start, obs, o.depth, limits);
    } else {
      throw CliError{"unknown property '" + o.property +
                     "' (diamond, local-rd, rd, locally-better, skew)"};
    }
  }

  out << "check " << o.property << " on " << s.name << " (obs " << o.obs
      << ", depth " << o.depth << ")\n";
  print_verdict(out, *shown, v);
  Json rec = to_json(*shown, v);
  rec["record"] = "check";
  rec["system"] = s.name;
  rec["property"] = o.property;
  rec["obs"] = o.obs;
  sink.emit(rec);
  return v.holds || !v.conclusive ? kOk : kRefuted;
}

int do_replay(const Opts& o, std::ostream& out) {
  if (o.obs != "nf" && o.obs != "nnorm")
    throw CliError{"unknown observation '" + o.obs + "' (nf or nnorm)"};
  if (o.file.empty()) throw CliError{"replay needs --file"};
  Observation obs{o.obs == "nf" ? ObsKind::Nf : ObsKind::Nnorm};

  Session s = build_session(o, false);
  std::ifstream in(o.witness_path, std::ios::binary);
  if (!in) throw CliError{"cannot read " + o.witness_path};
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw CliError{std::string("bad witness JSON: ") + e.what()};
  }
  if (j.contains("witness")) j = j.at("witness");

  DivergenceWitness w;
  try {
    w = witness_from_json(*s.loaded.system, j);
  } catch (const std::invalid_argument& e) {
    throw CliError{e.what()};
  }

  // Reachability within the recorded step count, under the full relation.
  std::set<MultiDistribution> seen{w.origin};
  std::set<MultiDistribution> frontier{w.origin};
  for (std::size_t k = 0; k < w.step; ++k) {
    std::set<MultiDistribution> next;
    for (const auto& m : frontier) {
      auto succ = successors(*s.base, m, o.cap);
      next.insert(succ.items.begin(), succ.items.end());
    }
    frontier = std::move(next);
    seen.insert(frontier.begin(), frontier.end());
  }
  bool left_ok = seen.count(w.left) > 0;
  bool right_ok = seen.count(w.right) > 0;
  std::string left_obs = render_obs(*s.base, observe(obs, *s.base, w.left));
  std::string right_obs = render_obs(*s.base, observe(obs, *s.base, w.right));
  bool obs_ok = left_obs == w.left_obs && right_obs == w.right_obs;

  if (left_ok && right_ok && obs_ok) {
    out << "witness replays: both states reached within " << w.step
        << " step(s); observations match\n";
    return kOk;
  }
  if (!left_ok) out << "left state not reachable within " << w.step << " step(s)\n";
  if (!right_ok) out << "right state not reachable within " << w.step << " step(s)\n";
  if (!obs_ok)
    out << "recorded observations (" << w.left_obs << ", " << w.right_obs
        << ") do not match recomputed (" << left_obs << ", " << right_obs << ")\n";
  return kRefuted;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"exact-arithmetic laboratory for probabilistic abstract rewriting"};
  app.name("parslab");
  app.require_subcommand(1);

  Opts o;
  auto add_source = [&](CLI::App* cmd) {
    cmd->add_option("--file", o.file, "rule file");
    cmd->add_option("--lambda", o.lambda_file, "file with one lambda term");
    cmd->add_option("--term", o.term_text, "lambda term given inline");
  };
  auto add_start = [&](CLI::App* cmd) {
    cmd->add_option("--start", o.start, "starting element");
    cmd->add_option("--dist", o.dist,
                    "starting distribution, e.g. '1/2 a, 1/2 b'");
  };
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--depth", o.depth, "number of lifted steps / search horizon");
    cmd->add_option("--cap", o.cap, "successor and frontier cap");
    cmd->add_option("--out", o.out_path, "append JSONL records to this file");
    cmd->add_flag("--decimal", o.decimal, "also show decimal approximations");
  };

  auto* cmd_run = app.add_subcommand("run", "drive one rewrite sequence");
  add_source(cmd_run);
  add_start(cmd_run);
  add_common(cmd_run);
  cmd_run->add_option("--policy", o.policy,
                      "all-r<k> | lex(<bits>) | greedy-nnorm; lambda: leftmost | "
                      "rightmost | random(<seed>)");

  auto* cmd_limit = app.add_subcommand("limit", "bound the limit distribution");
  add_source(cmd_limit);
  add_start(cmd_limit);
  add_common(cmd_limit);
  cmd_limit->add_option("--policy", o.policy, "sequence policy, or sub-relation with --all");
  cmd_limit->add_flag("--all", o.all, "explore every sequence and classify");

  auto* cmd_mean = app.add_subcommand("meantime", "partial sums of expected steps");
  add_source(cmd_mean);
  add_start(cmd_mean);
  add_common(cmd_mean);
  cmd_mean->add_option("--policy", o.policy, "sequence policy");

  auto* cmd_check = app.add_subcommand("check", "depth-bounded property checkers");
  add_source(cmd_check);
  add_start(cmd_check);
  add_common(cmd_check);
  cmd_check->add_option("--property", o.property,
                        "diamond | local-rd | rd | locally-better | skew")
      ->required();
  cmd_check->add_option("--obs", o.obs, "nf (default) or nnorm");
  cmd_check->add_option("--policy", o.policy, "sub-relation to check (default full)");
  cmd_check->add_option("--vs", o.vs, "baseline sub-relation for locally-better");

  auto* cmd_replay = app.add_subcommand("replay", "re-run a recorded witness");
  add_source(cmd_replay);
  add_common(cmd_replay);
  cmd_replay->add_option("--witness", o.witness_path, "witness JSON file")->required();
  cmd_replay->add_option("--obs", o.obs, "nf (default) or nnorm");

  std::vector<const char*> argv;
  argv.push_back("parslab");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (cmd_run->parsed()) return do_run(o, out);
    if (cmd_limit->parsed()) return do_limit(o, out);
    if (cmd_mean->parsed()) return do_meantime(o, out);
    if (cmd_check->parsed()) return do_check(o, out);
    if (cmd_replay->parsed()) return do_replay(o, out);
    err << "no subcommand\n";
    return kUsage;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return kSyntax;
  } catch (const CliError& e) {
    err << e.message << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return kUsage;
  }
}

}  // namespace parslab
