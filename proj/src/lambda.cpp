#include "parslab/lambda.hpp"

#include <algorithm>
#include <random>

#include "parslab/checkers.hpp"
#include "parslab/parse_error.hpp"

namespace parslab {

TermPtr var(std::string name) {
  return std::make_shared<Term>(Term{Term::Kind::Var, std::move(name), nullptr, nullptr});
}
TermPtr abs(std::string binder, TermPtr body) {
  return std::make_shared<Term>(
      Term{Term::Kind::Abs, std::move(binder), std::move(body), nullptr});
}
TermPtr app(TermPtr fun, TermPtr arg) {
  return std::make_shared<Term>(
      Term{Term::Kind::App, {}, std::move(fun), std::move(arg)});
}
TermPtr choice(TermPtr left, TermPtr right) {
  return std::make_shared<Term>(
      Term{Term::Kind::Choice, {}, std::move(left), std::move(right)});
}

bool is_value(const TermPtr& t) {
  return t->kind == Term::Kind::Var || t->kind == Term::Kind::Abs;
}

namespace {

void collect_free(const TermPtr& t, std::set<std::string>& bound,
                  std::set<std::string>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
      if (!bound.count(t->name)) out.insert(t->name);
      return;
    case Term::Kind::Abs: {
      bool fresh = bound.insert(t->name).second;
      collect_free(t->sub1, bound, out);
      if (fresh) bound.erase(t->name);
      return;
    }
    case Term::Kind::App:
    case Term::Kind::Choice:
      collect_free(t->sub1, bound, out);
      collect_free(t->sub2, bound, out);
      return;
  }
}

}  // namespace

std::set<std::string> free_vars(const TermPtr& t) {
  std::set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

namespace {

TermPtr subst(const TermPtr& t, const std::string& x, const TermPtr& v,
              const std::set<std::string>& fv_v) {
  switch (t->kind) {
    case Term::Kind::Var:
      return t->name == x ? v : t;
    case Term::Kind::Abs: {
      if (t->name == x) return t;  // x is shadowed
      auto fv_body = free_vars(t->sub1);
      if (!fv_body.count(x)) return t;
      if (fv_v.count(t->name)) {
        // The binder would capture a free variable of v: rename it first.
        std::string fresh = t->name;
        do {
          fresh += '\'';
        } while (fv_v.count(fresh) || fv_body.count(fresh) || fresh == x);
        TermPtr renamed = subst(t->sub1, t->name, var(fresh), {fresh});
        return abs(fresh, subst(renamed, x, v, fv_v));
      }
      return abs(t->name, subst(t->sub1, x, v, fv_v));
    }
    case Term::Kind::App:
      return app(subst(t->sub1, x, v, fv_v), subst(t->sub2, x, v, fv_v));
    case Term::Kind::Choice:
      return choice(subst(t->sub1, x, v, fv_v), subst(t->sub2, x, v, fv_v));
  }
  throw std::logic_error("unreachable");
}

}  // namespace

TermPtr substitute(const TermPtr& m, const std::string& x, const TermPtr& v) {
  if (!is_value(v))
    throw NotAValue("substituting a non-value: " + print_term(v));
  return subst(m, x, v, free_vars(v));
}

namespace {

void key_rec(const TermPtr& t, std::vector<std::string>& env, std::string& out) {
  switch (t->kind) {
    case Term::Kind::Var: {
      for (std::size_t i = env.size(); i-- > 0;) {
        if (env[i] == t->name) {
          out += 'b';
          out += std::to_string(env.size() - 1 - i);
          out += ';';
          return;
        }
      }
      out += 'f';
      out += t->name;
      out += ';';
      return;
    }
    case Term::Kind::Abs:
      out += "L(";
      env.push_back(t->name);
      key_rec(t->sub1, env, out);
      env.pop_back();
      out += ')';
      return;
    case Term::Kind::App:
    case Term::Kind::Choice:
      out += t->kind == Term::Kind::App ? "A(" : "C(";
      key_rec(t->sub1, env, out);
      out += ',';
      key_rec(t->sub2, env, out);
      out += ')';
      return;
  }
}

}  // namespace

std::string alpha_key(const TermPtr& t) {
  std::string out;
  std::vector<std::string> env;
  key_rec(t, env, out);
  return out;
}

bool alpha_equal(const TermPtr& a, const TermPtr& b) {
  return alpha_key(a) == alpha_key(b);
}

namespace {

enum class Ctx { Top, AppLeft, AppRight, ChoiceLeft };

void print_rec(const TermPtr& t, Ctx ctx, std::string& out) {
  bool parens = false;
  switch (t->kind) {
    case Term::Kind::Var:
      break;
    case Term::Kind::Abs:
      parens = ctx != Ctx::Top;
      break;
    case Term::Kind::App:
      parens = ctx == Ctx::AppRight;
      break;
    case Term::Kind::Choice:
      parens = ctx != Ctx::Top;
      break;
  }
  if (parens) out += '(';
  switch (t->kind) {
    case Term::Kind::Var:
      out += t->name;
      break;
    case Term::Kind::Abs:
      out += '\\';
      out += t->name;
      out += ". ";
      print_rec(t->sub1, Ctx::Top, out);
      break;
    case Term::Kind::App:
      print_rec(t->sub1, Ctx::AppLeft, out);
      out += ' ';
      print_rec(t->sub2, Ctx::AppRight, out);
      break;
    case Term::Kind::Choice:
      print_rec(t->sub1, Ctx::ChoiceLeft, out);
      out += " (+) ";
      print_rec(t->sub2, Ctx::Top, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string print_term(const TermPtr& t) {
  std::string out;
  print_rec(t, Ctx::Top, out);
  return out;
}

namespace {

struct Lexer {
  std::string_view s;
  std::size_t i = 0;
  int line = 1, col = 1;

  enum class Tok { Lambda, Dot, LParen, RParen, ChoiceOp, Ident, End };
  Tok tok = Tok::End;
  std::string ident;
  int tok_line = 1, tok_col = 1;

  explicit Lexer(std::string_view text) : s(text) { advance(); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_line, tok_col);
  }

  void bump() {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++i;
  }

  static bool ident_start(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
  }
  static bool ident_char(char c) {
    return ident_start(c) || (c >= '0' && c <= '9') || c == '\'';
  }

  void advance() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r'))
      bump();
    tok_line = line;
    tok_col = col;
    if (i >= s.size()) {
      tok = Tok::End;
      return;
    }
    char c = s[i];
    if (c == '\\') {
      tok = Tok::Lambda;
      bump();
      return;
    }
    if (c == '.') {
      tok = Tok::Dot;
      bump();
      return;
    }
    if (c == '(') {
      if (i + 2 < s.size() && s[i + 1] == '+' && s[i + 2] == ')') {
        tok = Tok::ChoiceOp;
        bump();
        bump();
        bump();
        return;
      }
      tok = Tok::LParen;
      bump();
      return;
    }
    if (c == ')') {
      tok = Tok::RParen;
      bump();
      return;
    }
    if (ident_start(c)) {
      ident.clear();
      while (i < s.size() && ident_char(s[i])) {
        ident += s[i];
        bump();
      }
      tok = Tok::Ident;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }
};

TermPtr parse_term_rec(Lexer& lx);

TermPtr parse_atom(Lexer& lx) {
  if (lx.tok == Lexer::Tok::Ident) {
    auto t = var(lx.ident);
    lx.advance();
    return t;
  }
  if (lx.tok == Lexer::Tok::LParen) {
    lx.advance();
    auto t = parse_term_rec(lx);
    if (lx.tok != Lexer::Tok::RParen) lx.fail("expected ')'");
    lx.advance();
    return t;
  }
  lx.fail("expected a term");
}

TermPtr parse_app(Lexer& lx) {
  auto t = parse_atom(lx);
  while (lx.tok == Lexer::Tok::Ident || lx.tok == Lexer::Tok::LParen)
    t = app(t, parse_atom(lx));
  return t;
}

TermPtr parse_term_rec(Lexer& lx) {
  if (lx.tok == Lexer::Tok::Lambda) {
    lx.advance();
    if (lx.tok != Lexer::Tok::Ident) lx.fail("expected a binder after '\\'");
    std::string binder = lx.ident;
    lx.advance();
    if (lx.tok != Lexer::Tok::Dot) lx.fail("expected '.' after the binder");
    lx.advance();
    return abs(std::move(binder), parse_term_rec(lx));
  }
  auto t = parse_app(lx);
  if (lx.tok == Lexer::Tok::ChoiceOp) {
    lx.advance();
    return choice(t, parse_term_rec(lx));
  }
  return t;
}

}  // namespace

TermPtr parse_term(std::string_view text) {
  Lexer lx(text);
  auto t = parse_term_rec(lx);
  if (lx.tok != Lexer::Tok::End) lx.fail("trailing input after the term");
  return t;
}

namespace {

void collect_redexes(const TermPtr& t, std::vector<Dir>& path,
                     std::vector<RedexPosition>& out) {
  switch (t->kind) {
    case Term::Kind::Var:
    case Term::Kind::Abs:
      return;  // weak reduction stops here
    case Term::Kind::Choice:
      out.push_back({path, RedexKind::Choice});
      return;  // (+) operands are frozen until the choice fires
    case Term::Kind::App:
      if (t->sub1->kind == Term::Kind::Abs && is_value(t->sub2))
        out.push_back({path, RedexKind::Beta});
      path.push_back(Dir::Left);
      collect_redexes(t->sub1, path, out);
      path.back() = Dir::Right;
      collect_redexes(t->sub2, path, out);
      path.pop_back();
      return;
  }
}

TermPtr plug(const TermPtr& t, const std::vector<Dir>& path, std::size_t d,
             const TermPtr& replacement) {
  if (d == path.size()) return replacement;
  if (t->kind != Term::Kind::App)
    throw InvalidPosition("redex path leaves the application spine");
  if (path[d] == Dir::Left) return app(plug(t->sub1, path, d + 1, replacement), t->sub2);
  return app(t->sub1, plug(t->sub2, path, d + 1, replacement));
}

const TermPtr& at_path(const TermPtr& t, const std::vector<Dir>& path) {
  const TermPtr* cur = &t;
  for (Dir dir : path) {
    if ((*cur)->kind != Term::Kind::App)
      throw InvalidPosition("redex path leaves the application spine");
    cur = dir == Dir::Left ? &(*cur)->sub1 : &(*cur)->sub2;
  }
  return *cur;
}

}  // namespace

std::vector<RedexPosition> redexes(const TermPtr& t) {
  std::vector<RedexPosition> out;
  std::vector<Dir> path;
  collect_redexes(t, path, out);
  return out;
}

std::vector<std::pair<Prob, TermPtr>> step_at(const TermPtr& t,
                                              const RedexPosition& pos) {
  const TermPtr& target = at_path(t, pos.path);
  if (pos.kind == RedexKind::Beta) {
    if (target->kind != Term::Kind::App || target->sub1->kind != Term::Kind::Abs ||
        !is_value(target->sub2))
      throw InvalidPosition("no beta redex at the given position");
    TermPtr contractum =
        substitute(target->sub1->sub1, target->sub1->name, target->sub2);
    return {{Prob::one(), plug(t, pos.path, 0, contractum)}};
  }
  if (target->kind != Term::Kind::Choice)
    throw InvalidPosition("no choice redex at the given position");
  TermPtr left = plug(t, pos.path, 0, target->sub1);
  TermPtr right = plug(t, pos.path, 0, target->sub2);
  if (alpha_equal(left, right)) return {{Prob::one(), left}};
  return {{Prob::dyadic(1), left}, {Prob::dyadic(1), right}};
}

ElementId TermUniverse::intern(const TermPtr& t) {
  std::string key = alpha_key(t);
  std::scoped_lock lock(lock_);
  if (auto it = by_key_.find(key); it != by_key_.end()) return it->second;
  ElementId id = static_cast<ElementId>(terms_.size());
  terms_.push_back(t);
  by_key_.emplace(std::move(key), id);
  return id;
}

const TermPtr& TermUniverse::term(ElementId id) const {
  std::scoped_lock lock(lock_);
  return terms_.at(id);
}

namespace {

std::uint64_t fnv1a(std::string_view s, std::uint64_t seed) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

const std::vector<Rule>& LambdaSystem::rules(ElementId e) const {
  {
    std::scoped_lock lock(memo_lock_);
    if (auto it = memo_.find(e); it != memo_.end()) return it->second;
  }
  TermPtr t = universe_.term(e);
  auto rx = redexes(t);
  std::vector<std::size_t> chosen;
  if (!rx.empty()) {
    switch (strategy_) {
      case LambdaStrategy::Full:
        for (std::size_t i = 0; i < rx.size(); ++i) chosen.push_back(i);
        break;
      case LambdaStrategy::Leftmost:
        chosen.push_back(0);
        break;
      case LambdaStrategy::Rightmost:
        chosen.push_back(rx.size() - 1);
        break;
      case LambdaStrategy::Random:
        chosen.push_back(fnv1a(alpha_key(t), seed_) % rx.size());
        break;
    }
  }
  std::vector<Rule> rs;
  for (std::size_t i : chosen) {
    Rule r;
    for (const auto& [p, c] : step_at(t, rx[i])) r.add(universe_.intern(c), p);
    rs.push_back(std::move(r));
  }
  std::scoped_lock lock(memo_lock_);
  return memo_.emplace(e, std::move(rs)).first->second;
}

std::string LambdaSystem::display(ElementId e) const {
  return print_term(universe_.term(e));
}

namespace {

struct Rng {
  std::mt19937_64 g;
  explicit Rng(std::uint64_t seed) : g(seed) {}
  std::size_t next(std::size_t n) { return static_cast<std::size_t>(g() % n); }
};

std::size_t term_size(const TermPtr& t) {
  switch (t->kind) {
    case Term::Kind::Var:
      return 1;
    case Term::Kind::Abs:
      return 1 + term_size(t->sub1);
    default:
      return 1 + term_size(t->sub1) + term_size(t->sub2);
  }
}

TermPtr gen_term(Rng& rng, std::size_t budget, std::vector<std::string>& env,
                 std::size_t& counter) {
  if (budget <= 1) {
    if (!env.empty()) return var(env[rng.next(env.size())]);
    budget = 2;  // smallest closed term is \x. x
  }
  if (budget == 2 || (env.empty() && budget < 4 && rng.next(2) == 0)) {
    std::string x = "x" + std::to_string(counter++);
    env.push_back(x);
    auto body = gen_term(rng, budget - 1, env, counter);
    env.pop_back();
    return abs(std::move(x), body);
  }
  switch (rng.next(3)) {
    case 0: {  // choice gets weight 1/3
      std::size_t lb = 1 + rng.next(budget - 2);
      auto l = gen_term(rng, lb, env, counter);
      auto r = gen_term(rng, budget - 1 - lb, env, counter);
      return choice(l, r);
    }
    case 1: {
      std::size_t lb = 1 + rng.next(budget - 2);
      auto l = gen_term(rng, lb, env, counter);
      auto r = gen_term(rng, budget - 1 - lb, env, counter);
      return app(l, r);
    }
    default: {
      std::string x = "x" + std::to_string(counter++);
      env.push_back(x);
      auto body = gen_term(rng, budget - 1, env, counter);
      env.pop_back();
      return abs(std::move(x), body);
    }
  }
}

}  // namespace

std::vector<TermPtr> random_closed_terms(std::size_t count, std::size_t max_size,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<TermPtr> out;
  out.reserve(count);
  while (out.size() < count) {
    std::vector<std::string> env;
    std::size_t counter = 0;
    std::size_t budget = 3 + rng.next(max_size - 2);
    TermPtr t = gen_term(rng, budget, env, counter);
    if (term_size(t) > max_size) continue;
    out.push_back(std::move(t));
  }
  return out;
}

HarnessReport diamond_harness(TermUniverse& universe,
                              const std::vector<TermPtr>& corpus,
                              std::size_t rd_depth, const SearchLimits& limits) {
  LambdaSystem sys(universe, LambdaStrategy::Full);
  Observation obs{ObsKind::Nf};
  HarnessReport report;
  auto pred = sys.normal_pred();
  for (const auto& M : corpus) {
    ++report.terms;
    auto m0 = MultiDistribution::point(universe.intern(M));
    auto succ = successors(sys, m0, limits.successor_cap);
    for (std::size_t i = 0; i < succ.items.size(); ++i) {
      for (std::size_t j = i + 1; j < succ.items.size(); ++j) {
        ++report.divergence_pairs;
        const auto& t = succ.items[i];
        const auto& s = succ.items[j];
        bool ok = nf(t, pred).empty() && nf(s, pred).empty();
        if (ok) {
          auto st = successors(sys, t, limits.successor_cap);
          auto ss = successors(sys, s, limits.successor_cap);
          std::vector<MultiDistribution> join;
          std::set_intersection(st.items.begin(), st.items.end(), ss.items.begin(),
                                ss.items.end(), std::back_inserter(join));
          ok = !join.empty();
        }
        if (!ok) {
          ++report.violations;
          if (report.first_violation.empty())
            report.first_violation = print_term(M);
        }
      }
    }
    if (report.rd_holds && rd_depth > 0) {
      auto verdict = check_rd_global(sys, m0, obs, rd_depth, limits);
      if (!verdict.holds) {
        report.rd_holds = false;
        if (report.first_violation.empty())
          report.first_violation = print_term(M);
      }
    }
  }
  return report;
}

}  // namespace parslab
