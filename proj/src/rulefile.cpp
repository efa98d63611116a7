#include "parslab/rulefile.hpp"

#include <fstream>
#include <sstream>

#include "parslab/parse_error.hpp"

namespace parslab {

namespace {

struct Scanner {
  std::string_view s;
  std::size_t i = 0;
  int line = 1, col = 1;

  enum class Tok { Word, Arrow, Comma, Semi, End };
  Tok tok = Tok::End;
  std::string word;
  int tok_line = 1, tok_col = 1;

  explicit Scanner(std::string_view text) : s(text) { advance(); }

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

  static bool word_char(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
           (c >= '0' && c <= '9') || c == '_' || c == '\'' || c == '/';
  }

  // '-' belongs to a word unless it starts the arrow "->".
  bool dash_in_word() const {
    return s[i] == '-' && (i + 1 >= s.size() || s[i + 1] != '>');
  }

  void advance() {
    for (;;) {
      while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\n' || s[i] == '\r'))
        bump();
      if (i < s.size() && s[i] == '#') {
        while (i < s.size() && s[i] != '\n') bump();
        continue;
      }
      break;
    }
    tok_line = line;
    tok_col = col;
    if (i >= s.size()) {
      tok = Tok::End;
      return;
    }
    char c = s[i];
    if (c == ';') {
      tok = Tok::Semi;
      bump();
      return;
    }
    if (c == ',') {
      tok = Tok::Comma;
      bump();
      return;
    }
    if (c == '-' && !dash_in_word()) {
      bump();
      bump();
      tok = Tok::Arrow;
      return;
    }
    if (word_char(c) || c == '-') {
      word.clear();
      while (i < s.size() && (word_char(s[i]) || dash_in_word())) {
        word += s[i];
        bump();
      }
      tok = Tok::Word;
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", line, col);
  }

  std::string expect_word(const std::string& what) {
    if (tok != Tok::Word) fail("expected " + what);
    std::string w = word;
    advance();
    return w;
  }

  void expect_semi() {
    if (tok != Tok::Semi) fail("expected ';'");
    advance();
  }
};

}  // namespace

LoadedSystem parse_rule_file(std::string_view text) {
  Scanner sc(text);
  if (sc.tok != Scanner::Tok::Word || sc.word != "system")
    sc.fail("expected 'system <name> ;'");
  sc.advance();
  LoadedSystem out;
  out.name = sc.expect_word("a system name");
  sc.expect_semi();

  WalkKind generator = WalkKind::None;
  if (sc.tok == Scanner::Tok::Word && sc.word == "generator") {
    sc.advance();
    std::string kind = sc.expect_word("'walk' or 'walk-stop'");
    if (kind == "walk")
      generator = WalkKind::Walk;
    else if (kind == "walk-stop")
      generator = WalkKind::WalkStop;
    else
      throw ParseError("unknown generator '" + kind + "'", sc.tok_line, sc.tok_col);
    sc.expect_semi();
  }
  out.system = std::make_unique<TableSystem>(generator);

  while (sc.tok != Scanner::Tok::End) {
    if (sc.tok != Scanner::Tok::Word || sc.word != "rule")
      sc.fail("expected 'rule' or end of file");
    sc.advance();
    ElementId lhs = out.system->symbols().intern(sc.expect_word("an element name"));
    if (sc.tok != Scanner::Tok::Arrow) sc.fail("expected '->'");
    sc.advance();
    Rule rhs;
    for (;;) {
      int at_line = sc.tok_line, at_col = sc.tok_col;
      std::string ptext = sc.expect_word("a probability");
      auto p = Prob::parse(ptext);
      if (!p) throw ParseError("bad probability '" + ptext + "'", at_line, at_col);
      if (p->is_zero()) throw ParseError("zero probability in a rule", at_line, at_col);
      rhs.add(out.system->symbols().intern(sc.expect_word("an element name")), *p);
      if (sc.tok == Scanner::Tok::Comma) {
        sc.advance();
        continue;
      }
      break;
    }
    if (rhs.mass() != Prob::one())
      throw ParseError("rule mass is " + rhs.mass().str() + ", must be 1",
                       sc.tok_line, sc.tok_col);
    sc.expect_semi();
    out.system->add_rule(lhs, std::move(rhs));
  }
  return out;
}

LoadedSystem load_rule_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read rule file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_rule_file(buf.str());
}

std::string print_rule_file(const LoadedSystem& loaded) {
  std::string out = "system " + loaded.name + " ;\n";
  const TableSystem& sys = *loaded.system;
  if (sys.generator() == WalkKind::Walk) out += "generator walk ;\n";
  if (sys.generator() == WalkKind::WalkStop) out += "generator walk-stop ;\n";
  for (ElementId e = 0; e < sys.symbols().size(); ++e) {
    const auto* rules = sys.explicit_rules(e);
    if (!rules) continue;
    for (const Rule& r : *rules) {
      out += "rule " + sys.symbols().name(e) + " ->";
      bool first = true;
      for (const auto& [target, p] : r.entries()) {
        out += first ? " " : ", ";
        first = false;
        out += p.str() + " " + sys.symbols().name(target);
      }
      out += " ;\n";
    }
  }
  return out;
}

}  // namespace parslab
