#include "chrl/parser.hpp"

#include <cctype>
#include <functional>

namespace chrl {

namespace {

enum class Tok { Ident, Var, Int, Str, Punct, End };

struct Token {
  Tok type;
  std::string text;
  int line;
  int col;
  size_t offset;
};

struct Lexer {
  const std::string& src;
  size_t pos = 0;
  int line = 1;
  int col = 1;
  std::vector<Token> tokens;

  explicit Lexer(const std::string& s) : src(s) { run(); }

  [[noreturn]] void err(const std::string& what) {
    throw ParseError(what, line, col);
  }

  void advance(size_t n) {
    for (size_t i = 0; i < n; ++i) {
      if (pos < src.size() && src[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void push(Tok type, size_t len) {
    tokens.push_back(Token{type, src.substr(pos, len), line, col, pos});
    advance(len);
  }

  bool at(const char* s) const {
    return src.compare(pos, std::char_traits<char>::length(s), s) == 0;
  }

  void run() {
    while (pos < src.size()) {
      char c = src[pos];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance(1);
        continue;
      }
      if (c == '%') {
        while (pos < src.size() && src[pos] != '\n') advance(1);
        continue;
      }
      if (c == '"') {
        size_t end = src.find('"', pos + 1);
        if (end == std::string::npos) err("unterminated string");
        tokens.push_back(
            Token{Tok::Str, src.substr(pos + 1, end - pos - 1), line, col, pos});
        advance(end - pos + 1);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        size_t n = 1;
        while (pos + n < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos + n])))
          ++n;
        push(Tok::Int, n);
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        size_t n = 1;
        while (pos + n < src.size() &&
               (std::isalnum(static_cast<unsigned char>(src[pos + n])) ||
                src[pos + n] == '_'))
          ++n;
        bool var = std::isupper(static_cast<unsigned char>(c)) || c == '_';
        push(var ? Tok::Var : Tok::Ident, n);
        continue;
      }
      if (at("<=>")) {
        push(Tok::Punct, 3);
        continue;
      }
      if (at("==>")) {
        push(Tok::Punct, 3);
        continue;
      }
      if (at("=<") || at(">=")) {
        push(Tok::Punct, 2);
        continue;
      }
      if (at("|-")) {
        push(Tok::Punct, 2);
        continue;
      }
      if (at("-o")) {
        char nxt = pos + 2 < src.size() ? src[pos + 2] : ' ';
        if (!std::isalnum(static_cast<unsigned char>(nxt)) && nxt != '_') {
          push(Tok::Punct, 2);
          continue;
        }
      }
      static const std::string singles = "()[]{}<>,;.|@\\=+-*&!:/";
      if (singles.find(c) != std::string::npos) {
        push(Tok::Punct, 1);
        continue;
      }
      err(std::string("unexpected character '") + c + "'");
    }
    tokens.push_back(Token{Tok::End, "", line, col, pos});
  }
};

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  const CTheory* ct = nullptr;
  bool allow_or = true;
  bool strict_vars = false;  // reject the reserved fresh-name prefix

  explicit Parser(const std::string& text) : toks(Lexer(text).tokens) {}

  const Token& peek(size_t k = 0) const {
    size_t i = pos + k;
    return i < toks.size() ? toks[i] : toks.back();
  }

  [[noreturn]] void err(const std::string& what) const {
    const Token& t = peek();
    throw ParseError(what + (t.type == Tok::End ? " (at end of input)"
                                                : " (found '" + t.text + "')"),
                     t.line, t.col);
  }

  bool at_punct(const std::string& p, size_t k = 0) const {
    return peek(k).type == Tok::Punct && peek(k).text == p;
  }
  bool at_ident(const std::string& s, size_t k = 0) const {
    return peek(k).type == Tok::Ident && peek(k).text == s;
  }

  Token take() { return toks[pos < toks.size() ? pos++ : pos]; }

  void expect_punct(const std::string& p) {
    if (!at_punct(p)) err("expected '" + p + "'");
    ++pos;
  }

  std::string take_var() {
    if (peek().type != Tok::Var) err("expected a variable");
    Token t = take();
    if (strict_vars && is_reserved_var_name(t.text))
      throw ParseError("the variable prefix _V is reserved for fresh names",
                       t.line, t.col);
    note_parsed_var_name(t.text);
    return t.text;
  }

  // ---- terms ----

  Term parse_term_primary() {
    if (peek().type == Tok::Int) return Term::integer(std::stoll(take().text));
    if (at_punct("-") && peek(1).type == Tok::Int) {
      ++pos;
      return Term::integer(-std::stoll(take().text));
    }
    if (peek().type == Tok::Var) return Term::var(take_var());
    if (at_punct("(")) {
      ++pos;
      Term t = parse_term_full();
      expect_punct(")");
      return t;
    }
    if (at_punct("[")) return parse_list();
    if (peek().type == Tok::Ident) {
      std::string name = take().text;
      if (at_punct("(")) {
        ++pos;
        std::vector<Term> args;
        if (!at_punct(")")) {
          args.push_back(parse_term_full());
          while (at_punct(",")) {
            ++pos;
            args.push_back(parse_term_full());
          }
        }
        expect_punct(")");
        return Term::compound(name, std::move(args));
      }
      return Term::constant(name);
    }
    err("expected a term");
  }

  Term parse_list() {
    expect_punct("[");
    if (at_punct("]")) {
      ++pos;
      return Term::constant("[]");
    }
    std::vector<Term> items;
    items.push_back(parse_term_full());
    while (at_punct(",")) {
      ++pos;
      items.push_back(parse_term_full());
    }
    Term tail = Term::constant("[]");
    if (at_punct("|")) {
      ++pos;
      tail = parse_term_full();
    }
    expect_punct("]");
    for (size_t i = items.size(); i-- > 0;)
      tail = Term::compound(".", {items[i], tail});
    return tail;
  }

  Term parse_term_mod() {
    Term t = parse_term_primary();
    while (at_ident("mod")) {
      ++pos;
      Term rhs = parse_term_primary();
      t = Term::compound("mod", {std::move(t), std::move(rhs)});
    }
    return t;
  }

  Term parse_term_full() {
    Term t = parse_term_mod();
    while (at_punct("+") || at_punct("-")) {
      std::string op = take().text;
      Term rhs = parse_term_mod();
      t = Term::compound(op, {std::move(t), std::move(rhs)});
    }
    return t;
  }

  // ---- atoms and goals ----

  std::optional<std::string> peek_cmp() const {
    if (peek().type != Tok::Punct) return std::nullopt;
    const std::string& p = peek().text;
    if (p == "=" || p == "<" || p == ">" || p == "=<" || p == ">=") return p;
    return std::nullopt;
  }

  // A comparison/equality or a plain predicate atom. Inside formulas the
  // top level of an argument cannot use bare +/- (those are connectives
  // there); parenthesized arithmetic still works.
  Atom parse_atom_raw(bool formula_ctx = false) {
    auto arg = [&] { return formula_ctx ? parse_term_mod() : parse_term_full(); };
    Term t = arg();
    if (auto op = peek_cmp()) {
      ++pos;
      Term rhs = arg();
      return Atom{*op, {std::move(t), std::move(rhs)}};
    }
    if (t.is_var()) err("a variable is not an atom");
    if (t.is_int()) err("an integer is not an atom");
    return Atom{t.name(), t.args()};
  }

  bool atom_is_builtin(const Atom& a) const {
    if (a.symbol == kEqSymbol || a.symbol == kFalseSymbol ||
        is_arith_comparison(a.symbol))
      return true;
    return ct && ct->is_builtin(a.symbol, a.args.size());
  }

  Goal parse_goal_primary() {
    if (at_ident("true") && !at_punct("(", 1)) {
      ++pos;
      return Goal::top();
    }
    if (at_ident("false") && !at_punct("(", 1)) {
      ++pos;
      return Goal::builtin_atom(make_false());
    }
    if (at_punct("(")) {
      ++pos;
      Goal g = parse_goal_or();
      expect_punct(")");
      return g;
    }
    Atom a = parse_atom_raw();
    return atom_is_builtin(a) ? Goal::builtin_atom(std::move(a))
                              : Goal::user_atom(std::move(a));
  }

  Goal parse_goal_and() {
    Goal g = parse_goal_primary();
    while (at_punct(",")) {
      ++pos;
      g = Goal::conj(std::move(g), parse_goal_primary());
    }
    return g;
  }

  Goal parse_goal_or() {
    Goal g = parse_goal_and();
    while (at_punct(";")) {
      if (!allow_or) {
        const Token& t = peek();
        throw ModeError("disjunction is not allowed in pure mode (at " +
                        std::to_string(t.line) + ":" + std::to_string(t.col) + ")");
      }
      ++pos;
      g = Goal::disj(std::move(g), parse_goal_and());
    }
    return g;
  }

  // ---- states and configurations ----

  VarSet parse_varset() {
    expect_punct("{");
    VarSet out;
    if (!at_punct("}")) {
      out.insert(take_var());
      while (at_punct(",")) {
        ++pos;
        out.insert(take_var());
      }
    }
    expect_punct("}");
    return out;
  }

  State parse_state_block() {
    expect_punct("<");
    std::vector<Goal> sections;
    VarSet globals;
    for (;;) {
      if (at_punct("{")) {
        globals = parse_varset();
        expect_punct(">");
        break;
      }
      sections.push_back(parse_goal_and());
      expect_punct(";");
    }
    if (sections.size() == 1) return State{sections[0], std::move(globals)};
    if (sections.size() == 2) {
      auto user = split_flat(sections[0]);
      auto builtin = split_flat(sections[1]);
      if (!user || !builtin) err("ternary state sections must be flat");
      for (const Atom& a : user->builtin)
        err("user section of a ternary state contains built-in atom '" + a.symbol + "'");
      for (const Atom& a : builtin->user)
        err("built-in section of a ternary state contains user atom '" + a.symbol + "'");
      return State{Goal::conj(sections[0], sections[1]), std::move(globals)};
    }
    err("a state has two or three ';'-separated sections");
  }

  // ---- rules and program files ----

  Store parse_head_atoms() {
    Store out;
    for (;;) {
      Atom a = parse_atom_raw();
      if (atom_is_builtin(a)) err("head atom '" + a.symbol + "' is built-in");
      out.push_back(std::move(a));
      if (!at_punct(",")) break;
      ++pos;
    }
    return out;
  }

  Store goal_as_builtin_store(const Goal& g) {
    auto parts = split_flat(g);
    if (!parts) err("guard must be a flat built-in conjunction");
    if (!parts->user.empty())
      err("guard contains user atom '" + parts->user[0].symbol + "'");
    return parts->builtin;
  }

  Rule parse_rule() {
    Rule r;
    if (peek().type == Tok::Ident && at_punct("@", 1)) {
      r.id = take().text;
      ++pos;
    }
    Store first = parse_head_atoms();
    if (at_punct("\\")) {
      ++pos;
      r.kept = std::move(first);
      r.removed = parse_head_atoms();
      expect_punct("<=>");
    } else if (at_punct("<=>")) {
      ++pos;
      r.removed = std::move(first);
    } else if (at_punct("==>")) {
      ++pos;
      r.kept = std::move(first);
    } else {
      err("expected '<=>', '==>' or '\\' after the rule head");
    }
    Goal g = parse_goal_or();
    if (at_punct("|")) {
      ++pos;
      r.guard = goal_as_builtin_store(g);
      r.body = parse_goal_or();
    } else {
      r.body = std::move(g);
    }
    expect_punct(".");
    return r;
  }

  Store parse_builtin_store_clause() {
    if (at_ident("true") && !at_punct("(", 1)) {
      ++pos;
      return {};
    }
    Store out;
    for (;;) {
      Atom a = parse_atom_raw();
      if (!atom_is_builtin(a))
        err("axiom atom '" + a.symbol + "' is not built-in (declare it first)");
      out.push_back(std::move(a));
      if (!at_punct(",")) break;
      ++pos;
    }
    return out;
  }

  CTAxiom parse_axiom_clause() {
    CTAxiom ax;
    auto side = [&](VarSet& ex, Store& store) {
      if (at_ident("exists")) {
        ++pos;
        ex.insert(take_var());
        while (at_punct(",")) {
          ++pos;
          ex.insert(take_var());
        }
        expect_punct(":");
      }
      store = parse_builtin_store_clause();
    };
    side(ax.exvars_lhs, ax.lhs);
    expect_punct("==>");
    side(ax.exvars_rhs, ax.rhs);
    expect_punct(".");
    for (const std::string& v : ax.exvars_lhs)
      if (!vars_of(ax.lhs).count(v))
        err("axiom existential '" + v + "' does not occur on its side");
    for (const std::string& v : ax.exvars_rhs)
      if (!vars_of(ax.rhs).count(v))
        err("axiom existential '" + v + "' does not occur on its side");
    VarSet allowed = vars_of(ax.lhs);
    for (const std::string& v : ax.exvars_rhs) allowed.insert(v);
    for (const std::string& v : vars_of(ax.rhs))
      if (!allowed.count(v))
        err("axiom variable '" + v + "' is free on the right side only");
    return ax;
  }
};

}  // namespace

ProgramFile parse_program_file(const std::string& text) {
  ProgramFile pf;

  // First pass: mode and built-in declarations, so atom classification and
  // disjunction checks are independent of clause order.
  {
    Parser scan(text);
    scan.strict_vars = true;
    while (scan.peek().type != Tok::End) {
      if (scan.at_ident("mode")) {
        ++scan.pos;
        if (scan.at_ident("vee"))
          pf.program.mode = Mode::Vee;
        else if (scan.at_ident("pure"))
          pf.program.mode = Mode::Pure;
        else
          scan.err("mode is 'pure' or 'vee'");
        ++scan.pos;
        scan.expect_punct(".");
        continue;
      }
      if (scan.at_ident("builtin")) {
        ++scan.pos;
        for (;;) {
          if (scan.peek().type != Tok::Ident) scan.err("expected a symbol name");
          std::string name = scan.take().text;
          scan.expect_punct("/");
          if (scan.peek().type != Tok::Int) scan.err("expected an arity");
          int arity = std::stoi(scan.take().text);
          pf.ct.declared_builtins.emplace_back(name, arity);
          if (!scan.at_punct(",")) break;
          ++scan.pos;
        }
        scan.expect_punct(".");
        continue;
      }
      // Skip to the end of this clause.
      while (scan.peek().type != Tok::End && !scan.at_punct(".")) ++scan.pos;
      if (scan.at_punct(".")) ++scan.pos;
    }
  }

  Parser p(text);
  p.ct = &pf.ct;
  p.strict_vars = true;
  p.allow_or = pf.program.mode == Mode::Vee;
  while (p.peek().type != Tok::End) {
    if (p.at_ident("mode") || p.at_ident("builtin")) {
      while (p.peek().type != Tok::End && !p.at_punct(".")) ++p.pos;
      p.expect_punct(".");
      continue;
    }
    if (p.at_ident("confluent")) {
      ++p.pos;
      if (p.at_ident("true"))
        pf.program.confluent = true;
      else if (p.at_ident("false"))
        pf.program.confluent = false;
      else
        p.err("confluent is 'true' or 'false'");
      ++p.pos;
      p.expect_punct(".");
      continue;
    }
    if (p.at_ident("axiom")) {
      ++p.pos;
      pf.ct.axioms.push_back(p.parse_axiom_clause());
      continue;
    }
    if (p.at_ident("query")) {
      ++p.pos;
      if (p.peek().type != Tok::Ident) p.err("expected a query name");
      std::string name = p.take().text;
      p.expect_punct(":");
      State s = p.parse_state_block();
      p.expect_punct(".");
      if (pf.find_query(name)) p.err("duplicate query name '" + name + "'");
      pf.queries.emplace_back(name, std::move(s));
      continue;
    }
    Rule r = p.parse_rule();
    if (!r.id.empty() && pf.program.find_rule(r.id))
      p.err("duplicate rule id '" + r.id + "'");
    pf.program.rules.push_back(std::move(r));
  }
  // Unnamed rules get positional identifiers.
  int anon = 0;
  for (Rule& r : pf.program.rules)
    if (r.id.empty()) {
      std::string id;
      do {
        id = "r" + std::to_string(++anon);
      } while (pf.program.find_rule(id));
      r.id = id;
    }
  return pf;
}

Term parse_term(const std::string& text) {
  Parser p(text);
  Term t = p.parse_term_full();
  if (p.peek().type != Tok::End) p.err("trailing input after term");
  return t;
}

State parse_state(const std::string& text, const CTheory& ct) {
  Parser p(text);
  p.ct = &ct;
  State s = p.parse_state_block();
  if (p.peek().type != Tok::End) p.err("trailing input after state");
  return s;
}

Configuration parse_config(const std::string& text, const CTheory& ct) {
  Parser p(text);
  p.ct = &ct;
  Configuration c;
  c.members.push_back(p.parse_state_block());
  while (p.at_punct(";")) {
    ++p.pos;
    c.members.push_back(p.parse_state_block());
  }
  if (p.peek().type != Tok::End) p.err("trailing input after configuration");
  return c;
}

Goal parse_goal(const std::string& text, const CTheory& ct, bool allow_or) {
  Parser p(text);
  p.ct = &ct;
  p.allow_or = allow_or;
  Goal g = p.parse_goal_or();
  if (p.peek().type != Tok::End) p.err("trailing input after goal");
  return g;
}

namespace {

struct FormulaParser : Parser {
  using Parser::Parser;

  LLFormula parse_formula_top() {
    if (at_ident("forall") || at_ident("exists")) {
      bool fa = at_ident("forall");
      ++pos;
      std::string v = take_var();
      expect_punct(".");
      LLFormula body = parse_formula_top();
      return fa ? LLFormula::forall(v, std::move(body))
                : LLFormula::exists(v, std::move(body));
    }
    return parse_lolli();
  }

  LLFormula parse_lolli() {
    LLFormula l = parse_additive();
    if (at_punct("-o")) {
      ++pos;
      LLFormula r = parse_lolli();
      return LLFormula::lolli(std::move(l), std::move(r));
    }
    return l;
  }

  LLFormula parse_additive() {
    LLFormula l = parse_tensor();
    if (at_punct("+") || at_punct("&")) {
      std::string op = peek().text;
      ++pos;
      LLFormula r = parse_additive_chain(op);
      return op == "+" ? LLFormula::plus(std::move(l), std::move(r))
                       : LLFormula::with(std::move(l), std::move(r));
    }
    return l;
  }

  LLFormula parse_additive_chain(const std::string& op) {
    LLFormula l = parse_tensor();
    if (at_punct("+") || at_punct("&")) {
      if (peek().text != op)
        err("mixing '+' and '&' requires parentheses");
      ++pos;
      LLFormula r = parse_additive_chain(op);
      return op == "+" ? LLFormula::plus(std::move(l), std::move(r))
                       : LLFormula::with(std::move(l), std::move(r));
    }
    return l;
  }

  LLFormula parse_tensor() {
    LLFormula l = parse_unary();
    if (at_punct("*")) {
      ++pos;
      LLFormula r = parse_tensor();
      return LLFormula::tensor(std::move(l), std::move(r));
    }
    return l;
  }

  LLFormula parse_unary() {
    if (at_punct("!")) {
      ++pos;
      // !forall X. ... binds the quantifier body maximally.
      if (at_ident("forall") || at_ident("exists"))
        return LLFormula::bang(parse_formula_top());
      return LLFormula::bang(parse_unary());
    }
    if (peek().type == Tok::Int && peek().text == "1" && !is_term_context()) {
      ++pos;
      return LLFormula::one();
    }
    if (peek().type == Tok::Int && peek().text == "0" && !is_term_context()) {
      ++pos;
      return LLFormula::zero();
    }
    if (at_ident("top") && !at_punct("(", 1)) {
      ++pos;
      return LLFormula::top();
    }
    if (at_punct("(")) {
      ++pos;
      LLFormula f = parse_formula_top();
      expect_punct(")");
      return f;
    }
    Atom a = parse_atom_raw(true);
    return LLFormula::atom(a.symbol, a.args);
  }

  // '1'/'0' start a formula constant unless followed by a comparison, in
  // which case they begin an integer atom like 1 < X.
  bool is_term_context() const {
    if (peek(1).type != Tok::Punct) return false;
    const std::string& p = peek(1).text;
    return p == "=" || p == "<" || p == ">" || p == "=<" || p == ">=";
  }

  Sequent parse_sequent_top() {
    Sequent s;
    if (!at_punct("|-")) {
      s.antecedent.push_back(parse_formula_top());
      while (at_punct(",")) {
        ++pos;
        s.antecedent.push_back(parse_formula_top());
      }
    }
    expect_punct("|-");
    s.consequent = parse_formula_top();
    return s;
  }
};

struct ProofParser : Parser {
  using Parser::Parser;

  // Rule names may contain dashes; join contiguous tokens.
  std::string take_dashed_name() {
    if (peek().type != Tok::Ident) err("expected a rule name");
    Token first = take();
    std::string name = first.text;
    size_t end = first.offset + first.text.size();
    while ((at_punct("-") || peek().type == Tok::Ident ||
            peek().type == Tok::Int) &&
           peek().offset == end) {
      Token t = take();
      name += t.text;
      end = t.offset + t.text.size();
    }
    return name;
  }

  ProofTree parse_node() {
    expect_punct("(");
    ProofTree node;
    node.rule = take_dashed_name();
    expect_punct("(");
    if (!at_ident("sequent")) err("expected (sequent \"...\")");
    ++pos;
    if (peek().type != Tok::Str) err("expected a quoted sequent");
    node.conclusion = parse_sequent(take().text);
    expect_punct(")");
    if (at_punct("(") && at_ident("inst", 1)) {
      pos += 2;
      while (!at_punct(")")) {
        if (peek().type != Tok::Ident) err("expected an inst key");
        std::string key = take().text;
        expect_punct("=");
        if (key == "term") {
          if (peek().type != Tok::Str) err("inst term must be quoted");
          node.inst.term = parse_term(take().text);
        } else if (key == "var") {
          node.inst.var = take_var();
        } else if (key == "rule") {
          node.inst.rule_id = take_dashed_name();
        } else {
          err("unknown inst key '" + key + "'");
        }
      }
      ++pos;
    }
    while (at_punct("(")) node.premises.push_back(parse_node());
    expect_punct(")");
    return node;
  }
};

}  // namespace

LLFormula parse_formula(const std::string& text) {
  FormulaParser p(text);
  LLFormula f = p.parse_formula_top();
  if (p.peek().type != Tok::End) p.err("trailing input after formula");
  return f;
}

Sequent parse_sequent(const std::string& text) {
  FormulaParser p(text);
  Sequent s = p.parse_sequent_top();
  if (p.peek().type != Tok::End) p.err("trailing input after sequent");
  return s;
}

ProofTree parse_proof(const std::string& text) {
  ProofParser p(text);
  ProofTree t = p.parse_node();
  if (p.peek().type != Tok::End) p.err("trailing input after proof");
  return t;
}

}  // namespace chrl
