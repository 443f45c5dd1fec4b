#include "agentarch/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <optional>
#include <set>

#include "agentarch/errors.hpp"

namespace agentarch {

namespace {

// ---------------------------------------------------------------- lexing ---

struct Token {
  enum class Kind { Ident, Number, String, Punct, End };
  Kind kind = Kind::End;
  std::string text;  // ident spelling, raw number text, unescaped string content, punct spelling
  double num = 0.0;  // Number only
  int line = 1, col = 1;
};

std::string token_desc(const Token& t) {
  switch (t.kind) {
    case Token::Kind::End: return "end of file";
    case Token::Kind::String: return "string \"" + t.text + "\"";
    default: return "'" + t.text + "'";
  }
}

bool is_reserved(const std::string& s) {
  static const std::set<std::string> words = {
      "architecture", "morphism", "env", "syntax", "knowledge", "pattern", "interface",
      "constraints", "types", "generators", "equations", "eq", "support", "bindings", "scope",
      "params", "display", "states", "actions", "gamma", "start", "kernel", "wires", "in", "out",
      "edges", "diagram", "id", "copy", "merge", "unit", "counit", "cap", "cup", "sym"};
  return words.count(s) > 0;
}

std::vector<Token> lex(const std::string& text, const std::string& file) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  const size_t n = text.size();
  auto bump = [&](char c) {
    if (c == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  };
  auto advance_to = [&](size_t j) {
    for (; i < j; ++i) bump(text[i]);
  };
  auto is_digit = [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; };

  while (i < n) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      bump(c);
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && text[i + 1] == '/') {
      while (i < n && text[i] != '\n') advance_to(i + 1);
      continue;
    }

    Token t;
    t.line = line;
    t.col = col;

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_')) ++j;
      t.kind = Token::Kind::Ident;
      t.text = text.substr(i, j - i);
      advance_to(j);
      out.push_back(std::move(t));
      continue;
    }

    const bool neg_number = c == '-' && i + 1 < n && (is_digit(text[i + 1]) || text[i + 1] == '.');
    if (is_digit(c) || neg_number) {
      size_t j = i + (c == '-' ? 1 : 0);
      while (j < n && is_digit(text[j])) ++j;
      if (j < n && text[j] == '.') {
        ++j;
        while (j < n && is_digit(text[j])) ++j;
      }
      if (j < n && (text[j] == 'e' || text[j] == 'E')) {
        size_t k = j + 1;
        if (k < n && (text[k] == '+' || text[k] == '-')) ++k;
        size_t d = k;
        while (d < n && is_digit(text[d])) ++d;
        if (d > k) j = d;  // exponent counts only when it has digits
      }
      t.kind = Token::Kind::Number;
      t.text = text.substr(i, j - i);
      char* end = nullptr;
      t.num = std::strtod(t.text.c_str(), &end);
      if (end != t.text.c_str() + t.text.size())
        throw SyntaxError(file, line, col, "malformed number '" + t.text + "'");
      advance_to(j);
      out.push_back(std::move(t));
      continue;
    }

    if (c == '"') {
      const int sline = line, scol = col;
      advance_to(i + 1);
      std::string content;
      while (i < n && text[i] != '"') {
        const char d = text[i];
        if (d == '\n') throw SyntaxError(file, sline, scol, "unterminated string");
        if (d == '\\') {
          if (i + 1 >= n) throw SyntaxError(file, sline, scol, "unterminated string");
          const char e = text[i + 1];
          if (e == '"' || e == '\\')
            content += e;
          else if (e == 'n')
            content += '\n';
          else
            throw SyntaxError(file, line, col, std::string("unknown escape '\\") + e + "'");
          advance_to(i + 2);
          continue;
        }
        content += d;
        advance_to(i + 1);
      }
      if (i >= n) throw SyntaxError(file, sline, scol, "unterminated string");
      advance_to(i + 1);  // closing quote
      t.kind = Token::Kind::String;
      t.text = std::move(content);
      out.push_back(std::move(t));
      continue;
    }

    if (c == '-' && i + 1 < n && text[i + 1] == '>') {
      t.kind = Token::Kind::Punct;
      t.text = "->";
      advance_to(i + 2);
      out.push_back(std::move(t));
      continue;
    }
    static const std::string singles = "{}()[];:,=*";
    if (singles.find(c) != std::string::npos) {
      t.kind = Token::Kind::Punct;
      t.text = std::string(1, c);
      advance_to(i + 1);
      out.push_back(std::move(t));
      continue;
    }
    throw SyntaxError(file, line, col, std::string("unexpected character '") + c + "'");
  }

  Token end;
  end.kind = Token::Kind::End;
  end.line = line;
  end.col = col;
  out.push_back(std::move(end));
  return out;
}

// --------------------------------------------------------------- parsing ---

// A parsed expression: `term` is the surface form, null whenever a diagram
// literal occurs inside; `diag` is the evaluated diagram, engaged only when
// the parser had a presentation to evaluate against.
struct ExprResult {
  DiagExprPtr term;
  std::optional<OpenHypergraph> diag;
};

class Parser {
public:
  Parser(const std::string& text, std::string file)
      : file_(std::move(file)), toks_(lex(text, file_)) {}

  Architecture parse_architecture_file();
  MorphismFile parse_morphism_file();
  EnvSpec parse_env_file();

private:
  std::string file_;
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& peek(size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& take() {
    const Token& t = toks_[pos_];
    if (t.kind != Token::Kind::End) ++pos_;
    return t;
  }
  [[noreturn]] void fail(const Token& t, const std::string& expected) const {
    throw SyntaxError(file_, t.line, t.col, "expected " + expected + ", found " + token_desc(t));
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& message) const {
    throw SyntaxError(file_, t.line, t.col, message);
  }
  bool at_punct(const std::string& p, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Punct && t.text == p;
  }
  bool at_kw(const std::string& w, size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == Token::Kind::Ident && t.text == w;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail(peek(), "'" + p + "'");
    take();
  }
  void expect_kw(const std::string& w) {
    if (!at_kw(w)) fail(peek(), "'" + w + "'");
    take();
  }
  bool accept_punct(const std::string& p) {
    if (!at_punct(p)) return false;
    take();
    return true;
  }
  bool accept_kw(const std::string& w) {
    if (!at_kw(w)) return false;
    take();
    return true;
  }
  const Token& expect_name(const std::string& what) {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) fail(t, what);
    if (is_reserved(t.text)) fail_at(t, "expected " + what + ", found reserved word '" + t.text + "'");
    return take();
  }
  const Token& expect_string(const std::string& what) {
    if (peek().kind != Token::Kind::String) fail(peek(), what);
    return take();
  }
  double expect_number(const std::string& what) {
    if (peek().kind != Token::Kind::Number) fail(peek(), what);
    return take().num;
  }
  void expect_end() {
    if (peek().kind != Token::Kind::End) fail(peek(), "end of file");
  }

  // --- shared sub-grammars ---
  ExprResult parse_expr(const HypergraphPresentation* p);
  ExprResult parse_tensor(const HypergraphPresentation* p);
  ExprResult parse_atom(const HypergraphPresentation* p);
  bool composition_continues() const;
  TypeSymbol expect_type(const HypergraphPresentation* p) {
    const Token& t = expect_name("type name");
    if (p && !p->has_type(TypeSymbol{t.text})) fail_at(t, "undeclared type '" + t.text + "'");
    return TypeSymbol{t.text};
  }
  RawDiagram parse_raw_diagram();
  std::vector<std::string> parse_wire_tuple();

  // --- architecture ---
  void parse_presentation_block(HypergraphPresentation& pres,
                                std::map<std::string, std::string>& display);
  TypeProfile parse_profile(const HypergraphPresentation& pres);
  void parse_interface_block(Architecture& a);
  void parse_constraints_block(Architecture& a);

  // --- morphism ---
  void parse_morphism_layer(std::map<std::string, std::string>& type_map,
                            std::map<std::string, DiagExprPtr>& gen_exprs,
                            std::map<std::string, RawDiagram>& gen_literals);

  // --- env ---
  std::vector<std::string> parse_name_list(const std::string& what);
  int state_index(const EnvSpec& env, const Token& t) const {
    auto it = std::find(env.states.begin(), env.states.end(), t.text);
    if (it == env.states.end()) fail_at(t, "undeclared state '" + t.text + "'");
    return static_cast<int>(it - env.states.begin());
  }
  int action_index(const EnvSpec& env, const Token& t) const {
    auto it = std::find(env.actions.begin(), env.actions.end(), t.text);
    if (it == env.actions.end()) fail_at(t, "undeclared action '" + t.text + "'");
    return static_cast<int>(it - env.actions.begin());
  }
};

// ';' is both composition and the statement terminator. After ';' the
// composition continues only when the next tokens can begin an atom and do
// not look like the start of the following statement ("NAME ->", "NAME ="
// and "NAME :" all open statements, never compositions).
bool Parser::composition_continues() const {
  if (!at_punct(";")) return false;
  const Token& t1 = peek(1);
  if (t1.kind == Token::Kind::Punct) return t1.text == "(";
  if (t1.kind != Token::Kind::Ident) return false;
  static const std::set<std::string> starters = {"id",  "copy", "merge", "unit",   "counit",
                                                 "cap", "cup",  "sym",   "diagram"};
  if (starters.count(t1.text)) return true;
  if (is_reserved(t1.text)) return false;
  const Token& t2 = peek(2);
  if (t2.kind == Token::Kind::Punct && (t2.text == "->" || t2.text == "=" || t2.text == ":"))
    return false;
  return true;
}

ExprResult Parser::parse_expr(const HypergraphPresentation* p) {
  ExprResult acc = parse_tensor(p);
  while (composition_continues()) {
    const Token& op = take();  // ';'
    ExprResult rhs = parse_tensor(p);
    ExprResult next;
    if (acc.term && rhs.term) next.term = DiagExpr::compose(acc.term, rhs.term);
    if (p) {
      try {
        next.diag = og_compose(*acc.diag, *rhs.diag);
      } catch (const Error& e) {
        fail_at(op, e.what());
      }
    }
    acc = std::move(next);
  }
  return acc;
}

ExprResult Parser::parse_tensor(const HypergraphPresentation* p) {
  ExprResult acc = parse_atom(p);
  while (at_punct("*")) {
    const Token& op = take();
    ExprResult rhs = parse_atom(p);
    ExprResult next;
    if (acc.term && rhs.term) next.term = DiagExpr::tensor(acc.term, rhs.term);
    if (p) {
      try {
        next.diag = og_tensor(*acc.diag, *rhs.diag);
      } catch (const Error& e) {
        fail_at(op, e.what());
      }
    }
    acc = std::move(next);
  }
  return acc;
}

ExprResult Parser::parse_atom(const HypergraphPresentation* p) {
  const Token& t = peek();
  if (at_punct("(")) {
    take();
    ExprResult inner = parse_expr(p);
    expect_punct(")");
    return inner;
  }
  if (t.kind != Token::Kind::Ident) fail(t, "a diagram expression");

  static const std::map<std::string, DiagExpr::Op> spiders = {
      {"id", DiagExpr::Op::Id},       {"copy", DiagExpr::Op::Copy},
      {"merge", DiagExpr::Op::Merge}, {"unit", DiagExpr::Op::Unit},
      {"counit", DiagExpr::Op::Counit}, {"cap", DiagExpr::Op::Cap},
      {"cup", DiagExpr::Op::Cup}};
  if (auto it = spiders.find(t.text); it != spiders.end()) {
    take();
    expect_punct("[");
    TypeSymbol ty = expect_type(p);
    expect_punct("]");
    ExprResult r;
    r.term = DiagExpr::atom(it->second, ty);
    if (p) r.diag = eval_expr(*r.term, *p);
    return r;
  }
  if (t.text == "sym") {
    take();
    expect_punct("[");
    TypeSymbol a = expect_type(p);
    expect_punct(",");
    TypeSymbol b = expect_type(p);
    expect_punct("]");
    ExprResult r;
    r.term = DiagExpr::sym(a, b);
    if (p) r.diag = eval_expr(*r.term, *p);
    return r;
  }
  if (t.text == "diagram") {
    if (!p) fail_at(t, "a diagram literal must form the whole image here");
    RawDiagram raw = parse_raw_diagram();
    ExprResult r;
    try {
      r.diag = resolve_raw_diagram(raw, *p);
    } catch (const Error& e) {
      fail_at(t, std::string("in diagram literal: ") + e.what());
    }
    return r;
  }
  if (is_reserved(t.text)) fail(t, "a diagram expression");
  if (p && !p->find_generator(t.text)) fail_at(t, "undeclared generator '" + t.text + "'");
  ExprResult r;
  r.term = DiagExpr::gen(t.text);
  if (p) r.diag = og_generator(*p->find_generator(t.text));
  take();
  return r;
}

RawDiagram Parser::parse_raw_diagram() {
  expect_kw("diagram");
  expect_punct("{");
  expect_kw("wires");
  expect_punct("{");
  RawDiagram raw;
  while (!accept_punct("}")) {
    const Token& w = expect_name("wire name");
    for (const auto& seen : raw.wires)
      if (seen.name == w.text) fail_at(w, "duplicate wire '" + w.text + "'");
    expect_punct(":");
    const Token& ty = expect_name("type name");
    expect_punct(";");
    raw.wires.push_back({w.text, ty.text});
  }
  expect_kw("in");
  expect_punct("=");
  raw.in = parse_wire_tuple();
  expect_punct(";");
  expect_kw("out");
  expect_punct("=");
  raw.out = parse_wire_tuple();
  expect_punct(";");
  if (accept_kw("edges")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      RawDiagram::Edge e;
      e.gen = expect_name("generator name").text;
      e.in = parse_wire_tuple();
      expect_punct("->");
      e.out = parse_wire_tuple();
      expect_punct(";");
      raw.edges.push_back(std::move(e));
    }
  }
  expect_punct("}");
  return raw;
}

std::vector<std::string> Parser::parse_wire_tuple() {
  expect_punct("(");
  std::vector<std::string> names;
  if (accept_punct(")")) return names;
  do {
    names.push_back(expect_name("wire name").text);
  } while (accept_punct(","));
  expect_punct(")");
  return names;
}

// --- architecture files ---

// Body blocks are optional (an empty body is the degenerate architecture)
// but must appear in canonical order: syntax, pattern, knowledge, interface,
// constraints.
Architecture Parser::parse_architecture_file() {
  expect_kw("architecture");
  Architecture a;
  a.name = expect_name("architecture name").text;
  expect_punct("{");

  if (accept_kw("syntax")) parse_presentation_block(a.syn, a.display);

  if (accept_kw("pattern")) {
    expect_punct("=");
    ExprResult pe = parse_expr(&a.syn);
    expect_punct(";");
    a.pattern.diagram = std::move(*pe.diag);
    a.pattern_expr = pe.term;
  }

  if (accept_kw("knowledge")) parse_presentation_block(a.know, a.display);

  if (at_kw("interface")) parse_interface_block(a);
  if (at_kw("constraints")) parse_constraints_block(a);

  expect_punct("}");
  expect_end();
  return a;
}

void Parser::parse_presentation_block(HypergraphPresentation& pres,
                                      std::map<std::string, std::string>& display) {
  expect_punct("{");
  expect_kw("types");
  expect_punct("{");
  while (!accept_punct("}")) {
    const Token& name = expect_name("type name");
    if (pres.has_type(TypeSymbol{name.text})) fail_at(name, "duplicate type '" + name.text + "'");
    if (accept_kw("display")) display[name.text] = expect_string("display string").text;
    expect_punct(";");
    pres.types.push_back(TypeSymbol{name.text});
  }
  if (accept_kw("generators")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& name = expect_name("generator name");
      if (pres.find_generator(name.text)) fail_at(name, "duplicate generator '" + name.text + "'");
      expect_punct(":");
      GeneratorSymbol g;
      g.name = name.text;
      g.dom = parse_profile(pres);
      expect_punct("->");
      g.cod = parse_profile(pres);
      expect_punct(";");
      pres.generators.push_back(std::move(g));
    }
  }
  if (accept_kw("equations")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      expect_kw("eq");
      ExprResult lhs = parse_expr(&pres);
      expect_punct("=");
      ExprResult rhs = parse_expr(&pres);
      expect_punct(";");
      pres.equations.emplace_back(std::move(*lhs.diag), std::move(*rhs.diag));
    }
  }
  expect_punct("}");
}

TypeProfile Parser::parse_profile(const HypergraphPresentation& pres) {
  if (peek().kind == Token::Kind::Number) {
    if (peek().text != "1") fail(peek(), "a type name or '1'");
    take();
    return {};
  }
  TypeProfile ts;
  do {
    const Token& t = expect_name("type name");
    if (!pres.has_type(TypeSymbol{t.text})) fail_at(t, "undeclared type '" + t.text + "'");
    ts.push_back(TypeSymbol{t.text});
  } while (accept_punct("*"));
  return ts;
}

void Parser::parse_interface_block(Architecture& a) {
  expect_kw("interface");
  expect_punct("{");
  if (accept_kw("support")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      expect_punct("(");
      const Token& s = expect_name("syntax type");
      if (!a.syn.has_type(TypeSymbol{s.text})) fail_at(s, "undeclared syntax type '" + s.text + "'");
      expect_punct(",");
      const Token& k = expect_name("knowledge type");
      if (!a.know.has_type(TypeSymbol{k.text}))
        fail_at(k, "undeclared knowledge type '" + k.text + "'");
      expect_punct(")");
      expect_punct(";");
      if (a.iface.pair_supported(TypeSymbol{s.text}, TypeSymbol{k.text}))
        fail_at(s, "duplicate support pair (" + s.text + ", " + k.text + ")");
      a.iface.support.emplace_back(TypeSymbol{s.text}, TypeSymbol{k.text});
    }
  }
  if (accept_kw("bindings")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& g = expect_name("syntax generator name");
      if (!a.syn.find_generator(g.text))
        fail_at(g, "binding names undeclared syntax generator '" + g.text + "'");
      if (a.iface.bindings.count(g.text)) fail_at(g, "duplicate binding for '" + g.text + "'");
      expect_punct("->");
      ExprResult e = parse_expr(&a.know);
      expect_punct(";");
      a.iface.bindings[g.text] = std::move(*e.diag);
      if (e.term) a.binding_exprs[g.text] = e.term;
    }
  }
  expect_punct("}");
}

void Parser::parse_constraints_block(Architecture& a) {
  expect_kw("constraints");
  expect_punct("{");
  while (!accept_punct("}")) {
    const Token& kw = peek();
    if (kw.kind != Token::Kind::Ident) fail(kw, "a constraint kind keyword");
    const ConstraintKindInfo* info = nullptr;
    for (const ConstraintKindInfo& ci : constraint_registry_list())
      if (ci.keyword == kw.text) {
        info = &ci;
        break;
      }
    if (!info) {
      std::string valid;
      for (const ConstraintKindInfo& ci : constraint_registry_list())
        valid += (valid.empty() ? "" : ", ") + ci.keyword;
      fail_at(kw, "unknown constraint kind '" + kw.text + "' (one of: " + valid + ")");
    }
    take();
    Constraint c;
    c.kind = info->kind;
    c.id = expect_string("constraint id string").text;
    if (accept_kw("scope")) {
      expect_punct("(");
      do {
        SymbolRef ref;
        if (accept_punct("(")) {
          ref.space = SymbolRef::Space::Pair;
          ref.name = expect_name("syntax type").text;
          expect_punct(",");
          ref.name2 = expect_name("knowledge type").text;
          expect_punct(")");
        } else {
          ref.name = expect_name("scope symbol").text;
        }
        c.scope.refs.push_back(std::move(ref));
      } while (accept_punct(","));
      expect_punct(")");
    }
    if (accept_kw("params")) {
      expect_punct("(");
      if (!accept_punct(")")) {
        do {
          const Token& key = expect_name("parameter name");
          if (c.params.count(key.text)) fail_at(key, "duplicate parameter '" + key.text + "'");
          expect_punct("=");
          const Token& v = peek();
          if (v.kind != Token::Kind::Number && v.kind != Token::Kind::Ident &&
              v.kind != Token::Kind::String)
            fail(v, "a parameter value");
          c.params[key.text] = take().text;
        } while (accept_punct(","));
        expect_punct(")");
      }
    }
    expect_punct(";");
    a.constraints.push_back(std::move(c));
  }
}

// --- morphism files ---

MorphismFile Parser::parse_morphism_file() {
  expect_kw("morphism");
  MorphismFile f;
  f.name = expect_name("morphism name").text;
  expect_punct(":");
  f.source = expect_name("source architecture name").text;
  expect_punct("->");
  f.target = expect_name("target architecture name").text;
  expect_punct("{");
  expect_kw("syntax");
  parse_morphism_layer(f.type_map_syn, f.gen_expr_syn, f.gen_literal_syn);
  expect_kw("knowledge");
  parse_morphism_layer(f.type_map_know, f.gen_expr_know, f.gen_literal_know);
  expect_punct("}");
  expect_end();
  return f;
}

void Parser::parse_morphism_layer(std::map<std::string, std::string>& type_map,
                                  std::map<std::string, DiagExprPtr>& gen_exprs,
                                  std::map<std::string, RawDiagram>& gen_literals) {
  expect_punct("{");
  if (accept_kw("types")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& src = expect_name("source type name");
      if (type_map.count(src.text)) fail_at(src, "duplicate type map entry '" + src.text + "'");
      expect_punct("->");
      type_map[src.text] = expect_name("target type name").text;
      expect_punct(";");
    }
  }
  if (accept_kw("generators")) {
    expect_punct("{");
    while (!accept_punct("}")) {
      const Token& src = expect_name("source generator name");
      if (gen_exprs.count(src.text) || gen_literals.count(src.text))
        fail_at(src, "duplicate generator map entry '" + src.text + "'");
      expect_punct("->");
      if (at_kw("diagram"))
        gen_literals[src.text] = parse_raw_diagram();
      else
        gen_exprs[src.text] = parse_expr(nullptr).term;
      expect_punct(";");
    }
  }
  expect_punct("}");
}

// --- env files ---

EnvSpec Parser::parse_env_file() {
  expect_kw("env");
  EnvSpec env;
  env.name = expect_name("environment name").text;
  expect_punct("{");
  expect_kw("states");
  env.states = parse_name_list("state name");
  expect_kw("actions");
  env.actions = parse_name_list("action name");
  expect_kw("gamma");
  expect_punct("=");
  env.gamma = expect_number("discount factor");
  expect_punct(";");
  if (accept_kw("start")) {
    expect_punct("=");
    env.start_state = state_index(env, expect_name("state name"));
    expect_punct(";");
  }
  expect_kw("kernel");
  expect_punct("{");
  while (!accept_punct("}")) {
    const Token& open = peek();
    expect_punct("(");
    const int s = state_index(env, expect_name("state name"));
    expect_punct(",");
    const int a = action_index(env, expect_name("action name"));
    expect_punct(")");
    if (env.kernel.count({s, a}))
      fail_at(open, "duplicate kernel row for (" + env.states[s] + ", " + env.actions[a] + ")");
    expect_punct("->");
    expect_punct("[");
    std::vector<EnvRow> rows;
    do {
      expect_punct("(");
      EnvRow row;
      row.r = expect_number("reward");
      expect_punct(",");
      row.s_next = state_index(env, expect_name("state name"));
      expect_punct(",");
      row.p = expect_number("probability");
      expect_punct(")");
      rows.push_back(row);
    } while (accept_punct(","));
    expect_punct("]");
    expect_punct(";");
    env.kernel[{s, a}] = std::move(rows);
  }
  expect_punct("}");
  expect_end();
  return env;
}

std::vector<std::string> Parser::parse_name_list(const std::string& what) {
  expect_punct("{");
  std::vector<std::string> names;
  if (accept_punct("}")) return names;
  do {
    const Token& t = expect_name(what);
    if (std::find(names.begin(), names.end(), t.text) != names.end())
      fail_at(t, "duplicate " + what + " '" + t.text + "'");
    names.push_back(t.text);
  } while (accept_punct(","));
  expect_punct("}");
  return names;
}

}  // namespace

// ------------------------------------------------------------- public API ---

OpenHypergraph resolve_raw_diagram(const RawDiagram& raw, const HypergraphPresentation& p) {
  OpenHypergraph d;
  std::map<std::string, WireId> index;
  for (const RawDiagram::Wire& w : raw.wires) {
    if (index.count(w.name)) throw unknown_name("duplicate wire '" + w.name + "'");
    if (!p.has_type(TypeSymbol{w.type}))
      throw undeclared_symbol("wire '" + w.name + "' has undeclared type '" + w.type + "'");
    index[w.name] = static_cast<WireId>(d.wires.size());
    d.wires.push_back(TypeSymbol{w.type});
  }
  auto wire = [&](const std::string& name) {
    auto it = index.find(name);
    if (it == index.end()) throw unknown_name("undeclared wire '" + name + "'");
    return it->second;
  };
  for (const std::string& w : raw.in) d.boundary_in.push_back(wire(w));
  for (const std::string& w : raw.out) d.boundary_out.push_back(wire(w));
  for (const RawDiagram::Edge& re : raw.edges) {
    const GeneratorSymbol* g = p.find_generator(re.gen);
    if (!g) throw undeclared_symbol("edge uses undeclared generator '" + re.gen + "'");
    if (re.in.size() != g->dom.size() || re.out.size() != g->cod.size())
      throw domain_mismatch("edge '" + re.gen + "' expects " + std::to_string(g->dom.size()) +
                            " input(s) and " + std::to_string(g->cod.size()) + " output(s), got " +
                            std::to_string(re.in.size()) + " and " + std::to_string(re.out.size()));
    DiagramEdge e;
    e.label = *g;
    for (size_t i = 0; i < re.in.size(); ++i) {
      const WireId w = wire(re.in[i]);
      if (d.wires[w] != g->dom[i])
        throw boundary_type_mismatch("edge '" + re.gen + "' input " + std::to_string(i) +
                                     " expects type '" + g->dom[i].name + "', wire '" + re.in[i] +
                                     "' has type '" + d.wires[w].name + "'");
      e.in_ports.push_back(w);
    }
    for (size_t i = 0; i < re.out.size(); ++i) {
      const WireId w = wire(re.out[i]);
      if (d.wires[w] != g->cod[i])
        throw boundary_type_mismatch("edge '" + re.gen + "' output " + std::to_string(i) +
                                     " expects type '" + g->cod[i].name + "', wire '" + re.out[i] +
                                     "' has type '" + d.wires[w].name + "'");
      e.out_ports.push_back(w);
    }
    d.edges.push_back(std::move(e));
  }
  d.check();
  return d;
}

Architecture parse_architecture(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  return p.parse_architecture_file();
}

MorphismFile parse_morphism_file(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  return p.parse_morphism_file();
}

ArchMorphism resolve_morphism(const MorphismFile& file, const Architecture& source,
                              const Architecture& target) {
  if (file.source != source.name)
    throw unknown_name("morphism '" + file.name + "' declares source '" + file.source +
                       "', resolved against '" + source.name + "'");
  if (file.target != target.name)
    throw unknown_name("morphism '" + file.name + "' declares target '" + file.target +
                       "', resolved against '" + target.name + "'");
  ArchMorphism m;
  m.name = file.name;
  m.source = file.source;
  m.target = file.target;
  m.type_map_syn = file.type_map_syn;
  m.type_map_know = file.type_map_know;

  auto build = [](const std::map<std::string, DiagExprPtr>& exprs,
                  const std::map<std::string, RawDiagram>& literals,
                  const HypergraphPresentation& tgt, std::map<std::string, OpenHypergraph>& out_map,
                  std::map<std::string, DiagExprPtr>& out_exprs, const char* layer) {
    for (const auto& [name, e] : exprs) {
      try {
        out_map[name] = eval_expr(*e, tgt);
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(layer) + " image of '" + name + "': " + err.what());
      }
      out_exprs[name] = e;
    }
    for (const auto& [name, raw] : literals) {
      try {
        out_map[name] = resolve_raw_diagram(raw, tgt);
      } catch (const Error& err) {
        throw Error(err.kind(), std::string(layer) + " image of '" + name + "': " + err.what());
      }
    }
  };
  build(file.gen_expr_syn, file.gen_literal_syn, target.syn, m.gen_map_syn, m.gen_expr_syn,
        "syntax");
  build(file.gen_expr_know, file.gen_literal_know, target.know, m.gen_map_know, m.gen_expr_know,
        "knowledge");
  return m;
}

EnvSpec parse_env(const std::string& text, const std::string& filename) {
  Parser p(text, filename);
  return p.parse_env_file();
}

FileKind sniff_kind(const std::string& text, const std::string& filename) {
  const std::vector<Token> toks = lex(text, filename);
  const Token& t = toks.front();
  if (t.kind == Token::Kind::Ident) {
    if (t.text == "architecture") return FileKind::architecture;
    if (t.text == "morphism") return FileKind::morphism;
    if (t.text == "env") return FileKind::env;
  }
  throw SyntaxError(filename, t.line, t.col,
                    "expected 'architecture', 'morphism' or 'env', found " + token_desc(t));
}

// ------------------------------------------------------------- rendering ---

namespace {

std::string ind(int level) { return std::string(2 * level, ' '); }

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);  // shortest round-trip form
  return std::string(buf, res.ptr);
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out += c;
    }
  }
  out += '"';
  return out;
}

// A parameter value prints unquoted only when it re-lexes as the single
// identifier or number it came from.
bool renders_bare(const std::string& s) {
  if (s.empty()) return false;
  try {
    const std::vector<Token> toks = lex(s, "");
    if (toks.size() != 2 || toks[0].text != s) return false;
    if (toks[0].kind == Token::Kind::Number) return true;
    return toks[0].kind == Token::Kind::Ident && !is_reserved(s);
  } catch (const Error&) {
    return false;
  }
}

std::string profile_str(const TypeProfile& ts) {
  if (ts.empty()) return "1";
  std::string s;
  for (size_t i = 0; i < ts.size(); ++i) s += (i ? " * " : "") + ts[i].name;
  return s;
}

// Canonical wiring literal: wires renamed w0..wn in canonical order, so the
// text is a function of the diagram's isomorphism class.
void render_literal(const OpenHypergraph& d, int indent, std::string& out) {
  const OpenHypergraph c = og_canonical(d).diagram;
  auto wname = [](WireId w) { return "w" + std::to_string(w); };
  auto tuple = [&](const std::vector<WireId>& ws) {
    std::string t = "(";
    for (size_t i = 0; i < ws.size(); ++i) t += (i ? ", " : "") + wname(ws[i]);
    return t + ")";
  };
  out += "diagram {\n";
  out += ind(indent + 1) + "wires {\n";
  for (size_t i = 0; i < c.wires.size(); ++i)
    out += ind(indent + 2) + wname(static_cast<WireId>(i)) + " : " + c.wires[i].name + ";\n";
  out += ind(indent + 1) + "}\n";
  out += ind(indent + 1) + "in = " + tuple(c.boundary_in) + ";\n";
  out += ind(indent + 1) + "out = " + tuple(c.boundary_out) + ";\n";
  if (!c.edges.empty()) {
    out += ind(indent + 1) + "edges {\n";
    for (const DiagramEdge& e : c.edges)
      out += ind(indent + 2) + e.label.name + tuple(e.in_ports) + " -> " + tuple(e.out_ports) +
             ";\n";
    out += ind(indent + 1) + "}\n";
  }
  out += ind(indent) + "}";
}

void render_presentation(const HypergraphPresentation& p,
                         const std::map<std::string, std::string>& display, int indent,
                         std::string& out) {
  out += "{\n";
  out += ind(indent + 1) + "types {\n";
  std::vector<TypeSymbol> types = p.types;
  std::sort(types.begin(), types.end());
  for (const TypeSymbol& t : types) {
    out += ind(indent + 2) + t.name;
    if (auto it = display.find(t.name); it != display.end()) out += " display " + quote(it->second);
    out += ";\n";
  }
  out += ind(indent + 1) + "}\n";
  if (!p.generators.empty()) {
    out += ind(indent + 1) + "generators {\n";
    for (const GeneratorSymbol& g : p.generators)
      out += ind(indent + 2) + g.name + " : " + profile_str(g.dom) + " -> " + profile_str(g.cod) +
             ";\n";
    out += ind(indent + 1) + "}\n";
  }
  if (!p.equations.empty()) {
    out += ind(indent + 1) + "equations {\n";
    for (const auto& [lhs, rhs] : p.equations) {
      out += ind(indent + 2) + "eq ";
      render_literal(lhs, indent + 2, out);
      out += " = ";
      render_literal(rhs, indent + 2, out);
      out += ";\n";
    }
    out += ind(indent + 1) + "}\n";
  }
  out += ind(indent) + "}\n";
}

std::string sanitize_name(const std::string& s) {
  std::string out;
  for (const char c : s)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_') ? c : '_';
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || is_reserved(out))
    out = "m_" + out;
  return out;
}

void render_morphism_layer(const char* keyword, const std::map<std::string, std::string>& type_map,
                           const std::map<std::string, OpenHypergraph>& gen_map,
                           const std::map<std::string, DiagExprPtr>& gen_exprs, std::string& out) {
  out += ind(1) + keyword + std::string(" {\n");
  if (!type_map.empty()) {
    out += ind(2) + "types {\n";
    for (const auto& [src, tgt] : type_map) out += ind(3) + src + " -> " + tgt + ";\n";
    out += ind(2) + "}\n";
  }
  if (!gen_map.empty()) {
    out += ind(2) + "generators {\n";
    for (const auto& [g, image] : gen_map) {
      out += ind(3) + g + " -> ";
      auto it = gen_exprs.find(g);
      if (it != gen_exprs.end() && it->second)
        out += print_expr(*it->second);
      else
        render_literal(image, 3, out);
      out += ";\n";
    }
    out += ind(2) + "}\n";
  }
  out += ind(1) + "}\n";
}

}  // namespace

std::string render_architecture(const Architecture& a) {
  std::string out = "architecture " + a.name + " {\n";
  out += ind(1) + "syntax ";
  render_presentation(a.syn, a.display, 1, out);
  out += ind(1) + "pattern = ";
  if (a.pattern_expr)
    out += print_expr(*a.pattern_expr);
  else
    render_literal(a.pattern.diagram, 1, out);
  out += ";\n";
  out += ind(1) + "knowledge ";
  render_presentation(a.know, a.display, 1, out);
  if (!a.iface.support.empty() || !a.iface.bindings.empty()) {
    out += ind(1) + "interface {\n";
    if (!a.iface.support.empty()) {
      out += ind(2) + "support {\n";
      for (const auto& [s, k] : a.iface.support)
        out += ind(3) + "(" + s.name + ", " + k.name + ");\n";
      out += ind(2) + "}\n";
    }
    if (!a.iface.bindings.empty()) {
      out += ind(2) + "bindings {\n";
      for (const auto& [g, image] : a.iface.bindings) {
        out += ind(3) + g + " -> ";
        auto it = a.binding_exprs.find(g);
        if (it != a.binding_exprs.end() && it->second)
          out += print_expr(*it->second);
        else
          render_literal(image, 3, out);
        out += ";\n";
      }
      out += ind(2) + "}\n";
    }
    out += ind(1) + "}\n";
  }
  if (!a.constraints.empty()) {
    out += ind(1) + "constraints {\n";
    for (const Constraint& c : a.constraints) {
      out += ind(2) + constraint_kind_info(c.kind).keyword + " " + quote(c.id);
      if (!c.scope.refs.empty()) {
        out += " scope(";
        for (size_t i = 0; i < c.scope.refs.size(); ++i) {
          const SymbolRef& r = c.scope.refs[i];
          if (i) out += ", ";
          if (r.space == SymbolRef::Space::Pair)
            out += "(" + r.name + ", " + r.name2 + ")";
          else
            out += r.name;  // explicit spaces flatten to bare names and re-resolve on parse
        }
        out += ")";
      }
      if (!c.params.empty()) {
        out += " params(";
        bool first = true;
        for (const auto& [key, value] : c.params) {
          if (!first) out += ", ";
          first = false;
          out += key + " = " + (renders_bare(value) ? value : quote(value));
        }
        out += ")";
      }
      out += ";\n";
    }
    out += ind(1) + "}\n";
  }
  out += "}\n";
  return out;
}

std::string render_morphism(const ArchMorphism& f) {
  std::string out = "morphism " + sanitize_name(f.name) + " : " + sanitize_name(f.source) +
                    " -> " + sanitize_name(f.target) + " {\n";
  render_morphism_layer("syntax", f.type_map_syn, f.gen_map_syn, f.gen_expr_syn, out);
  render_morphism_layer("knowledge", f.type_map_know, f.gen_map_know, f.gen_expr_know, out);
  out += "}\n";
  return out;
}

std::string render_env(const EnvSpec& env) {
  auto join = [](const std::vector<std::string>& names) {
    std::string s;
    for (size_t i = 0; i < names.size(); ++i) s += (i ? ", " : "") + names[i];
    return s;
  };
  std::string out = "env " + env.name + " {\n";
  out += ind(1) + "states { " + join(env.states) + " }\n";
  out += ind(1) + "actions { " + join(env.actions) + " }\n";
  out += ind(1) + "gamma = " + fmt_double(env.gamma) + ";\n";
  out += ind(1) + "start = " + env.states.at(env.start_state) + ";\n";
  out += ind(1) + "kernel {\n";
  for (const auto& [sa, rows] : env.kernel) {
    out += ind(2) + "(" + env.states.at(sa.first) + ", " + env.actions.at(sa.second) + ") -> [";
    for (size_t i = 0; i < rows.size(); ++i) {
      if (i) out += ", ";
      out += "(" + fmt_double(rows[i].r) + ", " + env.states.at(rows[i].s_next) + ", " +
             fmt_double(rows[i].p) + ")";
    }
    out += "];\n";
  }
  out += ind(1) + "}\n";
  out += "}\n";
  return out;
}

}  // namespace agentarch
