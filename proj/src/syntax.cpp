// SPDX-License-Identifier: Apache-2.0
#include "hyperq/syntax.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

namespace hyperq {

std::string to_string(FileLogic logic) {
  switch (logic) {
    case FileLogic::HyperQPTL: return "hyperqptl";
    case FileLogic::HyperQPTLPlus: return "hqptl+";
    case FileLogic::Hyper2LTL: return "h2l";
    case FileLogic::Arith: return "arith";
  }
  return "?";
}

FileLogic file_logic_from_string(const std::string& tag) {
  if (tag == "hyperqptl") return FileLogic::HyperQPTL;
  if (tag == "hqptl+") return FileLogic::HyperQPTLPlus;
  if (tag == "h2l") return FileLogic::Hyper2LTL;
  if (tag == "arith") return FileLogic::Arith;
  throw Error("unknown logic tag '" + tag + "'");
}

namespace {

enum class Tok {
  Ident,
  Exists, Forall, ExistsP, ForallP, ExistsS, ForallS,
  Exists1, Forall1, Exists2, Forall2, Exists3, Forall3,
  In, Axiom,
  Not, AndOp, OrOp, ImpliesOp, IffOp,
  NextOp, EventuallyOp, AlwaysOp, UntilOp,
  LParen, RParen, LBracket, RBracket, Dot,
  Less, Plus, Star, Equals,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

const std::map<std::string, Tok>& keyword_table() {
  static const std::map<std::string, Tok> table = {
      {"exists", Tok::Exists},   {"forall", Tok::Forall},
      {"existsP", Tok::ExistsP}, {"forallP", Tok::ForallP},
      {"existsS", Tok::ExistsS}, {"forallS", Tok::ForallS},
      {"exists1", Tok::Exists1}, {"forall1", Tok::Forall1},
      {"exists2", Tok::Exists2}, {"forall2", Tok::Forall2},
      {"exists3", Tok::Exists3}, {"forall3", Tok::Forall3},
      {"in", Tok::In},           {"AXIOM_PLUS_TIMES", Tok::Axiom},
      {"X", Tok::NextOp},        {"F", Tok::EventuallyOp},
      {"G", Tok::AlwaysOp},      {"U", Tok::UntilOp},
  };
  return table;
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::string t, int l, int c) {
    out.push_back({kind, std::move(t), l, c});
  };
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    if (c == '#') {  // line comment
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    int tl = line, tc = col;
    auto two = [&](char a, char b) {
      return c == a && i + 1 < text.size() && text[i + 1] == b;
    };
    if (two('-', '>')) {
      push(Tok::ImpliesOp, "->", tl, tc);
      i += 2;
      col += 2;
      continue;
    }
    if (c == '<' && i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
      push(Tok::IffOp, "<->", tl, tc);
      i += 3;
      col += 3;
      continue;
    }
    switch (c) {
      case '!': push(Tok::Not, "!", tl, tc); ++i; ++col; continue;
      case '&': push(Tok::AndOp, "&", tl, tc); ++i; ++col; continue;
      case '|': push(Tok::OrOp, "|", tl, tc); ++i; ++col; continue;
      case '(': push(Tok::LParen, "(", tl, tc); ++i; ++col; continue;
      case ')': push(Tok::RParen, ")", tl, tc); ++i; ++col; continue;
      case '[': push(Tok::LBracket, "[", tl, tc); ++i; ++col; continue;
      case ']': push(Tok::RBracket, "]", tl, tc); ++i; ++col; continue;
      case '.': push(Tok::Dot, ".", tl, tc); ++i; ++col; continue;
      case '<': push(Tok::Less, "<", tl, tc); ++i; ++col; continue;
      case '+': push(Tok::Plus, "+", tl, tc); ++i; ++col; continue;
      case '*': push(Tok::Star, "*", tl, tc); ++i; ++col; continue;
      case '=': push(Tok::Equals, "=", tl, tc); ++i; ++col; continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string ident;
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_' ||
              text[i] == '\'')) {
        ident += text[i];
        ++i;
        ++col;
      }
      auto kw = keyword_table().find(ident);
      if (kw != keyword_table().end()) {
        push(kw->second, ident, tl, tc);
      } else {
        push(Tok::Ident, ident, tl, tc);
      }
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", tl, tc);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

// ---------------------------------------------------------------------------
// temporal-logic parser
//
// Precedence, tightest first: unary {!, X, F, G}, U (right-assoc), &, |,
// ->, <->. Quantifiers consume the rest of the enclosing group.
// ---------------------------------------------------------------------------

class FormulaParser {
 public:
  FormulaParser(std::vector<Token> toks, Logic logic)
      : toks_(std::move(toks)), logic_(logic) {}

  Formula parse() {
    Formula f = formula();
    expect(Tok::End, "end of input");
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Logic logic_;

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return take();
  }

  template <typename Fn>
  Formula guarded(const Token& where, Fn&& fn) {
    try {
      return fn();
    } catch (const LogicViolation& e) {
      throw ParseError(std::string("logic violation: ") + e.what(), where.line,
                       where.col);
    }
  }

  bool at_quantifier() const {
    switch (peek().kind) {
      case Tok::Exists:
      case Tok::Forall:
      case Tok::ExistsP:
      case Tok::ForallP:
      case Tok::ExistsS:
      case Tok::ForallS:
        return true;
      default:
        return false;
    }
  }

  Formula formula() { return iff_expr(); }

  Formula iff_expr() {
    Formula a = implies_expr();
    if (at(Tok::IffOp)) {
      Token t = take();
      Formula b = iff_expr();
      return guarded(t, [&] { return iff(a, b); });
    }
    return a;
  }

  Formula implies_expr() {
    Formula a = or_expr();
    if (at(Tok::ImpliesOp)) {
      Token t = take();
      Formula b = implies_expr();
      return guarded(t, [&] { return implies(a, b); });
    }
    return a;
  }

  Formula or_expr() {
    Formula a = and_expr();
    while (at(Tok::OrOp)) {
      Token t = take();
      Formula b = and_expr();
      a = guarded(t, [&] { return lor(a, b); });
    }
    return a;
  }

  Formula and_expr() {
    Formula a = until_expr();
    while (at(Tok::AndOp)) {
      Token t = take();
      Formula b = until_expr();
      a = guarded(t, [&] { return land(a, b); });
    }
    return a;
  }

  Formula until_expr() {
    Formula a = unary_expr();
    if (at(Tok::UntilOp)) {
      Token t = take();
      Formula b = until_expr();
      return guarded(t, [&] { return until(a, b); });
    }
    return a;
  }

  Formula unary_expr() {
    Token t = peek();
    switch (t.kind) {
      case Tok::Not:
        take();
        return lnot(unary_expr());
      case Tok::NextOp:
        take();
        return next(unary_expr());
      case Tok::EventuallyOp:
        take();
        return eventually(unary_expr());
      case Tok::AlwaysOp:
        take();
        return always(unary_expr());
      default:
        return primary();
    }
  }

  Formula primary() {
    Token t = peek();
    if (accept(Tok::LParen)) {
      Formula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_quantifier()) return quantified();
    if (accept(Tok::Axiom)) {
      return guarded(t, [&] {
        if (logic_ != Logic::HyperQPTL) {
          throw LogicViolation("AXIOM_PLUS_TIMES is a HyperQPTL leaf");
        }
        return axiom_plus_times();
      });
    }
    if (at(Tok::Ident)) {
      Token name = take();
      if (accept(Tok::LBracket)) {
        Token var = expect(Tok::Ident, "trace variable");
        expect(Tok::RBracket, "']'");
        return guarded(name, [&] { return labeled_atom(logic_, name.text, var.text); });
      }
      return guarded(name, [&] {
        if (logic_ != Logic::HyperQPTL) {
          throw LogicViolation("bare atom '" + name.text + "' needs a trace label in " +
                               to_string(logic_));
        }
        return prop_atom(name.text);
      });
    }
    fail("expected a formula");
  }

  Formula quantified() {
    Token q = take();
    bool exists = q.kind == Tok::Exists || q.kind == Tok::ExistsP || q.kind == Tok::ExistsS;
    switch (q.kind) {
      case Tok::Exists:
      case Tok::Forall: {
        Token var = expect(Tok::Ident, "trace variable");
        std::optional<SetVar> domain;
        if (accept(Tok::In)) {
          Token sv = expect(Tok::Ident, "set variable");
          domain = SetVar(sv.text);
        }
        expect(Tok::Dot, "'.'");
        Formula body = formula();
        return guarded(q, [&] {
          if (domain) {
            return exists ? exists_trace_in(var.text, *domain, body)
                          : forall_trace_in(var.text, *domain, body);
          }
          return exists ? exists_trace(var.text, body) : forall_trace(var.text, body);
        });
      }
      case Tok::ExistsP:
      case Tok::ForallP: {
        Token var = expect(Tok::Ident, "proposition");
        expect(Tok::Dot, "'.'");
        Formula body = formula();
        return guarded(q, [&] {
          return exists ? exists_prop(var.text, body) : forall_prop(var.text, body);
        });
      }
      case Tok::ExistsS:
      case Tok::ForallS: {
        Token var = expect(Tok::Ident, "set variable");
        expect(Tok::Dot, "'.'");
        Formula body = formula();
        return guarded(q, [&] {
          SetVar sv(var.text);
          return exists ? exists_set(sv, body) : forall_set(sv, body);
        });
      }
      default:
        fail("quantifier not available in this logic");
    }
  }
};

// ---------------------------------------------------------------------------
// arithmetic parser
// ---------------------------------------------------------------------------

class ArithParser {
 public:
  explicit ArithParser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ArithFormula parse() {
    ArithFormula f = formula();
    expect(Tok::End, "end of input");
    try {
      check_var_orders(f);
    } catch (const ShapeError& e) {
      throw ParseError(e.what(), 1, 1);
    }
    return f;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::map<std::string, int> orders_;  // declared or inferred

  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, peek().line, peek().col);
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail("expected " + what);
    return take();
  }

  void note_order(const Token& where, const std::string& v, int order) {
    auto [it, inserted] = orders_.emplace(v, order);
    if (!inserted && it->second != order) {
      throw ParseError("variable '" + v + "' used at inconsistent orders", where.line,
                       where.col);
    }
  }

  bool at_quantifier() const {
    switch (peek().kind) {
      case Tok::Exists1:
      case Tok::Forall1:
      case Tok::Exists2:
      case Tok::Forall2:
      case Tok::Exists3:
      case Tok::Forall3:
        return true;
      default:
        return false;
    }
  }

  ArithFormula formula() { return iff_expr(); }

  ArithFormula iff_expr() {
    ArithFormula a = implies_expr();
    if (accept(Tok::IffOp)) return a_iff(a, iff_expr());
    return a;
  }
  ArithFormula implies_expr() {
    ArithFormula a = or_expr();
    if (accept(Tok::ImpliesOp)) return a_implies(a, implies_expr());
    return a;
  }
  ArithFormula or_expr() {
    ArithFormula a = and_expr();
    while (accept(Tok::OrOp)) a = a_or(a, and_expr());
    return a;
  }
  ArithFormula and_expr() {
    ArithFormula a = unary_expr();
    while (accept(Tok::AndOp)) a = a_and(a, unary_expr());
    return a;
  }
  ArithFormula unary_expr() {
    if (accept(Tok::Not)) return a_not(unary_expr());
    return primary();
  }

  ArithFormula primary() {
    if (accept(Tok::LParen)) {
      ArithFormula f = formula();
      expect(Tok::RParen, "')'");
      return f;
    }
    if (at_quantifier()) return quantified();
    if (at(Tok::Ident)) return atom();
    fail("expected an arithmetic formula");
  }

  ArithFormula quantified() {
    Token q = take();
    bool exists = q.kind == Tok::Exists1 || q.kind == Tok::Exists2 || q.kind == Tok::Exists3;
    int order = (q.kind == Tok::Exists1 || q.kind == Tok::Forall1)   ? 1
                : (q.kind == Tok::Exists2 || q.kind == Tok::Forall2) ? 2
                                                                     : 3;
    Token var = expect(Tok::Ident, "variable");
    int saved = orders_.count(var.text) ? orders_[var.text] : 0;
    orders_[var.text] = order;
    expect(Tok::Dot, "'.'");
    ArithFormula body = formula();
    if (saved) orders_[var.text] = saved; else orders_.erase(var.text);
    return exists ? a_exists(order, var.text, std::move(body))
                  : a_forall(order, var.text, std::move(body));
  }

  ArithFormula atom() {
    Token first = expect(Tok::Ident, "variable");
    if (accept(Tok::Less)) {
      Token second = expect(Tok::Ident, "variable");
      note_order(first, first.text, 1);
      note_order(second, second.text, 1);
      return a_less(first.text, second.text);
    }
    if (accept(Tok::Plus)) {
      Token second = expect(Tok::Ident, "variable");
      expect(Tok::Equals, "'='");
      Token third = expect(Tok::Ident, "variable");
      note_order(first, first.text, 1);
      note_order(second, second.text, 1);
      note_order(third, third.text, 1);
      return a_sum(first.text, second.text, third.text);
    }
    if (accept(Tok::Star)) {
      Token second = expect(Tok::Ident, "variable");
      expect(Tok::Equals, "'='");
      Token third = expect(Tok::Ident, "variable");
      note_order(first, first.text, 1);
      note_order(second, second.text, 1);
      note_order(third, third.text, 1);
      return a_prod(first.text, second.text, third.text);
    }
    if (accept(Tok::In)) {
      Token second = expect(Tok::Ident, "variable");
      int lhs = orders_.count(first.text) ? orders_[first.text] : 0;
      int rhs = orders_.count(second.text) ? orders_[second.text] : 0;
      if (lhs == 0 && rhs != 0) lhs = rhs - 1;
      if (rhs == 0 && lhs != 0) rhs = lhs + 1;
      if (lhs == 0 && rhs == 0) {
        lhs = 1;
        rhs = 2;
      }
      if (rhs != lhs + 1 || lhs < 1 || rhs > 3) {
        throw ParseError("membership orders must be (1,2) or (2,3)", first.line,
                         first.col);
      }
      note_order(first, first.text, lhs);
      note_order(second, second.text, rhs);
      return lhs == 1 ? a_in(first.text, second.text)
                      : a_in_family(first.text, second.text);
    }
    fail("expected an arithmetic atom");
  }
};

}  // namespace

Formula parse_formula(const std::string& text, Logic logic) {
  return FormulaParser(lex(text), logic).parse();
}

ArithFormula parse_arith(const std::string& text) {
  return ArithParser(lex(text)).parse();
}

// ---------------------------------------------------------------------------
// printers
// ---------------------------------------------------------------------------

namespace {

bool is_quantifier_kind(Kind k) {
  return k == Kind::TraceQuant || k == Kind::PropQuant || k == Kind::SetQuant;
}

void print_node(const Formula& f, std::string& out);

void print_operand(const Formula& f, std::string& out) {
  // binaries self-parenthesize; quantifier operands need explicit grouping
  if (is_quantifier_kind(f.kind())) {
    out += "(";
    print_node(f, out);
    out += ")";
  } else {
    print_node(f, out);
  }
}

void print_node(const Formula& f, std::string& out) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::LabeledAtom:
      out += n.prop + "[" + n.tvar + "]";
      return;
    case Kind::PropAtom:
      out += n.prop;
      return;
    case Kind::AxiomPlusTimes:
      out += "AXIOM_PLUS_TIMES";
      return;
    case Kind::Not:
      out += "!";
      print_operand(n.a, out);
      return;
    case Kind::Next:
      out += "X ";
      print_operand(n.a, out);
      return;
    case Kind::Eventually:
      out += "F ";
      print_operand(n.a, out);
      return;
    case Kind::Always:
      out += "G ";
      print_operand(n.a, out);
      return;
    case Kind::Or:
    case Kind::And:
    case Kind::Implies:
    case Kind::Iff:
    case Kind::Until: {
      const char* op = n.kind == Kind::Or        ? " | "
                       : n.kind == Kind::And     ? " & "
                       : n.kind == Kind::Implies ? " -> "
                       : n.kind == Kind::Iff     ? " <-> "
                                                 : " U ";
      out += "(";
      print_operand(n.a, out);
      out += op;
      print_operand(n.b, out);
      out += ")";
      return;
    }
    case Kind::TraceQuant:
      out += n.exists ? "exists " : "forall ";
      out += n.tvar;
      if (n.set) out += " in " + n.set->name;
      out += " . ";
      print_node(n.a, out);
      return;
    case Kind::PropQuant:
      out += n.exists ? "existsP " : "forallP ";
      out += n.prop + " . ";
      print_node(n.a, out);
      return;
    case Kind::SetQuant:
      out += n.exists ? "existsS " : "forallS ";
      out += n.set->name + " . ";
      print_node(n.a, out);
      return;
  }
}

void print_arith_node(const ArithFormula& f, std::string& out) {
  const ANode& n = f.node();
  switch (n.kind) {
    case AKind::Less:
      out += n.x + " < " + n.y;
      return;
    case AKind::SumEq:
      out += n.x + " + " + n.y + " = " + n.z;
      return;
    case AKind::ProdEq:
      out += n.x + " * " + n.y + " = " + n.z;
      return;
    case AKind::InSet:
    case AKind::InFamily:
      out += n.x + " in " + n.y;
      return;
    case AKind::Not:
      out += "!(";
      print_arith_node(n.a, out);
      out += ")";
      return;
    case AKind::Or:
    case AKind::And:
    case AKind::Implies:
    case AKind::Iff: {
      const char* op = n.kind == AKind::Or        ? " | "
                       : n.kind == AKind::And     ? " & "
                       : n.kind == AKind::Implies ? " -> "
                                                  : " <-> ";
      out += "(";
      if (n.a.kind() == AKind::Quant) {
        out += "(";
        print_arith_node(n.a, out);
        out += ")";
      } else {
        print_arith_node(n.a, out);
      }
      out += op;
      if (n.b.kind() == AKind::Quant) {
        out += "(";
        print_arith_node(n.b, out);
        out += ")";
      } else {
        print_arith_node(n.b, out);
      }
      out += ")";
      return;
    }
    case AKind::Quant: {
      out += n.exists ? "exists" : "forall";
      out += std::to_string(n.order);
      out += " " + n.x + " . ";
      print_arith_node(n.a, out);
      return;
    }
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  std::string out;
  print_node(f, out);
  return out;
}

std::string print_arith(const ArithFormula& f) {
  std::string out;
  print_arith_node(f, out);
  return out;
}

std::string print_any(const AnyFormula& f) {
  if (std::holds_alternative<Formula>(f)) return print_formula(std::get<Formula>(f));
  return print_arith(std::get<ArithFormula>(f));
}

ParsedFile parse_file_text(const std::string& text,
                           std::optional<FileLogic> logic_override) {
  std::optional<FileLogic> header;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos) continue;
    if (line[start] != '#') break;
    std::string comment = line.substr(start + 1);
    std::size_t key = comment.find("logic:");
    if (key != std::string::npos) {
      std::string tag = comment.substr(key + 6);
      std::size_t b = tag.find_first_not_of(" \t\r");
      std::size_t e = tag.find_last_not_of(" \t\r");
      if (b != std::string::npos) header = file_logic_from_string(tag.substr(b, e - b + 1));
      break;
    }
  }
  std::optional<FileLogic> logic = logic_override ? logic_override : header;
  if (!logic) throw Error("no logic tag: add '#logic: <tag>' or pass one explicitly");
  ParsedFile out;
  out.logic = *logic;
  switch (*logic) {
    case FileLogic::HyperQPTL:
      out.formula = parse_formula(text, Logic::HyperQPTL);
      break;
    case FileLogic::HyperQPTLPlus:
      out.formula = parse_formula(text, Logic::HyperQPTLPlus);
      break;
    case FileLogic::Hyper2LTL:
      out.formula = parse_formula(text, Logic::Hyper2LTL);
      break;
    case FileLogic::Arith:
      out.formula = parse_arith(text);
      break;
  }
  return out;
}

ParsedFile parse_file(const std::string& path, std::optional<FileLogic> logic_override) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_file_text(buf.str(), logic_override);
}

}  // namespace hyperq
