#pragma once

// Text formats.
//
// Model files, one statement per line, `#` starts a comment:
//
//   domain john chris tom
//   pred mathematician: john chris
//   rel loves/2: (john, john) (tom, john)
//
// Formulas:
//
//   mathematician(john) & ~loves(tom, chris) -> T
//   all greek human
//   exists brown & loves(john, _)
//
// `~` binds tightest, then `&`, then `|`, then `->` (right-associative).
// `T`, `F` and `[t, f]` are truth literals. Quantifiers are only allowed at
// the root; their arguments are set expressions built from predicate names,
// partial relations with a single trailing `_`, `&` (intersection) and `|`
// (union).

#include <charconv>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tenlog/error.hpp"
#include "tenlog/formula.hpp"
#include "tenlog/model.hpp"

namespace tenlog {

namespace dsl {

enum class Tok {
  kIdent,
  kNumber,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kComma,
  kColon,
  kSlash,
  kTilde,
  kAmp,
  kPipe,
  kArrow,
  kUnderscore,
  kNewline,
  kEnd,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

inline std::string where(std::size_t line, std::size_t column) {
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

inline std::string where(const Token& t) { return where(t.line, t.column); }

inline bool is_reserved(std::string_view name) {
  return name == "domain" || name == "pred" || name == "rel" || name == "all" ||
         name == "exists" || name == "T" || name == "F" || name == "_";
}

inline bool ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
inline bool ident_char(char c) { return ident_start(c) || (c >= '0' && c <= '9'); }
inline bool digit(char c) { return c >= '0' && c <= '9'; }

/// Splits text into tokens. Newlines are kept as tokens so line-oriented
/// formats can use them; comments run from `#` to end of line.
inline std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> out;
  std::size_t line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::size_t len) {
    out.push_back({k, std::string(text.substr(i, len)), line, col});
    i += len;
    col += len;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      out.push_back({Tok::kNewline, "\n", line, col});
      ++i;
      ++line;
      col = 1;
    } else if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      ++col;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') {
        ++i;
        ++col;
      }
    } else if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      push(j - i == 1 && c == '_' ? Tok::kUnderscore : Tok::kIdent, j - i);
    } else if (digit(c) || ((c == '.' || c == '-' || c == '+') && i + 1 < text.size() &&
                            (digit(text[i + 1]) || text[i + 1] == '.'))) {
      std::size_t j = i + 1;
      while (j < text.size() &&
             (digit(text[j]) || text[j] == '.' || text[j] == 'e' || text[j] == 'E' ||
              ((text[j] == '-' || text[j] == '+') && (text[j - 1] == 'e' || text[j - 1] == 'E')))) {
        ++j;
      }
      push(Tok::kNumber, j - i);
    } else if (c == '-' && i + 1 < text.size() && text[i + 1] == '>') {
      push(Tok::kArrow, 2);
    } else {
      Tok k;
      switch (c) {
        case '(': k = Tok::kLParen; break;
        case ')': k = Tok::kRParen; break;
        case '[': k = Tok::kLBracket; break;
        case ']': k = Tok::kRBracket; break;
        case ',': k = Tok::kComma; break;
        case ':': k = Tok::kColon; break;
        case '/': k = Tok::kSlash; break;
        case '~': k = Tok::kTilde; break;
        case '&': k = Tok::kAmp; break;
        case '|': k = Tok::kPipe; break;
        default:
          throw Error(ErrorCode::kSyntaxError,
                      where(line, col) + ": unexpected character '" + std::string(1, c) + "'");
      }
      push(k, 1);
    }
  }
  out.push_back({Tok::kEnd, "", line, col});
  return out;
}

inline std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEnd: return "end of input";
    case Tok::kNewline: return "end of line";
    default: return "'" + t.text + "'";
  }
}

class Cursor {
 public:
  explicit Cursor(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }
  const Token& expect(Tok k, std::string_view what) {
    if (!at(k)) fail(peek(), "expected " + std::string(what) + ", found " + describe(peek()));
    return next();
  }
  void skip_newlines() {
    while (at(Tok::kNewline)) next();
  }

  [[noreturn]] static void fail(const Token& t, const std::string& msg,
                                ErrorCode code = ErrorCode::kSyntaxError) {
    throw Error(code, where(t) + ": " + msg);
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace dsl

// ---------------------------------------------------------------------------
// Models

inline Model parse_model(std::string_view text) {
  using dsl::Cursor;
  using dsl::Tok;
  Cursor cur(dsl::tokenize(text));

  std::vector<std::string> atoms;
  std::unordered_map<std::string, std::size_t> atom_index;
  std::set<std::string> names;
  std::vector<PredicateDecl> preds;
  std::vector<RelationDecl> rels;
  bool have_domain = false;

  auto declare = [&](const dsl::Token& t) {
    if (dsl::is_reserved(t.text)) Cursor::fail(t, "'" + t.text + "' is a reserved word");
    if (!names.insert(t.text).second) {
      Cursor::fail(t, "name '" + t.text + "' is already declared", ErrorCode::kDuplicateName);
    }
  };
  auto lookup_atom = [&](const dsl::Token& t) {
    auto it = atom_index.find(t.text);
    if (it == atom_index.end()) {
      Cursor::fail(t, "'" + t.text + "' is not a declared atom", ErrorCode::kUnknownAtomInExtension);
    }
    return it->second;
  };
  auto end_statement = [&] {
    if (!cur.at(Tok::kEnd)) cur.expect(Tok::kNewline, "end of line");
  };

  for (cur.skip_newlines(); !cur.at(Tok::kEnd); cur.skip_newlines()) {
    const dsl::Token& kw = cur.expect(Tok::kIdent, "'domain', 'pred' or 'rel'");
    if (kw.text == "domain") {
      if (have_domain) Cursor::fail(kw, "the domain is declared twice");
      have_domain = true;
      while (cur.at(Tok::kIdent)) {
        const dsl::Token& a = cur.next();
        declare(a);
        atom_index.emplace(a.text, atoms.size());
        atoms.push_back(a.text);
      }
      if (atoms.empty()) Cursor::fail(cur.peek(), "the domain needs at least one atom");
      end_statement();
    } else if (kw.text == "pred" || kw.text == "rel") {
      if (!have_domain) Cursor::fail(kw, "'" + kw.text + "' before 'domain'");
      const dsl::Token& name = cur.expect(Tok::kIdent, "a name");
      declare(name);
      if (kw.text == "pred") {
        cur.expect(Tok::kColon, "':'");
        PredicateDecl p{name.text, {}};
        while (cur.at(Tok::kIdent)) p.extension.insert(lookup_atom(cur.next()));
        preds.push_back(std::move(p));
      } else {
        cur.expect(Tok::kSlash, "'/' and an arity");
        const dsl::Token& n = cur.expect(Tok::kNumber, "an arity");
        std::size_t arity = 0;
        auto [ptr, ec] = std::from_chars(n.text.data(), n.text.data() + n.text.size(), arity);
        if (ec != std::errc() || ptr != n.text.data() + n.text.size() || arity == 0) {
          Cursor::fail(n, "arity must be a positive integer", ErrorCode::kArityError);
        }
        cur.expect(Tok::kColon, "':'");
        RelationDecl r{name.text, arity, {}};
        while (cur.at(Tok::kLParen)) {
          const dsl::Token& open = cur.next();
          Tuple tuple;
          tuple.push_back(lookup_atom(cur.expect(Tok::kIdent, "an atom")));
          while (cur.accept(Tok::kComma)) tuple.push_back(lookup_atom(cur.expect(Tok::kIdent, "an atom")));
          cur.expect(Tok::kRParen, "')'");
          if (tuple.size() != arity) {
            Cursor::fail(open,
                         "tuple of length " + std::to_string(tuple.size()) + " for '" + name.text +
                             "' of arity " + std::to_string(arity),
                         ErrorCode::kArityError);
          }
          r.extension.insert(std::move(tuple));
        }
        rels.push_back(std::move(r));
      }
      end_statement();
    } else {
      Cursor::fail(kw, "unknown statement '" + kw.text + "'");
    }
  }
  if (!have_domain) Cursor::fail(cur.peek(), "missing 'domain' statement");
  return Model(std::move(atoms), std::move(preds), std::move(rels));
}

/// Canonical text: domain, then predicates, then relations, each in
/// declaration order; extensions in domain order.
inline std::string print_model(const Model& m) {
  std::string out = "domain";
  for (const auto& a : m.atoms()) out += ' ' + a.name;
  out += '\n';
  for (const auto& p : m.predicates()) {
    out += "pred " + p.name + ':';
    for (std::size_t i : p.extension) out += ' ' + m.atoms()[i].name;
    out += '\n';
  }
  for (const auto& r : m.relations()) {
    out += "rel " + r.name + '/' + std::to_string(r.arity) + ':';
    for (const Tuple& t : r.extension) {
      out += " (";
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (k) out += ", ";
        out += m.atoms()[t[k]].name;
      }
      out += ')';
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Formulas

namespace dsl {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Model& m) : cur_(strip_newlines(tokenize(text))), m_(m) {}

  FormulaPtr parse() {
    FormulaPtr f;
    const Token& first = cur_.peek();
    if (first.kind == Tok::kIdent && (first.text == "all" || first.text == "exists")) {
      cur_.next();
      if (first.text == "all") {
        SetExprPtr restrictor = set_expr();
        SetExprPtr scope = set_expr();
        f = for_all(std::move(restrictor), std::move(scope));
      } else {
        f = there_exists(set_expr());
      }
      if (cur_.at(Tok::kAmp) || cur_.at(Tok::kPipe) || cur_.at(Tok::kArrow)) {
        Cursor::fail(cur_.peek(), "a quantified formula cannot be combined with connectives",
                     ErrorCode::kEmbeddedQuantifier);
      }
    } else {
      f = implication();
    }
    if (!cur_.at(Tok::kEnd)) Cursor::fail(cur_.peek(), "unexpected " + describe(cur_.peek()));
    return f;
  }

 private:
  static std::vector<Token> strip_newlines(std::vector<Token> toks) {
    std::erase_if(toks, [](const Token& t) { return t.kind == Tok::kNewline; });
    return toks;
  }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (cur_.accept(Tok::kArrow)) return implies(lhs, implication());
    return lhs;
  }

  FormulaPtr disjunction() {
    FormulaPtr lhs = conjunction();
    while (cur_.accept(Tok::kPipe)) lhs = disj(lhs, conjunction());
    return lhs;
  }

  FormulaPtr conjunction() {
    FormulaPtr lhs = unary();
    while (cur_.accept(Tok::kAmp)) lhs = conj(lhs, unary());
    return lhs;
  }

  FormulaPtr unary() {
    if (cur_.accept(Tok::kTilde)) return negate(unary());
    return primary();
  }

  double number() {
    const Token& t = cur_.expect(Tok::kNumber, "a number");
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
      Cursor::fail(t, "malformed number '" + t.text + "'");
    }
    return v;
  }

  FormulaPtr primary() {
    const Token& t = cur_.peek();
    switch (t.kind) {
      case Tok::kLParen: {
        cur_.next();
        FormulaPtr inner = implication();
        cur_.expect(Tok::kRParen, "')'");
        return inner;
      }
      case Tok::kLBracket: {
        cur_.next();
        const double tv = number();
        cur_.expect(Tok::kComma, "','");
        const double fv = number();
        cur_.expect(Tok::kRBracket, "']'");
        TruthVec v(tv, fv);
        if (!v.is_normalized()) {
          Cursor::fail(t, "truth literal must be non-negative and sum to 1",
                       ErrorCode::kInvalidTruthVec);
        }
        return constant(v);
      }
      case Tok::kIdent:
        break;
      default:
        Cursor::fail(t, "expected a formula, found " + describe(t));
    }
    const Token name = cur_.next();
    if (name.text == "T") return constant(truth_top());
    if (name.text == "F") return constant(truth_bot());
    if (name.text == "all" || name.text == "exists") {
      Cursor::fail(name, "quantifiers are only allowed at the root of a formula",
                   ErrorCode::kEmbeddedQuantifier);
    }
    const bool is_pred = m_.find_predicate(name.text) != nullptr;
    const RelationDecl* rel = m_.find_relation(name.text);
    if (!is_pred && !rel) {
      Cursor::fail(name, "'" + name.text + "' is neither a predicate nor a relation",
                   ErrorCode::kUnknownName);
    }
    cur_.expect(Tok::kLParen, "'(' after '" + name.text + "'");
    std::vector<std::string> args;
    args.push_back(atom_name());
    while (cur_.accept(Tok::kComma)) args.push_back(atom_name());
    cur_.expect(Tok::kRParen, "')'");
    if (is_pred) {
      if (args.size() != 1) {
        Cursor::fail(name, "predicate '" + name.text + "' takes one argument", ErrorCode::kArityError);
      }
      return atom(name.text, args.front());
    }
    if (args.size() != rel->arity) {
      Cursor::fail(name,
                   "relation '" + name.text + "' has arity " + std::to_string(rel->arity) +
                       ", given " + std::to_string(args.size()),
                   ErrorCode::kArityError);
    }
    return rel_atom(name.text, std::move(args));
  }

  std::string atom_name() {
    const Token& t = cur_.peek();
    if (t.kind == Tok::kUnderscore) {
      Cursor::fail(t, "'_' is only allowed inside quantified set expressions");
    }
    cur_.expect(Tok::kIdent, "an atom");
    if (!m_.atom_index(t.text)) {
      Cursor::fail(t, "'" + t.text + "' is not a domain atom", ErrorCode::kUnknownName);
    }
    return t.text;
  }

  SetExprPtr set_expr() {
    SetExprPtr lhs = set_conjunction();
    while (cur_.accept(Tok::kPipe)) lhs = set_or(lhs, set_conjunction());
    return lhs;
  }

  SetExprPtr set_conjunction() {
    SetExprPtr lhs = set_primary();
    while (cur_.accept(Tok::kAmp)) lhs = set_and(lhs, set_primary());
    return lhs;
  }

  SetExprPtr set_primary() {
    if (cur_.accept(Tok::kLParen)) {
      SetExprPtr inner = set_expr();
      cur_.expect(Tok::kRParen, "')'");
      return inner;
    }
    const Token name = cur_.expect(Tok::kIdent, "a set expression");
    if (name.text == "all" || name.text == "exists") {
      Cursor::fail(name, "quantifiers cannot be nested", ErrorCode::kEmbeddedQuantifier);
    }
    if (m_.find_predicate(name.text)) return set_pred(name.text);
    const RelationDecl* rel = m_.find_relation(name.text);
    if (!rel) {
      Cursor::fail(name, "'" + name.text + "' is neither a predicate nor a relation",
                   ErrorCode::kUnknownName);
    }
    cur_.expect(Tok::kLParen, "'(' after relation '" + name.text + "'");
    std::vector<std::string> prefix;
    while (!cur_.at(Tok::kUnderscore)) {
      prefix.push_back(atom_name());
      if (!cur_.accept(Tok::kComma)) {
        Cursor::fail(cur_.peek(), "a partial relation needs '_' in its last argument");
      }
    }
    cur_.next();
    if (cur_.at(Tok::kComma)) {
      Cursor::fail(cur_.peek(), "'_' must be the last argument of a partial relation");
    }
    cur_.expect(Tok::kRParen, "')'");
    if (prefix.size() + 1 != rel->arity) {
      Cursor::fail(name,
                   "relation '" + name.text + "' has arity " + std::to_string(rel->arity) +
                       "; a set needs exactly one open slot",
                   ErrorCode::kArityError);
    }
    return set_partial(name.text, std::move(prefix));
  }

  Cursor cur_;
  const Model& m_;
};

}  // namespace dsl

/// Parses and binds a formula against `m`.
inline FormulaPtr parse_formula(std::string_view text, const Model& m) {
  FormulaPtr f = dsl::FormulaParser(text, m).parse();
  bind(*f, m);
  return f;
}

}  // namespace tenlog
