// Copyright 2026 The randworlds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "randworlds/dsl.hpp"

#include <cctype>
#include <sstream>

#include <nlohmann/json.hpp>

namespace randworlds {

namespace {

enum class Tok {
  Ident,
  Number,
  Semi,        // ;
  LParen,      // (
  RParen,      // )
  Colon,       // :
  Amp,         // &
  Bar,         // |
  BarBar,      // ||
  Arrow,       // =>
  Approx,      // ~=
  AtMost,      // <=~
  AtLeast,     // >=~
  Slash,       // /
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { tokenize(); }

  const std::vector<Token>& tokens() const { return tokens_; }
  const std::vector<ParseError>& errors() const { return errors_; }

 private:
  void tokenize() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
        continue;
      }
      SourceSpan span{pos_, pos_, line_, col_};
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string word;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                text_[pos_] == '_')) {
          word += text_[pos_];
          advance();
        }
        span.end = pos_;
        push(Tok::Ident, word, span);
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c))) {
        std::string num;
        bool seen_dot = false;
        while (pos_ < text_.size() &&
               (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
                (text_[pos_] == '.' && !seen_dot))) {
          if (text_[pos_] == '.') seen_dot = true;
          num += text_[pos_];
          advance();
        }
        span.end = pos_;
        push(Tok::Number, num, span);
        continue;
      }
      if (take("<=~", Tok::AtMost, span)) continue;
      if (take(">=~", Tok::AtLeast, span)) continue;
      if (take("~=", Tok::Approx, span)) continue;
      if (take("=>", Tok::Arrow, span)) continue;
      if (take("||", Tok::BarBar, span)) continue;
      if (take("|", Tok::Bar, span)) continue;
      if (take(";", Tok::Semi, span)) continue;
      if (take("(", Tok::LParen, span)) continue;
      if (take(")", Tok::RParen, span)) continue;
      if (take(":", Tok::Colon, span)) continue;
      if (take("&", Tok::Amp, span)) continue;
      if (take("/", Tok::Slash, span)) continue;
      span.end = pos_ + 1;
      errors_.push_back({span, std::string("unexpected character '") + c + "'", ""});
      advance();
    }
    tokens_.push_back({Tok::End, "", {pos_, pos_, line_, col_}});
  }

  bool take(const char* lexeme, Tok kind, SourceSpan span) {
    std::size_t len = std::string(lexeme).size();
    if (text_.compare(pos_, len, lexeme) != 0) return false;
    for (std::size_t i = 0; i < len; ++i) advance();
    span.end = pos_;
    push(kind, lexeme, span);
    return true;
  }

  void push(Tok kind, std::string text, SourceSpan span) {
    tokens_.push_back({kind, std::move(text), span});
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::vector<Token> tokens_;
  std::vector<ParseError> errors_;
};

class Parser {
 public:
  Parser(const std::vector<Token>& tokens, std::vector<ParseError> lex_errors)
      : tokens_(tokens), errors_(std::move(lex_errors)) {}

  KnowledgeBase parse() {
    KnowledgeBase kb;
    while (!at(Tok::End)) {
      if (!statement(kb)) recover();
    }
    kb.normalize();
    return kb;
  }

  std::vector<ParseError> take_errors() { return std::move(errors_); }
  std::vector<SourceSpan> take_constraint_spans() {
    return std::move(constraint_spans_);
  }

 private:
  const Token& cur() const { return tokens_[index_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(const char* kw) const {
    return cur().kind == Tok::Ident && cur().text == kw;
  }
  Token next() { return tokens_[index_ == tokens_.size() - 1 ? index_ : index_++]; }

  bool expect(Tok k, const char* what) {
    if (at(k)) {
      next();
      return true;
    }
    error(std::string("expected ") + what, what);
    return false;
  }

  void error(const std::string& message, const std::string& expected) {
    errors_.push_back({cur().span, message, expected});
  }

  void recover() {
    while (!at(Tok::End) && !at(Tok::Semi)) next();
    if (at(Tok::Semi)) next();
  }

  bool statement(KnowledgeBase& kb) {
    if (at_keyword("pred")) return pred_decl(kb);
    if (at_keyword("const")) return const_decl(kb);
    if (at_keyword("fact")) return fact_decl(kb);
    if (at_keyword("rule")) return rule_decl(kb);
    if (at_keyword("stat")) return stat_decl(kb);
    error("expected declaration (pred, const, fact, rule, or stat)",
          "pred|const|fact|rule|stat");
    return false;
  }

  bool pred_decl(KnowledgeBase& kb) {
    next();
    if (!at(Tok::Ident)) return expect(Tok::Ident, "predicate name");
    kb.add_predicate(next().text);
    return expect(Tok::Semi, "';'");
  }

  bool const_decl(KnowledgeBase& kb) {
    next();
    if (!at(Tok::Ident)) return expect(Tok::Ident, "constant name");
    kb.add_constant(next().text);
    return expect(Tok::Semi, "';'");
  }

  bool fact_decl(KnowledgeBase& kb) {
    next();
    bool negated = false;
    if (at_keyword("not")) {
      negated = true;
      next();
    }
    if (!at(Tok::Ident)) return expect(Tok::Ident, "predicate name");
    std::string pred = next().text;
    if (!expect(Tok::LParen, "'('")) return false;
    if (!at(Tok::Ident)) return expect(Tok::Ident, "constant name");
    std::string constant = next().text;
    if (!expect(Tok::RParen, "')'")) return false;
    kb.add_fact(constant, pred, negated);
    return expect(Tok::Semi, "';'");
  }

  bool rule_decl(KnowledgeBase& kb) {
    next();
    if (!at_keyword("forall")) return expect(Tok::Ident, "'forall'");
    next();
    if (!at_keyword("x")) return expect(Tok::Ident, "'x'");
    next();
    if (!expect(Tok::Colon, "':'")) return false;
    Conjunction ante, cons;
    if (!conjunction(ante)) return false;
    if (!expect(Tok::Arrow, "'=>'")) return false;
    if (!conjunction(cons)) return false;
    kb.rules.push_back({std::move(ante), std::move(cons)});
    return expect(Tok::Semi, "';'");
  }

  bool stat_decl(KnowledgeBase& kb) {
    SourceSpan stat_span = cur().span;
    next();
    if (!expect(Tok::BarBar, "'||'")) return false;
    Conjunction target, condition;
    if (!conjunction(target)) return false;
    if (!expect(Tok::Bar, "'|'")) return false;
    if (!conjunction(condition)) return false;
    if (!expect(Tok::BarBar, "'||'")) return false;
    if (!at_keyword("x")) return expect(Tok::Ident, "'x'");
    next();

    Relation rel;
    if (at(Tok::Approx)) rel = Relation::Approx;
    else if (at(Tok::AtMost)) rel = Relation::AtMost;
    else if (at(Tok::AtLeast)) rel = Relation::AtLeast;
    else {
      error("expected relation '~=', '<=~' or '>=~'", "~=|<=~|>=~");
      return false;
    }
    next();

    SourceSpan value_span = cur().span;
    Rational value;
    if (!rational(value, value_span)) return false;
    if (value < 0 || value > 1) {
      errors_.push_back({value_span,
                         "proportion value " + format_rational(value) +
                             " outside [0,1]",
                         "rational in [0,1]"});
      // fall through; the statement is still consumed
    }

    std::size_t tol = 0;
    if (at_keyword("tol")) {
      next();
      if (!at(Tok::Number) || cur().text.find('.') != std::string::npos) {
        return expect(Tok::Number, "tolerance index");
      }
      tol = static_cast<std::size_t>(std::stoul(next().text));
    }
    kb.constraints.push_back(
        {std::move(target), std::move(condition), rel, value, tol});
    stat_span.end = cur().span.end;
    constraint_spans_.push_back(stat_span);
    return expect(Tok::Semi, "';'");
  }

  bool rational(Rational& out, SourceSpan& span) {
    if (!at(Tok::Number)) return expect(Tok::Number, "rational value");
    Token num = next();
    std::string text = num.text;
    span = num.span;
    if (at(Tok::Slash)) {
      next();
      if (!at(Tok::Number)) return expect(Tok::Number, "denominator");
      Token den = next();
      text += "/" + den.text;
      span.end = den.span.end;
    }
    auto value = parse_rational(text);
    if (!value) {
      errors_.push_back({span, "malformed rational '" + text + "'", ""});
      return false;
    }
    out = *value;
    return true;
  }

  bool conjunction(Conjunction& out) {
    if (at_keyword("true")) {
      next();
      out = Conjunction{};
      return true;
    }
    std::vector<Literal> lits;
    while (true) {
      bool negated = false;
      if (at_keyword("not")) {
        negated = true;
        next();
      }
      if (!at(Tok::Ident)) return expect(Tok::Ident, "predicate name");
      std::string pred = next().text;
      if (!expect(Tok::LParen, "'('")) return false;
      if (!at_keyword("x")) return expect(Tok::Ident, "'x'");
      next();
      if (!expect(Tok::RParen, "')'")) return false;
      lits.push_back({pred, negated});
      if (!at(Tok::Amp)) break;
      next();
    }
    out = Conjunction(std::move(lits));
    return true;
  }

  const std::vector<Token>& tokens_;
  std::size_t index_ = 0;
  std::vector<ParseError> errors_;
  std::vector<SourceSpan> constraint_spans_;
};

}  // namespace

ParseResult parse_kb(const std::string& text) {
  Lexer lexer(text);
  Parser parser(lexer.tokens(), lexer.errors());
  KnowledgeBase kb = parser.parse();
  ParseResult result;
  result.errors = parser.take_errors();
  result.validation = validate_kb(kb);
  result.constraint_spans = parser.take_constraint_spans();
  if (result.errors.empty()) result.kb = std::move(kb);
  return result;
}

QueryParseResult parse_query(const std::string& text, const KnowledgeBase& kb) {
  QueryParseResult result;
  Lexer lexer(text);
  const auto& toks = lexer.tokens();
  result.errors = lexer.errors();
  if (!result.errors.empty()) return result;

  std::size_t i = 0;
  std::string constant;
  std::vector<Literal> lits;
  while (true) {
    bool negated = false;
    if (toks[i].kind == Tok::Ident && toks[i].text == "not") {
      negated = true;
      ++i;
    }
    if (toks[i].kind != Tok::Ident) {
      result.errors.push_back({toks[i].span, "expected predicate name", "name"});
      return result;
    }
    std::string pred = toks[i++].text;
    if (toks[i].kind != Tok::LParen) {
      result.errors.push_back({toks[i].span, "expected '('", "("});
      return result;
    }
    ++i;
    if (toks[i].kind != Tok::Ident) {
      result.errors.push_back({toks[i].span, "expected constant name", "name"});
      return result;
    }
    std::string c = toks[i].text;
    if (!kb.has_constant(c)) {
      result.errors.push_back(
          {toks[i].span, "unknown constant '" + c + "'", "declared constant"});
      return result;
    }
    if (!constant.empty() && c != constant) {
      result.errors.push_back(
          {toks[i].span, "query mentions more than one constant", ""});
      return result;
    }
    constant = c;
    ++i;
    if (toks[i].kind != Tok::RParen) {
      result.errors.push_back({toks[i].span, "expected ')'", ")"});
      return result;
    }
    ++i;
    if (!kb.has_predicate(pred)) {
      result.errors.push_back(
          {toks[i - 4].span, "unknown predicate '" + pred + "'",
           "declared predicate"});
      return result;
    }
    lits.push_back({pred, negated});
    if (toks[i].kind == Tok::Amp) {
      ++i;
      continue;
    }
    break;
  }
  if (toks[i].kind != Tok::End) {
    result.errors.push_back({toks[i].span, "trailing input after query", ""});
    return result;
  }
  result.query = Query{constant, Conjunction(std::move(lits))};
  return result;
}

std::string print_conjunction(const Conjunction& conj) {
  if (conj.empty()) return "true";
  std::ostringstream out;
  bool first = true;
  for (const Literal& lit : conj.literals) {
    if (!first) out << " & ";
    first = false;
    if (lit.negated) out << "not ";
    out << lit.predicate << "(x)";
  }
  return out.str();
}

std::string print_query(const Query& query) {
  std::ostringstream out;
  bool first = true;
  for (const Literal& lit : query.target.literals) {
    if (!first) out << " & ";
    first = false;
    if (lit.negated) out << "not ";
    out << lit.predicate << "(" << query.constant << ")";
  }
  return out.str();
}

std::string print_kb(const KnowledgeBase& kb) {
  std::ostringstream out;
  for (const PredicateSymbol& p : kb.vocabulary) {
    out << "pred " << p.name << ";\n";
  }
  for (const Constant& c : kb.constants) {
    out << "const " << c.name << ";\n";
  }
  for (const GroundFact& f : kb.facts) {
    out << "fact ";
    if (f.literal.negated) out << "not ";
    out << f.literal.predicate << "(" << f.constant << ");\n";
  }
  for (const UniversalRule& r : kb.rules) {
    out << "rule forall x: " << print_conjunction(r.antecedent) << " => "
        << print_conjunction(r.consequent) << ";\n";
  }
  for (const ProportionConstraint& c : kb.constraints) {
    out << "stat ||" << print_conjunction(c.target) << " | "
        << print_conjunction(c.condition) << "||x " << relation_token(c.relation)
        << " " << format_rational(c.value);
    if (c.tolerance_index != 0) out << " tol " << c.tolerance_index;
    out << ";\n";
  }
  return out.str();
}

namespace {

nlohmann::json conj_to_json(const Conjunction& conj) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Literal& lit : conj.literals) {
    arr.push_back({{"predicate", lit.predicate}, {"negated", lit.negated}});
  }
  return arr;
}

Conjunction conj_from_json(const nlohmann::json& j) {
  std::vector<Literal> lits;
  for (const auto& item : j) {
    lits.push_back({item.at("predicate").get<std::string>(),
                    item.at("negated").get<bool>()});
  }
  return Conjunction(std::move(lits));
}

const char* relation_name(Relation r) {
  switch (r) {
    case Relation::Approx: return "approx";
    case Relation::AtMost: return "at_most";
    case Relation::AtLeast: return "at_least";
  }
  return "approx";
}

Relation relation_from_name(const std::string& name) {
  if (name == "approx") return Relation::Approx;
  if (name == "at_most") return Relation::AtMost;
  if (name == "at_least") return Relation::AtLeast;
  throw std::invalid_argument("unknown relation '" + name + "'");
}

Rational rational_from_json(const nlohmann::json& j) {
  auto value = parse_rational(j.get<std::string>());
  if (!value) {
    throw std::invalid_argument("malformed rational '" + j.get<std::string>() +
                                "'");
  }
  return *value;
}

}  // namespace

nlohmann::json kb_to_json(const KnowledgeBase& kb) {
  nlohmann::json j;
  j["predicates"] = nlohmann::json::array();
  for (const PredicateSymbol& p : kb.vocabulary) {
    nlohmann::json pj = {{"name", p.name}};
    if (p.curried_from) pj["curried_from"] = *p.curried_from;
    j["predicates"].push_back(pj);
  }
  j["constants"] = nlohmann::json::array();
  for (const Constant& c : kb.constants) j["constants"].push_back(c.name);
  j["facts"] = nlohmann::json::array();
  for (const GroundFact& f : kb.facts) {
    j["facts"].push_back({{"constant", f.constant},
                          {"predicate", f.literal.predicate},
                          {"negated", f.literal.negated}});
  }
  j["rules"] = nlohmann::json::array();
  for (const UniversalRule& r : kb.rules) {
    j["rules"].push_back({{"antecedent", conj_to_json(r.antecedent)},
                          {"consequent", conj_to_json(r.consequent)}});
  }
  j["constraints"] = nlohmann::json::array();
  for (const ProportionConstraint& c : kb.constraints) {
    j["constraints"].push_back({{"target", conj_to_json(c.target)},
                                {"condition", conj_to_json(c.condition)},
                                {"relation", relation_name(c.relation)},
                                {"value", format_rational(c.value)},
                                {"tolerance_index", c.tolerance_index}});
  }
  return j;
}

KnowledgeBase kb_from_json(const nlohmann::json& j) {
  KnowledgeBase kb;
  for (const auto& pj : j.at("predicates")) {
    std::optional<std::string> curried;
    if (pj.contains("curried_from")) curried = pj["curried_from"].get<std::string>();
    kb.add_predicate(pj.at("name").get<std::string>(), curried);
  }
  for (const auto& cj : j.at("constants")) {
    kb.add_constant(cj.get<std::string>());
  }
  for (const auto& fj : j.at("facts")) {
    kb.add_fact(fj.at("constant").get<std::string>(),
                fj.at("predicate").get<std::string>(),
                fj.at("negated").get<bool>());
  }
  for (const auto& rj : j.at("rules")) {
    kb.rules.push_back({conj_from_json(rj.at("antecedent")),
                        conj_from_json(rj.at("consequent"))});
  }
  for (const auto& cj : j.at("constraints")) {
    kb.constraints.push_back(
        {conj_from_json(cj.at("target")), conj_from_json(cj.at("condition")),
         relation_from_name(cj.at("relation").get<std::string>()),
         rational_from_json(cj.at("value")),
         cj.at("tolerance_index").get<std::size_t>()});
  }
  kb.normalize();
  return kb;
}

nlohmann::json query_to_json(const Query& query) {
  return {{"constant", query.constant}, {"target", conj_to_json(query.target)}};
}

Query query_from_json(const nlohmann::json& j) {
  return Query{j.at("constant").get<std::string>(),
               conj_from_json(j.at("target"))};
}

}  // namespace randworlds
