#include "causalkg/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <vector>

#include "causalkg/error.hpp"
#include "causalkg/ontology.hpp"

namespace causalkg {

namespace {

// ---------------------------------------------------------------- serializer

bool pname_local_safe(const std::string& local) {
  for (std::size_t i = 0; i < local.size(); ++i) {
    unsigned char c = local[i];
    if (std::isalnum(c) || c == '_' || c == '-') continue;
    if (c == '%' && i + 2 < local.size() &&
        std::isxdigit(static_cast<unsigned char>(local[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(local[i + 2]))) {
      i += 2;
      continue;
    }
    return false;
  }
  return true;
}

std::string render_iri(const Iri& iri,
                       const std::map<std::string, std::string>& prefixes) {
  const std::string* best_label = nullptr;
  std::size_t best_len = 0;
  for (const auto& [label, ns] : prefixes) {
    if (iri.value.size() >= ns.size() &&
        iri.value.compare(0, ns.size(), ns) == 0 && ns.size() > best_len) {
      std::string local = iri.value.substr(ns.size());
      if (pname_local_safe(local)) {
        best_label = &label;
        best_len = ns.size();
      }
    }
  }
  if (best_label) {
    return *best_label + ":" + iri.value.substr(best_len);
  }
  std::string out = "<";
  for (char c : iri.value) {
    if (c == '>') {
      out += "%3E";
    } else {
      out += c;
    }
  }
  out += ">";
  return out;
}

std::string escape_string(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string render_term(const Term& term,
                        const std::map<std::string, std::string>& prefixes) {
  switch (term.kind()) {
    case Term::Kind::iri:
      return render_iri(term.iri(), prefixes);
    case Term::Kind::literal: {
      const Literal& lit = term.literal();
      std::string out = "\"" + escape_string(lit.lexical) + "\"";
      if (lit.datatype != vocab::xsd_string()) {
        out += "^^" + render_iri(Iri{lit.datatype}, prefixes);
      }
      return out;
    }
    case Term::Kind::embedded: {
      const Statement& st = term.embedded_statement();
      return "<< " + render_term(st.subject, prefixes) + " " +
             render_iri(st.predicate, prefixes) + " " +
             render_term(st.object, prefixes) + " >>";
    }
  }
  return {};
}

}  // namespace

std::string serialize(const CausalKnowledgeGraph& kg) {
  std::string out;
  for (const auto& [label, ns] : kg.prefixes) {
    out += "@prefix " + label + ": <" + ns + "> .\n";
  }
  if (!kg.prefixes.empty() && !kg.statements.empty()) out += "\n";

  // one block per subject: IRI subjects first (set order = expanded IRI),
  // embedded-triple subjects after, ordered by their serialized form
  struct Block {
    std::string subject_text;
    std::vector<std::pair<std::string, std::string>> pairs;  // pred, obj
  };
  std::vector<Block> iri_blocks, embedded_blocks;
  const Term* current_subject = nullptr;
  for (const auto& st : kg.statements) {
    if (!current_subject || !(*current_subject == st.subject)) {
      Block b;
      b.subject_text = render_term(st.subject, kg.prefixes);
      (st.subject.is_embedded() ? embedded_blocks : iri_blocks)
          .push_back(std::move(b));
      current_subject = &st.subject;
    }
    Block& block =
        st.subject.is_embedded() ? embedded_blocks.back() : iri_blocks.back();
    block.pairs.emplace_back(render_iri(st.predicate, kg.prefixes),
                             render_term(st.object, kg.prefixes));
  }
  std::stable_sort(embedded_blocks.begin(), embedded_blocks.end(),
                   [](const Block& a, const Block& b) {
                     return a.subject_text < b.subject_text;
                   });

  auto emit = [&out](const Block& block) {
    out += block.subject_text;
    for (std::size_t i = 0; i < block.pairs.size(); ++i) {
      out += (i == 0) ? " " : " ;\n    ";
      out += block.pairs[i].first + " " + block.pairs[i].second;
    }
    out += " .\n";
  };
  for (const auto& b : iri_blocks) emit(b);
  for (const auto& b : embedded_blocks) emit(b);
  return out;
}

// ------------------------------------------------------------------- parser

namespace {

enum class TokKind {
  at_prefix,
  pname,    // label ':' local (local may be empty)
  iriref,
  string,
  number,
  dot,
  semicolon,
  comma,
  lt_lt,
  gt_gt,
  caret_caret,
  eof,
};

struct Token {
  TokKind kind = TokKind::eof;
  std::string text;       // pname: "label:local"; string: unescaped body
  std::string extra;      // pname local part
  std::string label;      // pname prefix label
  double number = 0.0;
  std::size_t line = 1;
  std::size_t column = 1;

  std::string describe() const {
    switch (kind) {
      case TokKind::at_prefix: return "'@prefix'";
      case TokKind::pname: return "prefixed name '" + text + "'";
      case TokKind::iriref: return "IRI <" + text + ">";
      case TokKind::string: return "string literal";
      case TokKind::number: return "number";
      case TokKind::dot: return "'.'";
      case TokKind::semicolon: return "';'";
      case TokKind::comma: return "','";
      case TokKind::lt_lt: return "'<<'";
      case TokKind::gt_gt: return "'>>'";
      case TokKind::caret_caret: return "'^^'";
      case TokKind::eof: return "end of input";
    }
    return "?";
  }
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_trivia();
    Token tok;
    tok.line = line_;
    tok.column = column_;
    if (pos_ >= text_.size()) {
      tok.kind = TokKind::eof;
      return tok;
    }
    char c = text_[pos_];
    switch (c) {
      case '.': advance(); tok.kind = TokKind::dot; return tok;
      case ';': advance(); tok.kind = TokKind::semicolon; return tok;
      case ',': advance(); tok.kind = TokKind::comma; return tok;
      case '^':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '^') {
          advance();
          tok.kind = TokKind::caret_caret;
          return tok;
        }
        fail(tok, "'^'", {"'^^'"});
      case '<':
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '<') {
          advance();
          advance();
          tok.kind = TokKind::lt_lt;
          return tok;
        }
        return lex_iriref(tok);
      case '>':
        advance();
        if (pos_ < text_.size() && text_[pos_] == '>') {
          advance();
          tok.kind = TokKind::gt_gt;
          return tok;
        }
        fail(tok, "'>'", {"'>>'"});
      case '@':
        return lex_directive(tok);
      case '"':
        return lex_string(tok);
      default:
        if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c))) {
          return lex_number(tok);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
          return lex_pname(tok);
        }
        fail(tok, printable(c), {"a statement", "'@prefix'"});
    }
    return tok;  // unreachable
  }

 private:
  [[noreturn]] void fail(const Token& at, const std::string& found,
                         std::vector<std::string> expected) {
    throw SyntaxError(at.line, at.column, found, std::move(expected));
  }

  static std::string printable(char c) {
    unsigned char u = c;
    if (std::isprint(u)) return std::string("'") + c + "'";
    char buf[16];
    std::snprintf(buf, sizeof(buf), "byte 0x%02X", u);
    return buf;
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token lex_iriref(Token tok) {
    advance();  // '<'
    std::string value;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '>') {
        advance();
        tok.kind = TokKind::iriref;
        tok.text = std::move(value);
        return tok;
      }
      if (c == '\n' || c == '\r') break;
      value += c;
      advance();
    }
    fail(tok, "unterminated IRI", {"'>'"});
  }

  Token lex_directive(Token tok) {
    advance();  // '@'
    std::string word;
    while (pos_ < text_.size() &&
           std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      word += text_[pos_];
      advance();
    }
    if (word != "prefix") {
      fail(tok, "'@" + word + "'", {"'@prefix'"});
    }
    tok.kind = TokKind::at_prefix;
    return tok;
  }

  Token lex_string(Token tok) {
    advance();  // '"'
    std::string value;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '"') {
        advance();
        tok.kind = TokKind::string;
        tok.text = std::move(value);
        return tok;
      }
      if (c == '\n') break;
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) break;
        char esc = text_[pos_];
        switch (esc) {
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 't': value += '\t'; break;
          default:
            fail(tok, std::string("escape '\\") + esc + "'",
                 {"one of \\\" \\\\ \\n \\r \\t"});
        }
        advance();
        continue;
      }
      value += c;
      advance();
    }
    fail(tok, "unterminated string", {"'\"'"});
  }

  Token lex_number(Token tok) {
    std::string text;
    char c = text_[pos_];
    if (c == '+' || c == '-') {
      text += c;
      advance();
    }
    bool any_digit = false;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      text += text_[pos_];
      advance();
      any_digit = true;
    }
    // a '.' belongs to the number only when digits follow; otherwise it is
    // the statement terminator
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      text += '.';
      advance();
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        text += text_[pos_];
        advance();
        any_digit = true;
      }
    }
    if (!any_digit) {
      fail(tok, "'" + text + "'", {"a number"});
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t mark = pos_;
      std::string exp(1, text_[pos_]);
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        exp += text_[pos_];
        advance();
      }
      bool exp_digit = false;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        exp += text_[pos_];
        advance();
        exp_digit = true;
      }
      if (!exp_digit) {
        // not an exponent after all; rewind (no newline can occur here)
        column_ -= pos_ - mark;
        pos_ = mark;
      } else {
        text += exp;
      }
    }
    const char* begin = text.c_str();
    bool negative = false;
    if (*begin == '+') {
      ++begin;
    } else if (*begin == '-') {
      negative = true;
      ++begin;
    }
    double value = 0.0;
    auto res = std::from_chars(begin, text.c_str() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.c_str() + text.size()) {
      fail(tok, "number '" + text + "'", {"a finite number"});
    }
    tok.kind = TokKind::number;
    tok.number = negative ? -value : value;
    tok.text = std::move(text);
    return tok;
  }

  Token lex_pname(Token tok) {
    std::string label;
    while (pos_ < text_.size()) {
      unsigned char c = text_[pos_];
      if (std::isalnum(c) || c == '_' || c == '-') {
        label += static_cast<char>(c);
        advance();
      } else {
        break;
      }
    }
    if (pos_ >= text_.size() || text_[pos_] != ':') {
      fail(tok, "'" + label + "'", {"':' (prefixed name)"});
    }
    advance();  // ':'
    std::string local;
    while (pos_ < text_.size()) {
      unsigned char c = text_[pos_];
      if (std::isalnum(c) || c == '_' || c == '-') {
        local += static_cast<char>(c);
        advance();
       } else if (c == '%') {
        if (pos_ + 2 < text_.size() &&
            std::isxdigit(static_cast<unsigned char>(text_[pos_ + 1])) &&
            std::isxdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
          local += static_cast<char>(c);
          local += text_[pos_ + 1];
          local += text_[pos_ + 2];
          advance();
          advance();
          advance();
        } else {
          fail(tok, "'%'", {"two hex digits after '%'"});
        }
      } else {
        break;
      }
    }
    tok.kind = TokKind::pname;
    tok.label = std::move(label);
    tok.extra = std::move(local);
    tok.text = tok.label + ":" + tok.extra;
    return tok;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  CausalKnowledgeGraph run() {
    while (tok_.kind != TokKind::eof) {
      if (tok_.kind == TokKind::at_prefix) {
        parse_prefix();
      } else {
        parse_statement();
      }
    }
    return std::move(kg_);
  }

 private:
  static constexpr int kMaxDepth = 128;

  void shift() { tok_ = lexer_.next(); }

  [[noreturn]] void error(std::vector<std::string> expected) {
    throw SyntaxError(tok_.line, tok_.column, tok_.describe(),
                      std::move(expected));
  }

  void expect(TokKind kind, const std::string& what) {
    if (tok_.kind != kind) error({what});
    shift();
  }

  std::string resolve_pname(const Token& tok) {
    auto it = kg_.prefixes.find(tok.label);
    if (it == kg_.prefixes.end()) {
      throw Error(ErrorKind::unknown_prefix,
                  "undeclared prefix in '" + tok.text + "' at line " +
                      std::to_string(tok.line) + ", column " +
                      std::to_string(tok.column));
    }
    return it->second + tok.extra;
  }

  void parse_prefix() {
    shift();  // '@prefix'
    if (tok_.kind != TokKind::pname || !tok_.extra.empty()) {
      error({"prefix label ending in ':'"});
    }
    std::string label = tok_.label;
    shift();
    if (tok_.kind != TokKind::iriref) error({"IRI reference"});
    std::string ns = tok_.text;
    shift();
    expect(TokKind::dot, "'.'");
    kg_.prefixes[label] = ns;
  }

  Iri parse_iri() {
    if (tok_.kind == TokKind::iriref) {
      Iri iri{tok_.text};
      shift();
      return iri;
    }
    if (tok_.kind == TokKind::pname) {
      Iri iri{resolve_pname(tok_)};
      shift();
      return iri;
    }
    error({"IRI"});
  }

  Term parse_subject(int depth) {
    if (tok_.kind == TokKind::lt_lt) return parse_embedded(depth);
    if (tok_.kind == TokKind::iriref || tok_.kind == TokKind::pname) {
      return Term(parse_iri());
    }
    error({"IRI", "'<<'"});
  }

  Term parse_embedded(int depth) {
    if (depth > kMaxDepth) {
      error({"embedded triples nested at most " + std::to_string(kMaxDepth) +
             " deep"});
    }
    shift();  // '<<'
    Term subject = parse_subject(depth + 1);
    Iri predicate = parse_iri();
    Term object = parse_object(depth + 1);
    if (tok_.kind != TokKind::gt_gt) error({"'>>'"});
    shift();
    return Term::embedded(
        Statement{std::move(subject), std::move(predicate), std::move(object)});
  }

  Term parse_object(int depth) {
    switch (tok_.kind) {
      case TokKind::lt_lt:
        return parse_embedded(depth);
      case TokKind::iriref:
      case TokKind::pname:
        return Term(parse_iri());
      case TokKind::number: {
        Term t(Literal{format_double(tok_.number), vocab::xsd_double()});
        shift();
        return t;
      }
      case TokKind::string: {
        std::string lexical = tok_.text;
        shift();
        if (tok_.kind == TokKind::caret_caret) {
          shift();
          Iri datatype = parse_iri();
          return Term(Literal{std::move(lexical), datatype.value});
        }
        return Term(Literal{std::move(lexical), vocab::xsd_string()});
      }
      default:
        error({"IRI", "'<<'", "literal"});
    }
  }

  void parse_statement() {
    Term subject = parse_subject(0);
    while (true) {
      Iri predicate = parse_iri();
      while (true) {
        Term object = parse_object(0);
        kg_.insert(Statement{subject, predicate, object});
        if (tok_.kind != TokKind::comma) break;
        shift();
      }
      if (tok_.kind == TokKind::semicolon) {
        shift();
        continue;
      }
      break;
    }
    if (tok_.kind != TokKind::dot) error({"'.'", "';'", "','"});
    shift();
  }

  Lexer lexer_;
  Token tok_;
  CausalKnowledgeGraph kg_;
};

}  // namespace

CausalKnowledgeGraph parse(const std::string& text) {
  return Parser(text).run();
}

}  // namespace causalkg
