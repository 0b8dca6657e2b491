#include "causalkg/query.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <deque>
#include <map>
#include <set>

#include "causalkg/intervention.hpp"
#include "causalkg/ontology.hpp"

namespace causalkg {

std::string rung_label(Rung rung) {
  switch (rung) {
    case Rung::associational: return "statistical (associational)";
    case Rung::interventional: return "context (interventional)";
    case Rung::counterfactual: return "domain (counterfactual)";
  }
  return {};
}

// -------------------------------------------------------------- DSL parser

namespace {

enum class QTok { ident, lparen, rparen, pipe, comma, equals, arrow, eof };

struct QToken {
  QTok kind = QTok::eof;
  std::string text;
  std::size_t column = 1;  // 1-based; queries are single-line

  std::string describe() const {
    switch (kind) {
      case QTok::ident: return "identifier '" + text + "'";
      case QTok::lparen: return "'('";
      case QTok::rparen: return "')'";
      case QTok::pipe: return "'|'";
      case QTok::comma: return "','";
      case QTok::equals: return "'='";
      case QTok::arrow: return "'->'";
      case QTok::eof: return "end of input";
    }
    return "?";
  }
};

class QueryParser {
 public:
  explicit QueryParser(const std::string& text) : text_(text) {
    tokenize();
  }

  QueryAst run() {
    const QToken& head = peek();
    if (head.kind != QTok::ident) {
      error({"'P'", "'TCE'", "'NDE'", "'NIE'", "'PN'"});
    }
    QueryAst ast = [&]() -> QueryAst {
      if (head.text == "P") return parse_prob();
      if (head.text == "TCE") return parse_effect(EffectKind::tce);
      if (head.text == "NDE") return parse_effect(EffectKind::nde);
      if (head.text == "NIE") return parse_effect(EffectKind::nie);
      if (head.text == "PN") return parse_pn();
      error({"'P'", "'TCE'", "'NDE'", "'NIE'", "'PN'"});
    }();
    if (peek().kind != QTok::eof) error({"end of input"});
    return ast;
  }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < text_.size()) {
      unsigned char c = text_[i];
      if (std::isspace(c)) {
        ++i;
        continue;
      }
      QToken tok;
      tok.column = i + 1;
      if (std::isalpha(c) || c == '_') {
        std::size_t start = i;
        while (i < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[i])) ||
                text_[i] == '_')) {
          ++i;
        }
        tok.kind = QTok::ident;
        tok.text = text_.substr(start, i - start);
      } else if (c == '(') {
        tok.kind = QTok::lparen;
        ++i;
      } else if (c == ')') {
        tok.kind = QTok::rparen;
        ++i;
      } else if (c == '|') {
        tok.kind = QTok::pipe;
        ++i;
      } else if (c == ',') {
        tok.kind = QTok::comma;
        ++i;
      } else if (c == '=') {
        tok.kind = QTok::equals;
        ++i;
      } else if (c == '-' && i + 1 < text_.size() && text_[i + 1] == '>') {
        tok.kind = QTok::arrow;
        i += 2;
      } else {
        std::string found = std::isprint(c)
                               ? "'" + std::string(1, text_[i]) + "'"
                               : "byte";
        throw SyntaxError(1, i + 1, found,
                          {"identifier", "punctuation"});
      }
      tokens_.push_back(std::move(tok));
    }
    QToken end;
    end.kind = QTok::eof;
    end.column = text_.size() + 1;
    tokens_.push_back(std::move(end));
  }

  const QToken& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  QToken take() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }

  [[noreturn]] void error(std::vector<std::string> expected) const {
    const QToken& tok = peek();
    throw SyntaxError(1, tok.column, tok.describe(), std::move(expected));
  }

  void expect(QTok kind, const std::string& what) {
    if (peek().kind != kind) error({what});
    ++pos_;
  }

  std::string expect_ident(const std::string& what) {
    if (peek().kind != QTok::ident) error({what});
    return take().text;
  }

  void expect_keyword(const std::string& word) {
    if (peek().kind != QTok::ident || peek().text != word) {
      error({"'" + word + "'"});
    }
    ++pos_;
  }

  EventTerm parse_event() {
    EventTerm event;
    event.variable = expect_ident("variable name");
    expect(QTok::equals, "'='");
    event.state = expect_ident("state label");
    return event;
  }

  std::vector<EventTerm> parse_events() {
    std::vector<EventTerm> events{parse_event()};
    while (peek().kind == QTok::comma) {
      ++pos_;
      events.push_back(parse_event());
    }
    return events;
  }

  QueryAst parse_prob() {
    ++pos_;  // 'P'
    expect(QTok::lparen, "'('");
    std::vector<EventTerm> targets = parse_events();
    std::vector<EventTerm> do_set, evidence;
    if (peek().kind == QTok::pipe) {
      ++pos_;
      while (true) {
        if (peek().kind == QTok::ident && peek().text == "do" &&
            peek(1).kind == QTok::lparen) {
          pos_ += 2;
          for (auto& e : parse_events()) do_set.push_back(std::move(e));
          expect(QTok::rparen, "')'");
        } else if (peek().kind == QTok::ident) {
          evidence.push_back(parse_event());
        } else {
          error({"condition (VAR=state)", "'do('"});
        }
        if (peek().kind != QTok::comma) break;
        ++pos_;
      }
    }
    expect(QTok::rparen, "')'");
    if (do_set.empty()) {
      return AssociationalQuery{std::move(targets), std::move(evidence)};
    }
    return InterventionalQuery{std::move(targets), std::move(do_set),
                               std::move(evidence)};
  }

  QueryAst parse_effect(EffectKind kind) {
    ++pos_;  // kind keyword
    EffectQuery q;
    q.kind = kind;
    expect(QTok::lparen, "'('");
    q.treatment = expect_ident("treatment variable");
    expect(QTok::arrow, "'->'");
    q.outcome = expect_ident("outcome variable");
    if (peek().kind == QTok::pipe) {
      ++pos_;
      expect_keyword("via");
      q.mediator = expect_ident("mediator variable");
    }
    if (peek().kind == QTok::comma) {
      ++pos_;
      expect_keyword("t0");
      expect(QTok::equals, "'='");
      q.t0 = expect_ident("state label");
      expect(QTok::comma, "','");
      expect_keyword("t1");
      expect(QTok::equals, "'='");
      q.t1 = expect_ident("state label");
    }
    expect(QTok::rparen, "')'");
    return q;
  }

  QueryAst parse_pn() {
    ++pos_;  // 'PN'
    NecessityQuery q;
    expect(QTok::lparen, "'('");
    q.cause = parse_event();
    expect(QTok::arrow, "'->'");
    q.outcome = parse_event();
    expect(QTok::rparen, "')'");
    return q;
  }

  const std::string& text_;
  std::vector<QToken> tokens_;
  std::size_t pos_ = 0;
};

// ------------------------------------------------------------- evaluation

// Collapses an event list into a target variable list plus a bound
// assignment, rejecting contradictory duplicate bindings.
std::pair<std::vector<std::string>, Assignment> split_events(
    const std::vector<EventTerm>& events, const char* what) {
  std::vector<std::string> variables;
  Assignment bound;
  for (const auto& e : events) {
    auto [it, inserted] = bound.emplace(e.variable, e.state);
    if (inserted) {
      variables.push_back(e.variable);
    } else if (it->second != e.state) {
      throw Error(ErrorKind::invalid_query,
                  std::string(what) + " binds variable " + e.variable +
                      " to two different states");
    }
  }
  return {std::move(variables), std::move(bound)};
}

ProbabilityResult probability_result(const std::vector<EventTerm>& events,
                                     Distribution dist,
                                     const Assignment& bound) {
  ProbabilityResult out;
  out.events = events;
  out.probability = dist.probability_of(bound);
  out.distribution = std::move(dist);
  return out;
}

}  // namespace

QueryAst parse_query(const std::string& text) {
  return QueryParser(text).run();
}

IntervalResult pn_bounds(const CausalBayesianNetwork& model,
                         const EventTerm& cause, const EventTerm& outcome,
                         Backend backend) {
  if (cause.variable == outcome.variable) {
    throw Error(ErrorKind::invalid_query,
                "cause and outcome must be different variables");
  }
  const int x_var = model.require_index(cause.variable);
  const int x_state = model.state_index(x_var, cause.state);
  const int y_var = model.require_index(outcome.variable);
  const int y_state = model.state_index(y_var, outcome.state);

  Distribution joint =
      query(model, {cause.variable, outcome.variable}, {}, backend);
  const int y_card = model.cardinality(y_var);
  auto joint_at = [&](int xs, int ys) {
    return joint.probabilities[xs * y_card + ys];
  };
  double p_x = 0.0, p_y = 0.0, p_xy = 0.0, p_xn_yn = 0.0;
  for (int xs = 0; xs < model.cardinality(x_var); ++xs) {
    for (int ys = 0; ys < y_card; ++ys) {
      double p = joint_at(xs, ys);
      if (xs == x_state) p_x += p;
      if (ys == y_state) p_y += p;
      if (xs == x_state && ys == y_state) p_xy += p;
      if (xs != x_state && ys != y_state) p_xn_yn += p;
    }
  }
  if (p_xy <= 0.0) {
    throw Error(ErrorKind::zero_joint_probability,
                "P(" + cause.variable + "=" + cause.state + ", " +
                    outcome.variable + "=" + outcome.state + ") is zero");
  }
  const double p_not_x = 1.0 - p_x;
  if (p_not_x <= 0.0) {
    throw Error(ErrorKind::zero_joint_probability,
                "the complement of " + cause.variable + "=" + cause.state +
                    " has probability zero");
  }

  // P(y | do(x')): prior-weighted mixture over the non-cause states
  double p_y_do_xn = 0.0;
  for (int xs = 0; xs < model.cardinality(x_var); ++xs) {
    if (xs == x_state) continue;
    double weight = 0.0;
    for (int ys = 0; ys < y_card; ++ys) weight += joint_at(xs, ys);
    if (weight == 0.0) continue;
    Distribution d = interventional_query(
        model, {outcome.variable},
        {{cause.variable, model.variable(x_var).states[xs]}}, {}, backend);
    p_y_do_xn += (weight / p_not_x) * d.probabilities[y_state];
  }

  IntervalResult bounds;
  bounds.lo = std::max(0.0, (p_y - p_y_do_xn) / p_xy);
  bounds.hi = std::min(1.0, ((1.0 - p_y_do_xn) - p_xn_yn) / p_xy);
  if (bounds.lo > bounds.hi && bounds.lo - bounds.hi < 1e-12) {
    bounds.lo = bounds.hi;  // tie the ends against rounding noise
  }
  return bounds;
}

QueryResult evaluate(const QueryAst& ast, const CausalBayesianNetwork& model,
                     const CausalKnowledgeGraph* /*kg*/, Backend backend) {
  QueryResult result;
  if (const auto* assoc = std::get_if<AssociationalQuery>(&ast)) {
    auto [targets, bound] = split_events(assoc->targets, "event list");
    Assignment evidence = split_events(assoc->evidence, "evidence").second;
    result.rung = Rung::associational;
    result.value = probability_result(
        assoc->targets, query(model, targets, evidence, backend), bound);
  } else if (const auto* interv = std::get_if<InterventionalQuery>(&ast)) {
    auto [targets, bound] = split_events(interv->targets, "event list");
    Assignment do_set = split_events(interv->do_set, "do()").second;
    Assignment evidence = split_events(interv->evidence, "evidence").second;
    result.rung = Rung::interventional;
    result.value = probability_result(
        interv->targets,
        interventional_query(model, targets, do_set, evidence, backend),
        bound);
  } else if (const auto* effect = std::get_if<EffectQuery>(&ast)) {
    if (effect->kind != EffectKind::tce && !effect->mediator) {
      throw Error(ErrorKind::missing_mediator,
                  "natural effects need '| via MEDIATOR'");
    }
    EffectSpec spec{effect->treatment, effect->outcome, effect->mediator,
                    effect->t0, effect->t1};
    EffectResult er;
    er.kind = effect->kind;
    er.report = decompose(model, spec, backend);
    er.value = effect->kind == EffectKind::tce   ? er.report.tce
               : effect->kind == EffectKind::nde ? *er.report.nde
                                                 : *er.report.nie;
    result.rung = effect->kind == EffectKind::tce ? Rung::interventional
                                                  : Rung::counterfactual;
    result.value = std::move(er);
  } else {
    const auto& pn = std::get<NecessityQuery>(ast);
    result.rung = Rung::counterfactual;
    result.value = pn_bounds(model, pn.cause, pn.outcome, backend);
  }
  return result;
}

// ------------------------------------------------------------ explanation

namespace {

std::string percent_decode(const std::string& text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size() &&
        std::isxdigit(static_cast<unsigned char>(text[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(text[i + 2]))) {
      auto hex = [](char c) {
        if (c >= '0' && c <= '9') return c - '0';
        return std::tolower(c) - 'a' + 10;
      };
      out += static_cast<char>(hex(text[i + 1]) * 16 + hex(text[i + 2]));
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::string local_name(const std::string& iri) {
  std::size_t cut = iri.find_last_of("#/");
  std::string local =
      cut == std::string::npos ? iri : iri.substr(cut + 1);
  return percent_decode(local);
}

std::string fixed4(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", value);
  return buf;
}

struct KgIndex {
  std::map<std::string, std::set<std::string>> causes;  // iri -> successors
  std::map<std::string, std::string> by_local;          // local name -> iri
  // mediator iri per annotated (treatment, outcome) pair
  std::map<std::pair<std::string, std::string>, std::string> mediator_of;
};

KgIndex index_kg(const CausalKnowledgeGraph& kg) {
  KgIndex index;
  auto note_iri = [&index](const Term& t) {
    if (t.is_iri()) {
      index.by_local.try_emplace(local_name(t.iri().value), t.iri().value);
    }
  };
  for (const auto& st : kg.statements) {
    note_iri(st.subject);
    note_iri(st.object);
    if (st.predicate.value == vocab::causes() && st.subject.is_iri() &&
        st.object.is_iri()) {
      index.causes[st.subject.iri().value].insert(st.object.iri().value);
    }
    if (st.predicate.value == vocab::causes_with() &&
        st.subject.is_embedded() && st.object.is_iri()) {
      const Statement& inner = st.subject.embedded_statement();
      if (inner.subject.is_iri() && inner.object.is_iri()) {
        index.mediator_of[{inner.subject.iri().value,
                           inner.object.iri().value}] = st.object.iri().value;
      }
    }
  }
  return index;
}

// Shortest ckg:causes chain, lexicographic among equals; empty if none.
std::vector<std::string> find_path(const KgIndex& index,
                                   const std::string& from,
                                   const std::string& to) {
  std::map<std::string, std::string> parent;
  std::deque<std::string> frontier{from};
  parent[from] = "";
  while (!frontier.empty()) {
    std::string at = frontier.front();
    frontier.pop_front();
    if (at == to) {
      std::vector<std::string> path;
      for (std::string v = to; !v.empty(); v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    auto it = index.causes.find(at);
    if (it == index.causes.end()) continue;
    for (const auto& next : it->second) {
      if (parent.emplace(next, at).second) frontier.push_back(next);
    }
  }
  return {};
}

std::string path_line(const KgIndex& index, const std::string& from_var,
                      const std::string& to_var) {
  auto from = index.by_local.find(from_var);
  auto to = index.by_local.find(to_var);
  if (from == index.by_local.end() || to == index.by_local.end()) {
    return "causal path: not present in the knowledge graph";
  }
  auto path = find_path(index, from->second, to->second);
  if (path.empty()) {
    return "causal path: none from " + from_var + " to " + to_var;
  }
  std::string line = "causal path: ";
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) line += " -> ";
    line += local_name(path[i]);
  }
  return line;
}

std::string describe_events(const std::vector<EventTerm>& events) {
  std::string out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (i) out += ", ";
    out += events[i].variable + "=" + events[i].state;
  }
  return out;
}

}  // namespace

std::string explain(const QueryResult& result, const CausalKnowledgeGraph& kg,
                    const QueryAst& ast) {
  KgIndex index = index_kg(kg);
  std::string text = "rung: " + rung_label(result.rung) + "\n";

  if (const auto* assoc = std::get_if<AssociationalQuery>(&ast)) {
    const auto& pr = std::get<ProbabilityResult>(result.value);
    text += "question: how likely is " + describe_events(assoc->targets);
    if (!assoc->evidence.empty()) {
      text += " given " + describe_events(assoc->evidence);
    }
    text += "?\n";
    text += "answer: probability " + fixed4(pr.probability) + "\n";
  } else if (const auto* interv = std::get_if<InterventionalQuery>(&ast)) {
    const auto& pr = std::get<ProbabilityResult>(result.value);
    text += "question: what happens to " + describe_events(interv->targets) +
            " under the intervention do(" + describe_events(interv->do_set) +
            ")";
    if (!interv->evidence.empty()) {
      text += " given " + describe_events(interv->evidence);
    }
    text += "?\n";
    text += "answer: probability " + fixed4(pr.probability) + "\n";
    for (const auto& d : interv->do_set) {
      for (const auto& t : interv->targets) {
        text += path_line(index, d.variable, t.variable) + "\n";
      }
    }
  } else if (const auto* effect = std::get_if<EffectQuery>(&ast)) {
    const auto& er = std::get<EffectResult>(result.value);
    const std::string kind_name =
        effect->kind == EffectKind::tce  ? "total causal effect"
        : effect->kind == EffectKind::nde ? "natural direct effect"
                                          : "natural indirect effect";
    text += "question: what is the " + kind_name + " of " +
            effect->treatment + " (" + er.report.spec.t0.value_or("?") +
            " -> " + er.report.spec.t1.value_or("?") + ") on " +
            effect->outcome + "?\n";
    std::string mediator;
    if (effect->mediator) mediator = *effect->mediator;
    auto t_iri = index.by_local.find(effect->treatment);
    auto o_iri = index.by_local.find(effect->outcome);
    if (t_iri != index.by_local.end() && o_iri != index.by_local.end()) {
      auto annotated =
          index.mediator_of.find({t_iri->second, o_iri->second});
      if (annotated != index.mediator_of.end()) {
        mediator = local_name(annotated->second);
      }
    }
    if (!mediator.empty()) {
      text += "mediator (ckg:causesWith): " + mediator + "\n";
    }
    text += "answer: " + kind_name + " = " + fixed4(er.value) + "\n";
    // with a mediator, cite the mediated chain; otherwise the direct one
    bool mediated_path = false;
    if (!mediator.empty()) {
      auto t_it = index.by_local.find(effect->treatment);
      auto m_it = index.by_local.find(mediator);
      auto o_it = index.by_local.find(effect->outcome);
      if (t_it != index.by_local.end() && m_it != index.by_local.end() &&
          o_it != index.by_local.end()) {
        auto first_leg = find_path(index, t_it->second, m_it->second);
        auto second_leg = find_path(index, m_it->second, o_it->second);
        if (!first_leg.empty() && !second_leg.empty()) {
          std::string line = "causal path: ";
          for (std::size_t i = 0; i < first_leg.size(); ++i) {
            if (i) line += " -> ";
            line += local_name(first_leg[i]);
          }
          for (std::size_t i = 1; i < second_leg.size(); ++i) {
            line += " -> " + local_name(second_leg[i]);
          }
          text += line + "\n";
          mediated_path = true;
        }
      }
    }
    if (!mediated_path) {
      text += path_line(index, effect->treatment, effect->outcome) + "\n";
    }
    for (const auto& warning : er.report.warnings) {
      text += "note: " + warning + "\n";
    }
  } else {
    const auto& pn = std::get<NecessityQuery>(ast);
    const auto& interval = std::get<IntervalResult>(result.value);
    text += "question: was " + pn.cause.variable + "=" + pn.cause.state +
            " necessary for " + pn.outcome.variable + "=" + pn.outcome.state +
            "?\n";
    text += "answer: probability of necessity lies in [" +
            fixed4(interval.lo) + ", " + fixed4(interval.hi) + "]\n";
    text += path_line(index, pn.cause.variable, pn.outcome.variable) + "\n";
  }
  return text;
}

}  // namespace causalkg
