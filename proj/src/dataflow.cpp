// Copyright 2026 The BuDDI-Sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "buddi/dataflow.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <queue>

#include "buddi/crdt.hpp"

namespace buddi::tables {
namespace {

const char* op_text(RuleOp op) {
  switch (op) {
    case RuleOp::kMerge: return "<=";
    case RuleOp::kDeferred: return "<+";
    case RuleOp::kAssign: return ":=";
  }
  return "?";
}

class LineParser {
 public:
  LineParser(std::string_view text, std::size_t line) : text_(text), line_(line) {}

  Rule rule() {
    Rule r;
    r.target = ident();
    skip_space();
    if (take("<=")) {
      r.op = RuleOp::kMerge;
    } else if (take("<+")) {
      r.op = RuleOp::kDeferred;
    } else if (take(":=")) {
      r.op = RuleOp::kAssign;
    } else {
      fail("expected '<=', '<+' or ':='");
    }
    r.expr = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
    return r;
  }

 private:
  Expr expr() {
    Expr lhs = term();
    for (;;) {
      skip_space();
      if (take("-") || take_word("minus")) {
        lhs = Expr::binary(Expr::Kind::kDifference, std::move(lhs), term());
      } else if (take("+") || take_word("union")) {
        lhs = Expr::binary(Expr::Kind::kUnion, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    skip_space();
    if (take("(")) {
      Expr e = expr();
      expect(")");
      return e;
    }
    if (take_word("2pset")) {
      expect("(");
      Expr pos = Expr::ref(ident());
      expect(",");
      Expr neg = Expr::ref(ident());
      expect(")");
      return Expr::binary(Expr::Kind::kTwoPSetRead, std::move(pos), std::move(neg));
    }
    if (take_word("count")) {
      expect("(");
      Expr inner = expr();
      expect(")");
      return Expr{Expr::Kind::kCount, {}, {std::move(inner)}};
    }
    return Expr::ref(ident());
  }

  std::string ident() {
    skip_space();
    const auto start = pos_;
    if (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '.')) {
        ++pos_;
      }
    }
    if (pos_ == start) fail("expected identifier");
    std::string id(text_.substr(start, pos_ - start));
    if (id == "minus" || id == "union") fail("'" + id + "' is reserved");
    return id;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool take(std::string_view tok) {
    skip_space();
    if (text_.substr(pos_, tok.size()) != tok) return false;
    pos_ += tok.size();
    return true;
  }

  // Keyword followed by a non-identifier character.
  bool take_word(std::string_view word) {
    skip_space();
    if (text_.substr(pos_, word.size()) != word) return false;
    const auto end = pos_ + word.size();
    if (end < text_.size() &&
        (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_' || text_[end] == '.')) {
      return false;
    }
    pos_ = end;
    return true;
  }

  void expect(std::string_view tok) {
    if (!take(tok)) fail("expected '" + std::string(tok) + "'");
  }

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(line_, what); }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

void collect_edges(const Expr& e, const std::string& target, EdgeKind ctx, bool deferred,
                   std::vector<Edge>& out) {
  switch (e.kind) {
    case Expr::Kind::kRef:
      out.push_back(Edge{e.name, target, ctx, deferred});
      return;
    case Expr::Kind::kUnion:
      collect_edges(e.args[0], target, ctx, deferred, out);
      collect_edges(e.args[1], target, ctx, deferred, out);
      return;
    case Expr::Kind::kDifference:
    case Expr::Kind::kTwoPSetRead:
      collect_edges(e.args[0], target, ctx, deferred, out);
      collect_edges(e.args[1], target, EdgeKind::kNegation, deferred, out);
      return;
    case Expr::Kind::kCount:
      collect_edges(e.args[0], target, ctx == EdgeKind::kNegation ? ctx : EdgeKind::kAggregate, deferred,
                    out);
      return;
  }
}

Relation eval(const Expr& e, const Relations& rels) {
  switch (e.kind) {
    case Expr::Kind::kRef: {
      auto it = rels.find(e.name);
      return it == rels.end() ? Relation{} : it->second;
    }
    case Expr::Kind::kUnion: {
      Relation a = eval(e.args[0], rels);
      Relation b = eval(e.args[1], rels);
      a.insert(b.begin(), b.end());
      return a;
    }
    case Expr::Kind::kDifference: {
      Relation a = eval(e.args[0], rels);
      for (const auto& x : eval(e.args[1], rels)) a.erase(x);
      return a;
    }
    case Expr::Kind::kTwoPSetRead: {
      lattice::TwoPSet<std::string> s(lattice::GSet<std::string>(eval(e.args[0], rels)),
                                      lattice::GSet<std::string>(eval(e.args[1], rels)));
      return lattice::twopset_read(s);
    }
    case Expr::Kind::kCount:
      return Relation{std::to_string(eval(e.args[0], rels).size())};
  }
  return {};
}

bool is_self_difference(const Rule& r) {
  return r.op == RuleOp::kAssign && r.expr.kind == Expr::Kind::kDifference &&
         r.expr.args[0].kind == Expr::Kind::kRef && r.expr.args[0].name == r.target &&
         r.expr.args[1].kind == Expr::Kind::kRef && r.expr.args[1].name != r.target;
}

}  // namespace

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::kRef: return e.name;
    case Expr::Kind::kUnion: return "(" + to_string(e.args[0]) + " + " + to_string(e.args[1]) + ")";
    case Expr::Kind::kDifference: return "(" + to_string(e.args[0]) + " - " + to_string(e.args[1]) + ")";
    case Expr::Kind::kTwoPSetRead: return "2pset(" + to_string(e.args[0]) + ", " + to_string(e.args[1]) + ")";
    case Expr::Kind::kCount: return "count(" + to_string(e.args[0]) + ")";
  }
  return "?";
}

std::string to_string(const Rule& r) { return r.target + " " + op_text(r.op) + " " + to_string(r.expr); }

std::string to_string(const Cycle& c) {
  std::string out;
  for (const auto& n : c.nodes) out += n + " -> ";
  return c.nodes.empty() ? out : out + c.nodes.front();
}

DataflowGraph DataflowGraph::parse(std::string_view text) {
  DataflowGraph g;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (std::all_of(line.begin(), line.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); })) {
      continue;
    }
    g.add_rule(LineParser(line, line_no).rule());
  }
  return g;
}

bool DataflowGraph::has_node(const std::string& n) const {
  return std::find(nodes_.begin(), nodes_.end(), n) != nodes_.end();
}

void DataflowGraph::add_node(const std::string& n) {
  if (!has_node(n)) nodes_.push_back(n);
}

void DataflowGraph::add_edge(Edge e) {
  add_node(e.producer);
  add_node(e.consumer);
  if (std::find(edges_.begin(), edges_.end(), e) == edges_.end()) edges_.push_back(std::move(e));
}

void DataflowGraph::add_rule(Rule r) {
  std::vector<Edge> induced;
  add_node(r.target);
  collect_edges(r.expr, r.target, EdgeKind::kMonotone, r.op == RuleOp::kDeferred, induced);
  for (auto& e : induced) add_edge(std::move(e));
  rules_.push_back(std::move(r));
}

std::string DataflowGraph::to_text() const {
  std::string out;
  for (const auto& r : rules_) out += to_string(r) + "\n";
  return out;
}

std::vector<Cycle> detect_cycles(const DataflowGraph& g) {
  const auto& nodes = g.nodes();
  const std::size_t n = nodes.size();
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index[nodes[i]] = i;

  std::vector<std::set<std::size_t>> succ(n);
  for (const auto& e : g.edges()) succ[index.at(e.producer)].insert(index.at(e.consumer));

  std::set<std::string> overwritten;
  for (const auto& r : g.rules()) {
    if (r.op == RuleOp::kAssign) overwritten.insert(r.target);
  }

  auto describe = [&](const std::vector<std::size_t>& path) {
    Cycle c;
    for (std::size_t i = 0; i < path.size(); ++i) {
      const auto& from = nodes[path[i]];
      const auto& to = nodes[path[(i + 1) % path.size()]];
      c.nodes.push_back(from);
      if (overwritten.contains(to)) c.through_negation = true;
      bool all_deferred = true;
      for (const auto& e : g.edges()) {
        if (e.producer != from || e.consumer != to) continue;
        if (e.kind != EdgeKind::kMonotone) c.through_negation = true;
        if (!e.deferred) all_deferred = false;
      }
      if (all_deferred) c.broken_by_deferral = true;
    }
    return c;
  };

  std::vector<Cycle> cycles;
  std::vector<std::size_t> path;
  std::vector<bool> on_path(n, false);
  std::function<void(std::size_t, std::size_t)> dfs = [&](std::size_t start, std::size_t u) {
    for (std::size_t v : succ[u]) {
      if (v == start) {
        cycles.push_back(describe(path));
      } else if (v > start && !on_path[v]) {
        on_path[v] = true;
        path.push_back(v);
        dfs(start, v);
        path.pop_back();
        on_path[v] = false;
      }
    }
  };
  for (std::size_t s = 0; s < n; ++s) {
    path = {s};
    on_path.assign(n, false);
    on_path[s] = true;
    dfs(s, s);
  }
  return cycles;
}

RewriteResult rewrite_one_shot(const DataflowGraph& g) {
  RewriteResult out;
  std::set<std::string> targets;
  for (const auto& r : g.rules()) {
    if (is_self_difference(r)) targets.insert(r.target);
  }
  for (const auto& n : g.nodes()) {
    out.graph.add_node(n);
    if (targets.contains(n)) out.graph.add_node(n + ".pos");
  }
  for (const auto& r : g.rules()) {
    if (is_self_difference(r)) {
      const std::string pos = r.target + ".pos";
      out.graph.add_rule(Rule{r.target, RuleOp::kAssign,
                              Expr::binary(Expr::Kind::kTwoPSetRead, Expr::ref(pos), r.expr.args[1])});
      out.rewritten.push_back(r.target);
      out.renames[r.target] = pos;
    } else if (targets.contains(r.target) && r.op != RuleOp::kAssign) {
      Rule moved = r;
      moved.target = r.target + ".pos";
      out.graph.add_rule(std::move(moved));
    } else {
      out.graph.add_rule(r);
    }
  }
  // Edges declared without rules carry over untouched.
  for (const auto& e : g.edges()) {
    const bool from_rule = std::any_of(g.rules().begin(), g.rules().end(),
                                       [&](const Rule& r) { return r.target == e.consumer; });
    if (!from_rule) out.graph.add_edge(e);
  }
  out.needs_stratification = detect_cycles(out.graph);
  return out;
}

Evaluation evaluate_stratified(const DataflowGraph& g, Relations inputs, std::size_t pass_cap) {
  Relations& rels = inputs;
  for (const auto& n : g.nodes()) rels[n];
  for (std::size_t pass = 1; pass <= pass_cap; ++pass) {
    bool changed = false;
    Relations deferred;
    for (const auto& r : g.rules()) {
      Relation v = eval(r.expr, rels);
      auto& target = rels[r.target];
      switch (r.op) {
        case RuleOp::kMerge: {
          const auto before = target.size();
          target.insert(v.begin(), v.end());
          changed |= target.size() != before;
          break;
        }
        case RuleOp::kAssign:
          if (target != v) {
            target = std::move(v);
            changed = true;
          }
          break;
        case RuleOp::kDeferred:
          deferred[r.target].insert(v.begin(), v.end());
          break;
      }
    }
    for (auto& [name, delta] : deferred) {
      auto& target = rels[name];
      const auto before = target.size();
      target.insert(delta.begin(), delta.end());
      changed |= target.size() != before;
    }
    if (!changed) return Evaluation{std::move(rels), pass};
  }
  throw DivergenceError("no fixpoint after " + std::to_string(pass_cap) + " passes");
}

Relations evaluate_one_shot(const DataflowGraph& g, Relations inputs,
                            const std::map<std::string, std::string>& renames) {
  if (!detect_cycles(g).empty()) throw std::logic_error("one-shot evaluation needs an acyclic graph");
  Relations rels;
  for (auto& [name, rel] : inputs) {
    auto it = renames.find(name);
    rels[it == renames.end() ? name : it->second] = std::move(rel);
  }

  // Kahn order over nodes; rules run in the order of their targets.
  const auto& nodes = g.nodes();
  std::map<std::string, std::size_t> indegree;
  std::map<std::string, std::vector<std::string>> succ;
  for (const auto& n : nodes) indegree[n];
  for (const auto& e : g.edges()) {
    succ[e.producer].push_back(e.consumer);
    ++indegree[e.consumer];
  }
  std::map<std::string, std::size_t> rank;
  std::queue<std::string> ready;
  for (const auto& n : nodes) {
    if (indegree[n] == 0) ready.push(n);
  }
  while (!ready.empty()) {
    auto n = ready.front();
    ready.pop();
    rank[n] = rank.size();
    for (const auto& m : succ[n]) {
      if (--indegree[m] == 0) ready.push(m);
    }
  }
  std::vector<const Rule*> order;
  for (const auto& r : g.rules()) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(),
                   [&](const Rule* a, const Rule* b) { return rank.at(a->target) < rank.at(b->target); });

  for (const Rule* r : order) {
    Relation v = eval(r->expr, rels);
    auto& target = rels[r->target];
    if (r->op == RuleOp::kAssign) {
      target = std::move(v);
    } else {
      target.insert(v.begin(), v.end());
    }
  }
  return rels;
}

}  // namespace buddi::tables
