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

// Dataflow graphs over set-valued relations: a small rule language, cycle
// detection, the rewrite of self-recursive differences into 2P-Set reads, and
// a fixpoint evaluator used as the reference semantics.
//
// Rule grammar (one rule per line, '#' starts a comment):
//
//   rule  := IDENT op expr
//   op    := "<="        merge into target, visible this pass
//          | "<+"        merge into target, deferred to the next pass
//          | ":="        replace target
//   expr  := term { ("-" | "minus" | "+" | "union") term }     left assoc.
//   term  := IDENT
//          | "2pset" "(" IDENT "," IDENT ")"     pos minus neg via a 2P-Set
//          | "count" "(" expr ")"                 one-element set: the size
//          | "(" expr ")"
//   IDENT := [A-Za-z_][A-Za-z0-9_.]*

#ifndef BUDDI_DATAFLOW_HPP_
#define BUDDI_DATAFLOW_HPP_

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace buddi::tables {

using Relation = std::set<std::string>;
using Relations = std::map<std::string, Relation>;

enum class EdgeKind { kMonotone, kNegation, kAggregate };

struct Edge {
  std::string producer;
  std::string consumer;
  EdgeKind kind = EdgeKind::kMonotone;
  bool deferred = false;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Expr {
  enum class Kind { kRef, kUnion, kDifference, kTwoPSetRead, kCount };
  Kind kind = Kind::kRef;
  std::string name;        // kRef
  std::vector<Expr> args;  // operands

  static Expr ref(std::string n) { return Expr{Kind::kRef, std::move(n), {}}; }
  static Expr binary(Kind k, Expr a, Expr b) { return Expr{k, {}, {std::move(a), std::move(b)}}; }

  friend bool operator==(const Expr&, const Expr&) = default;
};

enum class RuleOp { kMerge, kDeferred, kAssign };

struct Rule {
  std::string target;
  RuleOp op = RuleOp::kMerge;
  Expr expr;

  friend bool operator==(const Rule&, const Rule&) = default;
};

std::string to_string(const Expr& e);
std::string to_string(const Rule& r);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DivergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DataflowGraph {
 public:
  DataflowGraph() = default;

  static DataflowGraph parse(std::string_view text);

  void add_node(const std::string& n);
  // Adds the rule and the edges it induces.
  void add_rule(Rule r);
  // Edge without a rule body, for graphs declared by other components.
  void add_edge(Edge e);

  const std::vector<std::string>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<Rule>& rules() const { return rules_; }
  bool has_node(const std::string& n) const;

  std::string to_text() const;

  friend bool operator==(const DataflowGraph&, const DataflowGraph&) = default;

 private:
  std::vector<std::string> nodes_;
  std::vector<Edge> edges_;
  std::vector<Rule> rules_;
};

struct Cycle {
  std::vector<std::string> nodes;  // in edge order, first node not repeated
  bool through_negation = false;   // some step is a negation/aggregate edge or feeds a := target
  bool broken_by_deferral = false; // some step has only deferred edges

  friend bool operator==(const Cycle&, const Cycle&) = default;
};

std::string to_string(const Cycle& c);

// Every simple cycle, each reported once, starting at its smallest node index.
std::vector<Cycle> detect_cycles(const DataflowGraph& g);

struct RewriteResult {
  DataflowGraph graph;
  std::vector<std::string> rewritten;            // targets turned into 2P-Set reads
  std::map<std::string, std::string> renames;    // original input -> its pos-set node
  std::vector<Cycle> needs_stratification;       // cycles left after the rewrite
};

// Replaces each `X := X - Y` with `X := 2pset(X.pos, Y)`, redirecting the
// other merges into X to X.pos. Cycles that do not match are reported.
RewriteResult rewrite_one_shot(const DataflowGraph& g);

inline constexpr std::size_t kDefaultPassCap = 10'000;

struct Evaluation {
  Relations relations;
  std::size_t passes = 0;
};

// Applies the rules in order, pass after pass, until a full pass changes
// nothing. Throws DivergenceError after `pass_cap` passes.
Evaluation evaluate_stratified(const DataflowGraph& g, Relations inputs,
                               std::size_t pass_cap = kDefaultPassCap);

// One pass in topological order. Throws std::logic_error on a cyclic graph.
// Inputs named in `renames` are fed to their renamed node.
Relations evaluate_one_shot(const DataflowGraph& g, Relations inputs,
                            const std::map<std::string, std::string>& renames = {});

}  // namespace buddi::tables

#endif  // BUDDI_DATAFLOW_HPP_
