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

#include <doctest.h>

#include "buddi/crdt.hpp"
#include "buddi/dataflow.hpp"
#include "buddi/random.hpp"

using namespace buddi;
using namespace buddi::tables;

namespace {

const char* kSelfMinus = "shopping_cart := shopping_cart - bad_items\n";
const char* kAddedMinus = "shopping_cart := added_items - bad_items\n";

Relation random_relation(Rng& rng, std::size_t max) {
  Relation r;
  for (auto n = rng.below(max + 1); n > 0; --n) r.insert(std::string(1, static_cast<char>('a' + rng.below(12))));
  return r;
}

}  // namespace

TEST_CASE("parse rules, comments and operators") {
  const auto g = DataflowGraph::parse(
      "# cart\n"
      "x <= a union b   # trailing\n"
      "y <+ x minus c\n"
      "z := 2pset(x, y)\n"
      "n := count((a + b) - c)\n");
  REQUIRE(g.rules().size() == 4);
  CHECK(g.rules()[0].op == RuleOp::kMerge);
  CHECK(g.rules()[1].op == RuleOp::kDeferred);
  CHECK(g.rules()[2].op == RuleOp::kAssign);
  CHECK(g.rules()[2].expr.kind == Expr::Kind::kTwoPSetRead);
  CHECK(g.rules()[3].expr.kind == Expr::Kind::kCount);
  CHECK(g.has_node("c"));
  CHECK(DataflowGraph::parse(g.to_text()) == g);
}

TEST_CASE("parse errors carry the line") {
  try {
    (void)DataflowGraph::parse("a <= b\nc <= \n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS((void)DataflowGraph::parse("a => b"), ParseError);
  CHECK_THROWS_AS((void)DataflowGraph::parse("a <= 2pset(b)"), ParseError);
}

TEST_CASE("cycle detection") {
  const auto eq1 = detect_cycles(DataflowGraph::parse(kSelfMinus));
  REQUIRE(eq1.size() == 1);
  CHECK(eq1[0].nodes == std::vector<std::string>{"shopping_cart"});
  CHECK(eq1[0].through_negation);
  CHECK(detect_cycles(DataflowGraph::parse(kAddedMinus)).empty());
  CHECK(detect_cycles(DataflowGraph{}).empty());

  const auto two = detect_cycles(DataflowGraph::parse("a <= b\nb <= a\n"));
  REQUIRE(two.size() == 1);
  CHECK(two[0].nodes.size() == 2);
  CHECK_FALSE(two[0].through_negation);

  const auto deferred = detect_cycles(DataflowGraph::parse("a <= b - a\nb <+ a\n"));
  REQUIRE(deferred.size() == 2);
  bool any_broken = false;
  for (const auto& c : deferred) any_broken |= c.broken_by_deferral;
  CHECK(any_broken);
}

TEST_CASE("rewrite turns the recursive difference into a 2pset read") {
  const auto r = rewrite_one_shot(DataflowGraph::parse(kSelfMinus));
  CHECK(r.rewritten == std::vector<std::string>{"shopping_cart"});
  CHECK(r.renames.at("shopping_cart") == "shopping_cart.pos");
  CHECK(r.needs_stratification.empty());
  CHECK(detect_cycles(r.graph).empty());
  REQUIRE(r.graph.rules().size() == 1);
  CHECK(r.graph.rules()[0].expr.kind == Expr::Kind::kTwoPSetRead);
}

TEST_CASE("rewrite leaves acyclic graphs and monotone cycles alone") {
  const auto acyclic = DataflowGraph::parse(kAddedMinus);
  CHECK(rewrite_one_shot(acyclic).graph == acyclic);

  const auto closure = DataflowGraph::parse("path <= edge\npath <= hop\nhop <= path\n");
  const auto r = rewrite_one_shot(closure);
  CHECK(r.graph == closure);
  CHECK(r.rewritten.empty());
  CHECK(r.needs_stratification.size() == 1);
}

TEST_CASE("stratified evaluation of the shopping cart") {
  const auto ev = evaluate_stratified(DataflowGraph::parse(kSelfMinus),
                                      {{"shopping_cart", {"a", "b", "c"}}, {"bad_items", {"b"}}});
  CHECK(ev.relations.at("shopping_cart") == Relation{"a", "c"});
}

TEST_CASE("no rules: one pass, inputs unchanged") {
  const Relations in{{"a", {"x"}}};
  const auto ev = evaluate_stratified(DataflowGraph{}, in);
  CHECK(ev.passes == 1);
  CHECK(ev.relations == in);
}

TEST_CASE("an oscillating program hits the pass cap") {
  // x flips between {} and {"t"}.
  const auto g = DataflowGraph::parse("x := t - x\n");
  CHECK_THROWS_AS(evaluate_stratified(g, {{"t", {"t"}}}, 50), DivergenceError);
}

TEST_CASE("count yields the size as a one-element set") {
  const auto ev = evaluate_stratified(DataflowGraph::parse("n := count(a + b)\n"), {{"a", {"x", "y"}}, {"b", {"y", "z"}}});
  CHECK(ev.relations.at("n") == Relation{"3"});
}

TEST_CASE("one-shot evaluation refuses cycles") {
  CHECK_THROWS_AS(evaluate_one_shot(DataflowGraph::parse(kSelfMinus), {}), std::logic_error);
}

TEST_CASE("rewritten graph matches the fixpoint and a 2pset read") {
  Rng rng(77);
  const auto eq1 = DataflowGraph::parse(kSelfMinus);
  const auto rw = rewrite_one_shot(eq1);
  for (int i = 0; i < 200; ++i) {
    const auto added = random_relation(rng, 8);
    const auto bad = random_relation(rng, 4);
    const auto fix = evaluate_stratified(eq1, {{"shopping_cart", added}, {"bad_items", bad}});
    const auto one = evaluate_one_shot(rw.graph, {{"shopping_cart", added}, {"bad_items", bad}}, rw.renames);
    lattice::TwoPSet<std::string> s;
    for (const auto& a : added) s.add(a);
    for (const auto& b : bad) s.remove(b);
    CHECK(fix.relations.at("shopping_cart") == one.at("shopping_cart"));
    CHECK(one.at("shopping_cart") == lattice::twopset_read(s));
  }
}
