/*
Copyright 2026 The defarg Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "doctest.h"

#include <algorithm>

#include "defarg/default_theory.hpp"
#include "defarg/theory_format.hpp"

using namespace defarg;

namespace {

DefaultTheory tweety() { return parse_theory("atoms: b p f\nbackground: p -> b\nd1: b ~> f\nd2: p ~> ~f\n"); }
DefaultTheory nixon() { return parse_theory("atoms: q r pa\ndq: q ~> pa\ndr: r ~> ~pa\n"); }

DefaultRule rule(const DefaultTheory& th, std::string id, const char* scope, const char* concl,
                 Polarity pol = Polarity::normally) {
  DefaultRule r;
  r.id = std::move(id);
  r.scope = th.parse(scope);
  r.conclusion = th.parse(concl);
  r.polarity = pol;
  return r;
}

using Ids = std::vector<std::string>;

}  // namespace

TEST_CASE("attachment points follow the attached defaults") {
  const Signature sig({"b", "p", "f"});
  DefaultTheory th(sig, {parse_formula("p -> b", sig)});
  CHECK(th.universe().count() == 6);
  th = attach(th, rule(th, "d1", "b", "f"));
  auto points = attachment_points(th);
  REQUIRE(points.size() == 1);
  CHECK(points[0].carrier == th.restrict(th.parse("b")));
  th = attach(th, rule(th, "d2", "p", "~f"));
  points = attachment_points(th);
  REQUIRE(points.size() == 2);
  CHECK(points[1].default_ids == Ids{"d2"});
  CHECK_THROWS_AS(attach(th, rule(th, "d1", "p", "f")), Error);
}

TEST_CASE("defaults sharing a scope share an attachment point") {
  DefaultTheory th = tweety();
  th = attach(th, rule(th, "d3", "b & (p | ~p)", "b"));
  const auto points = attachment_points(th);
  REQUIRE(points.size() == 2);
  CHECK(points[0].default_ids == Ids{"d1", "d3"});
}

TEST_CASE("attach preconditions") {
  const DefaultTheory th = tweety();
  CHECK_THROWS_AS(attach(th, rule(th, "x", "p & ~b", "f")), Error);
  DefaultRule exc = rule(th, "x", "p", "f");
  exc.exception_sets.push_back(th.parse("~b"));
  CHECK_THROWS_AS(attach(th, exc), Error);
  DefaultRule big = rule(th, "y", "b", "f");
  big.surprise_budget = 0.2;
  CHECK_THROWS_AS(attach(th, big), Error);
}

TEST_CASE("consistency conditions") {
  const Signature sig({"p"});
  const DefaultTheory bad(sig, {parse_formula("p & ~p", sig)});
  const auto r1 = check_consistency_conditions(bad);
  REQUIRE(r1.violations.size() == 1);
  CHECK(r1.violations[0].condition == 1);

  const Signature bf({"b", "f"});
  DefaultTheory clash(bf);
  clash = attach(clash, rule(clash, "y", "b", "f"));
  clash = attach(clash, rule(clash, "n", "b", "~f"));
  const auto r2 = check_consistency_conditions(clash);
  REQUIRE(r2.violations.size() == 1);
  CHECK(r2.violations[0].condition == 2);

  DefaultTheory neg(bf);
  neg = attach(neg, rule(neg, "nn", "b", "f", Polarity::not_normally));
  CHECK(check_consistency_conditions(neg).ok());

  CHECK(check_consistency_conditions(tweety()).ok());
}

TEST_CASE("size gate arithmetic") {
  SizePolicy policy;
  CHECK(check_size_gate(SizeMeasures{10, 9, 0, 0}, policy).passed);
  const auto none = check_size_gate(SizeMeasures{10, 0, 0, 0}, policy);
  CHECK_FALSE(none.passed);
  CHECK(none.hard_fail);
  SizePolicy small = policy;
  small.small = 0.4;
  CHECK_FALSE(check_size_gate(SizeMeasures{10, 9, 6, 0}, small).passed);
  CHECK(check_size_gate(SizeMeasures{10, 9, 3, 0}, small).passed);
  CHECK_FALSE(check_size_gate(SizeMeasures{10, 9, 0, 1}, policy).passed);
}

TEST_CASE("size policy validation") {
  CHECK_NOTHROW(SizePolicy{}.validate());
  CHECK_THROWS_AS((SizePolicy{0.5, 0.3, 0.05}.validate()), Error);
  CHECK_THROWS_AS((SizePolicy{0.8, 0.5, 0.05}.validate()), Error);
  CHECK_THROWS_AS((SizePolicy{0.8, 0.1, 0.2}.validate()), Error);
}

TEST_CASE("size gate measured in a theory") {
  const Signature sig({"b", "f", "g", "h"});
  DefaultTheory th(sig);
  th = attach(th, rule(th, "d", "b", "f | g | h"));
  // The lone disagreeing valuation is 1/8 of the scope: too big to be a surprise.
  CHECK_FALSE(check_size_gate(th.rule("d"), th, th.policy()).passed);
  th = add_exception_set(th, "d", th.parse("b & ~f & ~g & ~h"));
  const auto gate = check_size_gate(th.rule("d"), th, th.policy());
  CHECK(gate.most_ratio == doctest::Approx(7.0 / 8.0));
  CHECK(gate.passed);
  std::vector<double> weights(16, 0.0);
  weights[0b1000] = 1.0;  // only b & ~f & ~g & ~h counts
  CHECK_FALSE(check_size_gate(th.rule("d"), th, th.policy(), weights).passed);
}

TEST_CASE("visible defaults") {
  const DefaultTheory th = tweety();
  CHECK(visible_defaults(th, th.parse("p")) == Ids{"d1", "d2"});
  CHECK(visible_defaults(th, th.parse("b")) == Ids{"d1"});
  CHECK(visible_defaults(th, th.parse("~b")).empty());
  CHECK_THROWS_AS(visible_defaults(th, th.parse("p & ~b")), Error);
}

TEST_CASE("specificity elimination") {
  const DefaultTheory th = tweety();
  const auto at_p = valid_defaults(th, th.parse("p"));
  CHECK(at_p.valid == Ids{"d2"});
  REQUIRE(at_p.eliminated.size() == 1);
  CHECK(at_p.eliminated[0].first == "d1");
  CHECK(at_p.eliminated[0].second == EliminationPhase::defaults_only);

  const auto at_b = valid_defaults(th, th.parse("b"));
  CHECK(at_b.valid == Ids{"d1"});
  CHECK(at_b.eliminated.empty());
}

TEST_CASE("incomparable conflicting defaults eliminate each other") {
  const DefaultTheory th = nixon();
  const auto both = valid_defaults(th, th.parse("q & r"));
  CHECK(both.valid.empty());
  CHECK(both.eliminated.size() == 2);
  CHECK(valid_defaults(th, th.parse("q & ~r")).valid == Ids{"dq"});
}

TEST_CASE("classical elimination") {
  DefaultTheory th = tweety();
  const auto at = valid_defaults(th, th.parse("b & ~f & ~p"));
  CHECK(at.valid.empty());
  REQUIRE(at.eliminated.size() == 1);
  CHECK(at.eliminated[0].second == EliminationPhase::classical);
}

TEST_CASE("inheritance blocks") {
  DefaultTheory th = nixon();
  th = block_inheritance(th, "dq", th.parse("q & r"));
  CHECK(visible_defaults(th, th.parse("q & r")) == Ids{"dr"});
  CHECK(visible_defaults(th, th.parse("q & ~r")) == Ids{"dq"});
  CHECK(valid_defaults(th, th.parse("q & r")).valid == Ids{"dr"});
  CHECK_THROWS_AS(block_inheritance(th, "dq", th.parse("r")), Error);
  CHECK_THROWS_AS(block_inheritance(th, "nope", th.parse("q")), Error);
}

TEST_CASE("theory edits") {
  DefaultTheory th = tweety();
  th = add_exception_set(th, "d1", th.parse("b & p"));
  CHECK(th.rule("d1").exception_sets.size() == 1);
  CHECK_THROWS_AS(add_exception_set(th, "d1", th.parse("~b")), Error);
  th = narrow_scope(th, "d1", th.parse("~p"));
  CHECK(th.restrict(th.rule("d1").scope) == th.restrict(th.parse("b & ~p")));
  th = set_provenance(th, "d2", Provenance::expert);
  CHECK(th.rule("d2").provenance == Provenance::expert);
  th = remove_default(th, "d2");
  CHECK(th.find("d2") == nullptr);
  CHECK_THROWS_AS(remove_default(th, "d2"), Error);
  CHECK(provenance_from_string(to_string(Provenance::confirmed)) == Provenance::confirmed);
}

TEST_CASE("negative defaults impose nothing on satisfaction") {
  const DefaultTheory th = nixon();
  DefaultRule r = rule(th, "n", "q", "pa", Polarity::not_normally);
  CHECK(r.satisfaction_content().kind() == Formula::Kind::top);
  CHECK(r.conflict_content() == !th.parse("pa"));
}
