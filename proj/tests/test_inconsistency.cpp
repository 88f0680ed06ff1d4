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

#include "defarg/inconsistency.hpp"

using namespace defarg;

namespace {

UnitFamily symmetrical(bool extended = false) {
  UnitFamily fam;
  ElementDomain dom(extended ? std::vector<std::string>{"x", "a", "b", "c", "d"}
                             : std::vector<std::string>{"x", "a", "b", "c"});
  const auto unit = [&](const char* id, std::vector<std::string> els) {
    return ArgumentUnit::extensional(id, dom.set_of(els));
  };
  fam.units = {unit("A", {"x", "a"}), unit("B", {"x", "b"}), unit("C", {"x", "c"})};
  if (extended) {
    fam.units.push_back(unit("D", {"x", "d"}));
    fam.units.push_back(unit("Y", {"a", "b", "c", "d"}));
  } else {
    fam.units.push_back(unit("Y", {"a", "b", "c"}));
  }
  fam.domain = dom;
  return fam;
}

using Sets = std::vector<std::vector<std::string>>;

}  // namespace

TEST_CASE("intensional minimal inconsistent subsets") {
  const Signature sig({"p", "q", "r"});
  UnitFamily fam{sig, {}, {}};
  for (auto [id, text] : std::vector<std::pair<const char*, const char*>>{
           {"u1", "p"}, {"u2", "~p | q"}, {"u3", "~q"}, {"u4", "r"}})
    fam.units.push_back(ArgumentUnit::intensional(id, parse_formula(text, sig)));
  const auto report = minimal_inconsistent_subsets(fam);
  CHECK(report.mis == Sets{{"u1", "u2", "u3"}});
  CHECK(report.frequencies.at("u4") == 0);
  CHECK(report.frequencies.at("u1") == 1);
}

TEST_CASE("extensional symmetrical family") {
  const auto report = minimal_inconsistent_subsets(symmetrical());
  CHECK(report.mis == Sets{{"A", "B", "Y"}, {"A", "C", "Y"}, {"B", "C", "Y"}});
  CHECK(report.frequencies.at("Y") == 3);
  CHECK(report.frequencies.at("A") == 2);
  CHECK(last_argument_check(report, "Y"));
  CHECK_FALSE(last_argument_check(report, "A"));
}

TEST_CASE("extended symmetrical family keeps Y in every set") {
  const auto report = minimal_inconsistent_subsets(symmetrical(true));
  CHECK(report.mis.size() == 6);
  for (const auto& s : report.mis) {
    CHECK(s.size() == 3);
    CHECK(std::find(s.begin(), s.end(), "Y") != s.end());
  }
  CHECK(last_argument_check(report, "Y"));
}

TEST_CASE("consistent family has no culprits") {
  const Signature sig({"p", "q"});
  UnitFamily fam{sig, {}, {}};
  fam.units.push_back(ArgumentUnit::intensional("a", parse_formula("p", sig)));
  fam.units.push_back(ArgumentUnit::intensional("b", parse_formula("p -> q", sig)));
  const auto report = minimal_inconsistent_subsets(fam);
  CHECK(report.consistent());
  CHECK(last_argument_check(report, "anything"));
}

TEST_CASE("background restricts the universe") {
  const Signature sig({"p", "q"});
  UnitFamily fam{sig, {parse_formula("p -> q", sig)}, {}};
  fam.units.push_back(ArgumentUnit::intensional("a", parse_formula("p", sig)));
  fam.units.push_back(ArgumentUnit::intensional("b", parse_formula("~q", sig)));
  CHECK(minimal_inconsistent_subsets(fam).mis == Sets{{"a", "b"}});
}

TEST_CASE("a unit inconsistent on its own is a singleton set") {
  const Signature sig({"p"});
  UnitFamily fam{sig, {}, {}};
  fam.units.push_back(ArgumentUnit::intensional("bad", parse_formula("p & ~p", sig)));
  fam.units.push_back(ArgumentUnit::intensional("ok", parse_formula("p", sig)));
  CHECK(minimal_inconsistent_subsets(fam).mis == Sets{{"bad"}});
}

TEST_CASE("last argument check on unknown ids") {
  InconsistencyReport r;
  r.mis = {{"p", "np"}};
  r.frequencies = {{"p", 1}, {"np", 1}};
  CHECK_THROWS_AS(last_argument_check(r, "q"), Error);
  CHECK(last_argument_check(InconsistencyReport{}, "q"));
}

TEST_CASE("support sets") {
  const UnitFamily fam = symmetrical();
  const auto target = fam.units[2];  // C
  const auto supports = support_sets(fam, target);
  CHECK(std::find(supports.begin(), supports.end(), std::vector<std::string>{"A", "B"}) != supports.end());

  UnitFamily universal = fam;
  const ElementDomain& dom = std::get<ElementDomain>(fam.domain);
  CHECK(support_sets(universal, ArgumentUnit::extensional("U", BitSet(dom.size(), true))) == Sets{{}});

  UnitFamily disjoint{dom, {}, {ArgumentUnit::extensional("A", dom.set_of({"a"}))}};
  CHECK(support_sets(disjoint, ArgumentUnit::extensional("T", dom.set_of({"x"}))).empty());
}

TEST_CASE("unit cap") {
  const Signature sig({"p"});
  UnitFamily fam{sig, {}, {}};
  for (int i = 0; i < 20; ++i) fam.units.push_back(ArgumentUnit::intensional("u" + std::to_string(i), parse_formula("p", sig)));
  CHECK_THROWS_AS(minimal_inconsistent_subsets(fam), LimitError);
  CHECK_NOTHROW(minimal_inconsistent_subsets(fam, 20));
}

TEST_CASE("mixed units are rejected") {
  const Signature sig({"p"});
  UnitFamily fam{sig, {}, {ArgumentUnit::extensional("e", BitSet(2))}};
  CHECK_THROWS_AS(minimal_inconsistent_subsets(fam), Error);
  ElementDomain dom({"x"});
  CHECK_THROWS_AS(dom.set_of({"y"}), Error);
}

TEST_CASE("text rendering") {
  const std::string text = to_text(minimal_inconsistent_subsets(symmetrical()));
  CHECK(text.find("mis 3") != std::string::npos);
}
