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

#include "defarg/preference.hpp"
#include "defarg/theory_format.hpp"

using namespace defarg;

namespace {

DefaultTheory fixture(const char* name) { return load_theory(std::string(DEFARG_FIXTURE_DIR "/") + name); }

Valuation bits(const char* s) { return static_cast<Valuation>(std::stoul(s, nullptr, 2)); }

std::size_t cell_index(const PreferentialModel& m, const std::string& code) {
  for (std::size_t i = 0; i < m.cells.size(); ++i)
    if (m.cells[i].code_string() == code) return i;
  FAIL("missing cell " << code);
  return 0;
}

Packet mu(const PreferentialModel& m, const char* code) { return {cell_index(m, code), false}; }
Packet o(const PreferentialModel& m, const char* code) { return {cell_index(m, code), true}; }

bool has_pair(const std::vector<std::pair<Packet, Packet>>& pairs, Packet a, Packet b) {
  return std::find(pairs.begin(), pairs.end(), std::make_pair(a, b)) != pairs.end();
}

}  // namespace

TEST_CASE("normal and exceptional parts of each cell") {
  const PreferentialModel m = build_preferential_model(fixture("tweety.dt"));
  const auto& p10 = m.partitions()[cell_index(m, "10")];
  CHECK(p10.valid_ids == std::vector<std::string>{"d1"});
  CHECK(to_string(p10.mu) == "{101}");
  CHECK(to_string(p10.o) == "{100}");
  const auto& p11 = m.partitions()[cell_index(m, "11")];
  CHECK(p11.valid_ids == std::vector<std::string>{"d2"});
  CHECK(to_string(p11.mu) == "{110}");
  CHECK(to_string(p11.o) == "{111}");
  const auto& p00 = m.partitions()[cell_index(m, "00")];
  CHECK(p00.valid_ids.empty());
  CHECK(p00.o.is_empty());
}

TEST_CASE("cells where every default is eliminated have no exceptional part") {
  const PreferentialModel m = build_preferential_model(fixture("nixon.dt"));
  const auto& both = m.partitions()[cell_index(m, "11")];
  CHECK(both.valid_ids.empty());
  CHECK(both.o.is_empty());
  CHECK(both.mu == m.cells[cell_index(m, "11")].carrier);
}

TEST_CASE("inner order variants") {
  const std::vector<std::size_t> flat{0, 0}, none;
  // bit 0 = d1, bit 1 = d2
  CHECK(better_satisfaction(0b11, 0b01, PreferenceVariant::subset, flat, none));
  CHECK_FALSE(better_satisfaction(0b01, 0b11, PreferenceVariant::subset, flat, none));
  CHECK_FALSE(better_satisfaction(0b01, 0b10, PreferenceVariant::subset, flat, none));
  CHECK_FALSE(better_satisfaction(0b10, 0b01, PreferenceVariant::subset, flat, none));
  CHECK_FALSE(better_satisfaction(0b01, 0b10, PreferenceVariant::cardinality, flat, none));
  CHECK(better_satisfaction(0b11, 0b10, PreferenceVariant::cardinality, flat, none));

  const std::vector<std::size_t> rank{1, 0};  // d2 first
  CHECK(better_satisfaction(0b10, 0b01, PreferenceVariant::priority, flat, rank));
  CHECK_FALSE(better_satisfaction(0b01, 0b10, PreferenceVariant::priority, flat, rank));

  // d2 is more specific (level 0) than d1 (level 1).
  const std::vector<std::size_t> levels{1, 0};
  CHECK(better_satisfaction(0b10, 0b01, PreferenceVariant::lexicographic_specificity, levels, none));
  CHECK_FALSE(better_satisfaction(0b01, 0b10, PreferenceVariant::lexicographic_specificity, levels, none));
  CHECK_FALSE(better_satisfaction(0b01, 0b01, PreferenceVariant::lexicographic_specificity, levels, none));
}

TEST_CASE("lexicographic specificity inside a cell") {
  // Nested scopes b ⊃ b & p, each with its own conclusion; both valid at b & p.
  const DefaultTheory th = parse_theory("atoms: b p f g\nbackground: p -> b\nd1: b ~> f\nd2: p ~> g\n");
  PreferenceConfig config;
  config.variant = PreferenceVariant::lexicographic_specificity;
  const PreferentialModel m = build_preferential_model(th, config);
  const std::size_t c = cell_index(m, "11");
  const auto& inner = m.order.inner_orders()[c];
  // 1101: satisfies only d2 (g). 1110: satisfies only d1 (f).
  CHECK(inner.better(bits("1101"), bits("1110")));
  CHECK_FALSE(inner.better(bits("1110"), bits("1101")));
  CHECK(inner.better(bits("1101"), bits("1100")));

  const PreferentialModel plain = build_preferential_model(th);
  CHECK_FALSE(plain.order.inner_orders()[c].better(bits("1101"), bits("1110")));
}

TEST_CASE("priority variant needs every valid default") {
  const DefaultTheory th = fixture("tweety.dt");
  PreferenceConfig config;
  config.variant = PreferenceVariant::priority;
  config.priority = {"d1"};
  CHECK_THROWS_AS(build_preferential_model(th, config), Error);
  config.priority = {"d2", "d1"};
  CHECK_NOTHROW(build_preferential_model(th, config));
  CHECK(variant_from_string("cardinality") == PreferenceVariant::cardinality);
  CHECK_THROWS_AS(variant_from_string("bogus"), Error);
}

TEST_CASE("packet order of the nested fixture") {
  const PreferentialModel m = build_preferential_model(fixture("relation.dt"));
  const auto& base = m.packets().base;
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"000", "100"}, {"100", "110"}, {"110", "111"}, {"000", "010"}, {"010", "011"}, {"011", "111"}, {"010", "110"}})
    CHECK(has_pair(base, mu(m, a), mu(m, b)));
  for (auto [a, b] : std::vector<std::pair<const char*, const char*>>{
           {"100", "000"}, {"010", "000"}, {"110", "100"}, {"110", "010"}, {"011", "010"}, {"111", "110"}, {"111", "011"}})
    CHECK(has_pair(base, mu(m, a), o(m, b)));
  for (const auto& cell : m.cells) {
    const char* code = nullptr;
    const std::string s = cell.code_string();
    code = s.c_str();
    CHECK(has_pair(base, mu(m, code), o(m, code)));
  }
  CHECK_FALSE(has_pair(base, mu(m, "110"), o(m, "000")));
  CHECK(m.packets().packets.size() == 12);
}

TEST_CASE("empty exceptional packets are left out") {
  const PreferentialModel m = build_preferential_model(fixture("tweety.dt"));
  const auto& packets = m.packets().packets;
  CHECK(std::find(packets.begin(), packets.end(), o(m, "00")) == packets.end());
  CHECK(packets.size() == 5);
  const auto& red = m.packets().reduction;
  CHECK(has_pair(red, mu(m, "00"), mu(m, "10")));
  CHECK(has_pair(red, mu(m, "10"), mu(m, "11")));
  CHECK(has_pair(red, mu(m, "11"), o(m, "10")));
  CHECK(has_pair(red, mu(m, "11"), o(m, "11")));
  CHECK(red.size() == 4);
  CHECK(packet_name(o(m, "10"), m.cells) == "o(10)");
}

TEST_CASE("element order of the small example") {
  const PreferentialModel m = build_preferential_model(fixture("tweety.dt"));
  const auto& ord = m.order;
  CHECK(ord.less(bits("101"), bits("110")));
  CHECK(ord.less(bits("110"), bits("100")));
  CHECK_FALSE(ord.less(bits("100"), bits("110")));
  for (Valuation v = 0; v < 8; ++v) CHECK_FALSE(ord.less(v, v));
  CHECK_FALSE(ord.packet_of(bits("010")).has_value());
  CHECK(ord.packet_of(bits("100")) == o(m, "10"));
}

TEST_CASE("radical placement puts every exceptional packet above every normal one") {
  PreferenceConfig config;
  config.placement = ExceptionPlacement::radical;
  const PreferentialModel m = build_preferential_model(fixture("relation.dt"), config);
  for (const auto& a : m.packets().packets) {
    if (a.exceptional) continue;
    for (const auto& b : m.packets().packets)
      if (b.exceptional) CHECK(m.packets().less(a, b));
  }
  CHECK(m.packets().less(o(m, "000"), o(m, "100")));
}

TEST_CASE("minimal models and default consequence") {
  const DefaultTheory th = fixture("tweety.dt");
  const PreferentialModel m = build_preferential_model(th);
  CHECK(to_string(minimal_models(th.parse("b"), m)) == "{101}");
  CHECK(to_string(minimal_models(th.parse("p"), m)) == "{110}");
  CHECK(to_string(minimal_models(th.parse("true"), m)) == "{000, 001}");
  CHECK_THROWS_AS(minimal_models(th.parse("p & ~b"), m), Error);

  CHECK(default_holds(th.parse("b"), th.parse("f"), m).holds);
  CHECK_FALSE(default_holds(th.parse("p"), th.parse("f"), m).holds);
  CHECK(default_holds(th.parse("p"), th.parse("~f"), m).holds);
  CHECK(default_holds(th.parse("b"), th.parse("b"), m).holds);
  const auto v = default_holds(th.parse("p"), th.parse("~f"), m);
  CHECK(v.witnesses == std::vector<Packet>{mu(m, "11")});
}

TEST_CASE("classification of individuals") {
  const DefaultTheory th = fixture("tweety.dt");
  const PreferentialModel m = build_preferential_model(th);
  const Signature& sig = th.signature();

  const std::vector<Formula> bird{th.parse("b")};
  const auto c1 = classify_individual(m, bird);
  CHECK(c1.placements == std::vector<Packet>{mu(m, "10")});
  CHECK(c1.concludes(th.parse("f"), sig));

  const std::vector<Formula> penguin{th.parse("p")};
  const auto c2 = classify_individual(m, penguin);
  CHECK(c2.placements == std::vector<Packet>{mu(m, "11")});
  CHECK(c2.concludes(th.parse("~f"), sig));

  const std::vector<Formula> grounded{th.parse("b"), th.parse("~f")};
  const auto c3 = classify_individual(m, grounded);
  CHECK(c3.placements == std::vector<Packet>{o(m, "10")});
  CHECK_FALSE(c3.concludes(th.parse("f"), sig));
  CHECK(c3.literals == std::vector<std::string>{"b", "~p", "~f"});

  const std::vector<Formula> impossible{th.parse("p & ~b")};
  CHECK_THROWS_AS(classify_individual(m, impossible), Error);
}

TEST_CASE("models require the consistency conditions") {
  const DefaultTheory th = parse_theory("atoms: b f\nd1: b ~> f\nd2: b ~> ~f\n");
  CHECK_THROWS_AS(build_preferential_model(th), Error);
}

TEST_CASE("order dump") {
  const PreferentialModel m = build_preferential_model(fixture("tweety.dt"));
  const std::string text = dump_order(m, true);
  for (const char* section : {"cells", "hierarchy", "packets", "generating", "elements"})
    CHECK(text.find(section) != std::string::npos);
  CHECK(text.find("101 < 110") != std::string::npos);
  CHECK(dump_order(m, false).find("elements") == std::string::npos);
}
