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

#include "defarg/inconsistency.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_set>

namespace defarg {

ElementDomain::ElementDomain(std::vector<std::string> elements) : elements_(std::move(elements)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& e : elements_) {
    if (e.empty()) throw Error("empty element name");
    if (!seen.insert(e).second) throw Error("duplicate element '" + e + "'");
  }
}

std::optional<std::size_t> ElementDomain::index_of(std::string_view name) const {
  auto it = std::find(elements_.begin(), elements_.end(), name);
  if (it == elements_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - elements_.begin());
}

BitSet ElementDomain::set_of(const std::vector<std::string>& names) const {
  BitSet out(size());
  for (const auto& n : names) {
    auto idx = index_of(n);
    if (!idx) throw Error("unknown element '" + n + "'");
    out.set(*idx);
  }
  return out;
}

std::vector<std::string> ElementDomain::names_of(const BitSet& set) const {
  std::vector<std::string> out;
  set.for_each([&](std::size_t i) { out.push_back(elements_[i]); });
  return out;
}

BitSet reduce_content(const UnitFamily& family, const ArgumentUnit& unit) {
  if (const auto* sig = std::get_if<Signature>(&family.domain)) {
    const auto* f = std::get_if<Formula>(&unit.content);
    if (!f) throw Error("unit '" + unit.id + "' is extensional in an intensional family");
    return models(*f, *sig).bits();
  }
  const auto& dom = std::get<ElementDomain>(family.domain);
  const auto* set = std::get_if<BitSet>(&unit.content);
  if (!set) throw Error("unit '" + unit.id + "' is intensional in an extensional family");
  if (set->size() != dom.size()) throw Error("unit '" + unit.id + "' does not match the element domain");
  return *set;
}

ReducedFamily reduce(const UnitFamily& family) {
  ReducedFamily out;
  if (const auto* sig = std::get_if<Signature>(&family.domain)) {
    out.universe = models(std::span<const Formula>(family.background), *sig).bits();
  } else {
    if (!family.background.empty()) throw Error("background formulas require an intensional family");
    out.universe = BitSet(std::get<ElementDomain>(family.domain).size(), true);
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& u : family.units) {
    if (!seen.insert(u.id).second) throw Error("duplicate unit id '" + u.id + "'");
    out.ids.push_back(u.id);
    out.contents.push_back(reduce_content(family, u));
  }
  return out;
}

namespace {

void check_unit_cap(std::size_t n, std::size_t cap) {
  if (n > cap || n > 31)
    throw LimitError("too many argument units: " + std::to_string(n) + " exceeds cap of " +
                     std::to_string(std::min<std::size_t>(cap, 31)));
}

// Calls f(mask) for every k-subset of n elements, in increasing mask order.
template <typename F>
void for_each_combination(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  if (k == 0) {
    f(std::uint32_t{0});
    return;
  }
  std::uint32_t mask = (std::uint32_t{1} << k) - 1;
  const std::uint64_t limit = std::uint64_t{1} << n;
  while (mask < limit) {
    if (!f(mask)) return;
    const std::uint32_t c = mask & (~mask + 1);
    const std::uint32_t r = mask + c;
    if (r == 0) return;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

bool contains_any(std::uint32_t mask, const std::vector<std::uint32_t>& found) {
  return std::any_of(found.begin(), found.end(), [&](std::uint32_t m) { return (mask & m) == m; });
}

BitSet intersect(const std::vector<BitSet>& contents, const BitSet& universe, std::uint32_t mask) {
  BitSet acc = universe;
  for (std::uint32_t bits = mask; bits; bits &= bits - 1) {
    acc &= contents[static_cast<std::size_t>(std::countr_zero(bits))];
    if (acc.none()) break;
  }
  return acc;
}

std::vector<std::string> ids_of(std::uint32_t mask, const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (std::uint32_t bits = mask; bits; bits &= bits - 1)
    out.push_back(ids[static_cast<std::size_t>(std::countr_zero(bits))]);
  std::sort(out.begin(), out.end());
  return out;
}

void sort_sets(std::vector<std::vector<std::string>>& sets) {
  std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
}

}  // namespace

std::vector<std::uint32_t> minimal_inconsistent_masks(const std::vector<BitSet>& contents,
                                                      const BitSet& universe, std::size_t cap) {
  const std::size_t n = contents.size();
  check_unit_cap(n, cap);
  std::vector<std::uint32_t> found;
  // A subset that is inconsistent and contains no smaller inconsistent subset
  // found so far is minimal, since sizes are visited in increasing order.
  for (std::size_t k = 0; k <= n; ++k) {
    for_each_combination(n, k, [&](std::uint32_t mask) {
      if (!contains_any(mask, found) && intersect(contents, universe, mask).none()) found.push_back(mask);
      return true;
    });
  }
  return found;
}

InconsistencyReport minimal_inconsistent_subsets(const ReducedFamily& family, std::size_t cap) {
  InconsistencyReport report;
  for (const auto& id : family.ids) report.frequencies[id] = 0;
  for (auto mask : minimal_inconsistent_masks(family.contents, family.universe, cap)) {
    auto ids = ids_of(mask, family.ids);
    for (const auto& id : ids) ++report.frequencies[id];
    report.mis.push_back(std::move(ids));
  }
  sort_sets(report.mis);
  return report;
}

InconsistencyReport minimal_inconsistent_subsets(const UnitFamily& family, std::size_t cap) {
  check_unit_cap(family.units.size(), cap);
  return minimal_inconsistent_subsets(reduce(family), cap);
}

bool last_argument_check(const InconsistencyReport& report, std::string_view last_id) {
  if (report.mis.empty()) return true;
  if (!report.frequencies.contains(std::string(last_id)))
    throw Error("unknown argument unit '" + std::string(last_id) + "'");
  return std::all_of(report.mis.begin(), report.mis.end(), [&](const auto& set) {
    return std::find(set.begin(), set.end(), last_id) != set.end();
  });
}

std::vector<std::vector<std::string>> support_sets(const UnitFamily& family, const ArgumentUnit& target,
                                                   std::size_t cap) {
  ReducedFamily reduced = reduce(family);
  const BitSet goal = reduce_content(family, target);
  // Candidates exclude the target itself.
  std::vector<std::string> ids;
  std::vector<BitSet> contents;
  for (std::size_t i = 0; i < reduced.ids.size(); ++i) {
    if (reduced.ids[i] == target.id) continue;
    ids.push_back(reduced.ids[i]);
    contents.push_back(reduced.contents[i]);
  }
  check_unit_cap(ids.size(), cap);
  std::vector<std::uint32_t> found;
  for (std::size_t k = 0; k <= ids.size(); ++k) {
    for_each_combination(ids.size(), k, [&](std::uint32_t mask) {
      if (contains_any(mask, found)) return true;
      BitSet joint = intersect(contents, reduced.universe, mask);
      if (joint.any() && joint.is_subset_of(goal)) found.push_back(mask);
      return true;
    });
  }
  std::vector<std::vector<std::string>> out;
  for (auto mask : found) out.push_back(ids_of(mask, ids));
  sort_sets(out);
  return out;
}

std::string to_text(const InconsistencyReport& report) {
  std::ostringstream os;
  os << "mis " << report.mis.size() << '\n';
  for (const auto& set : report.mis) {
    os << "  {";
    for (std::size_t i = 0; i < set.size(); ++i) os << (i ? ", " : "") << set[i];
    os << "}\n";
  }
  for (const auto& [id, n] : report.frequencies) os << "frequency " << id << ' ' << n << '\n';
  return os.str();
}

}  // namespace defarg
