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

#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "defarg/bitset.hpp"
#include "defarg/logic.hpp"

namespace defarg {

/// Finite, named element domain for extensional argument units.
class ElementDomain {
 public:
  ElementDomain() = default;
  explicit ElementDomain(std::vector<std::string> elements);

  std::size_t size() const { return elements_.size(); }
  const std::vector<std::string>& elements() const { return elements_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  BitSet set_of(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const BitSet& set) const;

  bool operator==(const ElementDomain&) const = default;

 private:
  std::vector<std::string> elements_;
};

struct ArgumentUnit {
  std::string id;
  std::variant<Formula, BitSet> content;

  static ArgumentUnit intensional(std::string id, Formula f) { return {std::move(id), std::move(f)}; }
  static ArgumentUnit extensional(std::string id, BitSet elements) {
    return {std::move(id), std::move(elements)};
  }
};

/// Units sharing one domain. Intensional families live over a signature and
/// may be restricted by background formulas; extensional families over an
/// element domain, where joint consistency means a non-empty intersection.
struct UnitFamily {
  std::variant<Signature, ElementDomain> domain;
  std::vector<Formula> background;
  std::vector<ArgumentUnit> units;
};

/// The family with every unit reduced to a subset of one common space.
struct ReducedFamily {
  std::vector<std::string> ids;
  std::vector<BitSet> contents;
  BitSet universe;
};

ReducedFamily reduce(const UnitFamily& family);
BitSet reduce_content(const UnitFamily& family, const ArgumentUnit& unit);

struct InconsistencyReport {
  /// Each entry sorted by id; entries sorted by cardinality, then lexicographically.
  std::vector<std::vector<std::string>> mis;
  /// Number of minimal inconsistent subsets each unit id occurs in (0 for unaffected units).
  std::map<std::string, std::size_t> frequencies;

  bool consistent() const { return mis.empty(); }
  bool operator==(const InconsistencyReport&) const = default;
};

inline constexpr std::size_t kDefaultUnitCap = 16;

/// Index masks of all minimal subsets of `contents` whose intersection with
/// `universe` is empty, in increasing cardinality.
std::vector<std::uint32_t> minimal_inconsistent_masks(const std::vector<BitSet>& contents,
                                                      const BitSet& universe,
                                                      std::size_t cap = kDefaultUnitCap);

InconsistencyReport minimal_inconsistent_subsets(const ReducedFamily& family,
                                                 std::size_t cap = kDefaultUnitCap);
InconsistencyReport minimal_inconsistent_subsets(const UnitFamily& family,
                                                 std::size_t cap = kDefaultUnitCap);

/// True iff `last_id` occurs in every minimal inconsistent subset (vacuously
/// true for a consistent report). Throws for ids the report does not know.
bool last_argument_check(const InconsistencyReport& report, std::string_view last_id);

/// Minimal subsets of the family whose joint content is non-empty and
/// contained in the target's content. The target itself is excluded from the
/// candidates; the empty subset stands for the whole universe.
std::vector<std::vector<std::string>> support_sets(const UnitFamily& family, const ArgumentUnit& target,
                                                   std::size_t cap = kDefaultUnitCap);

/// Plain-text rendering for transcripts and the arbiter display.
std::string to_text(const InconsistencyReport& report);

}  // namespace defarg
