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
#include <string>
#include <utility>
#include <vector>

#include "defarg/default_theory.hpp"
#include "defarg/logic.hpp"

namespace defarg {

struct FamilyMember {
  std::string label;
  ModelSet carrier;
};

/// The sets defaults are attached to, in declaration order, plus the universe.
/// Member i owns bit i of every cell code (leftmost character). Scopes that
/// cover the whole universe are left out.
struct AttachmentFamily {
  std::vector<FamilyMember> members;
  ModelSet universe;
};

inline constexpr std::size_t kFamilyCap = 16;

AttachmentFamily attachment_family(const DefaultTheory& theory);

/// (⋂ builders_x) − (⋃ builders_y); empty builders_x stands for the universe.
struct RelevantSet {
  ModelSet carrier;
  std::vector<std::size_t> builders_x;
  std::vector<std::size_t> builders_y;
};

/// Every non-empty difference of an intersection of members and a union of
/// members, deduplicated by carrier, in discovery order (fewest builders first).
std::vector<RelevantSet> relevant_sets(const AttachmentFamily& family);
/// "U - A", "A & A' - A''", ...
std::string set_expression(const RelevantSet& set, const AttachmentFamily& family);

struct Cell {
  ModelSet carrier;
  /// code[i] is true iff the carrier lies inside member i.
  std::vector<bool> code;

  std::string code_string() const;
  bool operator==(const Cell&) const = default;
};

/// The inclusion-minimal relevant sets, coded against the family. Sorted by
/// number of containing members, then by code.
std::vector<Cell> finest_cells(const std::vector<RelevantSet>& relevant, const AttachmentFamily& family);
/// Same cells computed directly by grouping universe elements by their
/// membership code.
std::vector<Cell> membership_cells(const AttachmentFamily& family);

Cell make_cell(ModelSet carrier, const AttachmentFamily& family);
std::string cell_expression(const Cell& cell, const AttachmentFamily& family);

/// Exceptionality order on cells: i ⊴ j iff the members containing cell i are
/// a strict subset of those containing cell j. Indices refer to the cell list.
class HierarchyOrder {
 public:
  HierarchyOrder() = default;
  explicit HierarchyOrder(std::size_t size);

  std::size_t size() const { return size_; }
  bool less(std::size_t i, std::size_t j) const { return matrix_[i * size_ + j]; }
  /// True iff j is a direct successor of i (a Hasse edge i -> j).
  bool covers(std::size_t i, std::size_t j) const;

  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& hasse() const { return hasse_; }

 private:
  friend HierarchyOrder cell_order(const std::vector<Cell>& cells);

  std::size_t size_ = 0;
  std::vector<char> matrix_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::pair<std::size_t, std::size_t>> hasse_;
};

HierarchyOrder cell_order(const std::vector<Cell>& cells);

/// Graphviz digraph of the Hasse diagram, lower cells at the bottom.
std::string export_dot(const std::vector<Cell>& cells, const HierarchyOrder& order, const AttachmentFamily& family);
/// One line per cell: `code TAB set-expression TAB size`.
std::string cell_table(const std::vector<Cell>& cells, const AttachmentFamily& family);

}  // namespace defarg
