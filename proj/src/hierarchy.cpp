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

#include "defarg/hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <sstream>
#include <unordered_map>

namespace defarg {

AttachmentFamily attachment_family(const DefaultTheory& theory) {
  AttachmentFamily fam;
  fam.universe = theory.universe();
  // A scope covering the whole universe contains every cell alike and adds
  // nothing to codes or to the order.
  for (const auto& point : attachment_points(theory))
    if (point.carrier != fam.universe) fam.members.push_back({to_string(point.scope), point.carrier});
  if (fam.members.size() > kFamilyCap)
    throw LimitError("too many attachment points: " + std::to_string(fam.members.size()));
  return fam;
}

namespace {

using Code = std::uint32_t;

// Bit i of the mask <-> member i.
Code membership_mask(Valuation v, const AttachmentFamily& fam) {
  Code c = 0;
  for (std::size_t i = 0; i < fam.members.size(); ++i)
    if (fam.members[i].carrier.contains(v)) c |= Code{1} << i;
  return c;
}

std::vector<std::size_t> mask_indices(Code mask) {
  std::vector<std::size_t> out;
  for (; mask; mask &= mask - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  return out;
}

std::vector<Code> masks_by_size(std::size_t k) {
  std::vector<Code> out(std::size_t{1} << k);
  for (Code m = 0; m < out.size(); ++m) out[m] = m;
  std::stable_sort(out.begin(), out.end(),
                   [](Code a, Code b) { return std::popcount(a) < std::popcount(b); });
  return out;
}

std::string label_term(const std::string& label) {
  return label.find(' ') == std::string::npos ? label : "(" + label + ")";
}

struct BitSetHash {
  std::size_t operator()(const BitSet& b) const { return b.hash(); }
};

}  // namespace

std::vector<RelevantSet> relevant_sets(const AttachmentFamily& fam) {
  const std::size_t k = fam.members.size();
  if (k > 12) throw LimitError("relevant-set enumeration supports at most 12 attachment points");
  // Regions: universe elements grouped by membership code. Every relevant set
  // is a union of regions, so carriers are compared as region masks.
  std::map<Code, ModelSet> regions;
  fam.universe.for_each([&](Valuation v) {
    auto [it, fresh] = regions.try_emplace(membership_mask(v, fam), ModelSet::empty(fam.universe.atom_count()));
    it->second.insert(v);
  });
  std::vector<Code> codes;
  std::vector<const ModelSet*> carriers;
  for (const auto& [c, ms] : regions) {
    codes.push_back(c);
    carriers.push_back(&ms);
  }

  std::vector<RelevantSet> out;
  std::unordered_map<BitSet, std::size_t, BitSetHash> seen;
  const auto order = masks_by_size(k);
  for (Code x : order) {
    for (Code y : order) {
      if (x & y) continue;
      BitSet picked(codes.size());
      for (std::size_t r = 0; r < codes.size(); ++r)
        if ((codes[r] & x) == x && (codes[r] & y) == 0) picked.set(r);
      if (picked.none() || seen.contains(picked)) continue;
      seen.emplace(picked, out.size());
      ModelSet carrier = ModelSet::empty(fam.universe.atom_count());
      picked.for_each([&](std::size_t r) { carrier |= *carriers[r]; });
      out.push_back({std::move(carrier), mask_indices(x), mask_indices(y)});
    }
  }
  return out;
}

std::string set_expression(const RelevantSet& set, const AttachmentFamily& fam) {
  std::string out;
  if (set.builders_x.empty()) {
    out = "U";
  } else {
    for (std::size_t i = 0; i < set.builders_x.size(); ++i)
      out += (i ? " & " : "") + label_term(fam.members[set.builders_x[i]].label);
  }
  for (auto y : set.builders_y) out += " - " + label_term(fam.members[y].label);
  return out;
}

std::string Cell::code_string() const {
  std::string s;
  for (bool b : code) s += b ? '1' : '0';
  return s;
}

Cell make_cell(ModelSet carrier, const AttachmentFamily& fam) {
  Cell c;
  for (const auto& m : fam.members) c.code.push_back(carrier.is_subset_of(m.carrier));
  c.carrier = std::move(carrier);
  return c;
}

std::string cell_expression(const Cell& cell, const AttachmentFamily& fam) {
  RelevantSet rs{cell.carrier, {}, {}};
  for (std::size_t i = 0; i < cell.code.size(); ++i) (cell.code[i] ? rs.builders_x : rs.builders_y).push_back(i);
  return set_expression(rs, fam);
}

namespace {

void sort_cells(std::vector<Cell>& cells) {
  std::sort(cells.begin(), cells.end(), [](const Cell& a, const Cell& b) {
    const auto ca = std::count(a.code.begin(), a.code.end(), true);
    const auto cb = std::count(b.code.begin(), b.code.end(), true);
    if (ca != cb) return ca < cb;
    return a.code_string() < b.code_string();
  });
}

}  // namespace

std::vector<Cell> finest_cells(const std::vector<RelevantSet>& relevant, const AttachmentFamily& fam) {
  std::vector<Cell> cells;
  for (const auto& r : relevant) {
    const bool minimal = std::none_of(relevant.begin(), relevant.end(), [&](const RelevantSet& o) {
      return o.carrier.is_strict_subset_of(r.carrier);
    });
    if (minimal) cells.push_back(make_cell(r.carrier, fam));
  }
  sort_cells(cells);
  return cells;
}

std::vector<Cell> membership_cells(const AttachmentFamily& fam) {
  std::map<Code, ModelSet> regions;
  fam.universe.for_each([&](Valuation v) {
    auto [it, fresh] = regions.try_emplace(membership_mask(v, fam), ModelSet::empty(fam.universe.atom_count()));
    it->second.insert(v);
  });
  std::vector<Cell> cells;
  for (auto& [code, carrier] : regions) cells.push_back(make_cell(std::move(carrier), fam));
  sort_cells(cells);
  return cells;
}

HierarchyOrder::HierarchyOrder(std::size_t size) : size_(size), matrix_(size * size, 0) {}

bool HierarchyOrder::covers(std::size_t i, std::size_t j) const {
  return std::binary_search(hasse_.begin(), hasse_.end(), std::make_pair(i, j));
}

HierarchyOrder cell_order(const std::vector<Cell>& cells) {
  HierarchyOrder order(cells.size());
  auto strict_subcode = [](const std::vector<bool>& a, const std::vector<bool>& b) {
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] && !b[i]) return false;
      if (!a[i] && b[i]) strict = true;
    }
    return strict;
  };
  const std::size_t n = cells.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (strict_subcode(cells[i].code, cells[j].code)) {
        order.matrix_[i * n + j] = 1;
        order.pairs_.emplace_back(i, j);
      }
  for (auto [i, j] : order.pairs_) {
    bool direct = true;
    for (std::size_t z = 0; z < n && direct; ++z)
      if (order.less(i, z) && order.less(z, j)) direct = false;
    if (direct) order.hasse_.emplace_back(i, j);
  }
  return order;
}

std::string export_dot(const std::vector<Cell>& cells, const HierarchyOrder& order, const AttachmentFamily& fam) {
  std::ostringstream os;
  auto node = [&](std::size_t i) { return "c_" + cells[i].code_string(); };
  os << "digraph hierarchy {\n  rankdir=BT;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const std::string code = cells[i].code_string();
    os << "  " << node(i) << " [label=\"" << (code.empty() ? "-" : code) << "\\n" << cell_expression(cells[i], fam)
       << "\\n|" << cells[i].carrier.count() << "|\"];\n";
  }
  for (auto [i, j] : order.hasse()) os << "  " << node(i) << " -> " << node(j) << ";\n";
  os << "}\n";
  return os.str();
}

std::string cell_table(const std::vector<Cell>& cells, const AttachmentFamily& fam) {
  std::ostringstream os;
  for (const auto& c : cells)
    os << c.code_string() << '\t' << cell_expression(c, fam) << '\t' << c.carrier.count() << '\n';
  return os.str();
}

}  // namespace defarg
