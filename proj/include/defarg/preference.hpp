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

#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "defarg/default_theory.hpp"
#include "defarg/hierarchy.hpp"
#include "defarg/logic.hpp"

namespace defarg {

/// How unexcused exceptions inside one cell are compared.
enum class PreferenceVariant { subset, cardinality, priority, lexicographic_specificity };

/// Where the o-packets sit. `above_successors` puts o(X) above μ of X, of
/// the cells below X and of the direct successors of X. `radical` puts every
/// o-packet above every μ-packet, ordered among themselves by ⊴.
enum class ExceptionPlacement { above_successors, radical };

struct PreferenceConfig {
  PreferenceVariant variant = PreferenceVariant::subset;
  /// Most important first; required for `priority`.
  std::vector<std::string> priority;
  ExceptionPlacement placement = ExceptionPlacement::above_successors;
};

std::string_view to_string(PreferenceVariant v);
PreferenceVariant variant_from_string(std::string_view s);

/// μ: cell members satisfying every valid default; o: the others.
struct CellPartition {
  std::size_t cell = 0;
  ModelSet mu;
  ModelSet o;
  std::vector<std::string> valid_ids;
};

CellPartition split_cell(const Cell& cell, std::size_t cell_index, const std::vector<std::string>& valid_ids,
                         const DefaultTheory& theory);

/// Strict order on the members of one o-packet; `better(a, b)` means a is
/// preferred to b.
class InnerOrder {
 public:
  InnerOrder() = default;

  const std::vector<Valuation>& members() const { return members_; }
  bool better(Valuation a, Valuation b) const;
  std::vector<std::pair<Valuation, Valuation>> pairs() const;

 private:
  friend InnerOrder inner_order(const CellPartition&, const PreferenceConfig&, const DefaultTheory&);
  std::optional<std::size_t> position(Valuation v) const;

  std::vector<Valuation> members_;
  std::vector<char> matrix_;
};

/// Compares two sets of satisfied defaults (bit i = valid default i).
/// `levels` holds the specificity level of each valid default (0 = most
/// specific); `rank` the priority position. Exposed for testing.
bool better_satisfaction(std::uint32_t a, std::uint32_t b, PreferenceVariant variant,
                         std::span<const std::size_t> levels, std::span<const std::size_t> rank);

InnerOrder inner_order(const CellPartition& partition, const PreferenceConfig& config, const DefaultTheory& theory);

struct Packet {
  std::size_t cell = 0;
  bool exceptional = false;  // false: μ(cell), true: o(cell)

  auto operator<=>(const Packet&) const = default;
};

std::string packet_name(const Packet& p, const std::vector<Cell>& cells);

/// Packetwise order. Pairs are listed over non-empty packets only; the
/// closure is computed with empty packets present and then restricted.
struct PacketOrder {
  std::vector<Packet> packets;
  std::vector<std::pair<Packet, Packet>> base;
  std::vector<std::pair<Packet, Packet>> closure;
  /// Transitive reduction of `closure`: the generating pairs.
  std::vector<std::pair<Packet, Packet>> reduction;
  /// Closure rows over all 2 * cell count packet slots, empty ones included.
  std::vector<BitSet> closure_rows;

  static std::size_t slot(const Packet& p) { return 2 * p.cell + (p.exceptional ? 1 : 0); }
  static Packet packet_at(std::size_t slot) { return {slot / 2, slot % 2 == 1}; }
  bool less(const Packet& a, const Packet& b) const { return closure_rows[slot(a)].test(slot(b)); }
};

PacketOrder packet_order(const std::vector<Cell>& cells, const HierarchyOrder& hierarchy,
                         const std::vector<CellPartition>& partitions,
                         ExceptionPlacement placement = ExceptionPlacement::above_successors);

/// Element-level order ⊑ over the universe; `less(a, b)` means a is preferred.
class ModelOrderRelation {
 public:
  ModelOrderRelation() = default;
  ModelOrderRelation(ModelSet universe, PacketOrder packets, std::vector<CellPartition> partitions,
                     std::vector<InnerOrder> inner);

  const ModelSet& universe() const { return universe_; }
  const PacketOrder& packets() const { return packets_; }
  const std::vector<InnerOrder>& inner_orders() const { return inner_; }
  const std::vector<CellPartition>& partitions() const { return partitions_; }

  std::optional<Packet> packet_of(Valuation v) const;
  bool less(Valuation a, Valuation b) const;
  std::vector<std::pair<Valuation, Valuation>> element_pairs() const;

 private:
  ModelSet universe_;
  PacketOrder packets_;
  std::vector<CellPartition> partitions_;
  std::vector<InnerOrder> inner_;
  std::vector<std::int32_t> slot_of_;  // per valuation, -1 outside the universe
};

/// Throws if the packet closure contains a cycle.
ModelOrderRelation element_order(const ModelSet& universe, PacketOrder packets, std::vector<CellPartition> partitions,
                                 std::vector<InnerOrder> inner);

/// Everything derived from one theory and configuration.
struct PreferentialModel {
  DefaultTheory theory;
  PreferenceConfig config;
  AttachmentFamily family;
  std::vector<Cell> cells;
  HierarchyOrder hierarchy;
  ModelOrderRelation order;

  const std::vector<CellPartition>& partitions() const { return order.partitions(); }
  const PacketOrder& packets() const { return order.packets(); }
};

PreferentialModel build_preferential_model(const DefaultTheory& theory, const PreferenceConfig& config = {});

/// Members of `query` (inside the universe) with no preferred member of `query` below them.
ModelSet minimal_models(const ModelSet& query, const ModelOrderRelation& order);
ModelSet minimal_models(const Formula& gamma, const PreferentialModel& model);

struct ConsequenceVerdict {
  bool holds = false;
  ModelSet minimal;
  /// Packets the minimal models were drawn from.
  std::vector<Packet> witnesses;
};

ConsequenceVerdict default_holds(const Formula& gamma, const Formula& psi, const PreferentialModel& model);

struct Classification {
  /// Chosen (cell, packet) pairs; several when minimal cells are incomparable.
  std::vector<Packet> placements;
  ModelSet models;
  /// Literals true in every selected model, in signature order.
  std::vector<std::string> literals;

  bool concludes(const Formula& f, const Signature& sig) const;
};

/// Places an individual described by `facts` in the ⊴-lowest cells the facts
/// allow, preferring μ over o inside a cell.
Classification classify_individual(const PreferentialModel& model, std::span<const Formula> facts);

/// Sorted text lines: cells, packet base pairs, generating pairs, and (when
/// requested) element pairs as bitstrings.
std::string dump_order(const PreferentialModel& model, bool with_elements);

}  // namespace defarg
