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

#include "defarg/preference.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace defarg {

std::string_view to_string(PreferenceVariant v) {
  switch (v) {
    case PreferenceVariant::subset: return "subset";
    case PreferenceVariant::cardinality: return "cardinality";
    case PreferenceVariant::priority: return "priority";
    case PreferenceVariant::lexicographic_specificity: return "lexicographic-specificity";
  }
  return "subset";
}

PreferenceVariant variant_from_string(std::string_view s) {
  if (s == "subset") return PreferenceVariant::subset;
  if (s == "cardinality") return PreferenceVariant::cardinality;
  if (s == "priority") return PreferenceVariant::priority;
  if (s == "lexicographic-specificity" || s == "lexicographic") return PreferenceVariant::lexicographic_specificity;
  throw Error("unknown preference variant '" + std::string(s) + "'");
}

CellPartition split_cell(const Cell& cell, std::size_t cell_index, const std::vector<std::string>& valid_ids,
                         const DefaultTheory& theory) {
  CellPartition part;
  part.cell = cell_index;
  part.valid_ids = valid_ids;
  part.mu = cell.carrier;
  for (const auto& id : valid_ids) part.mu &= models(theory.rule(id).satisfaction_content(), theory.signature());
  part.o = cell.carrier - part.mu;
  return part;
}

bool better_satisfaction(std::uint32_t a, std::uint32_t b, PreferenceVariant variant,
                         std::span<const std::size_t> levels, std::span<const std::size_t> rank) {
  switch (variant) {
    case PreferenceVariant::subset:
      return a != b && (a & b) == b;
    case PreferenceVariant::cardinality:
      return std::popcount(a) > std::popcount(b);
    case PreferenceVariant::priority: {
      std::vector<std::size_t> order(rank.size());
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::sort(order.begin(), order.end(), [&](auto x, auto y) { return rank[x] < rank[y]; });
      for (auto i : order) {
        const bool sa = (a >> i) & 1u;
        const bool sb = (b >> i) & 1u;
        if (sa != sb) return sa;
      }
      return false;
    }
    case PreferenceVariant::lexicographic_specificity: {
      const std::size_t top = levels.empty() ? 0 : *std::max_element(levels.begin(), levels.end());
      for (std::size_t level = 0; level <= top && !levels.empty(); ++level) {
        std::uint32_t mask = 0;
        for (std::size_t i = 0; i < levels.size(); ++i)
          if (levels[i] == level) mask |= std::uint32_t{1} << i;
        const std::uint32_t ma = a & mask;
        const std::uint32_t mb = b & mask;
        if (ma != mb) return (ma & mb) == mb;
      }
      return false;
    }
  }
  return false;
}

std::optional<std::size_t> InnerOrder::position(Valuation v) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), v);
  if (it == members_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

bool InnerOrder::better(Valuation a, Valuation b) const {
  auto i = position(a);
  auto j = position(b);
  if (!i || !j) return false;
  return matrix_[*i * members_.size() + *j];
}

std::vector<std::pair<Valuation, Valuation>> InnerOrder::pairs() const {
  std::vector<std::pair<Valuation, Valuation>> out;
  const std::size_t n = members_.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (matrix_[i * n + j]) out.emplace_back(members_[i], members_[j]);
  return out;
}

InnerOrder inner_order(const CellPartition& part, const PreferenceConfig& config, const DefaultTheory& theory) {
  const auto& ids = part.valid_ids;
  if (ids.size() > 32) throw LimitError("too many valid defaults in one cell");
  std::vector<const DefaultRule*> rules;
  std::vector<ModelSet> satisfied_by;
  for (const auto& id : ids) {
    rules.push_back(&theory.rule(id));
    satisfied_by.push_back(models(rules.back()->satisfaction_content(), theory.signature()));
  }

  std::vector<std::size_t> rank(ids.size(), 0);
  if (config.variant == PreferenceVariant::priority) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = std::find(config.priority.begin(), config.priority.end(), ids[i]);
      if (it == config.priority.end()) throw Error("priority list does not mention valid default '" + ids[i] + "'");
      rank[i] = static_cast<std::size_t>(it - config.priority.begin());
    }
  }

  // Specificity levels: level 0 holds the defaults no other valid default is
  // more specific than, and so on.
  std::vector<std::size_t> levels(ids.size(), 0);
  if (config.variant == PreferenceVariant::lexicographic_specificity) {
    std::vector<bool> placed(ids.size(), false);
    std::size_t remaining = ids.size();
    for (std::size_t level = 0; remaining > 0; ++level) {
      std::vector<std::size_t> now;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (placed[i]) continue;
        bool dominated = false;
        for (std::size_t j = 0; j < ids.size() && !dominated; ++j)
          dominated = !placed[j] && j != i && stronger_by_specificity(*rules[j], *rules[i], theory);
        if (!dominated) now.push_back(i);
      }
      for (auto i : now) {
        placed[i] = true;
        levels[i] = level;
      }
      remaining -= now.size();
    }
  }

  InnerOrder order;
  order.members_ = part.o.members();
  std::vector<std::uint32_t> sat;
  for (auto m : order.members_) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (satisfied_by[i].contains(m)) mask |= std::uint32_t{1} << i;
    sat.push_back(mask);
  }
  const std::size_t n = order.members_.size();
  order.matrix_.assign(n * n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && better_satisfaction(sat[i], sat[j], config.variant, levels, rank)) order.matrix_[i * n + j] = 1;
  return order;
}

std::string packet_name(const Packet& p, const std::vector<Cell>& cells) {
  return std::string(p.exceptional ? "o(" : "mu(") + cells[p.cell].code_string() + ")";
}

PacketOrder packet_order(const std::vector<Cell>& cells, const HierarchyOrder& hierarchy,
                         const std::vector<CellPartition>& partitions, ExceptionPlacement placement) {
  const std::size_t n = cells.size();
  const std::size_t slots = 2 * n;
  if (partitions.size() != n) throw Error("packet order needs one partition per cell");
  std::vector<BitSet> base(slots, BitSet(slots));
  auto mu = [](std::size_t c) { return 2 * c; };
  auto ex = [](std::size_t c) { return 2 * c + 1; };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      if (hierarchy.less(x, y)) base[mu(x)].set(mu(y));
      if (placement == ExceptionPlacement::above_successors) {
        if (hierarchy.less(x, y) || x == y || hierarchy.covers(y, x)) base[mu(x)].set(ex(y));
      } else {
        base[mu(x)].set(ex(y));
        if (hierarchy.less(x, y)) base[ex(x)].set(ex(y));
      }
    }
  }

  PacketOrder out;
  out.closure_rows = base;
  for (std::size_t k = 0; k < slots; ++k)
    for (std::size_t i = 0; i < slots; ++i)
      if (out.closure_rows[i].test(k)) out.closure_rows[i] |= out.closure_rows[k];
  for (std::size_t i = 0; i < slots; ++i)
    if (out.closure_rows[i].test(i)) throw Error("packet order contains a cycle at " + packet_name(PacketOrder::packet_at(i), cells));

  BitSet present(slots);
  for (std::size_t c = 0; c < n; ++c) {
    if (!partitions[c].mu.is_empty()) present.set(mu(c));
    if (!partitions[c].o.is_empty()) present.set(ex(c));
  }
  present.for_each([&](std::size_t s) { out.packets.push_back(PacketOrder::packet_at(s)); });

  std::vector<BitSet> restricted(slots, BitSet(slots));
  present.for_each([&](std::size_t a) {
    (base[a] & present).for_each([&](std::size_t b) { out.base.emplace_back(PacketOrder::packet_at(a), PacketOrder::packet_at(b)); });
    restricted[a] = out.closure_rows[a] & present;
    restricted[a].for_each([&](std::size_t b) { out.closure.emplace_back(PacketOrder::packet_at(a), PacketOrder::packet_at(b)); });
  });
  present.for_each([&](std::size_t a) {
    BitSet indirect(slots);
    restricted[a].for_each([&](std::size_t c) { indirect |= restricted[c]; });
    (restricted[a] - indirect).for_each([&](std::size_t b) {
      out.reduction.emplace_back(PacketOrder::packet_at(a), PacketOrder::packet_at(b));
    });
  });
  return out;
}

ModelOrderRelation::ModelOrderRelation(ModelSet universe, PacketOrder packets, std::vector<CellPartition> partitions,
                                       std::vector<InnerOrder> inner)
    : universe_(std::move(universe)),
      packets_(std::move(packets)),
      partitions_(std::move(partitions)),
      inner_(std::move(inner)),
      slot_of_(universe_.space_size(), -1) {
  for (const auto& p : partitions_) {
    p.mu.for_each([&](Valuation v) { slot_of_[v] = static_cast<std::int32_t>(2 * p.cell); });
    p.o.for_each([&](Valuation v) { slot_of_[v] = static_cast<std::int32_t>(2 * p.cell + 1); });
  }
}

std::optional<Packet> ModelOrderRelation::packet_of(Valuation v) const {
  if (v >= slot_of_.size() || slot_of_[v] < 0) return std::nullopt;
  return PacketOrder::packet_at(static_cast<std::size_t>(slot_of_[v]));
}

bool ModelOrderRelation::less(Valuation a, Valuation b) const {
  if (a >= slot_of_.size() || b >= slot_of_.size()) return false;
  const auto sa = slot_of_[a];
  const auto sb = slot_of_[b];
  if (sa < 0 || sb < 0) return false;
  if (sa == sb) return (sa % 2 == 1) && inner_[static_cast<std::size_t>(sa / 2)].better(a, b);
  return packets_.closure_rows[static_cast<std::size_t>(sa)].test(static_cast<std::size_t>(sb));
}

std::vector<std::pair<Valuation, Valuation>> ModelOrderRelation::element_pairs() const {
  std::vector<std::pair<Valuation, Valuation>> out;
  const auto members = universe_.members();
  for (auto a : members)
    for (auto b : members)
      if (less(a, b)) out.emplace_back(a, b);
  return out;
}

ModelOrderRelation element_order(const ModelSet& universe, PacketOrder packets, std::vector<CellPartition> partitions,
                                 std::vector<InnerOrder> inner) {
  if (inner.size() != partitions.size()) throw Error("element order needs one inner order per cell");
  return ModelOrderRelation(universe, std::move(packets), std::move(partitions), std::move(inner));
}

PreferentialModel build_preferential_model(const DefaultTheory& theory, const PreferenceConfig& config) {
  const auto report = check_consistency_conditions(theory);
  if (!report.ok()) throw Error("theory violates the consistency conditions: " + report.violations.front().message);
  PreferentialModel model;
  model.theory = theory;
  model.config = config;
  model.family = attachment_family(theory);
  model.cells = membership_cells(model.family);
  model.hierarchy = cell_order(model.cells);
  std::vector<CellPartition> partitions;
  std::vector<InnerOrder> inner;
  for (std::size_t c = 0; c < model.cells.size(); ++c) {
    const auto validity = valid_defaults(theory, model.cells[c].carrier);
    partitions.push_back(split_cell(model.cells[c], c, validity.valid, theory));
    inner.push_back(inner_order(partitions.back(), config, theory));
  }
  auto packets = packet_order(model.cells, model.hierarchy, partitions, config.placement);
  model.order = element_order(theory.universe(), std::move(packets), std::move(partitions), std::move(inner));
  return model;
}

namespace {

struct MinimaResult {
  ModelSet minimal;
  std::vector<Packet> witnesses;
};

MinimaResult compute_minima(const ModelSet& query, const ModelOrderRelation& order) {
  const ModelSet q = query & order.universe();
  if (q.is_empty()) throw Error("query has no models inside the universe");
  std::map<std::size_t, ModelSet> touched;
  q.for_each([&](Valuation v) {
    const auto p = order.packet_of(v);
    auto [it, fresh] = touched.try_emplace(PacketOrder::slot(*p), ModelSet::empty(q.atom_count()));
    it->second.insert(v);
  });
  MinimaResult out{ModelSet::empty(q.atom_count()), {}};
  const auto& rows = order.packets().closure_rows;
  for (const auto& [slot, members] : touched) {
    const bool dominated = std::any_of(touched.begin(), touched.end(), [&](const auto& other) {
      return other.first != slot && rows[other.first].test(slot);
    });
    if (dominated) continue;
    const Packet p = PacketOrder::packet_at(slot);
    out.witnesses.push_back(p);
    if (!p.exceptional) {
      out.minimal |= members;
      continue;
    }
    const auto& inner = order.inner_orders()[p.cell];
    members.for_each([&](Valuation m) {
      bool beaten = false;
      members.for_each([&](Valuation other) { beaten = beaten || inner.better(other, m); });
      if (!beaten) out.minimal.insert(m);
    });
  }
  return out;
}

}  // namespace

ModelSet minimal_models(const ModelSet& query, const ModelOrderRelation& order) {
  return compute_minima(query, order).minimal;
}

ModelSet minimal_models(const Formula& gamma, const PreferentialModel& model) {
  return minimal_models(models(gamma, model.theory.signature()), model.order);
}

ConsequenceVerdict default_holds(const Formula& gamma, const Formula& psi, const PreferentialModel& model) {
  auto minima = compute_minima(models(gamma, model.theory.signature()), model.order);
  ConsequenceVerdict v;
  v.holds = minima.minimal.is_subset_of(models(psi, model.theory.signature()));
  v.minimal = std::move(minima.minimal);
  v.witnesses = std::move(minima.witnesses);
  return v;
}

bool Classification::concludes(const Formula& f, const Signature& sig) const {
  return models.is_subset_of(defarg::models(f, sig));
}

Classification classify_individual(const PreferentialModel& model, std::span<const Formula> facts) {
  const ModelSet described = models(facts, model.theory.signature()) & model.theory.universe();
  if (described.is_empty()) throw Error("facts are inconsistent with the background theory");
  std::vector<std::size_t> candidates;
  for (std::size_t c = 0; c < model.cells.size(); ++c)
    if (model.cells[c].carrier.intersects(described)) candidates.push_back(c);

  Classification out;
  out.models = ModelSet::empty(described.atom_count());
  for (auto c : candidates) {
    const bool lowest = std::none_of(candidates.begin(), candidates.end(),
                                     [&](std::size_t d) { return model.hierarchy.less(d, c); });
    if (!lowest) continue;
    const CellPartition& part = model.partitions()[c];
    const ModelSet in_mu = part.mu & described;
    if (!in_mu.is_empty()) {
      out.placements.push_back({c, false});
      out.models |= in_mu;
      continue;
    }
    const ModelSet in_o = part.o & described;
    out.placements.push_back({c, true});
    const auto& inner = model.order.inner_orders()[c];
    in_o.for_each([&](Valuation m) {
      bool beaten = false;
      in_o.for_each([&](Valuation other) { beaten = beaten || inner.better(other, m); });
      if (!beaten) out.models.insert(m);
    });
  }

  const auto& sig = model.theory.signature();
  for (std::size_t a = 0; a < sig.size(); ++a) {
    bool all_true = true;
    bool all_false = true;
    out.models.for_each([&](Valuation v) {
      if (atom_value(v, a, sig.size())) all_false = false;
      else all_true = false;
    });
    if (all_true) out.literals.push_back(sig.atoms()[a]);
    else if (all_false) out.literals.push_back("~" + sig.atoms()[a]);
  }
  return out;
}

std::string dump_order(const PreferentialModel& model, bool with_elements) {
  const auto& cells = model.cells;
  const std::size_t atoms = model.theory.signature().size();
  std::vector<std::string> section;
  std::ostringstream os;
  auto flush = [&](const char* title) {
    std::sort(section.begin(), section.end());
    os << title << '\n';
    for (const auto& line : section) os << "  " << line << '\n';
    section.clear();
  };
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& part = model.partitions()[c];
    std::string valid;
    for (const auto& id : part.valid_ids) valid += (valid.empty() ? "" : ",") + id;
    section.push_back(cells[c].code_string() + " mu=" + to_string(part.mu) + " o=" + to_string(part.o) +
                      " valid={" + valid + "}");
  }
  flush("cells");
  for (auto [i, j] : model.hierarchy.pairs()) section.push_back(cells[i].code_string() + " < " + cells[j].code_string());
  flush("hierarchy");
  for (auto [a, b] : model.packets().base) section.push_back(packet_name(a, cells) + " < " + packet_name(b, cells));
  flush("packets");
  for (auto [a, b] : model.packets().reduction) section.push_back(packet_name(a, cells) + " < " + packet_name(b, cells));
  flush("generating");
  if (with_elements) {
    for (auto [a, b] : model.order.element_pairs())
      section.push_back(to_bitstring(a, atoms) + " < " + to_bitstring(b, atoms));
    flush("elements");
  }
  return os.str();
}

}  // namespace defarg
