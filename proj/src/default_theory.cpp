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

#include "defarg/default_theory.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "defarg/inconsistency.hpp"

namespace defarg {

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::plain: return "plain";
    case Provenance::expert: return "expert";
    case Provenance::agreed: return "agreed";
    case Provenance::confirmed: return "confirmed";
  }
  return "plain";
}

Provenance provenance_from_string(std::string_view s) {
  if (s == "plain") return Provenance::plain;
  if (s == "expert") return Provenance::expert;
  if (s == "agreed") return Provenance::agreed;
  if (s == "confirmed") return Provenance::confirmed;
  throw Error("unknown provenance '" + std::string(s) + "'");
}

Formula DefaultRule::conflict_content() const {
  return polarity == Polarity::normally ? conclusion : !conclusion;
}

Formula DefaultRule::satisfaction_content() const {
  return polarity == Polarity::normally ? conclusion : Formula::top();
}

void SizePolicy::validate() const {
  if (!(most > 0.5 && most <= 1.0)) throw Error("size policy: 'most' must lie in (0.5, 1]");
  if (!(very_small >= 0.0 && very_small <= small && small < 0.5))
    throw Error("size policy: need 0 <= very_small <= small < 0.5");
}

DefaultTheory::DefaultTheory(Signature sig, std::vector<Formula> background, SizePolicy policy)
    : sig_(std::move(sig)), background_(std::move(background)), policy_(policy) {
  policy_.validate();
  universe_ = models(std::span<const Formula>(background_), sig_);
}

ModelSet DefaultTheory::restrict(const Formula& f) const { return models(f, sig_) & universe_; }

const DefaultRule* DefaultTheory::find(std::string_view id) const {
  auto it = std::find_if(defaults_.begin(), defaults_.end(), [&](const auto& d) { return d.id == id; });
  return it == defaults_.end() ? nullptr : &*it;
}

const DefaultRule& DefaultTheory::rule(std::string_view id) const {
  if (const auto* r = find(id)) return *r;
  throw Error("unknown default '" + std::string(id) + "'");
}

namespace {

void check_rule(const DefaultTheory& theory, const DefaultRule& rule) {
  if (rule.id.empty()) throw Error("default id must not be empty");
  const ModelSet scope = theory.restrict(rule.scope);
  if (scope.is_empty()) throw Error("default '" + rule.id + "' has an unsatisfiable scope");
  for (const auto& x : rule.exception_sets)
    if (!theory.restrict(x).is_subset_of(scope))
      throw Error("exception set '" + to_string(x) + "' of default '" + rule.id + "' is not inside its scope");
  if (rule.surprise_budget < 0.0 || rule.surprise_budget > theory.policy().very_small)
    throw Error("surprise budget of default '" + rule.id + "' exceeds the very-small bound");
}

}  // namespace

DefaultTheory attach(DefaultTheory theory, DefaultRule rule) {
  if (theory.find(rule.id)) throw Error("duplicate default id '" + rule.id + "'");
  check_rule(theory, rule);
  theory.defaults_.push_back(std::move(rule));
  return theory;
}

DefaultTheory replace_rule(DefaultTheory theory, DefaultRule rule) {
  auto it = std::find_if(theory.defaults_.begin(), theory.defaults_.end(),
                         [&](const auto& d) { return d.id == rule.id; });
  if (it == theory.defaults_.end()) throw Error("unknown default '" + rule.id + "'");
  check_rule(theory, rule);
  *it = std::move(rule);
  return theory;
}

DefaultTheory remove_default(DefaultTheory theory, std::string_view default_id) {
  (void)theory.rule(default_id);  // throws on unknown ids
  std::erase_if(theory.defaults_, [&](const auto& d) { return d.id == default_id; });
  std::erase_if(theory.blocks_, [&](const auto& b) { return b.default_id == default_id; });
  return theory;
}

DefaultTheory with_background(DefaultTheory theory, std::vector<Formula> background) {
  theory.background_ = std::move(background);
  theory.universe_ = models(std::span<const Formula>(theory.background_), theory.sig_);
  return theory;
}

DefaultTheory add_exception_set(DefaultTheory theory, std::string_view default_id, const Formula& exception) {
  DefaultRule r = theory.rule(default_id);
  r.exception_sets.push_back(exception);
  return replace_rule(std::move(theory), std::move(r));
}

DefaultTheory narrow_scope(DefaultTheory theory, std::string_view default_id, const Formula& restriction) {
  DefaultRule r = theory.rule(default_id);
  r.scope = r.scope && restriction;
  for (auto& x : r.exception_sets) x = x && restriction;
  return replace_rule(std::move(theory), std::move(r));
}

DefaultTheory set_provenance(DefaultTheory theory, std::string_view default_id, Provenance provenance) {
  DefaultRule r = theory.rule(default_id);
  r.provenance = provenance;
  return replace_rule(std::move(theory), std::move(r));
}

DefaultTheory block_inheritance(DefaultTheory theory, std::string_view default_id, Formula subset) {
  const DefaultRule& r = theory.rule(default_id);
  if (!theory.restrict(subset).is_subset_of(theory.restrict(r.scope)))
    throw Error("block '" + to_string(subset) + "' is not inside the scope of default '" + r.id + "'");
  theory.blocks_.push_back({std::string(default_id), std::move(subset)});
  return theory;
}

std::vector<AttachmentPoint> attachment_points(const DefaultTheory& theory) {
  std::vector<AttachmentPoint> out;
  for (const auto& d : theory.defaults()) {
    ModelSet carrier = theory.restrict(d.scope);
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.carrier == carrier; });
    if (it == out.end()) {
      out.push_back({std::move(carrier), d.scope, {d.id}});
    } else {
      it->default_ids.push_back(d.id);
    }
  }
  return out;
}

ConsistencyReport check_consistency_conditions(const DefaultTheory& theory) {
  ConsistencyReport report;
  if (theory.universe().is_empty()) {
    report.violations.push_back({1, {}, "background theory is classically inconsistent"});
    return report;
  }
  for (const auto& point : attachment_points(theory)) {
    ModelSet joint = theory.universe();
    for (const auto& id : point.default_ids) {
      const DefaultRule& d = theory.rule(id);
      // α ≁ φ is checked as α ∧ ¬φ.
      Formula check = d.polarity == Polarity::normally ? (d.scope && d.conclusion) : (d.scope && !d.conclusion);
      joint &= models(check, theory.signature());
    }
    if (joint.is_empty()) {
      std::ostringstream msg;
      msg << "defaults attached to '" << to_string(point.scope) << "' are jointly inconsistent with the background";
      report.violations.push_back({2, point.default_ids, msg.str()});
    }
  }
  return report;
}

SizeGateReport check_size_gate(const SizeMeasures& m, const SizePolicy& policy) {
  SizeGateReport r;
  if (m.scope <= 0) {
    r.hard_fail = true;
    r.failures.push_back("empty scope");
    return r;
  }
  r.most_ratio = m.agreeing / m.scope;
  r.exception_ratio = m.exceptions / m.scope;
  r.surprise_ratio = m.surprise / m.scope;
  if (m.agreeing <= 0) {
    r.hard_fail = true;
    r.failures.push_back("no element of the scope satisfies the conclusion");
    return r;
  }
  if (r.most_ratio < policy.most) r.failures.push_back("conclusion does not hold for most of the scope");
  if (r.exception_ratio > policy.small) r.failures.push_back("exception sets are not small");
  if (r.surprise_ratio > policy.very_small) r.failures.push_back("surprise set is not very small");
  r.passed = r.failures.empty();
  return r;
}

SizeGateReport check_size_gate(const DefaultRule& rule, const DefaultTheory& theory, const SizePolicy& policy,
                               std::span<const double> weights) {
  if (!weights.empty() && weights.size() != theory.universe().space_size())
    throw Error("size weights must cover every valuation");
  auto measure = [&](const ModelSet& s) {
    if (weights.empty()) return static_cast<double>(s.count());
    double total = 0;
    s.for_each([&](Valuation v) { total += weights[v]; });
    return total;
  };
  const ModelSet scope = theory.restrict(rule.scope);
  const ModelSet agreeing = scope & theory.restrict(rule.conflict_content());
  ModelSet exceptions = ModelSet::empty(theory.signature().size());
  for (const auto& x : rule.exception_sets) exceptions |= theory.restrict(x);
  const ModelSet surprise = scope - agreeing - exceptions;
  const SizeMeasures m{measure(scope), measure(agreeing), measure(exceptions), measure(surprise)};
  if (rule.polarity == Polarity::not_normally) {
    // α ≁ φ only claims that α ∧ ¬φ is possible; no proportion is asserted.
    SizeGateReport r;
    r.most_ratio = m.scope > 0 ? m.agreeing / m.scope : 0;
    r.hard_fail = m.agreeing <= 0;
    if (r.hard_fail) r.failures.push_back("scope leaves no room for the negated conclusion");
    r.passed = !r.hard_fail;
    return r;
  }
  return check_size_gate(m, policy);
}

bool stronger_by_specificity(const DefaultRule& a, const DefaultRule& b, const DefaultTheory& theory) {
  return theory.restrict(a.scope).is_strict_subset_of(theory.restrict(b.scope));
}

std::vector<std::string> visible_defaults(const DefaultTheory& theory, const ModelSet& point) {
  if (point.is_empty()) throw Error("point is unsatisfiable together with the background");
  std::vector<std::string> out;
  for (const auto& d : theory.defaults()) {
    if (!point.is_subset_of(theory.restrict(d.scope))) continue;
    const bool blocked = std::any_of(theory.blocks().begin(), theory.blocks().end(), [&](const auto& b) {
      return b.default_id == d.id && point.is_subset_of(theory.restrict(b.at));
    });
    if (!blocked) out.push_back(d.id);
  }
  return out;
}

std::vector<std::string> visible_defaults(const DefaultTheory& theory, const Formula& beta) {
  return visible_defaults(theory, theory.restrict(beta));
}

namespace {

// Defaults of `members` that are not stronger than any other member.
std::vector<std::size_t> weakest(const std::vector<std::size_t>& members, const std::vector<const DefaultRule*>& rules,
                                 const DefaultTheory& theory, const StrengthOrder& stronger) {
  std::vector<std::size_t> out;
  for (auto i : members) {
    const bool dominates_some = std::any_of(members.begin(), members.end(), [&](std::size_t j) {
      return j != i && stronger(*rules[i], *rules[j], theory);
    });
    if (!dominates_some) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> bits_of(std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (; mask; mask &= mask - 1) out.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
  return out;
}

constexpr std::size_t kVisibleCap = 24;

}  // namespace

ValidityResult valid_defaults(const DefaultTheory& theory, const ModelSet& point, const StrengthOrder& stronger) {
  ValidityResult result;
  result.point = point;
  result.visible = visible_defaults(theory, point);

  const std::size_t n = theory.signature().size();
  const BitSet space = ModelSet::universe(n).bits();
  std::vector<const DefaultRule*> rules;
  std::vector<BitSet> contents;
  for (const auto& id : result.visible) {
    rules.push_back(&theory.rule(id));
    contents.push_back(models(rules.back()->conflict_content(), theory.signature()).bits());
  }

  // Phase 1: unit 0 is the classical block B ∪ {β}.
  std::vector<BitSet> with_block;
  with_block.push_back(point.bits());
  with_block.insert(with_block.end(), contents.begin(), contents.end());
  std::set<std::size_t> removed;
  for (auto mask : minimal_inconsistent_masks(with_block, space, kVisibleCap + 1)) {
    if (!(mask & 1u)) continue;
    std::vector<std::size_t> members;
    for (auto b : bits_of(mask >> 1)) members.push_back(b);
    for (auto i : weakest(members, rules, theory, stronger)) removed.insert(i);
  }
  for (auto i : removed) result.eliminated.emplace_back(rules[i]->id, EliminationPhase::classical);

  // Phase 2: recomputed from scratch on the survivors, defaults only.
  std::vector<std::size_t> survivors;
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (!removed.contains(i)) survivors.push_back(i);
  std::vector<BitSet> surviving_contents;
  for (auto i : survivors) surviving_contents.push_back(contents[i]);
  std::set<std::size_t> removed2;
  for (auto mask : minimal_inconsistent_masks(surviving_contents, space, kVisibleCap)) {
    std::vector<std::size_t> members;
    for (auto b : bits_of(mask)) members.push_back(survivors[b]);
    for (auto i : weakest(members, rules, theory, stronger)) removed2.insert(i);
  }
  for (auto i : removed2) result.eliminated.emplace_back(rules[i]->id, EliminationPhase::defaults_only);

  for (std::size_t i = 0; i < rules.size(); ++i)
    if (!removed.contains(i) && !removed2.contains(i)) result.valid.push_back(rules[i]->id);
  return result;
}

ValidityResult valid_defaults(const DefaultTheory& theory, const Formula& beta, const StrengthOrder& stronger) {
  return valid_defaults(theory, theory.restrict(beta), stronger);
}

}  // namespace defarg
