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

#include "defarg/protocol.hpp"

#include <algorithm>
#include <cctype>
#include <array>
#include <utility>

namespace defarg {

namespace {

template <typename E, std::size_t N>
using NameTable = std::array<std::pair<E, std::string_view>, N>;

template <typename E, std::size_t N>
std::string_view name_of(const NameTable<E, N>& table, E value) {
  for (const auto& [e, name] : table)
    if (e == value) return name;
  return "?";
}

template <typename E, std::size_t N>
E value_of(const NameTable<E, N>& table, std::string_view name, std::string_view what) {
  for (const auto& [e, n] : table)
    if (n == name) return e;
  throw ProtocolError("payload", "unknown " + std::string(what) + " '" + std::string(name) + "'");
}

constexpr NameTable<MoveKind, 13> kMoveKinds{{
    {MoveKind::assert_fact, "AssertFact"},
    {MoveKind::assert_classical_rule, "AssertClassicalRule"},
    {MoveKind::assert_default, "AssertDefault"},
    {MoveKind::attack, "Attack"},
    {MoveKind::defend, "Defend"},
    {MoveKind::elaborate, "Elaborate"},
    {MoveKind::confirm, "Confirm"},
    {MoveKind::agree, "Agree"},
    {MoveKind::expert_opinion, "ExpertOpinion"},
    {MoveKind::retract_proposal, "RetractProposal"},
    {MoveKind::retract_vote, "RetractVote"},
    {MoveKind::arbiter_question, "ArbiterQuestion"},
    {MoveKind::arbiter_target_choice, "ArbiterTargetChoice"},
}};

constexpr NameTable<AttackComponent, 8> kComponents{{
    {AttackComponent::rule_itself, "rule-itself"},
    {AttackComponent::prerequisite, "prerequisite"},
    {AttackComponent::exception_membership, "exception-membership"},
    {AttackComponent::surprise_membership, "surprise-membership"},
    {AttackComponent::size_notion, "size-notion"},
    {AttackComponent::conclusion, "conclusion"},
    {AttackComponent::applicability, "applicability"},
    {AttackComponent::expert_language, "expert-language"},
}};

constexpr NameTable<AttackMode, 3> kAttackModes{{
    {AttackMode::prove_negation, "prove-negation"},
    {AttackMode::argue_consistent_negation, "argue-consistent-negation"},
    {AttackMode::roundabout, "roundabout"},
}};

constexpr NameTable<DefenseMode, 3> kDefenseModes{{
    {DefenseMode::prove, "prove"},
    {DefenseMode::argue_consistent, "argue-consistent"},
    {DefenseMode::support, "support"},
}};

constexpr NameTable<ElaborationKind, 4> kElaborations{{
    {ElaborationKind::add_exception_set, "add-exception-set"},
    {ElaborationKind::mark_surprise, "mark-surprise"},
    {ElaborationKind::negate_premise, "negate-premise"},
    {ElaborationKind::narrow_rule, "narrow-rule"},
}};

constexpr NameTable<TargetPolicy, 3> kPolicies{{
    {TargetPolicy::max_frequency, "max-frequency"},
    {TargetPolicy::last_asserted, "last-asserted"},
    {TargetPolicy::manual, "manual"},
}};

constexpr NameTable<Phase, 5> kPhases{{
    {Phase::open, "open"},
    {Phase::retraction_vote, "retraction-vote"},
    {Phase::attack_defense, "attack-defense"},
    {Phase::failed, "failed"},
    {Phase::closed, "closed"},
}};

constexpr NameTable<Role, 2> kRoles{{{Role::participant, "participant"}, {Role::arbiter, "arbiter"}}};

constexpr NameTable<Outcome, 3> kOutcomes{{
    {Outcome::consistent, "consistent"},
    {Outcome::deadlock_failure, "deadlock-failure"},
    {Outcome::closed_by_agreement, "closed-by-agreement"},
}};

}  // namespace

std::string_view to_string(MoveKind k) { return name_of(kMoveKinds, k); }
std::string_view to_string(AttackComponent c) { return name_of(kComponents, c); }
std::string_view to_string(AttackMode m) { return name_of(kAttackModes, m); }
std::string_view to_string(DefenseMode m) { return name_of(kDefenseModes, m); }
std::string_view to_string(ElaborationKind k) { return name_of(kElaborations, k); }
std::string_view to_string(TargetPolicy p) { return name_of(kPolicies, p); }
std::string_view to_string(Phase p) { return name_of(kPhases, p); }
std::string_view to_string(Role r) { return name_of(kRoles, r); }
std::string_view to_string(Outcome o) { return name_of(kOutcomes, o); }
MoveKind move_kind_from_string(std::string_view s) { return value_of(kMoveKinds, s, "move kind"); }
AttackComponent attack_component_from_string(std::string_view s) {
  return value_of(kComponents, s, "attack component");
}
AttackMode attack_mode_from_string(std::string_view s) { return value_of(kAttackModes, s, "attack mode"); }
DefenseMode defense_mode_from_string(std::string_view s) { return value_of(kDefenseModes, s, "defense mode"); }
ElaborationKind elaboration_kind_from_string(std::string_view s) {
  return value_of(kElaborations, s, "elaboration kind");
}
TargetPolicy target_policy_from_string(std::string_view s) { return value_of(kPolicies, s, "target policy"); }
Phase phase_from_string(std::string_view s) { return value_of(kPhases, s, "phase"); }
Role role_from_string(std::string_view s) { return value_of(kRoles, s, "role"); }
Outcome outcome_from_string(std::string_view s) { return value_of(kOutcomes, s, "outcome"); }

bool is_assertive(MoveKind k) {
  return k == MoveKind::assert_fact || k == MoveKind::assert_classical_rule || k == MoveKind::assert_default ||
         k == MoveKind::expert_opinion;
}

std::vector<AttackComponent> legal_components(MoveKind target_kind) {
  using C = AttackComponent;
  switch (target_kind) {
    case MoveKind::assert_fact:
      return {C::conclusion};
    // A classical conclusion can only be attacked through its prerequisites.
    case MoveKind::assert_classical_rule:
      return {C::prerequisite};
    case MoveKind::assert_default:
      return {C::rule_itself,  C::prerequisite, C::exception_membership, C::surprise_membership,
              C::size_notion, C::conclusion,   C::applicability};
    case MoveKind::expert_opinion:
      return {C::expert_language, C::conclusion};
    default:
      return {};
  }
}

namespace {

bool asserts(const Move& m) {
  return is_assertive(m.kind) ||
         (m.kind == MoveKind::elaborate && m.elaboration && m.elaboration->kind == ElaborationKind::negate_premise);
}

// Negated-premise elaborations behave like facts.
MoveKind effective_kind(const Move& m) { return m.kind == MoveKind::elaborate ? MoveKind::assert_fact : m.kind; }

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

// The reasoning space a session's contents live in.
struct Space {
  bool extensional = false;
  Signature sig;
  ElementDomain domain;
  BitSet universe;

  explicit Space(const SessionConfig& config) {
    extensional = config.extensional;
    if (extensional) {
      domain = ElementDomain(config.elements);
      universe = BitSet(domain.size(), true);
      return;
    }
    sig = Signature(config.atoms);
    std::vector<Formula> bg;
    for (const auto& b : config.background) bg.push_back(parse_formula(b, sig));
    universe = models(bg, sig).bits();
  }

  Formula formula(std::string_view text) const {
    if (extensional) throw ProtocolError("payload", "formulas need an intensional session");
    try {
      return parse_formula(text, sig);
    } catch (const Error& e) {
      throw ProtocolError("payload", e.what());
    }
  }

  // A formula, or in extensional sessions `{a, b}` optionally prefixed by `~`.
  BitSet content(std::string_view text) const {
    if (!extensional) return models(formula(text), sig).bits();
    std::string t = trim(text);
    bool negated = false;
    while (!t.empty() && (t[0] == '~' || t[0] == '!')) {
      negated = !negated;
      t = trim(std::string_view(t).substr(1));
    }
    if (t.size() < 2 || t.front() != '{' || t.back() != '}')
      throw ProtocolError("payload", "expected an element set like {a, b}, got '" + std::string(text) + "'");
    std::vector<std::string> names;
    std::string_view inner(t);
    inner = inner.substr(1, inner.size() - 2);
    while (!inner.empty()) {
      const auto comma = inner.find(',');
      const std::string name = trim(inner.substr(0, comma));
      if (!name.empty()) names.push_back(name);
      if (comma == std::string_view::npos) break;
      inner.remove_prefix(comma + 1);
    }
    BitSet set;
    try {
      set = domain.set_of(names);
    } catch (const Error& e) {
      throw ProtocolError("payload", e.what());
    }
    return negated ? ~set : set;
  }
};

DefaultRule to_rule(const DefaultSpec& spec, const std::string& id, const Space& space) {
  DefaultRule r;
  r.id = id;
  r.scope = space.formula(spec.scope.empty() ? "true" : spec.scope);
  r.conclusion = space.formula(spec.conclusion);
  r.polarity = spec.negative ? Polarity::not_normally : Polarity::normally;
  for (const auto& e : spec.exceptions) r.exception_sets.push_back(space.formula(e));
  r.surprise_budget = spec.surprise;
  r.homogeneous = spec.homogeneous;
  return r;
}

DefaultSpec to_spec(const DefaultRule& r) {
  DefaultSpec s;
  s.scope = to_string(r.scope);
  s.conclusion = to_string(r.conclusion);
  s.negative = r.polarity == Polarity::not_normally;
  for (const auto& e : r.exception_sets) s.exceptions.push_back(to_string(e));
  s.surprise = r.surprise_budget;
  s.homogeneous = r.homogeneous;
  return s;
}

DefaultTheory base_theory(const SessionConfig& config, const Space& space) {
  std::vector<Formula> bg;
  for (const auto& b : config.background) bg.push_back(space.formula(b));
  return DefaultTheory(space.sig, std::move(bg), config.policy);
}

// Runs the attach checks against the configured background.
void validate_rule(const SessionState& s, const Space& space, const DefaultSpec& spec, const std::string& id) {
  if (space.extensional) throw ProtocolError("payload", "defaults need an intensional session");
  try {
    (void)attach(base_theory(s.config, space), to_rule(spec, id, space));
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError("payload", e.what());
  }
}

Formula default_unit(const ArgumentStatus& st, const Space& space) {
  const DefaultSpec& spec = *st.rule;
  if (spec.negative) return Formula::top();
  std::vector<Formula> guard{space.formula(spec.scope.empty() ? "true" : spec.scope)};
  for (const auto& e : spec.exceptions) guard.push_back(!space.formula(e));
  for (const auto& m : st.surprise_marks) guard.push_back(!space.formula(m));
  return implies(conjoin(guard), space.formula(spec.conclusion));
}

BitSet unit_content(const SessionState& s, const Space& space, const Move& m) {
  const auto it = s.status.find(m.id);
  if (it != s.status.end() && it->second.rule) return models(default_unit(it->second, space), space.sig).bits();
  return space.content(m.content);
}

const Move& require_active(const SessionState& s, const std::string& id, const char* what) {
  const Move* m = s.find_move(id);
  if (!m) throw ProtocolError("reference", std::string(what) + " '" + id + "' does not exist");
  if (!asserts(*m)) throw ProtocolError("reference", std::string(what) + " '" + id + "' is not an assertion");
  if (s.retracted.contains(id)) throw ProtocolError("reference", std::string(what) + " '" + id + "' was retracted");
  return *m;
}

bool in_some_mis(const SessionState& s, const std::string& id) {
  return std::any_of(s.report.mis.begin(), s.report.mis.end(), [&](const auto& set) {
    return std::find(set.begin(), set.end(), id) != set.end();
  });
}

std::size_t position_of(const SessionState& s, const std::string& id) {
  for (std::size_t i = 0; i < s.moves.size(); ++i)
    if (s.moves[i].id == id) return i;
  return 0;
}

void set_phase(SessionState& s, Phase p, std::vector<Event>& events) {
  if (s.phase == p) return;
  s.phase = p;
  if (p != Phase::attack_defense) s.target.reset();
  events.push_back({"phase", "", {}, std::string(to_string(p))});
}

void recompute_hanging(SessionState& s, std::vector<Event>& events) {
  std::set<std::string> hanging;
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& m : s.moves) {
      if (hanging.contains(m.id) || s.retracted.contains(m.id)) continue;
      for (const auto& b : m.based_on) {
        if (s.retracted.contains(b) || hanging.contains(b)) {
          hanging.insert(m.id);
          grew = true;
          break;
        }
      }
    }
  }
  std::vector<std::string> fresh;
  for (const auto& h : hanging)
    if (!s.hanging.contains(h)) fresh.push_back(h);
  s.hanging = std::move(hanging);
  if (!fresh.empty()) events.push_back({"hanging", "", {fresh}, ""});
}

// Re-derives the minimal inconsistent subsets of the active assertions and
// moves the phase accordingly. `trigger` is the move that changed the contents.
void recompute(SessionState& s, const Space& space, const std::string& trigger, std::vector<Event>& events) {
  ReducedFamily family;
  family.universe = space.universe;
  for (const auto& id : s.active_assertions()) {
    family.ids.push_back(id);
    family.contents.push_back(unit_content(s, space, *s.find_move(id)));
  }
  InconsistencyReport report;
  try {
    report = minimal_inconsistent_subsets(family);
  } catch (const LimitError& e) {
    throw ProtocolError("limit", e.what());
  }
  std::vector<std::vector<std::string>> fresh;
  for (const auto& set : report.mis)
    if (std::find(s.report.mis.begin(), s.report.mis.end(), set) == s.report.mis.end()) fresh.push_back(set);
  const bool was_inconsistent = !s.report.consistent();
  s.report = std::move(report);

  if (s.report.consistent()) {
    if (was_inconsistent) events.push_back({"consistent", trigger, {}, ""});
    if (s.phase != Phase::open && !s.proposal) set_phase(s, Phase::open, events);
    return;
  }
  if (!fresh.empty()) {
    std::string note;
    if (std::find(family.ids.begin(), family.ids.end(), trigger) != family.ids.end())
      note = last_argument_check(s.report, trigger) ? "last argument in every set" : "last argument not in every set";
    events.push_back({"culprits", trigger, s.report.mis, note});
    set_phase(s, Phase::retraction_vote, events);
  }
}

void check_deadlock(SessionState& s, std::vector<Event>& events) {
  if (auto v = detect_deadlock(s)) {
    events.push_back({"deadlock", "", {v->deadlocked}, ""});
    s.verdict = std::move(*v);
    set_phase(s, Phase::failed, events);
  }
}

const Participant* find_participant(const SessionConfig& c, const std::string& id) {
  for (const auto& p : c.participants)
    if (p.id == id) return &p;
  return nullptr;
}

void check_phase(const SessionState& s, MoveKind k) {
  bool ok = false;
  switch (s.phase) {
    case Phase::open:
      ok = k != MoveKind::retract_vote && k != MoveKind::arbiter_target_choice;
      break;
    case Phase::retraction_vote:
      ok = k == MoveKind::retract_proposal || k == MoveKind::retract_vote || k == MoveKind::arbiter_question ||
           k == MoveKind::arbiter_target_choice || k == MoveKind::confirm || k == MoveKind::agree;
      break;
    case Phase::attack_defense:
      ok = k != MoveKind::retract_vote;
      break;
    case Phase::failed:
    case Phase::closed:
      break;
  }
  if (!ok)
    throw ProtocolError("phase", std::string(to_string(k)) + " is not allowed in phase " +
                                     std::string(to_string(s.phase)));
}

void check_role(const Participant& p, MoveKind k) {
  const bool arbiter_only = k == MoveKind::arbiter_question || k == MoveKind::arbiter_target_choice;
  const bool anyone = k == MoveKind::retract_proposal;
  if (arbiter_only && p.role != Role::arbiter)
    throw ProtocolError("participant", std::string(to_string(k)) + " is reserved for the arbiter");
  if (!arbiter_only && !anyone && p.role == Role::arbiter)
    throw ProtocolError("participant", "the arbiter cannot make " + std::string(to_string(k)) + " moves");
}

// Premises are either ids of active assertions or content text.
BitSet joint_premises(const SessionState& s, const Space& space, const std::vector<std::string>& premises,
                      const std::string& exclude) {
  BitSet joint = space.universe;
  for (const auto& p : premises) {
    if (s.find_move(p)) {
      if (p == exclude) throw ProtocolError("reference", "a move cannot be its own premise");
      joint &= unit_content(s, space, require_active(s, p, "premise"));
    } else {
      joint &= space.content(p);
    }
  }
  return joint;
}

std::optional<std::string> prerequisite_text(const SessionState& s, const Move& target) {
  const auto it = s.status.find(target.id);
  if (it != s.status.end() && it->second.rule) {
    const auto& scope = it->second.rule->scope;
    return scope.empty() ? std::string("true") : scope;
  }
  if (effective_kind(target) == MoveKind::assert_classical_rule) {
    if (Space(s.config).extensional) return std::nullopt;
    const Formula f = parse_formula(target.content, Signature(s.config.atoms));
    if (f.kind() != Formula::Kind::implication) return std::nullopt;
    return to_string(f.lhs());
  }
  return target.content;
}

// What a component claims, as a set of models; nullopt for components that
// carry no checkable proposition.
std::optional<BitSet> component_proposition(const SessionState& s, const Space& space, const Move& target,
                                            AttackComponent c) {
  switch (c) {
    case AttackComponent::rule_itself:
      return unit_content(s, space, target);
    case AttackComponent::prerequisite: {
      auto pre = prerequisite_text(s, target);
      if (!pre) throw ProtocolError("payload", "move '" + target.id + "' has no prerequisite");
      return space.content(*pre);
    }
    case AttackComponent::conclusion: {
      const auto it = s.status.find(target.id);
      if (it != s.status.end() && it->second.rule) {
        const Formula phi = space.formula(it->second.rule->conclusion);
        return models(it->second.rule->negative ? !phi : phi, space.sig).bits();
      }
      return space.content(target.content);
    }
    default:
      return std::nullopt;
  }
}

void handle_attack(SessionState& s, const Space& space, const Move& m, std::vector<Event>& events) {
  if (!m.attack) throw ProtocolError("payload", "Attack needs an attack descriptor");
  const AttackDescriptor& a = *m.attack;
  const Move& target = require_active(s, a.target, "attack target");
  const auto legal = legal_components(effective_kind(target));
  if (std::find(legal.begin(), legal.end(), a.component) == legal.end())
    throw ProtocolError("component", "cannot attack the " + std::string(to_string(a.component)) + " of a " +
                                         std::string(to_string(effective_kind(target))) + " move");
  std::string how = "claimed";
  if (!a.premises.empty() || !a.consequence.empty()) {
    const auto prop = component_proposition(s, space, target, a.component);
    if (!prop)
      throw ProtocolError("payload", "the " + std::string(to_string(a.component)) + " carries no checkable proposition");
    const BitSet premises = joint_premises(s, space, a.premises, target.id);
    switch (a.mode) {
      case AttackMode::prove_negation:
        if (premises.none() || premises.intersects(*prop))
          throw ProtocolError("payload", "premises do not entail the negation");
        break;
      case AttackMode::argue_consistent_negation:
        if ((premises - *prop).none()) throw ProtocolError("payload", "the negation is inconsistent with the premises");
        break;
      case AttackMode::roundabout:
        if (a.consequence.empty()) throw ProtocolError("payload", "a roundabout attack needs a consequence");
        if (!(premises & *prop).is_subset_of(space.content(a.consequence)))
          throw ProtocolError("payload", "the consequence does not follow");
        break;
    }
    how = "verified";
  }
  ArgumentStatus& st = s.status[target.id];
  st.attacks.push_back(m.id);
  st.contested = true;
  st.defended = false;
  events.push_back({"attack", target.id, {}, std::string(to_string(a.component)) + " " + how});
  check_deadlock(s, events);
}

void handle_defense(SessionState& s, const Space& space, const Move& m, std::vector<Event>& events) {
  if (!m.defense) throw ProtocolError("payload", "Defend needs a defense descriptor");
  const DefenseDescriptor& d = *m.defense;
  const Move& target = require_active(s, d.target, "defense target");
  const BitSet prop = unit_content(s, space, target);
  std::string how = "verified";
  switch (d.mode) {
    case DefenseMode::support: {
      if (d.premises.empty()) throw ProtocolError("payload", "a support defense names supporting moves");
      for (const auto& p : d.premises) require_active(s, p, "supporting move");
      const BitSet joint = joint_premises(s, space, d.premises, target.id);
      if (joint.none() || !joint.is_subset_of(prop)) throw ProtocolError("payload", "the moves do not support the target");
      break;
    }
    case DefenseMode::prove: {
      if (d.premises.empty()) {
        if (d.justification.empty()) throw ProtocolError("payload", "a defense needs premises or a justification");
        how = "claimed";
        break;
      }
      const BitSet joint = joint_premises(s, space, d.premises, target.id);
      if (joint.none() || !joint.is_subset_of(prop)) throw ProtocolError("payload", "premises do not entail the target");
      break;
    }
    case DefenseMode::argue_consistent:
      if (!joint_premises(s, space, d.premises, target.id).intersects(prop))
        throw ProtocolError("payload", "the target is inconsistent with the premises");
      break;
  }
  ArgumentStatus& st = s.status[target.id];
  st.defenses.push_back(m.id);
  st.defended = true;
  st.contested = false;
  events.push_back({"defense", target.id, {}, std::string(to_string(d.mode)) + " " + how});
  check_deadlock(s, events);
}

std::string conjunction_text(const std::string& a, const std::string& b) {
  return "(" + (a.empty() ? std::string("true") : a) + ") & (" + b + ")";
}

void handle_elaboration(SessionState& s, const Space& space, Move& m, std::vector<Event>& events) {
  if (!m.elaboration) throw ProtocolError("payload", "Elaborate needs an elaboration");
  const Elaboration& e = *m.elaboration;
  const Move& target = require_active(s, e.target, "elaboration target");
  ArgumentStatus& st = s.status[target.id];
  const bool is_default = st.rule.has_value();
  if (e.kind != ElaborationKind::negate_premise && !is_default)
    throw ProtocolError("component", std::string(to_string(e.kind)) + " applies to defaults only");
  switch (e.kind) {
    case ElaborationKind::add_exception_set: {
      DefaultSpec spec = *st.rule;
      spec.exceptions.push_back(to_string(space.formula(e.content)));
      validate_rule(s, space, spec, target.id);
      st.rule = std::move(spec);
      break;
    }
    case ElaborationKind::mark_surprise:
      (void)space.formula(e.content);
      st.surprise_marks.push_back(e.content);
      break;
    case ElaborationKind::narrow_rule: {
      (void)space.formula(e.content);
      DefaultSpec spec = *st.rule;
      spec.scope = conjunction_text(spec.scope, e.content);
      for (auto& x : spec.exceptions) x = conjunction_text(x, e.content);
      validate_rule(s, space, spec, target.id);
      st.rule = std::move(spec);
      break;
    }
    case ElaborationKind::negate_premise: {
      const auto pre = prerequisite_text(s, target);
      if (!pre) throw ProtocolError("payload", "move '" + target.id + "' has no prerequisite");
      const std::string negated = "~(" + *pre + ")";
      if (!m.content.empty() && m.content != negated)
        throw ProtocolError("payload", "content does not match the negated prerequisite");
      m.content = negated;
      (void)space.content(negated);
      s.status[m.id];
      break;
    }
  }
  events.push_back({"elaboration", target.id, {}, std::string(to_string(e.kind))});
  recompute(s, space, e.kind == ElaborationKind::negate_premise ? m.id : target.id, events);
}

void handle_assertion(SessionState& s, const Space& space, Move& m, std::vector<Event>& events) {
  ArgumentStatus st;
  if (m.kind == MoveKind::assert_default || m.kind == MoveKind::expert_opinion) {
    DefaultSpec spec;
    if (m.rule) {
      spec = *m.rule;
    } else if (m.kind == MoveKind::expert_opinion && !m.content.empty()) {
      spec.scope = "true";
      spec.conclusion = m.content;
    } else {
      throw ProtocolError("payload", std::string(to_string(m.kind)) + " needs a rule");
    }
    validate_rule(s, space, spec, m.id);
    st.rule = std::move(spec);
  } else {
    if (trim(m.content).empty()) throw ProtocolError("payload", "empty assertion");
    (void)space.content(m.content);
  }
  s.status[m.id] = std::move(st);
  recompute(s, space, m.id, events);
}

std::vector<std::string> voters(const SessionConfig& c) {
  std::vector<std::string> out;
  for (const auto& p : c.participants)
    if (p.role != Role::arbiter) out.push_back(p.id);
  return out;
}

void handle_proposal(SessionState& s, const Move& m, std::vector<Event>& events) {
  if (s.proposal) throw ProtocolError("phase", "a retraction vote is already running");
  require_active(s, m.target, "retraction target");
  const bool contested = s.status.contains(m.target) && s.status.at(m.target).contested;
  if (!in_some_mis(s, m.target) && !contested)
    throw ProtocolError("policy", "only culprits or contested moves can be proposed for retraction");
  s.proposal = RetractionProposal{m.target, m.author, {}};
  events.push_back({"retraction-proposed", m.target, {}, ""});
  set_phase(s, Phase::retraction_vote, events);
}

void handle_vote(SessionState& s, const Space& space, const Move& m, std::vector<Event>& events) {
  if (!s.proposal) throw ProtocolError("phase", "no retraction is being voted on");
  if (s.proposal->votes.contains(m.author)) throw ProtocolError("vote", "'" + m.author + "' has already voted");
  s.proposal->votes[m.author] = m.vote;
  const std::string target = s.proposal->move_id;
  events.push_back({"vote", target, {}, m.author + (m.vote ? " yes" : " no")});
  if (!m.vote) {
    s.proposal.reset();
    events.push_back({"retraction-failed", target, {}, ""});
    set_phase(s, s.report.consistent() ? Phase::open : Phase::attack_defense, events);
    return;
  }
  for (const auto& v : voters(s.config))
    if (!s.proposal->votes.contains(v)) return;
  s.proposal.reset();
  s.retracted.insert(target);
  events.push_back({"retraction-applied", target, {}, ""});
  recompute_hanging(s, events);
  recompute(s, space, target, events);
}

void handle_target_choice(SessionState& s, Move& m, std::vector<Event>& events) {
  if (s.report.consistent()) throw ProtocolError("phase", "there are no culprits to choose from");
  if (s.proposal) throw ProtocolError("phase", "a retraction vote is still running");
  set_phase(s, Phase::attack_defense, events);
  std::string chosen = m.target;
  if (chosen.empty()) {
    auto pick = choose_target(s, s.config.target_policy);
    if (!pick) throw ProtocolError("policy", "the manual target policy needs an explicit target");
    chosen = *pick;
  } else if (!in_some_mis(s, chosen)) {
    throw ProtocolError("reference", "'" + chosen + "' is not in any minimal inconsistent set");
  }
  m.target = chosen;
  s.target = chosen;
  events.push_back({"target-chosen", chosen, {}, ""});
  check_deadlock(s, events);
}

Provenance provenance_of(const Move& m, const ArgumentStatus& st) {
  if (m.kind == MoveKind::expert_opinion) return Provenance::expert;
  if (!st.confirmations.empty()) return Provenance::confirmed;
  if (!st.agreements.empty()) return Provenance::agreed;
  return Provenance::plain;
}

}  // namespace

const Move* SessionState::find_move(std::string_view id) const {
  for (const auto& m : moves)
    if (m.id == id) return &m;
  return nullptr;
}

std::vector<std::string> SessionState::active_assertions() const {
  std::vector<std::string> out;
  for (const auto& m : moves)
    if (asserts(m) && !retracted.contains(m.id)) out.push_back(m.id);
  return out;
}

SessionState open_session(SessionConfig config) {
  std::set<std::string> ids;
  std::size_t arbiters = 0;
  for (const auto& p : config.participants) {
    if (p.id.empty()) throw ProtocolError("participant", "participant ids must be non-empty");
    if (!ids.insert(p.id).second) throw ProtocolError("participant", "duplicate participant '" + p.id + "'");
    if (p.role == Role::arbiter) ++arbiters;
  }
  if (arbiters != 1) throw ProtocolError("participant", "a session needs exactly one arbiter");
  if (ids.size() < 2) throw ProtocolError("participant", "a session needs at least one participant besides the arbiter");
  try {
    config.policy.validate();
    const Space space(config);
    if (space.universe.none()) throw ProtocolError("payload", "the background is inconsistent");
    if (!config.extensional && config.atoms.size() > kDefaultAtomCap)
      throw ProtocolError("limit", "too many atoms");
  } catch (const ProtocolError&) {
    throw;
  } catch (const Error& e) {
    throw ProtocolError("payload", e.what());
  }
  SessionState s;
  s.config = std::move(config);
  return s;
}

SessionState open_session(SessionConfig config, const DefaultTheory& seed, const std::string& author) {
  config.extensional = false;
  config.atoms = seed.signature().atoms();
  SessionState s = open_session(std::move(config));
  for (const auto& b : seed.background()) {
    Move m;
    m.author = author;
    m.kind = MoveKind::assert_classical_rule;
    m.content = to_string(b);
    s = submit_move(std::move(s), std::move(m)).state;
  }
  for (const auto& r : seed.defaults()) {
    Move m;
    m.id = r.id;
    m.author = author;
    m.kind = r.provenance == Provenance::expert ? MoveKind::expert_opinion : MoveKind::assert_default;
    m.rule = to_spec(r);
    s = submit_move(std::move(s), std::move(m)).state;
  }
  return s;
}

MoveResult submit_move(SessionState s, Move m) {
  if (s.phase == Phase::failed || s.phase == Phase::closed)
    throw ProtocolError("phase", "the session is " + std::string(to_string(s.phase)));
  const Participant* author = find_participant(s.config, m.author);
  if (!author) throw ProtocolError("participant", "unknown participant '" + m.author + "'");
  check_role(*author, m.kind);
  check_phase(s, m.kind);
  if (m.id.empty()) {
    do m.id = "m" + std::to_string(s.next_id++);
    while (s.find_move(m.id));
  } else if (s.find_move(m.id)) {
    throw ProtocolError("reference", "move id '" + m.id + "' is already used");
  } else if (m.id.size() > 1 && m.id[0] == 'm' &&
             std::all_of(m.id.begin() + 1, m.id.end(), [](unsigned char c) { return std::isdigit(c); })) {
    // Explicit ids in the automatic range advance the counter, so replays assign the same ids.
    s.next_id = std::max(s.next_id, std::stoul(m.id.substr(1)) + 1);
  }
  for (const auto& b : m.based_on)
    if (!s.find_move(b)) throw ProtocolError("reference", "based-on move '" + b + "' does not exist");

  const Space space(s.config);
  std::vector<Event> events;
  s.moves.push_back(m);
  Move& committed = s.moves.back();
  switch (m.kind) {
    case MoveKind::assert_fact:
    case MoveKind::assert_classical_rule:
    case MoveKind::assert_default:
    case MoveKind::expert_opinion:
      handle_assertion(s, space, committed, events);
      break;
    case MoveKind::attack:
      handle_attack(s, space, committed, events);
      break;
    case MoveKind::defend:
      handle_defense(s, space, committed, events);
      break;
    case MoveKind::elaborate:
      handle_elaboration(s, space, committed, events);
      break;
    case MoveKind::confirm:
    case MoveKind::agree: {
      require_active(s, m.target, "target");
      auto& st = s.status[m.target];
      (m.kind == MoveKind::confirm ? st.confirmations : st.agreements).push_back(m.author);
      events.push_back({m.kind == MoveKind::confirm ? "confirmed" : "agreed", m.target, {}, m.author});
      break;
    }
    case MoveKind::retract_proposal:
      handle_proposal(s, committed, events);
      break;
    case MoveKind::retract_vote:
      if (author->role == Role::arbiter) throw ProtocolError("participant", "the arbiter does not vote");
      handle_vote(s, space, committed, events);
      break;
    case MoveKind::arbiter_question:
      if (trim(m.content).empty()) throw ProtocolError("payload", "empty question");
      events.push_back({"question", m.target, {}, m.content});
      break;
    case MoveKind::arbiter_target_choice:
      handle_target_choice(s, committed, events);
      break;
  }
  // New moves may rest on retracted or hanging ones.
  if (!s.retracted.empty()) recompute_hanging(s, events);
  s.history.push_back({"move", s.moves.back(), events});
  return {std::move(s), std::move(events)};
}

MoveResult propose_retraction(SessionState state, const std::string& author, const std::string& move_id) {
  Move m;
  m.author = author;
  m.kind = MoveKind::retract_proposal;
  m.target = move_id;
  return submit_move(std::move(state), std::move(m));
}

MoveResult cast_vote(SessionState state, const std::string& participant, bool yes) {
  Move m;
  m.author = participant;
  m.kind = MoveKind::retract_vote;
  m.vote = yes;
  return submit_move(std::move(state), std::move(m));
}

MoveResult record_attack(SessionState state, const std::string& author, AttackDescriptor attack) {
  Move m;
  m.author = author;
  m.kind = MoveKind::attack;
  m.based_on.push_back(attack.target);
  m.attack = std::move(attack);
  return submit_move(std::move(state), std::move(m));
}

MoveResult record_defense(SessionState state, const std::string& author, DefenseDescriptor defense) {
  Move m;
  m.author = author;
  m.kind = MoveKind::defend;
  m.based_on.push_back(defense.target);
  m.defense = std::move(defense);
  return submit_move(std::move(state), std::move(m));
}

std::optional<std::string> choose_target(const SessionState& state, TargetPolicy policy) {
  if (state.report.consistent()) throw ProtocolError("phase", "there are no culprits to choose from");
  if (state.phase != Phase::attack_defense)
    throw ProtocolError("phase", "targets are chosen in the attack-defense phase");
  if (policy == TargetPolicy::manual) return std::nullopt;
  std::optional<std::string> best;
  std::size_t best_freq = 0, best_pos = 0;
  for (const auto& [id, freq] : state.report.frequencies) {
    if (freq == 0) continue;
    const std::size_t pos = position_of(state, id);
    const bool better = policy == TargetPolicy::last_asserted
                            ? (!best || pos > best_pos)
                            : (!best || freq > best_freq || (freq == best_freq && pos > best_pos));
    if (better) {
      best = id;
      best_freq = freq;
      best_pos = pos;
    }
  }
  return best;
}

std::optional<Verdict> detect_deadlock(const SessionState& state) {
  if (state.phase != Phase::attack_defense) return std::nullopt;
  for (const auto& set : state.report.mis) {
    const bool all_defended = std::all_of(set.begin(), set.end(), [&](const std::string& id) {
      const auto it = state.status.find(id);
      return it != state.status.end() && it->second.defended;
    });
    if (all_defended) return Verdict{Outcome::deadlock_failure, state.active_assertions(), set};
  }
  return std::nullopt;
}

MoveResult close_session(SessionState s) {
  if (s.phase == Phase::closed) throw ProtocolError("phase", "the session is already closed");
  std::vector<Event> events;
  if (s.phase != Phase::failed) {
    s.verdict = Verdict{s.report.consistent() ? Outcome::consistent : Outcome::closed_by_agreement,
                        s.active_assertions(),
                        {}};
  }
  s.proposal.reset();
  events.push_back({"closed", "", {}, std::string(to_string(s.verdict->outcome))});
  set_phase(s, Phase::closed, events);
  s.history.push_back({"close", std::nullopt, events});
  return {std::move(s), std::move(events)};
}

DefaultTheory session_theory(const SessionState& s) {
  const Space space(s.config);
  if (space.extensional) throw ProtocolError("payload", "extensional sessions have no default theory");
  DefaultTheory theory = base_theory(s.config, space);
  std::vector<Formula> bg = theory.background();
  for (const auto& id : s.active_assertions()) {
    const Move& m = *s.find_move(id);
    if (m.kind == MoveKind::assert_classical_rule) bg.push_back(space.formula(m.content));
  }
  theory = with_background(std::move(theory), std::move(bg));
  for (const auto& id : s.active_assertions()) {
    const Move& m = *s.find_move(id);
    const ArgumentStatus& st = s.status.at(id);
    if (!st.rule) continue;
    DefaultRule r = to_rule(*st.rule, id, space);
    r.provenance = provenance_of(m, st);
    theory = attach(std::move(theory), std::move(r));
  }
  return theory;
}

}  // namespace defarg
