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

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "defarg/default_theory.hpp"
#include "defarg/inconsistency.hpp"
#include "defarg/logic.hpp"
#include "defarg/preference.hpp"

namespace defarg {

/// A move the arbiter refuses. `code` is one of: phase, reference, payload,
/// component, vote, participant, policy, limit.
class ProtocolError : public Error {
 public:
  ProtocolError(std::string code, const std::string& message) : Error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

enum class Role { participant, arbiter };

struct Participant {
  std::string id;
  std::string name;
  Role role = Role::participant;
  bool operator==(const Participant&) const = default;
};

enum class MoveKind {
  assert_fact,
  assert_classical_rule,
  assert_default,
  attack,
  defend,
  elaborate,
  confirm,
  agree,
  expert_opinion,
  retract_proposal,
  retract_vote,
  arbiter_question,
  arbiter_target_choice,
};

enum class AttackComponent {
  rule_itself,
  prerequisite,
  exception_membership,
  surprise_membership,
  size_notion,
  conclusion,
  applicability,
  expert_language,
};

/// prove ¬α, argue that ¬α is consistent, or derive an unlikely consequence.
enum class AttackMode { prove_negation, argue_consistent_negation, roundabout };
enum class DefenseMode { prove, argue_consistent, support };
enum class ElaborationKind { add_exception_set, mark_surprise, negate_premise, narrow_rule };
enum class TargetPolicy { max_frequency, last_asserted, manual };
enum class Phase { open, retraction_vote, attack_defense, failed, closed };

std::string_view to_string(MoveKind k);
std::string_view to_string(AttackComponent c);
std::string_view to_string(AttackMode m);
std::string_view to_string(DefenseMode m);
std::string_view to_string(ElaborationKind k);
std::string_view to_string(TargetPolicy p);
std::string_view to_string(Phase p);
std::string_view to_string(Role r);
MoveKind move_kind_from_string(std::string_view s);
AttackComponent attack_component_from_string(std::string_view s);
AttackMode attack_mode_from_string(std::string_view s);
DefenseMode defense_mode_from_string(std::string_view s);
ElaborationKind elaboration_kind_from_string(std::string_view s);
TargetPolicy target_policy_from_string(std::string_view s);
Phase phase_from_string(std::string_view s);
Role role_from_string(std::string_view s);

/// Assertion kinds whose content enters the arbiter's consistency check.
bool is_assertive(MoveKind k);
/// Components an attack on a move of this kind may aim at.
std::vector<AttackComponent> legal_components(MoveKind target_kind);

/// Premises are move ids or content text (a formula, or `{x, y}` in
/// extensional sessions). Without premises or consequence the attack is a
/// plain claim and is recorded unverified.
struct AttackDescriptor {
  std::string target;
  AttackComponent component = AttackComponent::conclusion;
  AttackMode mode = AttackMode::prove_negation;
  std::vector<std::string> premises;
  std::string consequence;
  std::string elaboration;
  bool operator==(const AttackDescriptor&) const = default;
};

struct DefenseDescriptor {
  std::string target;
  DefenseMode mode = DefenseMode::prove;
  std::vector<std::string> premises;
  std::string justification;
  bool operator==(const DefenseDescriptor&) const = default;
};

struct Elaboration {
  ElaborationKind kind = ElaborationKind::add_exception_set;
  std::string target;
  std::string content;
  bool operator==(const Elaboration&) const = default;
};

/// Default payload as text, parsed against the session signature.
struct DefaultSpec {
  std::string scope;
  std::string conclusion;
  bool negative = false;
  std::vector<std::string> exceptions;
  double surprise = 0.0;
  bool homogeneous = true;
  bool operator==(const DefaultSpec&) const = default;
};

struct Move {
  std::string id;  // assigned by the arbiter when empty
  std::string author;
  MoveKind kind = MoveKind::assert_fact;
  /// Assertions: formula or element set. Questions: free text.
  std::string content;
  std::optional<DefaultSpec> rule;
  std::optional<AttackDescriptor> attack;
  std::optional<DefenseDescriptor> defense;
  std::optional<Elaboration> elaboration;
  /// Confirm, Agree, RetractProposal, ArbiterQuestion, ArbiterTargetChoice.
  std::string target;
  bool vote = false;
  std::vector<std::string> based_on;
  bool operator==(const Move&) const = default;
};

struct Event {
  std::string type;
  std::string ref;
  std::vector<std::vector<std::string>> sets;
  std::string message;
  bool operator==(const Event&) const = default;
};

struct ArgumentStatus {
  std::vector<std::string> attacks;
  std::vector<std::string> defenses;
  std::vector<std::string> confirmations;
  std::vector<std::string> agreements;
  bool contested = false;
  bool defended = false;
  /// Current form of a default after elaborations.
  std::optional<DefaultSpec> rule;
  /// Descriptions of individuals declared surprise exceptions to a default.
  std::vector<std::string> surprise_marks;
  bool operator==(const ArgumentStatus&) const = default;
};

struct RetractionProposal {
  std::string move_id;
  std::string proposer;
  std::map<std::string, bool> votes;
  bool operator==(const RetractionProposal&) const = default;
};

/// Intensional sessions set `atoms` (and optionally `background`);
/// extensional sessions set `elements`.
struct SessionConfig {
  std::vector<Participant> participants;
  std::vector<std::string> atoms;
  std::vector<std::string> background;
  std::vector<std::string> elements;
  bool extensional = false;
  SizePolicy policy;
  TargetPolicy target_policy = TargetPolicy::max_frequency;
  PreferenceVariant preference = PreferenceVariant::subset;
  bool operator==(const SessionConfig&) const = default;
};

enum class Outcome { consistent, deadlock_failure, closed_by_agreement };
std::string_view to_string(Outcome o);
Outcome outcome_from_string(std::string_view s);

struct Verdict {
  Outcome outcome = Outcome::consistent;
  /// Active assertive moves at the time of the verdict.
  std::vector<std::string> surviving;
  /// The fully defended minimal inconsistent set, for deadlocks.
  std::vector<std::string> deadlocked;
  bool operator==(const Verdict&) const = default;
};

struct HistoryEntry {
  std::string verb;  // "move" or "close"
  std::optional<Move> move;
  std::vector<Event> events;
  bool operator==(const HistoryEntry&) const = default;
};

struct SessionState {
  SessionConfig config;
  std::vector<Move> moves;
  std::set<std::string> retracted;
  std::set<std::string> hanging;
  std::map<std::string, ArgumentStatus> status;
  InconsistencyReport report;
  std::optional<RetractionProposal> proposal;
  std::optional<std::string> target;
  Phase phase = Phase::open;
  std::optional<Verdict> verdict;
  std::vector<HistoryEntry> history;
  std::size_t next_id = 1;
  bool operator==(const SessionState&) const = default;

  const Move* find_move(std::string_view id) const;
  /// Assertive, committed, not retracted, in commit order.
  std::vector<std::string> active_assertions() const;
};

SessionState open_session(SessionConfig config);
/// Opens an intensional session and commits the theory's background formulas
/// and defaults as assertions by `author`.
SessionState open_session(SessionConfig config, const DefaultTheory& seed, const std::string& author);

struct MoveResult {
  SessionState state;
  std::vector<Event> events;
};

MoveResult submit_move(SessionState state, Move move);

MoveResult propose_retraction(SessionState state, const std::string& author, const std::string& move_id);
MoveResult cast_vote(SessionState state, const std::string& participant, bool yes);
MoveResult record_attack(SessionState state, const std::string& author, AttackDescriptor attack);
MoveResult record_defense(SessionState state, const std::string& author, DefenseDescriptor defense);

/// The move the arbiter puts up for attack and defense; nullopt under the
/// manual policy.
std::optional<std::string> choose_target(const SessionState& state, TargetPolicy policy);
/// Failure verdict iff some surviving minimal inconsistent set has every member defended.
std::optional<Verdict> detect_deadlock(const SessionState& state);

MoveResult close_session(SessionState state);

/// Background plus active classical rules and defaults, for hierarchy queries.
DefaultTheory session_theory(const SessionState& state);

}  // namespace defarg
