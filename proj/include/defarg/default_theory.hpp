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

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "defarg/logic.hpp"

namespace defarg {

/// `normally` is α ∼ φ, `not_normally` is α ≁ φ.
enum class Polarity { normally, not_normally };
enum class Provenance { plain, expert, agreed, confirmed };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

/// A semantic default (X : Y): most of the scope X lies in Y, with known
/// exception sets and a bounded set of surprise elements.
struct DefaultRule {
  std::string id;
  Formula scope;
  Formula conclusion;
  Polarity polarity = Polarity::normally;
  std::vector<Formula> exception_sets;
  double surprise_budget = 0.0;
  bool homogeneous = true;
  Provenance provenance = Provenance::plain;

  /// What the default contributes to conflict detection at a point: φ for
  /// ∼, ¬φ for ≁ (the α ∧ ¬φ reading restricted to a point inside α).
  Formula conflict_content() const;
  /// What a model has to satisfy to satisfy the default; ≁ imposes nothing.
  Formula satisfaction_content() const;
};

/// Numerical reading of "most", "small" and "very small".
struct SizePolicy {
  double most = 0.7;
  double small = 0.3;
  double very_small = 0.05;

  /// Throws unless 0.5 < most <= 1 and 0 <= very_small <= small < 0.5.
  void validate() const;
  bool operator==(const SizePolicy&) const = default;
};

struct InheritanceBlock {
  std::string default_id;
  Formula at;
};

/// Background theory B plus attached defaults. Immutable value; the free
/// functions below return modified copies.
class DefaultTheory {
 public:
  DefaultTheory() = default;
  explicit DefaultTheory(Signature sig, std::vector<Formula> background = {}, SizePolicy policy = {});

  const Signature& signature() const { return sig_; }
  const std::vector<Formula>& background() const { return background_; }
  const std::vector<DefaultRule>& defaults() const { return defaults_; }
  const std::vector<InheritanceBlock>& blocks() const { return blocks_; }
  const SizePolicy& policy() const { return policy_; }

  /// Models of B over the signature.
  const ModelSet& universe() const { return universe_; }
  /// M(f) ∩ M(B).
  ModelSet restrict(const Formula& f) const;
  Formula parse(std::string_view text) const { return parse_formula(text, sig_); }

  const DefaultRule* find(std::string_view id) const;
  const DefaultRule& rule(std::string_view id) const;

 private:
  friend DefaultTheory attach(DefaultTheory theory, DefaultRule rule);
  friend DefaultTheory block_inheritance(DefaultTheory theory, std::string_view default_id, Formula subset);
  friend DefaultTheory replace_rule(DefaultTheory theory, DefaultRule rule);
  friend DefaultTheory remove_default(DefaultTheory theory, std::string_view default_id);
  friend DefaultTheory with_background(DefaultTheory theory, std::vector<Formula> background);

  Signature sig_;
  std::vector<Formula> background_;
  std::vector<DefaultRule> defaults_;
  std::vector<InheritanceBlock> blocks_;
  SizePolicy policy_;
  ModelSet universe_ = ModelSet::universe(0);
};

/// Registers a default. Rejects reused ids, unsatisfiable scopes, exception
/// sets outside the scope, and surprise budgets above the "very small" bound.
DefaultTheory attach(DefaultTheory theory, DefaultRule rule);
/// Replaces the default with the same id, re-running the attach checks.
DefaultTheory replace_rule(DefaultTheory theory, DefaultRule rule);
DefaultTheory remove_default(DefaultTheory theory, std::string_view default_id);
DefaultTheory with_background(DefaultTheory theory, std::vector<Formula> background);
DefaultTheory add_exception_set(DefaultTheory theory, std::string_view default_id, const Formula& exception);
/// Scope becomes scope ∧ restriction; exception sets are narrowed alike.
DefaultTheory narrow_scope(DefaultTheory theory, std::string_view default_id, const Formula& restriction);
DefaultTheory set_provenance(DefaultTheory theory, std::string_view default_id, Provenance provenance);

/// Stops inheritance of a default into `subset`, which has to lie inside the
/// default's scope.
DefaultTheory block_inheritance(DefaultTheory theory, std::string_view default_id, Formula subset);

/// Distinct attachment points (scope model sets within B) in declaration
/// order, each with the ids of the defaults attached there.
struct AttachmentPoint {
  ModelSet carrier;
  Formula scope;  // scope of the first default attached here
  std::vector<std::string> default_ids;
};
std::vector<AttachmentPoint> attachment_points(const DefaultTheory& theory);

struct ConsistencyViolation {
  int condition = 0;  // 1: B inconsistent, 2: defaults at one point inconsistent with B
  std::vector<std::string> default_ids;
  std::string message;
};

struct ConsistencyReport {
  std::vector<ConsistencyViolation> violations;
  bool ok() const { return violations.empty(); }
};

ConsistencyReport check_consistency_conditions(const DefaultTheory& theory);

/// Raw measures for the size gate: |X|, |X ∩ Y|, |X1 ∪ X2 ∪ ...|, |X'|.
struct SizeMeasures {
  double scope = 0;
  double agreeing = 0;
  double exceptions = 0;
  double surprise = 0;
};

struct SizeGateReport {
  bool passed = false;
  /// X ∩ Y is empty: no reading of "most" can hold.
  bool hard_fail = false;
  double most_ratio = 0;
  double exception_ratio = 0;
  double surprise_ratio = 0;
  std::vector<std::string> failures;
};

SizeGateReport check_size_gate(const SizeMeasures& m, const SizePolicy& policy);
/// Measures the rule inside the theory's universe, by model count or by the
/// given per-valuation weights.
SizeGateReport check_size_gate(const DefaultRule& rule, const DefaultTheory& theory, const SizePolicy& policy,
                               std::span<const double> weights = {});

/// `stronger(a, b)`: a takes precedence over b when they conflict.
using StrengthOrder = std::function<bool(const DefaultRule& a, const DefaultRule& b, const DefaultTheory& theory)>;

/// Strict inclusion of scopes inside the universe: the more specific default is stronger.
bool stronger_by_specificity(const DefaultRule& a, const DefaultRule& b, const DefaultTheory& theory);

enum class EliminationPhase { classical, defaults_only };

struct ValidityResult {
  ModelSet point;
  std::vector<std::string> visible;
  std::vector<std::pair<std::string, EliminationPhase>> eliminated;
  std::vector<std::string> valid;
};

std::vector<std::string> visible_defaults(const DefaultTheory& theory, const Formula& beta);
std::vector<std::string> visible_defaults(const DefaultTheory& theory, const ModelSet& point);

ValidityResult valid_defaults(const DefaultTheory& theory, const Formula& beta,
                              const StrengthOrder& stronger = stronger_by_specificity);
ValidityResult valid_defaults(const DefaultTheory& theory, const ModelSet& point,
                              const StrengthOrder& stronger = stronger_by_specificity);

}  // namespace defarg
