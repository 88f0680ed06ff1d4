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

#include <algorithm>
#include <cassert>
#include <unordered_set>

#include "defarg/logic.hpp"

namespace defarg {

Signature::Signature(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
  std::unordered_set<std::string_view> seen;
  for (const auto& a : atoms_) {
    if (!is_valid_atom_name(a)) throw Error("invalid atom name '" + a + "'");
    if (!seen.insert(a).second) throw Error("duplicate atom '" + a + "'");
  }
}

bool Signature::is_valid_atom_name(std::string_view name) {
  if (name.empty() || name == "true" || name == "false") return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  if (!alpha(name.front())) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [&](char c) { return alpha(c) || digit(c) || c == '\''; });
}

std::optional<std::size_t> Signature::index_of(std::string_view name) const {
  auto it = std::find(atoms_.begin(), atoms_.end(), name);
  if (it == atoms_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - atoms_.begin());
}

bool atom_value(Valuation v, std::size_t atom, std::size_t atom_count) {
  return (v >> (atom_count - 1 - atom)) & 1u;
}

struct Formula::Node {
  Kind kind;
  std::size_t index = 0;
  std::string name;
  Formula lhs;
  Formula rhs;
};

Formula::Formula() : node_(top().node_) {}

Formula Formula::top() {
  static const auto node = std::shared_ptr<const Node>(
      new Node{Kind::top, 0, {}, Formula(nullptr), Formula(nullptr)});
  return Formula(node);
}

Formula Formula::bottom() {
  static const auto node = std::shared_ptr<const Node>(
      new Node{Kind::bottom, 0, {}, Formula(nullptr), Formula(nullptr)});
  return Formula(node);
}

Formula Formula::atom(std::size_t index, std::string name) {
  return Formula(std::shared_ptr<const Node>(
      new Node{Kind::atom, index, std::move(name), Formula(nullptr), Formula(nullptr)}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::shared_ptr<const Node>(
      new Node{Kind::negation, 0, {}, std::move(operand), Formula(nullptr)}));
}

#define DEFARG_BINARY(fn, k)                                                              \
  Formula Formula::fn(Formula lhs, Formula rhs) {                                         \
    return Formula(std::shared_ptr<const Node>(                                           \
        new Node{Kind::k, 0, {}, std::move(lhs), std::move(rhs)}));                       \
  }
DEFARG_BINARY(conjunction, conjunction)
DEFARG_BINARY(disjunction, disjunction)
DEFARG_BINARY(implication, implication)
DEFARG_BINARY(equivalence, equivalence)
#undef DEFARG_BINARY

Formula::Kind Formula::kind() const { return node_->kind; }
std::size_t Formula::atom_index() const { return node_->index; }
const std::string& Formula::atom_name() const { return node_->name; }
const Formula& Formula::lhs() const { return node_->lhs; }
const Formula& Formula::rhs() const { return node_->rhs; }

bool Formula::is_binary() const {
  switch (kind()) {
    case Kind::conjunction:
    case Kind::disjunction:
    case Kind::implication:
    case Kind::equivalence:
      return true;
    default:
      return false;
  }
}

bool Formula::evaluate(Valuation v, std::size_t atom_count) const {
  switch (kind()) {
    case Kind::top: return true;
    case Kind::bottom: return false;
    case Kind::atom: return atom_value(v, atom_index(), atom_count);
    case Kind::negation: return !lhs().evaluate(v, atom_count);
    case Kind::conjunction: return lhs().evaluate(v, atom_count) && rhs().evaluate(v, atom_count);
    case Kind::disjunction: return lhs().evaluate(v, atom_count) || rhs().evaluate(v, atom_count);
    case Kind::implication: return !lhs().evaluate(v, atom_count) || rhs().evaluate(v, atom_count);
    case Kind::equivalence: return lhs().evaluate(v, atom_count) == rhs().evaluate(v, atom_count);
  }
  return false;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case Formula::Kind::top:
    case Formula::Kind::bottom:
      return true;
    case Formula::Kind::atom:
      return a.atom_index() == b.atom_index() && a.atom_name() == b.atom_name();
    case Formula::Kind::negation:
      return a.lhs() == b.lhs();
    default:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
}

Formula operator!(const Formula& f) { return Formula::negation(f); }
Formula operator&&(const Formula& a, const Formula& b) { return Formula::conjunction(a, b); }
Formula operator||(const Formula& a, const Formula& b) { return Formula::disjunction(a, b); }
Formula implies(const Formula& a, const Formula& b) { return Formula::implication(a, b); }
Formula iff(const Formula& a, const Formula& b) { return Formula::equivalence(a, b); }

Formula conjoin(std::span<const Formula> fs) {
  if (fs.empty()) return Formula::top();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = out && fs[i];
  return out;
}

Formula disjoin(std::span<const Formula> fs) {
  if (fs.empty()) return Formula::bottom();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = out || fs[i];
  return out;
}

// ModelSet

ModelSet ModelSet::empty(std::size_t atom_count) {
  ModelSet m;
  m.atom_count_ = atom_count;
  m.bits_ = BitSet(std::size_t{1} << atom_count);
  return m;
}

ModelSet ModelSet::universe(std::size_t atom_count) {
  ModelSet m;
  m.atom_count_ = atom_count;
  m.bits_ = BitSet(std::size_t{1} << atom_count, true);
  return m;
}

ModelSet ModelSet::from_bits(std::size_t atom_count, BitSet bits) {
  assert(bits.size() == (std::size_t{1} << atom_count));
  ModelSet m;
  m.atom_count_ = atom_count;
  m.bits_ = std::move(bits);
  return m;
}

ModelSet ModelSet::complement() const { return from_bits(atom_count_, ~bits_); }

std::vector<Valuation> ModelSet::members() const {
  std::vector<Valuation> out;
  out.reserve(count());
  for_each([&](Valuation v) { out.push_back(v); });
  return out;
}

std::string to_bitstring(Valuation v, std::size_t atom_count) {
  std::string s(atom_count, '0');
  for (std::size_t i = 0; i < atom_count; ++i)
    if (atom_value(v, i, atom_count)) s[i] = '1';
  return s;
}

std::string to_string(const ModelSet& ms) {
  std::string out = "{";
  bool first = true;
  ms.for_each([&](Valuation v) {
    if (!first) out += ", ";
    first = false;
    out += to_bitstring(v, ms.atom_count());
  });
  return out + "}";
}

namespace {

ModelSet atom_models(std::size_t index, std::size_t n) {
  ModelSet m = ModelSet::empty(n);
  const Valuation space = Valuation{1} << n;
  for (Valuation v = 0; v < space; ++v)
    if (atom_value(v, index, n)) m.insert(v);
  return m;
}

ModelSet models_rec(const Formula& f, std::size_t n) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::top: return ModelSet::universe(n);
    case K::bottom: return ModelSet::empty(n);
    case K::atom:
      if (f.atom_index() >= n) throw UndeclaredAtomError(f.atom_name());
      return atom_models(f.atom_index(), n);
    case K::negation: return models_rec(f.lhs(), n).complement();
    case K::conjunction: return models_rec(f.lhs(), n) & models_rec(f.rhs(), n);
    case K::disjunction: return models_rec(f.lhs(), n) | models_rec(f.rhs(), n);
    case K::implication: return models_rec(f.lhs(), n).complement() | models_rec(f.rhs(), n);
    case K::equivalence: {
      auto a = models_rec(f.lhs(), n);
      auto b = models_rec(f.rhs(), n);
      return (a & b) | (a.complement() & b.complement());
    }
  }
  return ModelSet::empty(n);
}

void check_cap(const Signature& sig, std::size_t cap) {
  if (sig.size() > cap)
    throw LimitError("signature too large: " + std::to_string(sig.size()) + " atoms exceeds cap of " +
                     std::to_string(cap));
}

}  // namespace

ModelSet models(const Formula& f, const Signature& sig, std::size_t atom_cap) {
  check_cap(sig, atom_cap);
  return models_rec(f, sig.size());
}

ModelSet models(std::span<const Formula> gamma, const Signature& sig, std::size_t atom_cap) {
  check_cap(sig, atom_cap);
  ModelSet out = ModelSet::universe(sig.size());
  for (const auto& f : gamma) out &= models_rec(f, sig.size());
  return out;
}

bool entails(std::span<const Formula> gamma, const Formula& phi, const Signature& sig) {
  return models(gamma, sig).is_subset_of(models(phi, sig));
}

bool is_consistent(std::span<const Formula> gamma, const Signature& sig) {
  return !models(gamma, sig).is_empty();
}

bool strictly_more_specific(const Formula& alpha, const Formula& beta, const Signature& sig) {
  return models(alpha, sig).is_strict_subset_of(models(beta, sig));
}

}  // namespace defarg
