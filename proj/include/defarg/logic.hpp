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
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "defarg/bitset.hpp"

namespace defarg {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. `position` is 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

class UndeclaredAtomError : public Error {
 public:
  explicit UndeclaredAtomError(std::string atom)
      : Error("undeclared atom '" + atom + "'"), atom_(std::move(atom)) {}
  const std::string& atom() const { return atom_; }

 private:
  std::string atom_;
};

/// A configured size cap was exceeded (atoms, units, ...).
class LimitError : public Error {
 public:
  using Error::Error;
};

inline constexpr std::size_t kDefaultAtomCap = 20;

/// Ordered list of distinct propositional atoms. Atom i occupies bit
/// (size-1-i) of a valuation, so the first declared atom is the high bit.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<std::string> atoms);

  std::size_t size() const { return atoms_.size(); }
  const std::vector<std::string>& atoms() const { return atoms_; }
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool operator==(const Signature&) const = default;

  static bool is_valid_atom_name(std::string_view name);

 private:
  std::vector<std::string> atoms_;
};

/// Valuation encoded as a bit pattern in signature order.
using Valuation = std::uint32_t;

bool atom_value(Valuation v, std::size_t atom, std::size_t atom_count);

/// Immutable propositional formula. Copies share structure.
class Formula {
 public:
  enum class Kind { top, bottom, atom, negation, conjunction, disjunction, implication, equivalence };

  /// Defaults to `top`.
  Formula();

  static Formula top();
  static Formula bottom();
  static Formula atom(std::size_t index, std::string name);
  static Formula negation(Formula operand);
  static Formula conjunction(Formula lhs, Formula rhs);
  static Formula disjunction(Formula lhs, Formula rhs);
  static Formula implication(Formula lhs, Formula rhs);
  static Formula equivalence(Formula lhs, Formula rhs);

  Kind kind() const;
  std::size_t atom_index() const;
  const std::string& atom_name() const;
  /// Operand of a negation, or left side of a binary connective.
  const Formula& lhs() const;
  const Formula& rhs() const;

  bool is_binary() const;
  bool evaluate(Valuation v, std::size_t atom_count) const;

  /// Structural equality.
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Formula operator!(const Formula& f);
Formula operator&&(const Formula& a, const Formula& b);
Formula operator||(const Formula& a, const Formula& b);
Formula implies(const Formula& a, const Formula& b);
Formula iff(const Formula& a, const Formula& b);
Formula conjoin(std::span<const Formula> fs);
Formula disjoin(std::span<const Formula> fs);

/// Concrete ASCII syntax: `~` `&` `|` `->` `<->`, constants `true` `false`.
/// Precedence not > and > or > implies > iff; implies is right-associative.
Formula parse_formula(std::string_view text, const Signature& sig);
std::string to_string(const Formula& f);

/// Set of valuations over a signature of `atom_count` atoms.
class ModelSet {
 public:
  ModelSet() = default;
  static ModelSet empty(std::size_t atom_count);
  static ModelSet universe(std::size_t atom_count);
  static ModelSet from_bits(std::size_t atom_count, BitSet bits);

  std::size_t atom_count() const { return atom_count_; }
  std::size_t space_size() const { return bits_.size(); }

  bool contains(Valuation v) const { return bits_.test(v); }
  void insert(Valuation v) { bits_.set(v); }
  void erase(Valuation v) { bits_.reset(v); }

  std::size_t count() const { return bits_.count(); }
  bool is_empty() const { return bits_.none(); }
  bool is_subset_of(const ModelSet& o) const { return bits_.is_subset_of(o.bits_); }
  bool is_strict_subset_of(const ModelSet& o) const { return is_subset_of(o) && !(*this == o); }
  bool intersects(const ModelSet& o) const { return bits_.intersects(o.bits_); }

  ModelSet& operator&=(const ModelSet& o) { bits_ &= o.bits_; return *this; }
  ModelSet& operator|=(const ModelSet& o) { bits_ |= o.bits_; return *this; }
  ModelSet& operator-=(const ModelSet& o) { bits_ -= o.bits_; return *this; }
  friend ModelSet operator&(ModelSet a, const ModelSet& b) { return a &= b; }
  friend ModelSet operator|(ModelSet a, const ModelSet& b) { return a |= b; }
  friend ModelSet operator-(ModelSet a, const ModelSet& b) { return a -= b; }
  /// Complement with respect to all 2^n valuations.
  ModelSet complement() const;

  std::vector<Valuation> members() const;
  template <typename F>
  void for_each(F&& f) const {
    bits_.for_each([&](std::size_t i) { f(static_cast<Valuation>(i)); });
  }

  const BitSet& bits() const { return bits_; }

  bool operator==(const ModelSet&) const = default;
  bool operator<(const ModelSet& o) const { return bits_ < o.bits_; }

 private:
  std::size_t atom_count_ = 0;
  BitSet bits_;
};

/// "0110"-style string in signature order (first atom leftmost).
std::string to_bitstring(Valuation v, std::size_t atom_count);
/// Sorted bitstrings, e.g. "{00, 01, 11}".
std::string to_string(const ModelSet& ms);

ModelSet models(const Formula& f, const Signature& sig, std::size_t atom_cap = kDefaultAtomCap);
/// Joint models of a list of formulas (the universe when the list is empty).
ModelSet models(std::span<const Formula> gamma, const Signature& sig,
                std::size_t atom_cap = kDefaultAtomCap);

bool entails(std::span<const Formula> gamma, const Formula& phi, const Signature& sig);
bool is_consistent(std::span<const Formula> gamma, const Signature& sig);
bool strictly_more_specific(const Formula& alpha, const Formula& beta, const Signature& sig);

}  // namespace defarg
