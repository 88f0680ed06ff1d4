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

// Random generators and brute-force oracles shared by the test binaries.
// The oracles evaluate formulas valuation by valuation and enumerate every
// subset, without going through the library's model-set algebra.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "defarg/default_theory.hpp"
#include "defarg/logic.hpp"

namespace testsupport {

using defarg::DefaultRule;
using defarg::DefaultTheory;
using defarg::Formula;
using defarg::Signature;
using defarg::Valuation;

using Truth = std::vector<bool>;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }

 private:
  std::mt19937_64 gen_;
};

inline Signature make_signature(std::size_t n) {
  std::vector<std::string> atoms;
  for (std::size_t i = 0; i < n; ++i) atoms.push_back("p" + std::to_string(i));
  return Signature(atoms);
}

inline Formula random_atom(Rng& rng, const Signature& sig) {
  const auto i = static_cast<std::size_t>(rng.uniform(0, static_cast<int>(sig.size()) - 1));
  return Formula::atom(i, sig.atoms()[i]);
}

inline Formula random_literal(Rng& rng, const Signature& sig) {
  Formula a = random_atom(rng, sig);
  return rng.coin() ? a : !a;
}

inline Formula random_formula(Rng& rng, const Signature& sig, int depth) {
  if (depth <= 0 || rng.coin(0.3)) {
    const int r = rng.uniform(0, 19);
    if (r == 0) return Formula::top();
    if (r == 1) return Formula::bottom();
    return random_atom(rng, sig);
  }
  switch (rng.uniform(0, 5)) {
    case 0: return Formula::negation(random_formula(rng, sig, depth - 1));
    case 1: return Formula::conjunction(random_formula(rng, sig, depth - 1), random_formula(rng, sig, depth - 1));
    case 2: return Formula::disjunction(random_formula(rng, sig, depth - 1), random_formula(rng, sig, depth - 1));
    case 3: return Formula::implication(random_formula(rng, sig, depth - 1), random_formula(rng, sig, depth - 1));
    case 4: return Formula::equivalence(random_formula(rng, sig, depth - 1), random_formula(rng, sig, depth - 1));
    default: return Formula::conjunction(random_literal(rng, sig), random_literal(rng, sig));
  }
}

inline Truth truth(const Formula& f, std::size_t n) {
  Truth t(std::size_t{1} << n);
  for (Valuation v = 0; v < t.size(); ++v) t[v] = f.evaluate(v, n);
  return t;
}

inline Truth truth_all(const std::vector<Formula>& fs, std::size_t n) {
  Truth t(std::size_t{1} << n, true);
  for (const auto& f : fs)
    for (Valuation v = 0; v < t.size(); ++v) t[v] = t[v] && f.evaluate(v, n);
  return t;
}

inline Truth meet(Truth a, const Truth& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = a[i] && b[i];
  return a;
}

inline bool any_of(const Truth& t) { return std::find(t.begin(), t.end(), true) != t.end(); }

inline bool subset(const Truth& a, const Truth& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] && !b[i]) return false;
  return true;
}

inline bool strict_subset(const Truth& a, const Truth& b) { return subset(a, b) && a != b; }

/// Minimal subsets (as index lists) whose joint content misses `universe`.
/// Plain enumeration of every subset.
inline std::vector<std::vector<std::size_t>> oracle_mis(const std::vector<Truth>& contents, const Truth& universe) {
  const std::size_t k = contents.size();
  const auto consistent = [&](std::uint32_t mask) {
    for (std::size_t v = 0; v < universe.size(); ++v) {
      if (!universe[v]) continue;
      bool all = true;
      for (std::size_t i = 0; i < k && all; ++i)
        if ((mask >> i) & 1u) all = contents[i][v];
      if (all) return true;
    }
    return false;
  };
  std::vector<char> cons(std::size_t{1} << k);
  for (std::uint32_t mask = 0; mask < cons.size(); ++mask) cons[mask] = consistent(mask);
  std::vector<std::vector<std::size_t>> out;
  // Mask 0 counts too: an unsatisfiable universe makes the empty set the only minimal one.
  for (std::uint32_t mask = 0; mask < cons.size(); ++mask) {
    if (cons[mask]) continue;
    bool minimal = true;
    for (std::size_t i = 0; i < k && minimal; ++i)
      if (((mask >> i) & 1u) && !cons[mask & ~(1u << i)]) minimal = false;
    if (!minimal) continue;
    std::vector<std::size_t> set;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1u) set.push_back(i);
    out.push_back(set);
  }
  return out;
}

/// Valid default ids at a point (a subset of the universe), by the two
/// elimination rounds with specificity as strength.
inline std::vector<std::string> oracle_valid(const DefaultTheory& th, const Truth& point) {
  const std::size_t n = th.signature().size();
  const Truth bg = truth_all(th.background(), n);
  std::vector<const DefaultRule*> visible;
  for (const auto& d : th.defaults())
    if (subset(point, meet(truth(d.scope, n), bg))) visible.push_back(&d);
  const auto stronger = [&](const DefaultRule* a, const DefaultRule* b) {
    return strict_subset(meet(truth(a->scope, n), bg), meet(truth(b->scope, n), bg));
  };
  const auto conflict = [&](const DefaultRule* d) {
    return truth(d->polarity == defarg::Polarity::normally ? d->conclusion : !d->conclusion, n);
  };
  const Truth full(std::size_t{1} << n, true);
  const auto eliminate = [&](const std::vector<std::size_t>& members, std::set<std::size_t>& removed,
                             const std::vector<const DefaultRule*>& rules) {
    for (auto i : members) {
      bool dominates = false;
      for (auto j : members)
        if (j != i && stronger(rules[i], rules[j])) dominates = true;
      if (!dominates) removed.insert(i);
    }
  };

  std::vector<Truth> units{point};
  for (auto* d : visible) units.push_back(conflict(d));
  std::set<std::size_t> removed1;
  for (const auto& set : oracle_mis(units, full)) {
    if (set.front() != 0) continue;
    std::vector<std::size_t> members;
    for (auto i : set)
      if (i) members.push_back(i - 1);
    eliminate(members, removed1, visible);
  }
  std::vector<const DefaultRule*> survivors;
  for (std::size_t i = 0; i < visible.size(); ++i)
    if (!removed1.contains(i)) survivors.push_back(visible[i]);
  std::vector<Truth> contents;
  for (auto* d : survivors) contents.push_back(conflict(d));
  std::set<std::size_t> removed2;
  for (const auto& set : oracle_mis(contents, full)) eliminate(set, removed2, survivors);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < survivors.size(); ++i)
    if (!removed2.contains(i)) out.push_back(survivors[i]->id);
  return out;
}

/// Whole element relation of the preferential model, materialised from the
/// three base clauses and closed transitively.
struct OracleOrder {
  std::size_t n = 0;
  Truth universe;
  std::vector<int> cell_of;  // -1 outside the universe
  std::vector<std::vector<bool>> codes;
  std::vector<bool> normal;  // member of its cell's μ part
  std::vector<std::vector<bool>> less;  // less[a][b]: a preferred to b

  bool cell_less(std::size_t x, std::size_t y) const {
    bool strict = false;
    for (std::size_t i = 0; i < codes[x].size(); ++i) {
      if (codes[x][i] && !codes[y][i]) return false;
      if (!codes[x][i] && codes[y][i]) strict = true;
    }
    return strict;
  }
  bool covers(std::size_t x, std::size_t y) const {
    if (!cell_less(x, y)) return false;
    for (std::size_t z = 0; z < codes.size(); ++z)
      if (cell_less(x, z) && cell_less(z, y)) return false;
    return true;
  }
};

inline OracleOrder oracle_order(const DefaultTheory& th, bool cardinality = false) {
  OracleOrder o;
  o.n = th.signature().size();
  const std::size_t space = std::size_t{1} << o.n;
  o.universe = truth_all(th.background(), o.n);

  std::vector<Truth> family;
  for (const auto& d : th.defaults()) {
    Truth s = meet(truth(d.scope, o.n), o.universe);
    if (s != o.universe && std::find(family.begin(), family.end(), s) == family.end()) family.push_back(s);
  }
  o.cell_of.assign(space, -1);
  std::vector<Truth> carriers;
  for (std::size_t v = 0; v < space; ++v) {
    if (!o.universe[v]) continue;
    std::vector<bool> code;
    for (const auto& f : family) code.push_back(f[v]);
    auto it = std::find(o.codes.begin(), o.codes.end(), code);
    if (it == o.codes.end()) {
      o.codes.push_back(code);
      carriers.emplace_back(space, false);
      it = o.codes.end() - 1;
    }
    const auto c = static_cast<std::size_t>(it - o.codes.begin());
    o.cell_of[v] = static_cast<int>(c);
    carriers[c][v] = true;
  }

  // Satisfied valid defaults per element, as bit masks over the cell's valid list.
  std::vector<std::uint32_t> sat(space, 0);
  std::vector<std::size_t> valid_count(o.codes.size());
  for (std::size_t c = 0; c < o.codes.size(); ++c) {
    const auto valid = oracle_valid(th, carriers[c]);
    valid_count[c] = valid.size();
    for (std::size_t i = 0; i < valid.size(); ++i) {
      const DefaultRule& r = th.rule(valid[i]);
      const Truth t = r.polarity == defarg::Polarity::normally ? truth(r.conclusion, o.n) : Truth(space, true);
      for (std::size_t v = 0; v < space; ++v)
        if (carriers[c][v] && t[v]) sat[v] |= 1u << i;
    }
  }
  o.normal.assign(space, false);
  for (std::size_t v = 0; v < space; ++v)
    if (o.universe[v]) o.normal[v] = sat[v] == (valid_count[o.cell_of[v]] == 32 ? ~0u : (1u << valid_count[o.cell_of[v]]) - 1);

  const auto better = [&](std::size_t a, std::size_t b) {
    if (cardinality) return std::popcount(sat[a]) > std::popcount(sat[b]);
    return (sat[a] & sat[b]) == sat[b] && sat[a] != sat[b];
  };

  o.less.assign(space, std::vector<bool>(space, false));
  for (std::size_t a = 0; a < space; ++a) {
    if (!o.universe[a]) continue;
    for (std::size_t b = 0; b < space; ++b) {
      if (!o.universe[b] || a == b) continue;
      const auto x = static_cast<std::size_t>(o.cell_of[a]);
      const auto y = static_cast<std::size_t>(o.cell_of[b]);
      bool r = false;
      if (!o.normal[a] && !o.normal[b] && x == y) r = better(a, b);
      if (o.normal[a] && o.normal[b]) r = o.cell_less(x, y);
      if (o.normal[a] && !o.normal[b]) r = o.cell_less(x, y) || x == y || o.covers(y, x);
      o.less[a][b] = r;
    }
  }
  for (std::size_t k = 0; k < space; ++k)
    for (std::size_t i = 0; i < space; ++i)
      if (o.less[i][k])
        for (std::size_t j = 0; j < space; ++j)
          if (o.less[k][j]) o.less[i][j] = true;
  return o;
}

inline Truth oracle_minimal(const OracleOrder& o, const Truth& query) {
  Truth out(query.size(), false);
  for (std::size_t a = 0; a < query.size(); ++a) {
    if (!query[a] || !o.universe[a]) continue;
    bool dominated = false;
    for (std::size_t b = 0; b < query.size() && !dominated; ++b)
      if (query[b] && o.universe[b] && o.less[b][a]) dominated = true;
    out[a] = !dominated;
  }
  return out;
}

/// Random theory satisfying the consistency conditions, or nullopt after
/// repeated failures.
inline std::optional<DefaultTheory> random_theory(Rng& rng, std::size_t atoms, std::size_t max_defaults) {
  for (int attempt = 0; attempt < 50; ++attempt) {
    const Signature sig = make_signature(atoms);
    std::vector<Formula> bg;
    if (rng.coin(0.5)) bg.push_back(random_formula(rng, sig, 2));
    DefaultTheory th(sig, bg);
    if (th.universe().is_empty()) continue;
    const auto k = static_cast<std::size_t>(rng.uniform(1, static_cast<int>(max_defaults)));
    for (std::size_t i = 0; i < k; ++i) {
      DefaultRule r;
      r.id = "d" + std::to_string(i);
      r.scope = rng.coin(0.15) ? Formula::top() : random_formula(rng, sig, 2);
      r.conclusion = rng.coin(0.6) ? random_literal(rng, sig) : random_formula(rng, sig, 1);
      r.polarity = rng.coin(0.8) ? defarg::Polarity::normally : defarg::Polarity::not_normally;
      try {
        th = defarg::attach(th, std::move(r));  // th survives a rejected rule
      } catch (const defarg::Error&) {
      }
    }
    if (th.defaults().empty()) continue;
    if (defarg::check_consistency_conditions(th).ok()) return th;
  }
  return std::nullopt;
}

}  // namespace testsupport
