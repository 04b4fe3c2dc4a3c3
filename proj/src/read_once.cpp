/*
 * Copyright 2026 The vtrust Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Read-once normalisation of monotone formulas.
//
// Terms are sorted vectors of atom indices; atom indices follow the sorted
// atom names, so index order and name order agree.

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>

#include "vtrust/error.hpp"
#include "vtrust/formula.hpp"

namespace vtrust {

namespace {

using Term = std::vector<int>;
using Dnf = std::vector<Term>;

constexpr std::size_t kMaxTerms = std::size_t{1} << 16;

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

bool is_subset(const Term& small, const Term& big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Removes duplicates and every term that contains another term.
Dnf absorb(Dnf terms) {
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
    return std::forward_as_tuple(a.size(), a) < std::forward_as_tuple(b.size(), b);
  });
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  Dnf kept;
  for (auto& t : terms) {
    const bool absorbed = std::any_of(kept.begin(), kept.end(),
                                      [&](const Term& k) { return is_subset(k, t); });
    if (!absorbed) kept.push_back(std::move(t));
  }
  return kept;
}

void check_size(const Dnf& terms) {
  if (terms.size() > kMaxTerms)
    throw Error(ErrorCode::Unsimplifiable, "disjunctive normal form exceeds " +
                                               std::to_string(kMaxTerms) + " terms");
}

Dnf to_dnf(const Formula& f, const std::map<std::string, int, std::less<>>& index) {
  if (f.is_atom()) return Dnf{Term{index.at(f.name())}};
  if (f.kind() == Formula::Kind::Or) {
    Dnf out;
    for (const auto& child : f.children()) {
      auto sub = to_dnf(child, index);
      out.insert(out.end(), std::make_move_iterator(sub.begin()),
                 std::make_move_iterator(sub.end()));
      check_size(out);
    }
    return absorb(std::move(out));
  }
  Dnf acc{Term{}};
  for (const auto& child : f.children()) {
    const auto sub = to_dnf(child, index);
    Dnf next;
    next.reserve(acc.size() * sub.size());
    for (const auto& a : acc) {
      for (const auto& b : sub) {
        Term u;
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(u));
        next.push_back(std::move(u));
      }
      check_size(next);
    }
    acc = absorb(std::move(next));
  }
  return acc;
}

Term variables(const Dnf& terms) {
  Term vars;
  for (const auto& t : terms) vars.insert(vars.end(), t.begin(), t.end());
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

enum class Shape { Single, Sum, Product, Residue };

struct Split {
  Shape shape = Shape::Residue;
  std::vector<Dnf> parts;
};

// Terms sharing a variable must stay together; more than one group means a
// disjunction of variable-disjoint parts.
std::vector<Dnf> sum_parts(const Dnf& terms) {
  DisjointSets sets(terms.size());
  std::map<int, std::size_t> first_term;
  for (std::size_t i = 0; i < terms.size(); ++i)
    for (int v : terms[i]) {
      const auto [it, fresh] = first_term.emplace(v, i);
      if (!fresh) sets.unite(i, it->second);
    }
  std::map<std::size_t, Dnf> groups;
  for (std::size_t i = 0; i < terms.size(); ++i) groups[sets.find(i)].push_back(terms[i]);
  std::vector<Dnf> parts;
  for (auto& [_, g] : groups) parts.push_back(std::move(g));
  return parts;
}

// Variables that never share a term must sit in different factors of a
// product; the split holds only if the terms are exactly all combinations
// of the per-factor projections.
std::optional<std::vector<Dnf>> product_parts(const Dnf& terms) {
  const Term vars = variables(terms);
  const std::size_t n = vars.size();
  std::map<int, std::size_t> pos;
  for (std::size_t i = 0; i < n; ++i) pos[vars[i]] = i;

  std::vector<std::vector<bool>> together(n, std::vector<bool>(n, false));
  for (const auto& t : terms)
    for (int a : t)
      for (int b : t) together[pos[a]][pos[b]] = true;

  DisjointSets sets(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!together[i][j]) sets.unite(i, j);

  std::map<std::size_t, Term> groups;
  for (std::size_t i = 0; i < n; ++i) groups[sets.find(i)].push_back(vars[i]);
  if (groups.size() < 2) return std::nullopt;

  std::vector<Dnf> parts;
  double combinations = 1.0;
  for (const auto& [_, group] : groups) {
    Dnf projection;
    for (const auto& t : terms) {
      Term p;
      std::set_intersection(t.begin(), t.end(), group.begin(), group.end(),
                            std::back_inserter(p));
      if (p.empty()) return std::nullopt;
      projection.push_back(std::move(p));
    }
    std::sort(projection.begin(), projection.end());
    projection.erase(std::unique(projection.begin(), projection.end()), projection.end());
    combinations *= static_cast<double>(projection.size());
    parts.push_back(std::move(projection));
  }
  if (combinations != static_cast<double>(terms.size())) return std::nullopt;
  return parts;
}

Split decompose(const Dnf& terms) {
  if (terms.size() == 1) return {Shape::Single, {terms}};
  auto sums = sum_parts(terms);
  if (sums.size() > 1) return {Shape::Sum, std::move(sums)};
  if (auto products = product_parts(terms)) return {Shape::Product, std::move(*products)};
  return {Shape::Residue, {terms}};
}

// Repetitions left after factoring as far as possible: the residues that
// resist factoring contribute (occurrences - 1) per variable.
std::size_t repetitions(const Dnf& raw) {
  const Dnf terms = absorb(raw);
  const Split split = decompose(terms);
  switch (split.shape) {
    case Shape::Single:
      return 0;
    case Shape::Sum:
    case Shape::Product: {
      std::size_t sum = 0;
      for (const auto& part : split.parts) sum += repetitions(part);
      return sum;
    }
    case Shape::Residue:
      break;
  }
  std::map<int, std::size_t> occurrences;
  for (const auto& t : terms)
    for (int v : t) ++occurrences[v];
  std::size_t reps = 0;
  for (const auto& [_, count] : occurrences) reps += count - 1;
  return reps;
}

class Builder {
 public:
  Builder(const std::vector<std::string>& names, const OpinionMap* opinions)
      : names_(names), opinions_(opinions) {}

  Formula build(const Dnf& raw) {
    const Dnf terms = absorb(raw);
    if (terms.empty())
      throw Error(ErrorCode::Unsimplifiable, "formula has no satisfying term left");
    Split split = decompose(terms);
    switch (split.shape) {
      case Shape::Single:
        return conjunction(terms.front());
      case Shape::Sum:
      case Shape::Product: {
        // Atoms first, then compound parts, each ordered by smallest atom.
        std::sort(split.parts.begin(), split.parts.end(), [](const Dnf& a, const Dnf& b) {
          const auto key = [](const Dnf& d) {
            const bool atom = d.size() == 1 && d.front().size() == 1;
            return std::make_tuple(!atom, variables(d).front());
          };
          return key(a) < key(b);
        });
        std::vector<Formula> children;
        for (const auto& part : split.parts) children.push_back(build(part));
        return split.shape == Shape::Sum ? Formula::any_of(std::move(children))
                                         : Formula::all_of(std::move(children));
      }
      case Shape::Residue:
        break;
    }
    return build(delete_one(terms));
  }

  std::vector<TermDeletion> take_log() { return std::move(log_); }

 private:
  Formula conjunction(const Term& term) const {
    std::vector<Formula> atoms;
    for (int v : term) atoms.push_back(Formula::atom(names_[static_cast<std::size_t>(v)]));
    return Formula::all_of(std::move(atoms));
  }

  std::vector<std::string> term_names(const Term& term) const {
    std::vector<std::string> out;
    for (int v : term) out.push_back(names_[static_cast<std::size_t>(v)]);
    return out;
  }

  std::optional<double> term_certainty(const Term& term) const {
    if (!opinions_) return std::nullopt;
    std::optional<Opinion> acc;
    for (int v : term) {
      const auto it = opinions_->find(names_[static_cast<std::size_t>(v)]);
      if (it == opinions_->end()) return std::nullopt;
      try {
        acc = acc ? and_ct(*acc, it->second) : it->second;
      } catch (const Error&) {
        return std::nullopt;
      }
    }
    return acc->c;
  }

  Dnf delete_one(const Dnf& terms) {
    if (terms.size() < 2)
      throw Error(ErrorCode::Unsimplifiable, "deleting a term would empty the formula");
    std::size_t best = 0;
    std::tuple<std::size_t, double, std::vector<std::string>> best_key;
    TermDeletion best_entry;
    for (std::size_t i = 0; i < terms.size(); ++i) {
      Dnf rest;
      for (std::size_t j = 0; j < terms.size(); ++j)
        if (j != i) rest.push_back(terms[j]);
      TermDeletion entry{term_names(terms[i]), repetitions(rest), term_certainty(terms[i])};
      auto key = std::make_tuple(entry.repetitions_after,
                                 entry.certainty.value_or(std::numeric_limits<double>::infinity()),
                                 entry.term);
      if (i == 0 || key < best_key) {
        best = i;
        best_key = std::move(key);
        best_entry = std::move(entry);
      }
    }
    log_.push_back(std::move(best_entry));
    Dnf rest;
    for (std::size_t j = 0; j < terms.size(); ++j)
      if (j != best) rest.push_back(terms[j]);
    return rest;
  }

  const std::vector<std::string>& names_;
  const OpinionMap* opinions_;
  std::vector<TermDeletion> log_;
};

}  // namespace

ReadOnceResult to_read_once(const Formula& formula, const OpinionMap* opinions) {
  if (formula.is_read_once()) return ReadOnceResult{formula, false, {}};

  const auto names = formula.atoms();
  std::map<std::string, int, std::less<>> index;
  for (std::size_t i = 0; i < names.size(); ++i) index.emplace(names[i], static_cast<int>(i));

  Builder builder(names, opinions);
  Formula result = builder.build(to_dnf(formula, index));
  return ReadOnceResult{std::move(result), true, builder.take_log()};
}

}  // namespace vtrust
