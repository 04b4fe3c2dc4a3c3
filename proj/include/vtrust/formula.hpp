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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "vtrust/opinion.hpp"

namespace vtrust {

using OpinionMap = std::map<std::string, Opinion, std::less<>>;

/// Monotone boolean formula over component atoms. An atom stands for
/// "this component is not vulnerable".
class Formula {
 public:
  enum class Kind { Atom, And, Or };

  static Formula atom(std::string name);
  /// Conjunction; nested conjunctions are flattened and a single child is
  /// returned as is. Throws SchemaError on an empty list.
  static Formula all_of(std::vector<Formula> children);
  /// Disjunction, same conventions as all_of.
  static Formula any_of(std::vector<Formula> children);

  Kind kind() const { return kind_; }
  bool is_atom() const { return kind_ == Kind::Atom; }
  const std::string& name() const { return name_; }
  const std::vector<Formula>& children() const { return children_; }

  /// Atom occurrences in left-to-right order, repetitions included.
  std::vector<std::string> occurrences() const;
  /// Distinct atom names, sorted.
  std::vector<std::string> atoms() const;
  /// True when every atom occurs at most once.
  bool is_read_once() const;

  /// Infix rendering with '&' and '|', e.g. "B & D & ((A & C) | (X & Y))".
  std::string to_string() const;

  friend bool operator==(const Formula&, const Formula&) = default;

 private:
  Formula(Kind kind, std::string name, std::vector<Formula> children);
  static Formula gate(Kind kind, std::vector<Formula> children);

  Kind kind_ = Kind::Atom;
  std::string name_;
  std::vector<Formula> children_;
};

/// A system under evaluation and its security-dependency structure.
struct SystemSpec {
  std::string name;
  Formula formula;
  std::optional<std::string> description;
};

/// node = {"atom": s} | {"and": [node, ...]} | {"or": [node, ...]}
/// Throws SchemaError.
Formula parse_formula(const nlohmann::json& node);
nlohmann::json to_json(const Formula& formula);

/// {"name": s, "formula": node, "description"?: s}. Throws SchemaError.
SystemSpec parse_spec(const nlohmann::json& doc);
SystemSpec parse_spec(std::string_view json_text);
inline SystemSpec parse_spec(const std::string& json_text) {
  return parse_spec(std::string_view(json_text));
}
inline SystemSpec parse_spec(const char* json_text) {
  return parse_spec(std::string_view(json_text));
}
nlohmann::json to_json(const SystemSpec& spec);

/// Atoms of `formula` that have no entry in `opinions`.
std::vector<std::string> unknown_components(const Formula& formula,
                                            const OpinionMap& opinions);

/// One term removed from a disjunctive normal form.
struct TermDeletion {
  std::vector<std::string> term;
  /// Variable repetitions left in the simplified residue.
  std::size_t repetitions_after = 0;
  /// and_ct certainty of the term, when the opinions were available.
  std::optional<double> certainty;

  std::string describe() const;
};

struct ReadOnceResult {
  Formula formula;
  /// True when the input had to be rewritten.
  bool rewritten = false;
  /// Terms dropped to remove repetitions; empty when factoring sufficed.
  std::vector<TermDeletion> deletions;
};

/// Brings a formula into read-once form.
///
/// A read-once input is returned untouched. Otherwise the formula is
/// expanded to an absorbed disjunctive normal form and factored into
/// variable-disjoint sums and products. A residue that cannot be factored
/// loses terms one at a time: the deletion leaving the fewest variable
/// repetitions wins, ties going to the term with the lowest and_ct
/// certainty (when `opinions` are given), then to the lexicographically
/// smallest term. Deleting terms only makes the formula harder to satisfy.
ReadOnceResult to_read_once(const Formula& formula, const OpinionMap* opinions = nullptr);

/// Bottom-up evaluation with and_ct / or_ct. Throws NotReadOnce or
/// MissingOpinion.
Opinion evaluate(const Formula& formula, const OpinionMap& opinions);

}  // namespace vtrust
