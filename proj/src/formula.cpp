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

#include "vtrust/formula.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "numfmt.hpp"
#include "vtrust/error.hpp"

namespace vtrust {

using nlohmann::json;

Formula::Formula(Kind kind, std::string name, std::vector<Formula> children)
    : kind_(kind), name_(std::move(name)), children_(std::move(children)) {}

Formula Formula::atom(std::string name) {
  if (name.empty()) throw Error(ErrorCode::SchemaError, "atom name must not be empty");
  return Formula(Kind::Atom, std::move(name), {});
}

Formula Formula::gate(Kind kind, std::vector<Formula> children) {
  if (children.empty())
    throw Error(ErrorCode::SchemaError,
                std::string(kind == Kind::And ? "and" : "or") + " node has no children");
  std::vector<Formula> flat;
  flat.reserve(children.size());
  for (auto& child : children) {
    if (child.kind_ == kind) {
      for (auto& grandchild : child.children_) flat.push_back(std::move(grandchild));
    } else {
      flat.push_back(std::move(child));
    }
  }
  if (flat.size() == 1) return std::move(flat.front());
  return Formula(kind, {}, std::move(flat));
}

Formula Formula::all_of(std::vector<Formula> children) {
  return gate(Kind::And, std::move(children));
}

Formula Formula::any_of(std::vector<Formula> children) {
  return gate(Kind::Or, std::move(children));
}

std::vector<std::string> Formula::occurrences() const {
  std::vector<std::string> out;
  std::vector<const Formula*> stack{this};
  while (!stack.empty()) {
    const Formula* node = stack.back();
    stack.pop_back();
    if (node->is_atom()) {
      out.push_back(node->name_);
      continue;
    }
    for (auto it = node->children_.rbegin(); it != node->children_.rend(); ++it)
      stack.push_back(&*it);
  }
  return out;
}

std::vector<std::string> Formula::atoms() const {
  auto names = occurrences();
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  return names;
}

bool Formula::is_read_once() const {
  auto names = occurrences();
  std::sort(names.begin(), names.end());
  return std::adjacent_find(names.begin(), names.end()) == names.end();
}

std::string Formula::to_string() const {
  if (is_atom()) return name_;
  const char* op = kind_ == Kind::And ? " & " : " | ";
  std::string out;
  for (std::size_t i = 0; i < children_.size(); ++i) {
    if (i) out += op;
    const auto& child = children_[i];
    if (child.is_atom())
      out += child.to_string();
    else
      out += "(" + child.to_string() + ")";
  }
  return out;
}

Formula parse_formula(const json& node) {
  if (!node.is_object() || node.size() != 1)
    throw Error(ErrorCode::SchemaError,
                "formula node must be an object with exactly one of atom/and/or");
  const auto entry = node.begin();
  const std::string key = entry.key();
  const json& value = entry.value();
  if (key == "atom") {
    if (!value.is_string()) throw Error(ErrorCode::SchemaError, "atom must be a string");
    return Formula::atom(value.get<std::string>());
  }
  if (key != "and" && key != "or")
    throw Error(ErrorCode::SchemaError, "unknown formula node '" + key + "'");
  if (!value.is_array()) throw Error(ErrorCode::SchemaError, "'" + key + "' must be an array");
  std::vector<Formula> children;
  for (const auto& child : value) children.push_back(parse_formula(child));
  return key == "and" ? Formula::all_of(std::move(children))
                      : Formula::any_of(std::move(children));
}

json to_json(const Formula& formula) {
  if (formula.is_atom()) return json{{"atom", formula.name()}};
  json children = json::array();
  for (const auto& child : formula.children()) children.push_back(to_json(child));
  return json{{formula.kind() == Formula::Kind::And ? "and" : "or", std::move(children)}};
}

SystemSpec parse_spec(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "system spec must be an object");
  if (!doc.contains("name") || !doc["name"].is_string())
    throw Error(ErrorCode::SchemaError, "system spec needs a string 'name'");
  if (!doc.contains("formula"))
    throw Error(ErrorCode::SchemaError, "system spec needs a 'formula'");
  SystemSpec spec{doc["name"].get<std::string>(), parse_formula(doc["formula"]), std::nullopt};
  if (doc.contains("description")) {
    if (!doc["description"].is_string())
      throw Error(ErrorCode::SchemaError, "'description' must be a string");
    spec.description = doc["description"].get<std::string>();
  }
  return spec;
}

SystemSpec parse_spec(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::SchemaError, std::string("system spec is not JSON: ") + e.what());
  }
  return parse_spec(doc);
}

json to_json(const SystemSpec& spec) {
  json doc{{"name", spec.name}, {"formula", to_json(spec.formula)}};
  if (spec.description) doc["description"] = *spec.description;
  return doc;
}

std::vector<std::string> unknown_components(const Formula& formula,
                                            const OpinionMap& opinions) {
  std::vector<std::string> unknown;
  for (const auto& name : formula.atoms())
    if (!opinions.contains(name)) unknown.push_back(name);
  return unknown;
}

std::string TermDeletion::describe() const {
  std::string text = "deleted term (";
  for (std::size_t i = 0; i < term.size(); ++i) {
    if (i) text += " & ";
    text += term[i];
  }
  text += "): repetitions left " + std::to_string(repetitions_after);
  if (certainty) text += ", term certainty " + detail::format_number(detail::round_to(*certainty, 6));
  return text;
}

Opinion evaluate(const Formula& formula, const OpinionMap& opinions) {
  if (!formula.is_read_once())
    throw Error(ErrorCode::NotReadOnce,
                "formula repeats a component: " + formula.to_string());
  struct Eval {
    const OpinionMap& opinions;
    Opinion operator()(const Formula& node) const {
      if (node.is_atom()) {
        const auto it = opinions.find(node.name());
        if (it == opinions.end())
          throw Error(ErrorCode::MissingOpinion, "no opinion for component '" + node.name() + "'");
        return it->second;
      }
      const auto& kids = node.children();
      Opinion acc = (*this)(kids.front());
      for (std::size_t i = 1; i < kids.size(); ++i)
        acc = node.kind() == Formula::Kind::And ? and_ct(acc, (*this)(kids[i]))
                                                : or_ct(acc, (*this)(kids[i]));
      return acc;
    }
  };
  return Eval{opinions}(formula);
}

}  // namespace vtrust
