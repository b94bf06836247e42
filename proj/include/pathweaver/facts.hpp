// Copyright 2026 The Pathweaver Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// The `.lpm` predicate fact format:
//
//   file    := { fact | comment }
//   fact    := ident "(" arg { "," arg } ")" "."
//   arg     := atom | integer
//   atom    := word { word }          (words of [a-z0-9_+-], single-spaced)
//            | '"' chars '"'
//   comment := "%" to end of line
//
// Unquoted atoms are case-folded to lowercase; quoted atoms keep their case
// and only get whitespace normalization. Predicate names are matched
// case-insensitively. A word made only of digits is an integer and may not
// appear inside a multi-word atom.

#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pathweaver/error.hpp"
#include "pathweaver/model.hpp"

namespace pathweaver {

using FactArg = std::variant<std::string, std::uint32_t>;

struct Fact {
  std::string predicate;  // canonical lowercase
  std::vector<FactArg> args;
  int line = 0;
  int column = 0;

  const std::string& atom(std::size_t i) const { return std::get<std::string>(args.at(i)); }
  std::uint32_t integer(std::size_t i) const { return std::get<std::uint32_t>(args.at(i)); }
};

enum class ParseErrorCode : std::uint8_t {
  SyntaxError,
  UnknownPredicate,
  ArityMismatch,
  TypeMismatch,
  DerivedPredicate,
  SelectFactInModelFile,
};

inline std::string_view to_string(ParseErrorCode code) {
  switch (code) {
    case ParseErrorCode::SyntaxError: return "SyntaxError";
    case ParseErrorCode::UnknownPredicate: return "UnknownPredicate";
    case ParseErrorCode::ArityMismatch: return "ArityMismatch";
    case ParseErrorCode::TypeMismatch: return "TypeMismatch";
    case ParseErrorCode::DerivedPredicate: return "DerivedPredicate";
    case ParseErrorCode::SelectFactInModelFile: return "SelectFactInModelFile";
  }
  return "?";
}

struct ParseError {
  ParseErrorCode code;
  int line = 0;
  int column = 0;
  std::string message;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

struct ParseResult {
  std::vector<Fact> facts;
  std::vector<ParseError> errors;
};

enum class ParseMode { ModelOnly, WithSelections };

namespace detail {

struct PredicateSpec {
  std::string_view name;
  std::size_t arity;
};

inline constexpr PredicateSpec kPredicates[] = {
    {"type", 2},
    {"choiceof", 2},
    {"max", 2},
    {"min", 2},
    {"common", 2},
    {"requires_option_option", 2},
    {"excludes_option_option", 2},
    {"requires_option_field", 2},
    {"excludes_option_field", 2},
    {"requires_field_field", 2},
    {"excludes_field_field", 2},
    {"select", 1},
    {"notselect", 1},
};

inline char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

inline bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c == '+' || c == '-';
}

inline bool is_ident_start(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

inline bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

struct SyntaxFailure {
  int line;
  int column;
  std::string message;
};

class FactScanner {
 public:
  FactScanner(std::string_view text, ParseMode mode) : text_(text), mode_(mode) {}

  ParseResult run() {
    ParseResult result;
    while (true) {
      skip_blank();
      if (at_end()) break;
      int line = line_, column = column_;
      Fact fact;
      fact.line = line;
      fact.column = column;
      if (auto failure = parse_fact(fact)) {
        result.errors.push_back({ParseErrorCode::SyntaxError, failure->line, failure->column,
                                 failure->message});
        recover();
        continue;
      }
      if (auto err = check(fact)) {
        result.errors.push_back(*err);
        continue;
      }
      result.facts.push_back(std::move(fact));
    }
    return result;
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }

  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (!at_end()) {
      char c = peek();
      if (is_space(c)) {
        advance();
      } else if (c == '%') {
        while (!at_end() && peek() != '\n') advance();
      } else {
        break;
      }
    }
  }

  SyntaxFailure fail_here(std::string message) const {
    return {line_, column_, std::move(message)};
  }

  std::string describe_here() const {
    if (at_end()) return "end of input";
    return "'" + std::string(1, peek()) + "'";
  }

  // Skips to just past the next '.' outside strings and comments.
  void recover() {
    while (!at_end()) {
      char c = peek();
      if (c == '%') {
        while (!at_end() && peek() != '\n') advance();
        continue;
      }
      if (c == '"') {
        advance();
        while (!at_end() && peek() != '"') {
          if (peek() == '\\') advance();
          advance();
        }
        advance();
        continue;
      }
      advance();
      if (c == '.') return;
    }
  }

  std::optional<SyntaxFailure> parse_fact(Fact& fact) {
    if (!is_ident_start(peek())) {
      return fail_here("expected a predicate name, found " + describe_here());
    }
    std::string name;
    while (!at_end() && (is_word_char(peek()))) {
      name.push_back(ascii_lower(peek()));
      advance();
    }
    fact.predicate = std::move(name);
    skip_blank();
    if (peek() != '(') return fail_here("expected '(' after '" + fact.predicate + "', found " + describe_here());
    advance();
    while (true) {
      skip_blank();
      FactArg arg;
      if (auto failure = parse_arg(arg)) return failure;
      fact.args.push_back(std::move(arg));
      skip_blank();
      if (peek() == ',') {
        advance();
        continue;
      }
      if (peek() == ')') {
        advance();
        break;
      }
      return fail_here("expected ',' or ')', found " + describe_here());
    }
    skip_blank();
    if (peek() != '.') return fail_here("expected '.' after fact, found " + describe_here());
    advance();
    return std::nullopt;
  }

  std::optional<SyntaxFailure> parse_arg(FactArg& out) {
    if (peek() == '"') {
      int line = line_, column = column_;
      advance();
      std::string raw;
      while (true) {
        if (at_end()) return SyntaxFailure{line, column, "unterminated quoted atom"};
        char c = peek();
        if (c == '"') {
          advance();
          break;
        }
        if (c == '\\') {
          advance();
          if (at_end()) return SyntaxFailure{line, column, "unterminated quoted atom"};
          c = peek();
        }
        raw.push_back(c);
        advance();
      }
      std::string norm = ItemId::normalize(raw);
      if (norm.empty()) return SyntaxFailure{line, column, "quoted atom is empty"};
      out = std::move(norm);
      return std::nullopt;
    }
    if (!is_word_char(peek())) return fail_here("expected an argument, found " + describe_here());

    std::string atom;
    bool first = true;
    bool integer_word = false;
    while (true) {
      int line = line_, column = column_;
      std::string word;
      while (!at_end() && is_word_char(peek())) {
        word.push_back(ascii_lower(peek()));
        advance();
      }
      if (!first && (integer_word || all_digits(word))) {
        return SyntaxFailure{line, column, "expected ',' before '" + word + "'"};
      }
      integer_word = all_digits(word);
      if (!first) atom.push_back(' ');
      atom += word;
      first = false;
      // Words continue across plain whitespace only; a comment ends the atom.
      std::size_t save_pos = pos_;
      int save_line = line_, save_col = column_;
      while (!at_end() && is_space(peek())) advance();
      if (!is_word_char(peek())) {
        pos_ = save_pos;
        line_ = save_line;
        column_ = save_col;
        break;
      }
    }
    if (integer_word) {
      std::uint32_t value = 0;
      auto [ptr, ec] = std::from_chars(atom.data(), atom.data() + atom.size(), value);
      if (ec != std::errc() || ptr != atom.data() + atom.size()) {
        return fail_here("integer '" + atom + "' is out of range");
      }
      out = value;
    } else {
      out = std::move(atom);
    }
    return std::nullopt;
  }

  std::optional<ParseError> check(const Fact& fact) const {
    auto error = [&fact](ParseErrorCode code, std::string msg) {
      return ParseError{code, fact.line, fact.column, std::move(msg)};
    };
    if (fact.predicate == "no-selected" || fact.predicate == "no_selected") {
      return error(ParseErrorCode::DerivedPredicate,
                   "'" + fact.predicate +
                       "' is derived from selections at run time and cannot appear in a file");
    }
    const PredicateSpec* spec = nullptr;
    for (const auto& p : kPredicates) {
      if (p.name == fact.predicate) spec = &p;
    }
    if (!spec) return error(ParseErrorCode::UnknownPredicate, "unknown predicate '" + fact.predicate + "'");
    if (fact.args.size() != spec->arity) {
      return error(ParseErrorCode::ArityMismatch,
                   "'" + fact.predicate + "' takes " + std::to_string(spec->arity) +
                       " argument(s), got " + std::to_string(fact.args.size()));
    }
    bool numeric_second = fact.predicate == "min" || fact.predicate == "max";
    for (std::size_t i = 0; i < fact.args.size(); ++i) {
      bool want_int = numeric_second && i == 1;
      bool is_int = std::holds_alternative<std::uint32_t>(fact.args[i]);
      if (want_int != is_int) {
        return error(ParseErrorCode::TypeMismatch,
                     "argument " + std::to_string(i + 1) + " of '" + fact.predicate + "' must be " +
                         (want_int ? "an integer" : "an atom"));
      }
    }
    if (fact.predicate == "type") {
      const auto& k = fact.atom(1);
      if (k != "field" && k != "option" && k != "study_area") {
        return error(ParseErrorCode::TypeMismatch,
                     "type must be 'field', 'option' or 'study_area', got '" + k + "'");
      }
    }
    if (fact.predicate == "common") {
      const auto& v = fact.atom(1);
      if (v != "yes" && v != "no") {
        return error(ParseErrorCode::TypeMismatch, "common takes 'yes' or 'no', got '" + v + "'");
      }
    }
    if ((fact.predicate == "select" || fact.predicate == "notselect") &&
        mode_ == ParseMode::ModelOnly) {
      return error(ParseErrorCode::SelectFactInModelFile,
                   "'" + fact.predicate + "' records a user choice and is not allowed in a model file");
    }
    return std::nullopt;
  }

  std::string_view text_;
  ParseMode mode_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

inline std::optional<ConstraintKind> constraint_kind_of(std::string_view predicate) {
  for (ConstraintKind k : kAllConstraintKinds) {
    if (predicate_name(k) == predicate) return k;
  }
  return std::nullopt;
}

}  // namespace detail

/// Scans `text` into facts. Never throws on malformed input: each malformed
/// region yields one error and scanning resumes after the next '.'.
inline ParseResult parse_facts(std::string_view text, ParseMode mode = ParseMode::ModelOnly) {
  return detail::FactScanner(text, mode).run();
}

struct AssembledModel {
  Model model;
  std::vector<ModelDefect> defects;
};

/// Folds model facts into a Model and reports every defect, including the
/// ones found by validate_model. Fact order does not affect the result.
inline AssembledModel assemble_model(const std::vector<Fact>& facts) {
  std::vector<ModelDefect> defects;
  auto add = [&defects](DefectCode code, std::vector<ItemId> ids, std::string msg) {
    defects.push_back({code, std::move(ids), std::move(msg)});
  };

  struct Draft {
    std::size_t order = 0;
    bool typed_field = false;
    bool typed_option = false;
    std::set<ItemId> parents;
    std::set<std::uint32_t> mins, maxes;
    std::set<bool> common;
  };
  std::map<ItemId, Draft> drafts;
  std::vector<std::pair<ItemId, ItemId>> choice_order;  // (field, option) in fact order
  std::set<ItemId> areas;
  std::set<Constraint> constraints;
  // min/max/common facts can name items declared later, so they are applied
  // after every item is known.
  std::vector<const Fact*> attributes;

  auto touch = [&drafts](const ItemId& id) -> Draft& {
    auto [it, inserted] = drafts.try_emplace(id);
    if (inserted) it->second.order = drafts.size() - 1;
    return it->second;
  };

  for (const Fact& f : facts) {
    if (f.predicate == "select" || f.predicate == "notselect") {
      throw Error(ErrorCode::InvalidModel,
                  "selection fact '" + f.predicate + "' cannot be assembled into a model");
    }
    if (f.predicate == "type") {
      ItemId id(f.atom(0));
      const auto& k = f.atom(1);
      if (k == "study_area") {
        areas.insert(id);
      } else if (k == "field") {
        touch(id).typed_field = true;
      } else {
        touch(id).typed_option = true;
      }
    } else if (f.predicate == "choiceof") {
      ItemId field(f.atom(0)), option(f.atom(1));
      touch(field);
      touch(option).parents.insert(field);
      choice_order.emplace_back(field, option);
    } else if (auto kind = detail::constraint_kind_of(f.predicate)) {
      constraints.insert({*kind, ItemId(f.atom(0)), ItemId(f.atom(1))});
    } else {
      attributes.push_back(&f);
    }
  }

  for (const Fact* f : attributes) {
    ItemId id(f->atom(0));
    auto it = drafts.find(id);
    if (it == drafts.end()) {
      add(DefectCode::UnknownItem, {id},
          f->predicate + " refers to undeclared item '" + id.str() + "'");
      continue;
    }
    if (f->predicate == "min") it->second.mins.insert(f->integer(1));
    if (f->predicate == "max") it->second.maxes.insert(f->integer(1));
    if (f->predicate == "common") it->second.common.insert(f->atom(1) == "yes");
  }

  // Each option keeps its smallest parent id; extra parents are defects.
  std::map<ItemId, ItemId> parent_of;
  for (const auto& [id, d] : drafts) {
    if (d.parents.empty()) continue;
    parent_of.emplace(id, *d.parents.begin());
    if (d.parents.size() > 1) {
      std::vector<ItemId> ids{id};
      ids.insert(ids.end(), d.parents.begin(), d.parents.end());
      add(DefectCode::DuplicateParent, std::move(ids),
          "option '" + id.str() + "' is assigned to " + std::to_string(d.parents.size()) +
              " fields");
    }
  }
  std::set<ItemId> has_children;
  for (const auto& [field, option] : choice_order) {
    if (parent_of.at(option) == field) has_children.insert(field);
  }

  std::vector<std::pair<std::size_t, ItemId>> ordered;
  for (const auto& [id, d] : drafts) ordered.emplace_back(d.order, id);
  std::sort(ordered.begin(), ordered.end());

  // Conflicting common facts resolve to non-common.
  auto common_of = [&](const ItemId& id) {
    const auto& c = drafts.at(id).common;
    if (c.size() > 1) return false;
    return !c.empty() && *c.begin();
  };

  std::vector<Item> items;
  std::set<std::pair<ItemId, ItemId>> seen_choice;
  std::map<ItemId, std::vector<ItemId>> children;
  for (const auto& [field, option] : choice_order) {
    if (parent_of.at(option) == field && seen_choice.insert({field, option}).second) {
      children[field].push_back(option);
    }
  }

  for (const auto& [order, id] : ordered) {
    const Draft& d = drafts.at(id);
    bool field = d.typed_field || has_children.count(id) > 0;
    bool option = d.typed_option || parent_of.count(id) > 0;
    Item item;
    item.id = id;
    item.kind = field && option ? ItemKind::FieldAndOption
                : option        ? ItemKind::Option
                                : ItemKind::Field;
    if (d.common.size() > 1) {
      add(DefectCode::ConflictingFact, {id}, "conflicting common facts for '" + id.str() + "'");
    }
    item.common = common_of(id);
    if (auto p = parent_of.find(id); p != parent_of.end()) item.parent = p->second;

    if (d.mins.size() > 1) {
      add(DefectCode::ConflictingFact, {id}, "conflicting min facts for '" + id.str() + "'");
    }
    if (d.maxes.size() > 1) {
      add(DefectCode::ConflictingFact, {id}, "conflicting max facts for '" + id.str() + "'");
    }
    if (is_field(item.kind)) {
      std::uint32_t available = 0;
      for (const ItemId& c : children[id]) {
        if (!common_of(c)) ++available;
      }
      Cardinality card;
      card.max = d.maxes.empty() ? available : *d.maxes.begin();
      card.min = d.mins.empty() ? std::min<std::uint32_t>(1, card.max) : *d.mins.begin();
      item.cardinality = card;
    } else if (!d.mins.empty() || !d.maxes.empty()) {
      add(DefectCode::NotAField, {id}, "min/max given for '" + id.str() + "', which is not a field");
    }
    items.push_back(std::move(item));
  }

  std::optional<ItemId> area;
  if (areas.empty()) {
    add(DefectCode::MissingRoot, {}, "no study area declared (type(<name>, study_area).)");
  } else {
    area = *areas.begin();
    if (areas.size() > 1) {
      add(DefectCode::ConflictingFact, std::vector<ItemId>(areas.begin(), areas.end()),
          "more than one study area declared");
    }
  }

  Model model(std::move(area), std::move(items),
              std::vector<Constraint>(constraints.begin(), constraints.end()));
  auto structural = validate_model(model);
  defects.insert(defects.end(), structural.begin(), structural.end());
  sort_defects(defects);
  return {std::move(model), std::move(defects)};
}

namespace detail {

inline bool needs_quotes(const std::string& s) {
  std::size_t start = 0;
  while (start <= s.size()) {
    std::size_t end = s.find(' ', start);
    if (end == std::string::npos) end = s.size();
    std::string_view word(s.data() + start, end - start);
    if (word.empty() || all_digits(word)) return true;
    for (char c : word) {
      if (!is_word_char(c) || (c >= 'A' && c <= 'Z')) return true;
    }
    start = end + 1;
  }
  return false;
}

inline std::string quote_atom(const std::string& s) {
  if (!needs_quotes(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace detail

/// Canonical text of a defect-free model: blocks of type, choiceof, min, max,
/// common and constraint facts, each sorted by id.
inline std::string serialize_model(const Model& model) {
  if (!validate_model(model).empty() || !model.study_area()) {
    throw Error(ErrorCode::InvalidModel, "cannot serialize a model with defects");
  }
  using detail::quote_atom;
  std::vector<const Item*> items;
  for (const auto& it : model.items()) items.push_back(&it);
  std::sort(items.begin(), items.end(),
            [](const Item* a, const Item* b) { return a->id < b->id; });

  std::ostringstream out;
  out << "type(" << quote_atom(model.study_area()->str()) << ", study_area).\n";
  for (const Item* it : items) {
    if (is_field(it->kind)) out << "type(" << quote_atom(it->id.str()) << ", field).\n";
    if (is_option(it->kind)) out << "type(" << quote_atom(it->id.str()) << ", option).\n";
  }

  std::vector<std::pair<ItemId, ItemId>> choices;
  for (const Item* it : items) {
    if (it->parent) choices.emplace_back(*it->parent, it->id);
  }
  std::sort(choices.begin(), choices.end());
  out << "\n";
  for (const auto& [f, o] : choices) {
    out << "choiceof(" << quote_atom(f.str()) << ", " << quote_atom(o.str()) << ").\n";
  }

  out << "\n";
  for (const Item* it : items) {
    if (it->cardinality) out << "min(" << quote_atom(it->id.str()) << ", " << it->cardinality->min << ").\n";
  }
  out << "\n";
  for (const Item* it : items) {
    if (it->cardinality) out << "max(" << quote_atom(it->id.str()) << ", " << it->cardinality->max << ").\n";
  }
  out << "\n";
  for (const Item* it : items) {
    out << "common(" << quote_atom(it->id.str()) << ", " << (it->common ? "yes" : "no") << ").\n";
  }

  std::vector<Constraint> constraints = model.constraints();
  std::sort(constraints.begin(), constraints.end());
  constraints.erase(std::unique(constraints.begin(), constraints.end()), constraints.end());
  if (!constraints.empty()) out << "\n";
  for (const auto& c : constraints) {
    out << predicate_name(c.kind) << "(" << quote_atom(c.source.str()) << ", "
        << quote_atom(c.target.str()) << ").\n";
  }
  return out.str();
}

/// Parses and assembles model text in one step. Parse errors are returned
/// alongside the assembled result from the facts that did parse.
struct LoadedModel {
  Model model;
  std::vector<ParseError> parse_errors;
  std::vector<ModelDefect> defects;

  bool ok() const { return parse_errors.empty() && defects.empty(); }
};

inline LoadedModel load_model_text(std::string_view text) {
  auto parsed = parse_facts(text, ParseMode::ModelOnly);
  auto assembled = assemble_model(parsed.facts);
  return {std::move(assembled.model), std::move(parsed.errors), std::move(assembled.defects)};
}

}  // namespace pathweaver
