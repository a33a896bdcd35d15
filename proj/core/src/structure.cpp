#include "wsum/structure.hpp"

#include <algorithm>

#include <json.hpp>

#include "wsum/errors.hpp"

namespace wsum {

void Vocabulary::add(const std::string& name, SymbolKind kind, int arity) {
  if (arity < 0) throw ValidationError("negative arity for symbol " + name);
  auto [it, inserted] = symbols_.emplace(name, SymbolInfo{kind, arity});
  if (!inserted) throw ValidationError("duplicate symbol: " + name);
}

const SymbolInfo& Vocabulary::at(const std::string& name) const {
  auto it = symbols_.find(name);
  if (it == symbols_.end()) throw UnknownSymbol(name);
  return it->second;
}

const SymbolInfo* Vocabulary::find(const std::string& name) const {
  auto it = symbols_.find(name);
  return it == symbols_.end() ? nullptr : &it->second;
}

void Vocabulary::merge(const Vocabulary& other) {
  for (const auto& [name, info] : other.symbols_) {
    auto it = symbols_.find(name);
    if (it == symbols_.end()) {
      symbols_.emplace(name, info);
    } else if (!(it->second == info)) {
      throw ValidationError("symbol " + name + " redeclared with a different signature");
    }
  }
}

bool Vocabulary::disjoint_with(const Vocabulary& other) const {
  for (const auto& [name, info] : other.symbols()) {
    if (contains(name)) return false;
  }
  return true;
}

WeightedStructure::WeightedStructure(std::vector<std::string> universe, Vocabulary vocab)
    : universe_(std::move(universe)), vocab_(std::move(vocab)) {
  for (std::uint32_t i = 0; i < universe_.size(); ++i) {
    auto [it, inserted] = elem_index_.emplace(universe_[i], i);
    if (!inserted) throw ValidationError("duplicate universe element: " + universe_[i]);
  }
  for (const auto& [name, info] : vocab_.symbols()) {
    if (info.kind == SymbolKind::Relation)
      relations_[name];
    else
      weights_[name];
  }
}

std::uint32_t WeightedStructure::element_index(const std::string& id) const {
  auto it = elem_index_.find(id);
  if (it == elem_index_.end()) throw ValidationError("element not in universe: " + id);
  return it->second;
}

void WeightedStructure::declare(const std::string& name, SymbolKind kind, int arity) {
  vocab_.add(name, kind, arity);
  if (kind == SymbolKind::Relation)
    relations_[name];
  else
    weights_[name];
}

bool WeightedStructure::rel_contains(const std::string& name, const Tuple& t) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw UnknownSymbol(name);
  return it->second.count(t) > 0;
}

void WeightedStructure::rel_insert(const std::string& name, const Tuple& t) {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw UnknownSymbol(name);
  it->second.insert(t);
}

const TupleSet& WeightedStructure::relation(const std::string& name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) throw UnknownSymbol(name);
  return it->second;
}

const LiftedRational& WeightedStructure::weight(const std::string& name, const Tuple& t) const {
  static const LiftedRational kBottom;
  auto it = weights_.find(name);
  if (it == weights_.end()) throw UnknownSymbol(name);
  auto jt = it->second.find(t);
  return jt == it->second.end() ? kBottom : jt->second;
}

void WeightedStructure::set_weight(const std::string& name, const Tuple& t,
                                   const LiftedRational& w) {
  auto it = weights_.find(name);
  if (it == weights_.end()) throw UnknownSymbol(name);
  if (w.is_bottom())
    it->second.erase(t);
  else
    it->second[t] = w;
}

const WeightTable& WeightedStructure::weight_table(const std::string& name) const {
  auto it = weights_.find(name);
  if (it == weights_.end()) throw UnknownSymbol(name);
  return it->second;
}

bool WeightedStructure::symbols_equal(const WeightedStructure& other,
                                      const std::vector<std::string>& names) const {
  for (const auto& name : names) {
    const auto& info = vocab_.at(name);
    if (info.kind == SymbolKind::Relation) {
      if (relation(name) != other.relation(name)) return false;
    } else {
      if (weight_table(name) != other.weight_table(name)) return false;
    }
  }
  return true;
}

std::vector<Tuple> WeightedStructure::sorted_tuples(const std::string& rel) const {
  const auto& set = relation(rel);
  std::vector<Tuple> out(set.begin(), set.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<Tuple, LiftedRational>> WeightedStructure::sorted_weights(
    const std::string& fn) const {
  const auto& table = weight_table(fn);
  std::vector<std::pair<Tuple, LiftedRational>> out(table.begin(), table.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

using nlohmann::json;

int read_arity(const json& j, const std::string& name) {
  if (!j.contains("arity") || !j["arity"].is_number_unsigned())
    throw ValidationError("missing or invalid arity for symbol " + name);
  return j["arity"].get<int>();
}

}  // namespace

WeightedStructure structure_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  if (!j.contains("universe") || !j["universe"].is_array())
    throw ValidationError("structure file missing \"universe\" array");

  std::vector<std::string> universe;
  for (const auto& e : j["universe"]) universe.push_back(e.get<std::string>());

  Vocabulary vocab;
  if (j.contains("relations"))
    for (const auto& [name, body] : j["relations"].items())
      vocab.add(name, SymbolKind::Relation, read_arity(body, name));
  if (j.contains("weights"))
    for (const auto& [name, body] : j["weights"].items())
      vocab.add(name, SymbolKind::WeightFunction, read_arity(body, name));

  WeightedStructure s(std::move(universe), std::move(vocab));

  auto read_tuple = [&s](const json& arr, int arity, const std::string& sym) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != arity)
      throw ValidationError("tuple of wrong arity for symbol " + sym);
    Tuple t;
    for (const auto& e : arr) t.push_back(s.element_index(e.get<std::string>()));
    return t;
  };

  if (j.contains("relations")) {
    for (const auto& [name, body] : j["relations"].items()) {
      int arity = s.vocabulary().at(name).arity;
      if (body.contains("tuples"))
        for (const auto& arr : body["tuples"]) s.rel_insert(name, read_tuple(arr, arity, name));
    }
  }
  if (j.contains("weights")) {
    for (const auto& [name, body] : j["weights"].items()) {
      int arity = s.vocabulary().at(name).arity;
      if (!body.contains("entries")) continue;
      for (const auto& entry : body["entries"]) {
        if (!entry.contains("tuple") || !entry.contains("value"))
          throw ValidationError("weight entry for " + name + " needs \"tuple\" and \"value\"");
        Tuple t = read_tuple(entry["tuple"], arity, name);
        s.set_weight(name, t, LiftedRational::parse(entry["value"].get<std::string>()));
      }
    }
  }
  return s;
}

std::string structure_to_json(const WeightedStructure& s) {
  json j;
  j["universe"] = s.universe();
  json rels = json::object();
  json wts = json::object();
  for (const auto& [name, info] : s.vocabulary().symbols()) {
    if (info.kind == SymbolKind::Relation) {
      json tuples = json::array();
      for (const auto& t : s.sorted_tuples(name)) {
        json arr = json::array();
        for (auto idx : t) arr.push_back(s.element_name(idx));
        tuples.push_back(arr);
      }
      rels[name] = {{"arity", info.arity}, {"tuples", tuples}};
    } else {
      json entries = json::array();
      for (const auto& [t, w] : s.sorted_weights(name)) {
        json arr = json::array();
        for (auto idx : t) arr.push_back(s.element_name(idx));
        entries.push_back({{"tuple", arr}, {"value", w.str()}});
      }
      wts[name] = {{"arity", info.arity}, {"entries", entries}};
    }
  }
  j["relations"] = rels;
  j["weights"] = wts;
  return j.dump(2) + "\n";
}

}  // namespace wsum
