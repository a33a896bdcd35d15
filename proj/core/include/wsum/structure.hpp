#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "wsum/rational.hpp"

namespace wsum {

enum class SymbolKind { Relation, WeightFunction };

struct SymbolInfo {
  SymbolKind kind;
  int arity;  // >= 0; nullary relations serve as boolean answer symbols
  bool operator==(const SymbolInfo&) const = default;
};

// A finite set of relation and weight-function symbols with arities.
// Symbol names are unique across both kinds.
class Vocabulary {
 public:
  void add(const std::string& name, SymbolKind kind, int arity);
  bool contains(const std::string& name) const { return symbols_.count(name) > 0; }
  const SymbolInfo& at(const std::string& name) const;
  const SymbolInfo* find(const std::string& name) const;
  std::size_t size() const { return symbols_.size(); }
  bool empty() const { return symbols_.empty(); }

  // Union; throws ValidationError on a name clash with a different signature.
  void merge(const Vocabulary& other);
  bool disjoint_with(const Vocabulary& other) const;

  const std::map<std::string, SymbolInfo>& symbols() const { return symbols_; }
  bool operator==(const Vocabulary&) const = default;

 private:
  std::map<std::string, SymbolInfo> symbols_;
};

// Element tuples are stored as indices into the structure's universe.
using Tuple = std::vector<std::uint32_t>;

struct TupleHash {
  std::size_t operator()(const Tuple& t) const {
    std::size_t h = t.size();
    for (auto v : t) h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

using TupleSet = std::unordered_set<Tuple, TupleHash>;
// Sparse: tuples absent from the map read as bottom, so every weight
// function is total over the universe.
using WeightTable = std::unordered_map<Tuple, LiftedRational, TupleHash>;

// Finite universe of named elements plus interpretations for the symbols
// of a vocabulary. The universe order is the listing order in the input
// and is stable; it fixes iteration order for logs and serialization.
class WeightedStructure {
 public:
  WeightedStructure() = default;
  WeightedStructure(std::vector<std::string> universe, Vocabulary vocab);

  const std::vector<std::string>& universe() const { return universe_; }
  std::size_t universe_size() const { return universe_.size(); }
  const Vocabulary& vocabulary() const { return vocab_; }

  std::uint32_t element_index(const std::string& id) const;
  const std::string& element_name(std::uint32_t idx) const { return universe_.at(idx); }
  bool has_element(const std::string& id) const { return elem_index_.count(id) > 0; }

  // Expands the vocabulary with a fresh symbol, initialized empty / all-bottom.
  void declare(const std::string& name, SymbolKind kind, int arity);

  bool rel_contains(const std::string& name, const Tuple& t) const;
  void rel_insert(const std::string& name, const Tuple& t);
  const TupleSet& relation(const std::string& name) const;

  // Total: returns bottom for entries never set.
  const LiftedRational& weight(const std::string& name, const Tuple& t) const;
  void set_weight(const std::string& name, const Tuple& t, const LiftedRational& w);
  const WeightTable& weight_table(const std::string& name) const;

  // Interpretation equality for the named symbols (used by fixpoint loops).
  bool symbols_equal(const WeightedStructure& other, const std::vector<std::string>& names) const;

  // Deterministic orderings for output.
  std::vector<Tuple> sorted_tuples(const std::string& relation) const;
  std::vector<std::pair<Tuple, LiftedRational>> sorted_weights(const std::string& fn) const;

 private:
  std::vector<std::string> universe_;
  std::unordered_map<std::string, std::uint32_t> elem_index_;
  Vocabulary vocab_;
  std::map<std::string, TupleSet> relations_;
  std::map<std::string, WeightTable> weights_;
};

// A finite binding of variable names to universe elements.
struct Assignment {
  std::map<std::string, std::string> bindings;
};

// JSON serialization per the documented file format. Omitted weight
// entries default to bottom; rationals serialize as "p/q" or integer
// strings; bottom serializes as "bot".
WeightedStructure structure_from_json(const std::string& json_text);
std::string structure_to_json(const WeightedStructure& s);

}  // namespace wsum
