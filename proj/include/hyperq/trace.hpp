// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperq/errors.hpp"

namespace hyperq {

/// One position of a trace: the set of propositions holding there, as a
/// bitmask relative to an Alphabet's index order.
using Letter = std::uint64_t;

inline constexpr std::size_t kMaxAlphabetSize = 64;
inline constexpr std::size_t kDefaultUniverseCap = 4096;

/// A finite set of proposition names, kept sorted so that letter bitmasks are
/// comparable across values built from the same names.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::optional<std::size_t> index_of(const std::string& name) const;
  bool contains(const std::string& name) const { return index_of(name).has_value(); }
  bool contains_all(const Alphabet& other) const;

  bool operator==(const Alphabet& other) const { return names_ == other.names_; }
  bool operator!=(const Alphabet& other) const { return !(*this == other); }
  bool operator<(const Alphabet& other) const { return names_ < other.names_; }

 private:
  std::vector<std::string> names_;
};

Letter make_letter(const Alphabet& ap, const std::vector<std::string>& props);
std::vector<std::string> letter_props(const Alphabet& ap, Letter l);

/// An ultimately periodic trace stem . loop^omega over an alphabet.
/// Stored canonically: the loop has minimal period and the stem is as short
/// as possible, so value-equal traces compare equal structurally.
class LassoTrace {
 public:
  LassoTrace(Alphabet ap, std::vector<Letter> stem, std::vector<Letter> loop);

  const Alphabet& alphabet() const { return ap_; }
  const std::vector<Letter>& stem() const { return stem_; }
  const std::vector<Letter>& loop() const { return loop_; }
  std::size_t stem_size() const { return stem_.size(); }
  std::size_t loop_size() const { return loop_.size(); }

  Letter at(std::size_t i) const {
    return i < stem_.size() ? stem_[i] : loop_[(i - stem_.size()) % loop_.size()];
  }
  bool has(std::size_t i, std::size_t prop_index) const {
    return (at(i) >> prop_index) & 1u;
  }
  bool has(std::size_t i, const std::string& prop) const;

  std::uint64_t hash() const { return hash_; }
  bool operator==(const LassoTrace& other) const;
  bool operator<(const LassoTrace& other) const;

  std::string to_string() const;

 private:
  Alphabet ap_;
  std::vector<Letter> stem_, loop_;
  std::uint64_t hash_ = 0;

  void canonicalize();
  void rehash();
};

/// Finite set of lasso traces over a common alphabet; members are kept
/// sorted and deduplicated under semantic (canonical-form) equality.
class TraceSet {
 public:
  explicit TraceSet(Alphabet ap) : ap_(std::move(ap)) { rehash(); }
  TraceSet(Alphabet ap, std::vector<LassoTrace> members);

  const Alphabet& alphabet() const { return ap_; }
  const std::vector<LassoTrace>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(const LassoTrace& t) const;

  std::uint64_t hash() const { return hash_; }
  bool operator==(const TraceSet& other) const;

 private:
  Alphabet ap_;
  std::vector<LassoTrace> members_;
  std::uint64_t hash_ = 0;

  void rehash();
};

struct UniverseParams {
  std::size_t stem_bound = 0;  // sigma
  std::size_t loop_bound = 1;  // lambda_b, >= 1
  UniverseParams() = default;
  UniverseParams(std::size_t stem, std::size_t loop) : stem_bound(stem), loop_bound(loop) {
    if (loop_bound < 1) throw Error("loop bound must be >= 1");
  }
};

/// Vertex-labeled transition system; every vertex needs an outgoing edge and
/// the initial set is nonempty.
class TransitionSystem {
 public:
  TransitionSystem(Alphabet ap, std::vector<std::string> vertices,
                   std::vector<std::pair<std::string, std::string>> edges,
                   std::vector<std::string> initial,
                   std::map<std::string, std::vector<std::string>> labels);

  const Alphabet& alphabet() const { return ap_; }
  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<std::pair<std::string, std::string>>& edges() const { return edges_; }
  const std::vector<std::string>& initial() const { return initial_; }
  Letter label(const std::string& vertex) const;
  const std::vector<std::size_t>& successors(std::size_t vertex_index) const {
    return succ_[vertex_index];
  }
  std::size_t vertex_index(const std::string& v) const;

 private:
  Alphabet ap_;
  std::vector<std::string> vertices_;
  std::vector<std::pair<std::string, std::string>> edges_;
  std::vector<std::string> initial_;
  std::vector<Letter> labels_;
  std::vector<std::vector<std::size_t>> succ_;
};

/// Pointwise restriction of a trace to a sub-alphabet.
LassoTrace projection(const LassoTrace& t, const Alphabet& sub);

/// Pointwise union of traces over disjoint alphabets.
LassoTrace pointwise_union(const LassoTrace& t, const LassoTrace& u);

TraceSet project_set(const TraceSet& ts, const Alphabet& sub);

/// Widen each member to a larger alphabet; new propositions never hold.
TraceSet extend_alphabet(const TraceSet& ts, const Alphabet& bigger);

/// T =_{ap'} T' : equality of the ap'-projections as sets.
bool equal_modulo(const TraceSet& a, const TraceSet& b, const Alphabet& sub);

/// T[q -> row]: every member's q truth values replaced by the given row.
TraceSet override_prop(const TraceSet& ts, const std::string& q, const LassoTrace& row);

/// All canonical lasso traces over ap with stem <= sigma and loop <= lambda_b.
TraceSet enumerate_universe(const Alphabet& ap, const UniverseParams& p,
                            std::size_t cap = kDefaultUniverseCap);

/// Bounded under-approximation of Tr(system): traces of all lasso-shaped
/// paths with stem <= sigma and cycle <= lambda_b.
TraceSet traces_of_system(const TransitionSystem& ts, const UniverseParams& p,
                          std::size_t cap = kDefaultUniverseCap);

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_string(const std::string& s);

}  // namespace hyperq
