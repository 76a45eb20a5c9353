// SPDX-License-Identifier: Apache-2.0
#include "hyperq/trace.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace hyperq {

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
  // boost-style mix
  seed ^= value + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4);
  return seed;
}

std::uint64_t hash_string(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Alphabet::Alphabet(std::vector<std::string> names) : names_(std::move(names)) {
  for (const auto& n : names_) {
    if (n.empty()) throw AlphabetError("empty proposition name");
  }
  std::sort(names_.begin(), names_.end());
  names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
  if (names_.size() > kMaxAlphabetSize) {
    throw AlphabetError("alphabet exceeds " + std::to_string(kMaxAlphabetSize) +
                        " propositions");
  }
}

std::optional<std::size_t> Alphabet::index_of(const std::string& name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it != names_.end() && *it == name) {
    return static_cast<std::size_t>(it - names_.begin());
  }
  return std::nullopt;
}

bool Alphabet::contains_all(const Alphabet& other) const {
  return std::includes(names_.begin(), names_.end(), other.names_.begin(),
                       other.names_.end());
}

Letter make_letter(const Alphabet& ap, const std::vector<std::string>& props) {
  Letter l = 0;
  for (const auto& p : props) {
    auto idx = ap.index_of(p);
    if (!idx) throw AlphabetError("proposition '" + p + "' not in alphabet");
    l |= Letter(1) << *idx;
  }
  return l;
}

std::vector<std::string> letter_props(const Alphabet& ap, Letter l) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < ap.size(); ++i) {
    if ((l >> i) & 1u) out.push_back(ap.name(i));
  }
  return out;
}

LassoTrace::LassoTrace(Alphabet ap, std::vector<Letter> stem, std::vector<Letter> loop)
    : ap_(std::move(ap)), stem_(std::move(stem)), loop_(std::move(loop)) {
  if (loop_.empty()) throw Error("lasso loop must be nonempty");
  Letter mask = ap_.size() == kMaxAlphabetSize ? ~Letter(0)
                                               : (Letter(1) << ap_.size()) - 1;
  for (Letter l : stem_) {
    if (l & ~mask) throw AlphabetError("stem letter uses bits outside alphabet");
  }
  for (Letter l : loop_) {
    if (l & ~mask) throw AlphabetError("loop letter uses bits outside alphabet");
  }
  canonicalize();
  rehash();
}

bool LassoTrace::has(std::size_t i, const std::string& prop) const {
  auto idx = ap_.index_of(prop);
  if (!idx) throw AlphabetError("proposition '" + prop + "' not in trace alphabet");
  return has(i, *idx);
}

void LassoTrace::canonicalize() {
  // minimal period of the loop word
  for (std::size_t d = 1; d < loop_.size(); ++d) {
    if (loop_.size() % d != 0) continue;
    bool periodic = true;
    for (std::size_t i = d; i < loop_.size() && periodic; ++i) {
      periodic = loop_[i] == loop_[i % d];
    }
    if (periodic) {
      loop_.resize(d);
      break;
    }
  }
  // absorb stem letters equal to the wrapped-around loop end
  while (!stem_.empty() && stem_.back() == loop_.back()) {
    stem_.pop_back();
    loop_.insert(loop_.begin(), loop_.back());
    loop_.pop_back();
  }
}

void LassoTrace::rehash() {
  std::uint64_t h = 0x5851f42d4c957f2dULL;
  for (const auto& n : ap_.names()) h = hash_combine(h, hash_string(n));
  h = hash_combine(h, stem_.size());
  for (Letter l : stem_) h = hash_combine(h, l);
  h = hash_combine(h, 0xabcdefULL);
  for (Letter l : loop_) h = hash_combine(h, l);
  hash_ = h;
}

bool LassoTrace::operator==(const LassoTrace& other) const {
  return hash_ == other.hash_ && ap_ == other.ap_ && stem_ == other.stem_ &&
         loop_ == other.loop_;
}

bool LassoTrace::operator<(const LassoTrace& other) const {
  if (ap_ != other.ap_) return ap_ < other.ap_;
  if (stem_ != other.stem_) return stem_ < other.stem_;
  return loop_ < other.loop_;
}

std::string LassoTrace::to_string() const {
  auto letter_str = [&](Letter l) {
    std::string s = "{";
    bool first = true;
    for (const auto& p : letter_props(ap_, l)) {
      if (!first) s += ",";
      s += p;
      first = false;
    }
    return s + "}";
  };
  std::string s;
  for (Letter l : stem_) s += letter_str(l);
  s += "(";
  for (Letter l : loop_) s += letter_str(l);
  s += ")^w";
  return s;
}

TraceSet::TraceSet(Alphabet ap, std::vector<LassoTrace> members)
    : ap_(std::move(ap)), members_(std::move(members)) {
  for (const auto& t : members_) {
    if (t.alphabet() != ap_) {
      throw AlphabetError("trace alphabet differs from set alphabet");
    }
  }
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  rehash();
}

bool TraceSet::contains(const LassoTrace& t) const {
  return std::binary_search(members_.begin(), members_.end(), t);
}

bool TraceSet::operator==(const TraceSet& other) const {
  return hash_ == other.hash_ && ap_ == other.ap_ && members_ == other.members_;
}

void TraceSet::rehash() {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (const auto& n : ap_.names()) h = hash_combine(h, hash_string(n));
  for (const auto& t : members_) h = hash_combine(h, t.hash());
  hash_ = h;
}

TransitionSystem::TransitionSystem(
    Alphabet ap, std::vector<std::string> vertices,
    std::vector<std::pair<std::string, std::string>> edges,
    std::vector<std::string> initial,
    std::map<std::string, std::vector<std::string>> labels)
    : ap_(std::move(ap)),
      vertices_(std::move(vertices)),
      edges_(std::move(edges)),
      initial_(std::move(initial)) {
  if (vertices_.empty()) throw Error("transition system needs a vertex");
  if (initial_.empty()) throw Error("transition system needs an initial vertex");
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (index.count(vertices_[i])) throw Error("duplicate vertex " + vertices_[i]);
    index[vertices_[i]] = i;
  }
  succ_.resize(vertices_.size());
  for (const auto& [from, to] : edges_) {
    if (!index.count(from) || !index.count(to)) {
      throw Error("edge endpoint is not a vertex");
    }
    succ_[index[from]].push_back(index[to]);
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    std::sort(succ_[i].begin(), succ_[i].end());
    succ_[i].erase(std::unique(succ_[i].begin(), succ_[i].end()), succ_[i].end());
    if (succ_[i].empty()) {
      throw Error("vertex " + vertices_[i] + " has no outgoing edge");
    }
  }
  for (const auto& v : initial_) {
    if (!index.count(v)) throw Error("initial vertex " + v + " is not a vertex");
  }
  labels_.assign(vertices_.size(), 0);
  for (const auto& [v, props] : labels) {
    if (!index.count(v)) throw Error("labeled vertex " + v + " is not a vertex");
    labels_[index[v]] = make_letter(ap_, props);
  }
}

Letter TransitionSystem::label(const std::string& vertex) const {
  return labels_[vertex_index(vertex)];
}

std::size_t TransitionSystem::vertex_index(const std::string& v) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (vertices_[i] == v) return i;
  }
  throw Error("unknown vertex " + v);
}

LassoTrace projection(const LassoTrace& t, const Alphabet& sub) {
  if (!t.alphabet().contains_all(sub)) {
    throw AlphabetError("projection target is not a sub-alphabet");
  }
  auto remap = [&](Letter l) {
    Letter out = 0;
    for (std::size_t j = 0; j < sub.size(); ++j) {
      auto idx = t.alphabet().index_of(sub.name(j));
      if ((l >> *idx) & 1u) out |= Letter(1) << j;
    }
    return out;
  };
  std::vector<Letter> stem, loop;
  stem.reserve(t.stem_size());
  loop.reserve(t.loop_size());
  for (Letter l : t.stem()) stem.push_back(remap(l));
  for (Letter l : t.loop()) loop.push_back(remap(l));
  return LassoTrace(sub, std::move(stem), std::move(loop));
}

LassoTrace pointwise_union(const LassoTrace& t, const LassoTrace& u) {
  for (const auto& n : t.alphabet().names()) {
    if (u.alphabet().contains(n)) {
      throw AlphabetError("pointwise union requires disjoint alphabets");
    }
  }
  std::vector<std::string> names = t.alphabet().names();
  names.insert(names.end(), u.alphabet().names().begin(), u.alphabet().names().end());
  Alphabet ap(std::move(names));

  std::size_t stem = std::max(t.stem_size(), u.stem_size());
  std::size_t loop = std::lcm(t.loop_size(), u.loop_size());
  auto widen = [&](const LassoTrace& src, Letter l) {
    Letter out = 0;
    for (std::size_t j = 0; j < src.alphabet().size(); ++j) {
      if ((l >> j) & 1u) out |= Letter(1) << *ap.index_of(src.alphabet().name(j));
    }
    return out;
  };
  std::vector<Letter> stem_letters, loop_letters;
  for (std::size_t i = 0; i < stem; ++i) {
    stem_letters.push_back(widen(t, t.at(i)) | widen(u, u.at(i)));
  }
  for (std::size_t i = stem; i < stem + loop; ++i) {
    loop_letters.push_back(widen(t, t.at(i)) | widen(u, u.at(i)));
  }
  return LassoTrace(std::move(ap), std::move(stem_letters), std::move(loop_letters));
}

TraceSet project_set(const TraceSet& ts, const Alphabet& sub) {
  std::vector<LassoTrace> out;
  out.reserve(ts.size());
  for (const auto& t : ts.members()) out.push_back(projection(t, sub));
  return TraceSet(sub, std::move(out));
}

TraceSet extend_alphabet(const TraceSet& ts, const Alphabet& bigger) {
  if (!bigger.contains_all(ts.alphabet())) {
    throw AlphabetError("extension target must contain the current alphabet");
  }
  std::vector<LassoTrace> out;
  out.reserve(ts.size());
  for (const auto& t : ts.members()) {
    auto widen = [&](Letter l) {
      Letter w = 0;
      for (std::size_t j = 0; j < t.alphabet().size(); ++j) {
        if ((l >> j) & 1u) w |= Letter(1) << *bigger.index_of(t.alphabet().name(j));
      }
      return w;
    };
    std::vector<Letter> stem, loop;
    for (Letter l : t.stem()) stem.push_back(widen(l));
    for (Letter l : t.loop()) loop.push_back(widen(l));
    out.emplace_back(bigger, std::move(stem), std::move(loop));
  }
  return TraceSet(bigger, std::move(out));
}

bool equal_modulo(const TraceSet& a, const TraceSet& b, const Alphabet& sub) {
  return project_set(a, sub) == project_set(b, sub);
}

TraceSet override_prop(const TraceSet& ts, const std::string& q, const LassoTrace& row) {
  if (!ts.alphabet().contains(q)) {
    throw AlphabetError("override proposition '" + q + "' not in set alphabet");
  }
  if (row.alphabet() != Alphabet({q})) {
    throw AlphabetError("override row must be a trace over {" + q + "}");
  }
  std::vector<std::string> rest_names;
  for (const auto& n : ts.alphabet().names()) {
    if (n != q) rest_names.push_back(n);
  }
  Alphabet rest(rest_names);
  std::vector<LassoTrace> out;
  out.reserve(ts.size());
  for (const auto& t : ts.members()) {
    LassoTrace joined = pointwise_union(projection(t, rest), row);
    // re-align letters to the original alphabet order (same name set)
    out.push_back(extend_alphabet(TraceSet(joined.alphabet(), {joined}), ts.alphabet())
                      .members()
                      .front());
  }
  return TraceSet(ts.alphabet(), std::move(out));
}

TraceSet enumerate_universe(const Alphabet& ap, const UniverseParams& p, std::size_t cap) {
  const std::size_t letters = std::size_t(1) << ap.size();
  // raw enumeration guard before any work
  long double raw = 0;
  for (std::size_t s = 0; s <= p.stem_bound; ++s) {
    for (std::size_t l = 1; l <= p.loop_bound; ++l) {
      raw += std::pow(static_cast<long double>(letters), static_cast<long double>(s + l));
    }
  }
  if (raw > static_cast<long double>(std::max<std::size_t>(cap, 1) * 64 + (1u << 22))) {
    throw CapError("universe enumeration would visit too many raw lassos");
  }

  std::set<LassoTrace> seen;
  std::vector<Letter> word;
  for (std::size_t s = 0; s <= p.stem_bound; ++s) {
    for (std::size_t l = 1; l <= p.loop_bound; ++l) {
      word.assign(s + l, 0);
      while (true) {
        std::vector<Letter> stem(word.begin(), word.begin() + s);
        std::vector<Letter> loop(word.begin() + s, word.end());
        seen.insert(LassoTrace(ap, std::move(stem), std::move(loop)));
        if (seen.size() > cap) {
          throw CapError("universe size exceeds cap of " + std::to_string(cap));
        }
        // odometer over letters
        std::size_t k = word.size();
        while (k > 0) {
          if (++word[k - 1] < letters) break;
          word[k - 1] = 0;
          --k;
        }
        if (k == 0) break;
      }
    }
  }
  return TraceSet(ap, std::vector<LassoTrace>(seen.begin(), seen.end()));
}

namespace {

void enumerate_cycles(const TransitionSystem& ts, std::size_t first,
                      std::vector<std::size_t>& cycle, std::size_t max_len,
                      const std::vector<Letter>& stem_labels, std::set<LassoTrace>& out,
                      std::size_t cap) {
  std::size_t last = cycle.back();
  for (std::size_t next : ts.successors(last)) {
    if (next == first) {
      std::vector<Letter> loop;
      loop.reserve(cycle.size());
      for (std::size_t v : cycle) loop.push_back(ts.label(ts.vertices()[v]));
      out.insert(LassoTrace(ts.alphabet(), stem_labels, std::move(loop)));
      if (out.size() > cap) {
        throw CapError("traces_of_system result exceeds cap of " + std::to_string(cap));
      }
    }
    if (cycle.size() < max_len) {
      cycle.push_back(next);
      enumerate_cycles(ts, first, cycle, max_len, stem_labels, out, cap);
      cycle.pop_back();
    }
  }
}

void enumerate_stems(const TransitionSystem& ts, std::vector<std::size_t>& stem,
                     std::size_t max_stem, std::size_t max_loop,
                     std::set<LassoTrace>& out, std::size_t cap) {
  // cycle starts at the vertex following the stem
  std::size_t anchor_from;
  std::vector<std::size_t> starts;
  if (stem.empty()) {
    for (const auto& v : ts.initial()) starts.push_back(ts.vertex_index(v));
    anchor_from = SIZE_MAX;
  } else {
    anchor_from = stem.back();
    starts = ts.successors(anchor_from);
  }
  std::vector<Letter> stem_labels;
  stem_labels.reserve(stem.size());
  for (std::size_t v : stem) stem_labels.push_back(ts.label(ts.vertices()[v]));

  for (std::size_t first : starts) {
    std::vector<std::size_t> cycle{first};
    enumerate_cycles(ts, first, cycle, max_loop, stem_labels, out, cap);
  }
  if (stem.size() < max_stem) {
    std::vector<std::size_t> nexts;
    if (stem.empty()) {
      for (const auto& v : ts.initial()) nexts.push_back(ts.vertex_index(v));
    } else {
      nexts = ts.successors(stem.back());
    }
    for (std::size_t n : nexts) {
      stem.push_back(n);
      enumerate_stems(ts, stem, max_stem, max_loop, out, cap);
      stem.pop_back();
    }
  }
}

}  // namespace

TraceSet traces_of_system(const TransitionSystem& ts, const UniverseParams& p,
                          std::size_t cap) {
  std::set<LassoTrace> out;
  std::vector<std::size_t> stem;
  enumerate_stems(ts, stem, p.stem_bound, p.loop_bound, out, cap);
  return TraceSet(ts.alphabet(), std::vector<LassoTrace>(out.begin(), out.end()));
}

}  // namespace hyperq
