// SPDX-License-Identifier: Apache-2.0
#include "hyperq/skolem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hyperq {

std::vector<PrefixItem> prenex_prefix(const Formula& f, Formula* matrix) {
  std::vector<PrefixItem> prefix;
  Formula cur = f;
  while (true) {
    const Node& n = cur.node();
    if (n.kind == Kind::TraceQuant) {
      if (n.set) throw ShapeError("membership quantifier in a HyperQPTL prefix");
      prefix.push_back({false, n.exists, n.tvar});
      cur = n.a;
    } else if (n.kind == Kind::PropQuant) {
      prefix.push_back({true, n.exists, n.prop});
      cur = n.a;
    } else {
      break;
    }
  }
  if (has_quantifier(cur)) {
    throw ShapeError("formula is not prenex: quantifier inside the matrix");
  }
  if (matrix) *matrix = cur;
  return prefix;
}

// ---------------------------------------------------------------------------
// expansion tables
// ---------------------------------------------------------------------------

namespace {

void collect_subformulas(const Formula& f, std::vector<Formula>& out) {
  const Node& n = f.node();
  switch (n.kind) {
    case Kind::LabeledAtom:
    case Kind::PropAtom:
      break;
    case Kind::Not:
    case Kind::Next:
    case Kind::Eventually:
      collect_subformulas(n.a, out);
      break;
    case Kind::Or:
      collect_subformulas(n.a, out);
      collect_subformulas(n.b, out);
      break;
    default:
      throw ShapeError(
          "expansion tables cover the core fragment: atoms, !, |, X, F");
  }
  for (const auto& g : out) {
    if (g == f) return;
  }
  out.push_back(f);
}

void structure_of(const Assignment& a, std::size_t* stem, std::size_t* loop) {
  std::size_t s = 0, l = 1;
  auto add = [&](const LassoTrace& t) {
    s = std::max(s, t.stem_size());
    l = std::lcm(l, t.loop_size());
  };
  for (const auto& [k, t] : a.traces) add(t);
  for (const auto& [k, t] : a.prop_rows) add(t);
  *stem = s;
  *loop = l;
}

bool atom_value(const Node& n, const Assignment& a, std::size_t i) {
  if (n.kind == Kind::LabeledAtom) {
    auto it = a.traces.find(n.tvar);
    if (it == a.traces.end()) {
      throw EvalError("unbound trace variable '" + n.tvar + "'");
    }
    return it->second.has(i, n.prop);
  }
  auto it = a.prop_rows.find(n.prop);
  if (it == a.prop_rows.end()) {
    throw EvalError("unbound proposition '" + n.prop + "'");
  }
  return it->second.has(i, n.prop);
}

}  // namespace

ExpansionTable::ExpansionTable(std::vector<Formula> subformulas, std::size_t stem,
                               std::size_t loop, std::vector<std::vector<bool>> bits)
    : subformulas_(std::move(subformulas)), stem_(stem), loop_(loop),
      bits_(std::move(bits)) {
  if (loop_ < 1) throw Error("expansion table needs a nonempty loop");
  if (bits_.size() != subformulas_.size()) {
    throw Error("expansion table row count mismatch");
  }
  for (const auto& row : bits_) {
    if (row.size() != stem_ + loop_) throw Error("expansion table width mismatch");
  }
}

std::size_t ExpansionTable::index_of(const Formula& f) const {
  for (std::size_t i = 0; i < subformulas_.size(); ++i) {
    if (subformulas_[i] == f) return i;
  }
  throw Error("formula is not a subformula of this table");
}

ExpansionTable build_expansion(const Formula& qf, const Assignment& a) {
  std::vector<Formula> subs;
  collect_subformulas(qf, subs);
  std::size_t stem, loop;
  structure_of(a, &stem, &loop);
  std::size_t width = stem + loop;
  std::vector<std::vector<bool>> bits(subs.size(), std::vector<bool>(width, false));
  auto index = [&](const Formula& f) {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i] == f) return i;
    }
    throw Error("missing subformula");
  };
  for (std::size_t s = 0; s < subs.size(); ++s) {  // post-order: children first
    const Node& n = subs[s].node();
    for (std::size_t i = 0; i < width; ++i) {
      switch (n.kind) {
        case Kind::LabeledAtom:
        case Kind::PropAtom:
          bits[s][i] = atom_value(n, a, i);
          break;
        case Kind::Not:
          bits[s][i] = !bits[index(n.a)][i];
          break;
        case Kind::Or:
          bits[s][i] = bits[index(n.a)][i] || bits[index(n.b)][i];
          break;
        case Kind::Next: {
          std::size_t succ = i + 1 == width ? stem : i + 1;
          bits[s][i] = bits[index(n.a)][succ];
          break;
        }
        case Kind::Eventually: {
          bool any = false;
          for (std::size_t j = i; j < width && !any; ++j) any = bits[index(n.a)][j];
          for (std::size_t j = stem; j < i && !any; ++j) any = bits[index(n.a)][j];
          bits[s][i] = any;
          break;
        }
        default:
          throw Error("unreachable");
      }
    }
  }
  return ExpansionTable(std::move(subs), stem, loop, std::move(bits));
}

bool check_consistency(const ExpansionTable& t, const Assignment& a) {
  std::size_t width = t.width();
  std::size_t stem = t.stem();
  for (std::size_t s = 0; s < t.subformulas().size(); ++s) {
    const Node& n = t.subformulas()[s].node();
    for (std::size_t i = 0; i < width; ++i) {
      bool expected;
      switch (n.kind) {
        case Kind::LabeledAtom:
        case Kind::PropAtom:
          expected = atom_value(n, a, i);
          break;
        case Kind::Not:
          expected = !t.bit(t.index_of(n.a), i);
          break;
        case Kind::Or:
          expected = t.bit(t.index_of(n.a), i) || t.bit(t.index_of(n.b), i);
          break;
        case Kind::Next: {
          std::size_t succ = i + 1 == width ? stem : i + 1;
          expected = t.bit(t.index_of(n.a), succ);
          break;
        }
        case Kind::Eventually: {
          bool any = false;
          std::size_t arg = t.index_of(n.a);
          for (std::size_t j = i; j < width && !any; ++j) any = t.bit(arg, j);
          for (std::size_t j = stem; j < i && !any; ++j) any = t.bit(arg, j);
          expected = any;
          break;
        }
        default:
          throw ShapeError("table holds a non-core subformula");
      }
      if (t.bit(s, i) != expected) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Skolem functions
// ---------------------------------------------------------------------------

namespace {

struct SkolemSetup {
  std::vector<PrefixItem> prefix;
  Formula matrix;
  // per prefix item: its domain of values
  std::vector<std::vector<LassoTrace>> domains;   // universals and existentials alike
  std::vector<std::size_t> universal_slots;       // indices into prefix
  std::vector<std::size_t> existential_slots;
  std::vector<std::vector<std::size_t>> signature_slots;  // per existential
};

SkolemSetup make_setup(const TraceSet& model, const Formula& prenex,
                       const EvalParams& p) {
  if (prenex.logic() != Logic::HyperQPTL) {
    throw ShapeError("Skolem semantics are defined for HyperQPTL");
  }
  SkolemSetup s;
  s.prefix = prenex_prefix(prenex, &s.matrix);
  std::vector<std::size_t> universals_so_far;
  for (std::size_t i = 0; i < s.prefix.size(); ++i) {
    const PrefixItem& item = s.prefix[i];
    if (item.is_prop) {
      TraceSet rows =
          enumerate_universe(Alphabet({item.name}), p.universe, p.universe_cap);
      s.domains.push_back(rows.members());
    } else {
      s.domains.push_back(model.members());
    }
    if (item.exists) {
      s.existential_slots.push_back(i);
      s.signature_slots.push_back(universals_so_far);
    } else {
      s.universal_slots.push_back(i);
      universals_so_far.push_back(i);
    }
  }
  return s;
}

Assignment assignment_from(const SkolemSetup& s, const std::vector<std::size_t>& choice) {
  Assignment a;
  for (std::size_t i = 0; i < s.prefix.size(); ++i) {
    const PrefixItem& item = s.prefix[i];
    const LassoTrace& value = s.domains[i][choice[i]];
    if (item.is_prop) {
      a.prop_rows.insert_or_assign(item.name, value);
    } else {
      a.traces.insert_or_assign(item.name, value);
    }
  }
  return a;
}

/// Runs the universal odometer; existential values come from `resolve`.
/// Returns true when the matrix holds at position 0 for every combination.
template <typename Resolve>
bool all_universal_combos(const SkolemSetup& s, Resolve&& resolve,
                          std::map<std::vector<std::size_t>, bool>& memo) {
  std::vector<std::size_t> combo(s.universal_slots.size(), 0);
  while (true) {
    std::vector<std::size_t> choice(s.prefix.size(), 0);
    for (std::size_t u = 0; u < combo.size(); ++u) {
      choice[s.universal_slots[u]] = combo[u];
    }
    for (std::size_t e = 0; e < s.existential_slots.size(); ++e) {
      std::vector<std::size_t> key;
      key.reserve(s.signature_slots[e].size());
      for (std::size_t slot : s.signature_slots[e]) key.push_back(choice[slot]);
      choice[s.existential_slots[e]] = resolve(e, key);
    }
    auto it = memo.find(choice);
    bool ok;
    if (it != memo.end()) {
      ok = it->second;
    } else {
      ok = eval_qf(assignment_from(s, choice), 0, s.matrix);
      memo.emplace(choice, ok);
    }
    if (!ok) return false;
    // advance the odometer
    std::size_t u = combo.size();
    while (u > 0) {
      std::size_t slot = s.universal_slots[u - 1];
      if (++combo[u - 1] < s.domains[slot].size()) break;
      combo[u - 1] = 0;
      --u;
    }
    if (u == 0) return true;
  }
}

}  // namespace

bool skolem_eval(const TraceSet& model, const Formula& prenex, const SkolemFamily& s,
                 const EvalParams& p) {
  SkolemSetup setup = make_setup(model, prenex, p);
  // every existential needs a function with the right signature
  std::vector<const SkolemFunction*> funcs;
  for (std::size_t e = 0; e < setup.existential_slots.size(); ++e) {
    const PrefixItem& item = setup.prefix[setup.existential_slots[e]];
    auto it = s.find(item.name);
    if (it == s.end()) {
      throw EvalError("missing Skolem function for '" + item.name + "'");
    }
    std::vector<PrefixItem> expected_sig;
    for (std::size_t slot : setup.signature_slots[e]) {
      expected_sig.push_back(setup.prefix[slot]);
    }
    if (it->second.signature != expected_sig ||
        it->second.owner_is_prop != item.is_prop) {
      throw EvalError("Skolem function signature mismatch for '" + item.name + "'");
    }
    funcs.push_back(&it->second);
  }
  std::map<std::vector<std::size_t>, bool> memo;
  return all_universal_combos(
      setup,
      [&](std::size_t e, const std::vector<std::size_t>& key) {
        auto it = funcs[e]->table.find(key);
        if (it == funcs[e]->table.end()) {
          throw EvalError("Skolem table is not total");
        }
        return it->second;
      },
      memo);
}

std::optional<SkolemFamily> search_skolem(const TraceSet& model, const Formula& prenex,
                                          const EvalParams& p, std::size_t family_cap) {
  SkolemSetup setup = make_setup(model, prenex, p);
  const std::size_t ecount = setup.existential_slots.size();

  // flat cell layout: for each existential, one cell per signature-domain
  // tuple in lexicographic order
  std::vector<std::size_t> cells_per_existential(ecount, 1);
  std::vector<std::size_t> codomain(ecount);
  long double family_total = 1;
  for (std::size_t e = 0; e < ecount; ++e) {
    std::size_t dom = 1;
    for (std::size_t slot : setup.signature_slots[e]) {
      dom *= setup.domains[slot].size();
    }
    cells_per_existential[e] = dom;
    codomain[e] = setup.domains[setup.existential_slots[e]].size();
    if (codomain[e] == 0) return std::nullopt;
    family_total *= std::pow(static_cast<long double>(codomain[e]),
                             static_cast<long double>(dom));
  }
  if (family_total > static_cast<long double>(family_cap)) {
    throw CapError("Skolem family space exceeds cap");
  }

  std::size_t total_cells = 0;
  for (std::size_t e = 0; e < ecount; ++e) total_cells += cells_per_existential[e];
  std::vector<std::size_t> cells(total_cells, 0);

  auto key_of_flat = [&](std::size_t e, std::size_t flat) {
    std::vector<std::size_t> key(setup.signature_slots[e].size(), 0);
    for (std::size_t k = key.size(); k-- > 0;) {
      std::size_t slot = setup.signature_slots[e][k];
      key[k] = flat % setup.domains[slot].size();
      flat /= setup.domains[slot].size();
    }
    return key;
  };

  std::map<std::vector<std::size_t>, bool> memo;
  while (true) {
    // resolve via the flat cells
    bool ok = all_universal_combos(
        setup,
        [&](std::size_t e, const std::vector<std::size_t>& key) {
          std::size_t flat = 0;
          for (std::size_t k = 0; k < key.size(); ++k) {
            std::size_t slot = setup.signature_slots[e][k];
            flat = flat * setup.domains[slot].size() + key[k];
          }
          std::size_t base = 0;
          for (std::size_t j = 0; j < e; ++j) base += cells_per_existential[j];
          return cells[base + flat];
        },
        memo);
    if (ok) {
      SkolemFamily family;
      std::size_t base = 0;
      for (std::size_t e = 0; e < ecount; ++e) {
        const PrefixItem& item = setup.prefix[setup.existential_slots[e]];
        SkolemFunction fn;
        fn.owner_is_prop = item.is_prop;
        fn.owner = item.name;
        for (std::size_t slot : setup.signature_slots[e]) {
          fn.signature.push_back(setup.prefix[slot]);
        }
        for (std::size_t flat = 0; flat < cells_per_existential[e]; ++flat) {
          fn.table[key_of_flat(e, flat)] = cells[base + flat];
        }
        base += cells_per_existential[e];
        family.emplace(item.name, std::move(fn));
      }
      return family;
    }
    // next family in lexicographic order (last cell fastest)
    std::size_t i = cells.size();
    while (i > 0) {
      std::size_t e = ecount;
      // which existential owns cell i-1
      std::size_t base = total_cells;
      for (std::size_t j = ecount; j-- > 0;) {
        base -= cells_per_existential[j];
        if (i - 1 >= base) {
          e = j;
          break;
        }
      }
      if (++cells[i - 1] < codomain[e]) break;
      cells[i - 1] = 0;
      --i;
    }
    if (i == 0) return std::nullopt;
  }
}

}  // namespace hyperq
