// SPDX-License-Identifier: Apache-2.0
#include "hyperq/eval.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <vector>

namespace hyperq {

bool t_plus_times_member(const LassoTrace& t);  // reductions module

namespace {

constexpr std::size_t kMemoLimit = std::size_t(1) << 22;

struct Deps {
  std::vector<std::string> free_tvars;
  std::vector<std::string> props;      // every proposition mentioned in the node
  std::vector<std::string> unlabeled;  // propositions of unlabeled atoms
  bool has_axiom = false;
  std::size_t quant_count = 0;
};

struct MemoKey {
  const Node* node;
  std::uint64_t fp;
  std::uint32_t pos;
  bool operator==(const MemoKey& o) const {
    return node == o.node && fp == o.fp && pos == o.pos;
  }
};
struct MemoKeyHash {
  std::size_t operator()(const MemoKey& k) const {
    std::uint64_t h =
        hash_combine(static_cast<std::uint64_t>(reinterpret_cast<std::uintptr_t>(k.node)),
                     k.fp);
    return static_cast<std::size_t>(hash_combine(h, k.pos));
  }
};

void merge_sorted(std::vector<std::string>& into, const std::vector<std::string>& from) {
  for (const auto& s : from) {
    auto it = std::lower_bound(into.begin(), into.end(), s);
    if (it == into.end() || *it != s) into.insert(it, s);
  }
}

void remove_sorted(std::vector<std::string>& from, const std::string& s) {
  auto it = std::lower_bound(from.begin(), from.end(), s);
  if (it != from.end() && *it == s) from.erase(it);
}

class Evaluator {
 public:
  enum class Mode { Q, QPlus, H2L, QfOnly };

  Evaluator(Mode mode, std::optional<TraceSet> model, EvalParams params)
      : mode_(mode), params_(std::move(params)), model_(std::move(model)) {}

  bool run(const Formula& f, const Assignment& initial, std::size_t position) {
    trace_env_ = initial.traces;
    prop_env_ = initial.prop_rows;
    set_env_ = initial.sets;
    if (mode_ != Mode::H2L && !initial.sets.empty()) {
      throw EvalError("set-variable bindings only apply to Hyper2LTL");
    }
    if (mode_ == Mode::QPlus && !initial.prop_rows.empty()) {
      throw EvalError("HyperQPTL+ has no row-valued propositional bindings");
    }
    if (mode_ == Mode::Q) {
      for (const auto& [q, row] : prop_env_) {
        model_ = override_prop(*model_, q, row);
      }
    }
    if (mode_ == Mode::H2L) {
      full_universe_ =
          enumerate_universe(params_.ap, params_.universe, params_.universe_cap);
      if (!set_env_.count("Xa")) set_env_.emplace("Xa", *full_universe_);
      if (!set_env_.count("Xd")) set_env_.emplace("Xd", *model_);
    }
    compute_structure(initial);
    return eval(f, position);
  }

  static bool run_qf(const Assignment& a, std::size_t position, const Formula& f) {
    Evaluator ev(Mode::QfOnly, std::nullopt, EvalParams{});
    ev.trace_env_ = a.traces;
    ev.prop_env_ = a.prop_rows;
    ev.compute_structure(a);
    return ev.eval(f, position);
  }

 private:
  Mode mode_;
  EvalParams params_;
  std::optional<TraceSet> model_;  // current model for Q / QPlus
  std::optional<TraceSet> full_universe_;
  std::map<std::string, LassoTrace> trace_env_;
  std::map<std::string, LassoTrace> prop_env_;
  std::map<std::string, TraceSet> set_env_;
  std::size_t S_ = 0, L_ = 1;
  std::unordered_map<MemoKey, bool, MemoKeyHash> memo_;
  std::unordered_map<const Node*, Deps> deps_;
  std::map<std::string, std::vector<LassoTrace>> row_universe_;
  std::optional<TraceSet> axiom_target_;
  std::size_t iterations_ = 0;

  void bump_iterations() {
    if (++iterations_ > params_.iteration_cap) {
      throw CapError("quantifier enumeration exceeds cap of " +
                     std::to_string(params_.iteration_cap));
    }
  }

  void compute_structure(const Assignment& initial) {
    std::size_t stem = params_.universe.stem_bound;
    std::size_t loop = 1;
    for (std::size_t l = 1; l <= params_.universe.loop_bound; ++l) {
      loop = std::lcm(loop, l);
    }
    auto add_trace = [&](const LassoTrace& t) {
      stem = std::max(stem, t.stem_size());
      loop = std::lcm(loop, t.loop_size());
    };
    if (model_) {
      for (const auto& t : model_->members()) add_trace(t);
    }
    for (const auto& [k, t] : initial.traces) add_trace(t);
    for (const auto& [k, t] : initial.prop_rows) add_trace(t);
    for (const auto& [k, ts] : initial.sets) {
      for (const auto& t : ts.members()) add_trace(t);
    }
    if (loop > 100000) throw CapError("combined loop period too large");
    S_ = stem;
    L_ = loop;
  }

  std::size_t canon(std::size_t i) const {
    return i < S_ + L_ ? i : S_ + (i - S_) % L_;
  }

  const Deps& deps(const Node* n) {
    auto it = deps_.find(n);
    if (it != deps_.end()) return it->second;
    Deps d;
    switch (n->kind) {
      case Kind::LabeledAtom:
        d.free_tvars.push_back(n->tvar);
        d.props.push_back(n->prop);
        break;
      case Kind::PropAtom:
        d.props.push_back(n->prop);
        d.unlabeled.push_back(n->prop);
        break;
      case Kind::AxiomPlusTimes:
        d.has_axiom = true;
        break;
      default: {
        if (n->a) d = deps(n->a.raw());
        if (n->b) {
          const Deps& db = deps(n->b.raw());
          merge_sorted(d.free_tvars, db.free_tvars);
          merge_sorted(d.props, db.props);
          merge_sorted(d.unlabeled, db.unlabeled);
          d.has_axiom = d.has_axiom || db.has_axiom;
          d.quant_count += db.quant_count;
        }
        if (n->kind == Kind::TraceQuant) {
          remove_sorted(d.free_tvars, n->tvar);
          d.quant_count += 1;
        } else if (n->kind == Kind::PropQuant || n->kind == Kind::SetQuant) {
          d.quant_count += 1;
        }
        break;
      }
    }
    return deps_.emplace(n, std::move(d)).first->second;
  }

  std::uint64_t fingerprint(const Deps& d) {
    std::uint64_t fp = 0xcbf29ce484222325ULL;
    for (const auto& tv : d.free_tvars) {
      fp = hash_combine(fp, hash_string(tv));
      auto it = trace_env_.find(tv);
      fp = hash_combine(fp, it == trace_env_.end() ? 0x51ULL : it->second.hash());
    }
    bool model_read = d.has_axiom;
    for (const auto& p : d.props) {
      fp = hash_combine(fp, hash_string(p));
      auto it = prop_env_.find(p);
      fp = hash_combine(fp, it == prop_env_.end() ? 0x77ULL : it->second.hash());
    }
    for (const auto& q : d.unlabeled) {
      if (!prop_env_.count(q)) model_read = true;
    }
    if (model_read && model_) fp = hash_combine(fp, model_->hash());
    return fp;
  }

  const std::vector<LassoTrace>& row_universe(const std::string& prop) {
    auto it = row_universe_.find(prop);
    if (it != row_universe_.end()) return it->second;
    TraceSet u =
        enumerate_universe(Alphabet({prop}), params_.universe, params_.universe_cap);
    return row_universe_.emplace(prop, u.members()).first->second;
  }

  bool atom_prop(const Node* n, std::size_t i) {
    auto it = prop_env_.find(n->prop);
    if (it != prop_env_.end()) return it->second.has(i, n->prop);
    if (mode_ == Mode::QfOnly || !model_) {
      throw EvalError("unbound proposition '" + n->prop + "'");
    }
    // literal reading: q holds iff every trace of the current model carries it
    auto idx = model_->alphabet().index_of(n->prop);
    if (!idx) throw AlphabetError("proposition '" + n->prop + "' not in alphabet");
    for (const auto& t : model_->members()) {
      if (!t.has(i, *idx)) return false;
    }
    return true;
  }

  bool eval_axiom() {
    if (!model_) throw EvalError("AXIOM_PLUS_TIMES needs a model");
    static const std::vector<std::string> arith_props = {"arg1", "arg2", "res", "add",
                                                         "mult"};
    Alphabet arith_ap(arith_props);
    if (!model_->alphabet().contains_all(arith_ap)) {
      throw AlphabetError("model alphabet lacks arg1/arg2/res/add/mult");
    }
    if (!axiom_target_) {
      // a member of T_{(+,*)} over the five propositions is determined by
      // the operation and the three unique positions; its canonical stem is
      // max(n1,n2,n3)+1, so the bounded members are those with positions
      // under the stem bound
      Letter a1 = make_letter(arith_ap, {"arg1"});
      Letter a2 = make_letter(arith_ap, {"arg2"});
      Letter rs = make_letter(arith_ap, {"res"});
      std::vector<LassoTrace> good;
      for (bool is_add : {true, false}) {
        Letter op = make_letter(arith_ap, {is_add ? "add" : "mult"});
        for (std::size_t n1 = 0; n1 < params_.universe.stem_bound; ++n1) {
          for (std::size_t n2 = 0; n2 < params_.universe.stem_bound; ++n2) {
            std::size_t n3 = is_add ? n1 + n2 : n1 * n2;
            if (n3 >= params_.universe.stem_bound) continue;
            std::vector<Letter> stem(std::max({n1, n2, n3}) + 1, op);
            stem[n1] |= a1;
            stem[n2] |= a2;
            stem[n3] |= rs;
            good.emplace_back(arith_ap, std::move(stem), std::vector<Letter>{op});
          }
        }
      }
      axiom_target_ = TraceSet(arith_ap, std::move(good));
    }
    return project_set(*model_, arith_ap) == *axiom_target_;
  }

  bool eval(const Formula& f, std::size_t pos) {
    const Node* n = f.raw();
    pos = canon(pos);
    const Deps& d = deps(n);
    bool use_memo = d.quant_count == 0;
    MemoKey key{};
    if (use_memo) {
      key = MemoKey{n, fingerprint(d), static_cast<std::uint32_t>(pos)};
      auto it = memo_.find(key);
      if (it != memo_.end()) return it->second;
    }
    bool r = eval_node(n, pos);
    if (use_memo) {
      if (memo_.size() >= kMemoLimit) memo_.clear();
      memo_.emplace(key, r);
    }
    return r;
  }

  bool eval_node(const Node* n, std::size_t pos) {
    switch (n->kind) {
      case Kind::LabeledAtom: {
        auto it = trace_env_.find(n->tvar);
        if (it == trace_env_.end()) {
          throw EvalError("unbound trace variable '" + n->tvar + "'");
        }
        return it->second.has(pos, n->prop);
      }
      case Kind::PropAtom:
        return atom_prop(n, pos);
      case Kind::AxiomPlusTimes:
        return eval_axiom();
      case Kind::Not:
        return !eval(n->a, pos);
      case Kind::Or:
      case Kind::And: {
        // commutative; visit the cheaper (fewer quantifiers) operand first
        const Formula* fa = &n->a;
        const Formula* fb = &n->b;
        if (deps(fb->raw()).quant_count < deps(fa->raw()).quant_count) {
          std::swap(fa, fb);
        }
        if (n->kind == Kind::Or) return eval(*fa, pos) || eval(*fb, pos);
        return eval(*fa, pos) && eval(*fb, pos);
      }
      case Kind::Implies:
        return !eval(n->a, pos) || eval(n->b, pos);
      case Kind::Iff:
        return eval(n->a, pos) == eval(n->b, pos);
      case Kind::Next:
        return eval(n->a, pos + 1);
      case Kind::Eventually: {
        for (std::size_t j = pos; j < S_ + L_; ++j) {
          if (eval(n->a, j)) return true;
        }
        for (std::size_t j = S_; j < pos; ++j) {
          if (eval(n->a, j)) return true;
        }
        return false;
      }
      case Kind::Always: {
        for (std::size_t j = pos; j < S_ + L_; ++j) {
          if (!eval(n->a, j)) return false;
        }
        for (std::size_t j = S_; j < pos; ++j) {
          if (!eval(n->a, j)) return false;
        }
        return true;
      }
      case Kind::Until: {
        std::size_t budget = S_ + 2 * L_ + 1;
        std::size_t j = pos;
        for (std::size_t k = 0; k < budget; ++k) {
          if (eval(n->b, j)) return true;
          if (!eval(n->a, j)) return false;
          j = canon(j + 1);
        }
        return false;
      }
      case Kind::TraceQuant:
        return eval_trace_quant(n, pos);
      case Kind::PropQuant:
        return eval_prop_quant(n, pos);
      case Kind::SetQuant:
        return eval_set_quant(n, pos);
    }
    throw Error("unreachable");
  }

  bool eval_trace_quant(const Node* n, std::size_t pos) {
    // copy: nested quantifiers reassign model_ / set_env_ while we iterate
    std::vector<LassoTrace> domain;
    if (mode_ == Mode::H2L) {
      auto it = set_env_.find(n->set->name);
      if (it == set_env_.end()) {
        throw EvalError("unbound set variable '" + n->set->name + "'");
      }
      domain = it->second.members();
    } else if (mode_ == Mode::Q || mode_ == Mode::QPlus) {
      domain = model_->members();
    } else {
      throw EvalError("quantifier in quantifier-free evaluation");
    }
    auto old = trace_env_.find(n->tvar);
    std::optional<LassoTrace> saved =
        old != trace_env_.end() ? std::optional<LassoTrace>(old->second) : std::nullopt;
    bool result = !n->exists;
    for (const auto& t : domain) {
      bump_iterations();
      trace_env_.insert_or_assign(n->tvar, t);
      bool r = eval(n->a, pos);
      if (n->exists == r) {
        result = r;
        break;
      }
    }
    if (saved) {
      trace_env_.insert_or_assign(n->tvar, *saved);
    } else {
      trace_env_.erase(n->tvar);
    }
    return result;
  }

  bool eval_prop_quant(const Node* n, std::size_t pos) {
    if (mode_ == Mode::Q) return eval_prop_quant_q(n, pos);
    if (mode_ == Mode::QPlus) return eval_prop_quant_qplus(n, pos);
    throw EvalError("propositional quantifier outside HyperQPTL/HyperQPTL+");
  }

  bool eval_prop_quant_q(const Node* n, std::size_t pos) {
    if (!params_.ap.contains(n->prop)) {
      throw AlphabetError("quantified proposition '" + n->prop + "' not in alphabet");
    }
    const auto& rows = row_universe(n->prop);
    TraceSet saved_model = *model_;
    auto old = prop_env_.find(n->prop);
    std::optional<LassoTrace> saved_row =
        old != prop_env_.end() ? std::optional<LassoTrace>(old->second) : std::nullopt;
    bool result = !n->exists;
    for (const auto& row : rows) {
      bump_iterations();
      model_ = override_prop(saved_model, n->prop, row);
      prop_env_.insert_or_assign(n->prop, row);
      bool r = eval(n->a, pos);
      if (n->exists == r) {
        result = r;
        break;
      }
    }
    model_ = std::move(saved_model);
    if (saved_row) {
      prop_env_.insert_or_assign(n->prop, *saved_row);
    } else {
      prop_env_.erase(n->prop);
    }
    return result;
  }

  /// HyperQPTL+ propositional quantification: each (ap minus q)-projection
  /// class of the current model receives a nonempty set of bounded rows;
  /// candidate sets are visited ascending by size, then lexicographically.
  bool eval_prop_quant_qplus(const Node* n, std::size_t pos) {
    if (!params_.ap.contains(n->prop)) {
      throw AlphabetError("quantified proposition '" + n->prop + "' not in alphabet");
    }
    std::vector<std::string> rest_names;
    for (const auto& name : params_.ap.names()) {
      if (name != n->prop) rest_names.push_back(name);
    }
    Alphabet rest(rest_names);
    TraceSet classes = project_set(*model_, rest);
    const auto& rows = row_universe(n->prop);
    const std::size_t m = classes.size();
    const std::size_t r = rows.size();
    if (m == 0) throw EvalError("HyperQPTL+ quantification over an empty model");
    if (r > 20) throw CapError("row universe too large for HyperQPTL+ enumeration");

    std::vector<std::vector<LassoTrace>> members(m);
    for (std::size_t c = 0; c < m; ++c) {
      members[c].reserve(r);
      for (std::size_t i = 0; i < r; ++i) {
        members[c].push_back(pointwise_union(classes.members()[c], rows[i]));
      }
    }
    std::vector<std::vector<std::uint32_t>> by_pc(r + 1);
    for (std::uint32_t mask = 1; mask < (1u << r); ++mask) {
      by_pc[static_cast<std::size_t>(__builtin_popcount(mask))].push_back(mask);
    }

    TraceSet saved_model = *model_;
    bool result = !n->exists;
    bool done = false;
    std::vector<std::uint32_t> chosen(m);

    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t c,
                                                            std::size_t remaining) {
      if (done) return;
      if (c == m) {
        if (remaining != 0) return;
        bump_iterations();
        std::vector<LassoTrace> picked;
        for (std::size_t cc = 0; cc < m; ++cc) {
          for (std::size_t i = 0; i < r; ++i) {
            if ((chosen[cc] >> i) & 1u) picked.push_back(members[cc][i]);
          }
        }
        model_ = TraceSet(params_.ap, std::move(picked));
        bool v = eval(n->a, pos);
        if (n->exists == v) {
          result = v;
          done = true;
        }
        return;
      }
      std::size_t classes_left = m - c - 1;
      for (std::size_t pc = 1; pc <= std::min(r, remaining); ++pc) {
        if (remaining - pc < classes_left) break;         // others need >= 1 each
        if (remaining - pc > classes_left * r) continue;  // cannot absorb the rest
        for (std::uint32_t mask : by_pc[pc]) {
          chosen[c] = mask;
          rec(c + 1, remaining - pc);
          if (done) return;
        }
      }
    };

    for (std::size_t total = m; total <= m * r && !done; ++total) {
      rec(0, total);
    }
    model_ = std::move(saved_model);
    return result;
  }

  bool eval_set_quant(const Node* n, std::size_t pos) {
    if (mode_ != Mode::H2L) throw EvalError("set quantifier outside Hyper2LTL");
    const std::vector<LassoTrace> u = full_universe_->members();
    if (u.size() > 25) {
      throw CapError("bounded universe too large for set quantification");
    }
    auto old = set_env_.find(n->set->name);
    std::optional<TraceSet> saved =
        old != set_env_.end() ? std::optional<TraceSet>(old->second) : std::nullopt;
    bool result = !n->exists;
    const std::uint64_t count = std::uint64_t(1) << u.size();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
      bump_iterations();
      std::vector<LassoTrace> picked;
      for (std::size_t i = 0; i < u.size(); ++i) {
        if ((mask >> i) & 1u) picked.push_back(u[i]);
      }
      set_env_.insert_or_assign(n->set->name, TraceSet(params_.ap, std::move(picked)));
      bool r = eval(n->a, pos);
      if (n->exists == r) {
        result = r;
        break;
      }
    }
    if (saved) {
      set_env_.insert_or_assign(n->set->name, *saved);
    } else {
      set_env_.erase(n->set->name);
    }
    return result;
  }
};

void check_model(const TraceSet& model, const Formula& f, const EvalParams& p) {
  if (model.empty()) throw EvalError("model must be a nonempty trace set");
  if (model.alphabet() != p.ap) {
    throw AlphabetError("model alphabet differs from evaluation alphabet");
  }
  for (const auto& prop : props_in_order(f)) {
    if (!p.ap.contains(prop)) {
      throw AlphabetError("formula proposition '" + prop + "' not in alphabet");
    }
  }
}

Evaluator::Mode mode_for(Logic logic) {
  switch (logic) {
    case Logic::HyperQPTL: return Evaluator::Mode::Q;
    case Logic::HyperQPTLPlus: return Evaluator::Mode::QPlus;
    case Logic::Hyper2LTL: return Evaluator::Mode::H2L;
  }
  throw Error("unreachable");
}

bool eval_sentence_in(const TraceSet& model, const Formula& f, const EvalParams& p,
                      Logic expected) {
  if (f.logic() != expected) {
    throw EvalError("formula is " + to_string(f.logic()) + ", expected " +
                    to_string(expected));
  }
  if (!check_sentence(f)) throw EvalError("formula is not a sentence");
  check_model(model, f, p);
  Evaluator ev(mode_for(expected), model, p);
  return ev.run(f, Assignment{}, 0);
}

}  // namespace

bool eval_hyperqptl(const TraceSet& model, const Formula& f, const EvalParams& p) {
  return eval_sentence_in(model, f, p, Logic::HyperQPTL);
}

bool eval_hyperqptl_plus(const TraceSet& model, const Formula& f, const EvalParams& p) {
  return eval_sentence_in(model, f, p, Logic::HyperQPTLPlus);
}

bool eval_hyper2ltl(const TraceSet& model, const Formula& f, const EvalParams& p) {
  return eval_sentence_in(model, f, p, Logic::Hyper2LTL);
}

bool eval_qf(const Assignment& a, std::size_t position, const Formula& f) {
  if (has_quantifier(f)) throw EvalError("eval_qf requires a quantifier-free formula");
  return Evaluator::run_qf(a, position, f);
}

bool eval_axiom_plus_times(const TraceSet& model, const EvalParams& p) {
  Evaluator ev(Evaluator::Mode::Q, model, p);
  return ev.run(axiom_plus_times(), Assignment{}, 0);
}

bool eval_at(const TraceSet& model, const Formula& f, const EvalParams& p,
             const Assignment& initial, std::size_t position) {
  check_model(model, f, p);
  Evaluator ev(mode_for(f.logic()), model, p);
  return ev.run(f, initial, position);
}

}  // namespace hyperq
