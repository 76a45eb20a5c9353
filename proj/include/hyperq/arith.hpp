// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "hyperq/arith_formula.hpp"
#include "hyperq/trace.hpp"

namespace hyperq {

/// Quantifier domains: numbers in 0..N-1, sets as bitmasks over those,
/// families of sets as bitmasks indexed by the set bitmask. Full third-order
/// enumeration is doubly exponential; the default cap keeps N <= 4 unless
/// explicitly overridden.
struct BoundedDomain {
  std::uint64_t N = 1;
  bool allow_large_third_order = false;
  explicit BoundedDomain(std::uint64_t n, bool allow_large = false)
      : N(n), allow_large_third_order(allow_large) {
    if (N < 1) throw Error("bounded domain needs N >= 1");
    if (N > 32) throw CapError("bounded domain supports N <= 32");
  }
};

struct ArithAssignment {
  std::map<std::string, std::uint64_t> first;
  std::map<std::string, std::uint64_t> second;  // bitmask over 0..N-1
  std::map<std::string, std::uint64_t> third;   // bit m set <=> mask m in family
};

std::uint64_t cantor_pair(std::uint64_t i, std::uint64_t j);
std::pair<std::uint64_t, std::uint64_t> cantor_unpair(std::uint64_t n);

struct EncodedTrace {
  std::set<std::uint64_t> values;
  bool operator==(const EncodedTrace& o) const = default;
};

/// Finite-horizon truncation of S_t = { pair(i, index(p)) : p in t(i) }.
EncodedTrace encode_trace(const LassoTrace& t,
                          const std::map<std::string, std::uint64_t>& prop_index,
                          std::uint64_t horizon);

/// Prefix with p(i) = { prop : pair(i, index(prop)) in e }.
std::vector<std::set<std::string>> decode_trace(
    const EncodedTrace& e, const std::map<std::string, std::uint64_t>& prop_index,
    std::uint64_t horizon);

/// Truth under bounded quantification; arithmetic atoms compare exact values.
bool eval_arith(const ArithFormula& f, const BoundedDomain& d, const ArithAssignment& a);

/// First-order formula with one free variable, satisfied exactly by n in any
/// domain with N > n. Built by binary doubling, so its size is O(log n).
ArithFormula build_theta_eq_n(std::uint64_t n, const std::string& free_var = "x");

}  // namespace hyperq
