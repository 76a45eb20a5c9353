// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hyperq/errors.hpp"

namespace hyperq {

enum class AKind {
  Less,      // x < y          (first-order, first-order)
  SumEq,     // x + y = z
  ProdEq,    // x * y = z
  InSet,     // x in Y         (first-order in second-order)
  InFamily,  // Y in YY        (second-order in third-order)
  Not,
  Or,
  And,
  Implies,
  Iff,
  Quant,     // order 1..3, exists/forall
};

struct ANode;

class ArithFormula {
 public:
  ArithFormula() = default;
  const ANode& node() const { return *ptr_; }
  const ANode* raw() const { return ptr_.get(); }
  explicit operator bool() const { return ptr_ != nullptr; }
  AKind kind() const;
  std::uint64_t hash() const;
  bool equals(const ArithFormula& other) const;

 private:
  explicit ArithFormula(std::shared_ptr<const ANode> p) : ptr_(std::move(p)) {}
  std::shared_ptr<const ANode> ptr_;
  friend ArithFormula make_anode(ANode n);
};

inline bool operator==(const ArithFormula& a, const ArithFormula& b) {
  return a.equals(b);
}
inline bool operator!=(const ArithFormula& a, const ArithFormula& b) {
  return !a.equals(b);
}

struct ANode {
  AKind kind;
  bool exists = false;
  int order = 0;                  // quantifier order 1..3
  std::string x, y, z;            // atom operands / quantified variable (x)
  ArithFormula a, b;
  std::uint64_t hash = 0;
};

ArithFormula a_less(const std::string& x, const std::string& y);
ArithFormula a_sum(const std::string& x, const std::string& y, const std::string& z);
ArithFormula a_prod(const std::string& x, const std::string& y, const std::string& z);
ArithFormula a_in(const std::string& x, const std::string& Y);
ArithFormula a_in_family(const std::string& Y, const std::string& YY);
ArithFormula a_not(ArithFormula f);
ArithFormula a_or(ArithFormula a, ArithFormula b);
ArithFormula a_and(ArithFormula a, ArithFormula b);
ArithFormula a_implies(ArithFormula a, ArithFormula b);
ArithFormula a_iff(ArithFormula a, ArithFormula b);
ArithFormula a_exists(int order, const std::string& var, ArithFormula body);
ArithFormula a_forall(int order, const std::string& var, ArithFormula body);
ArithFormula a_conj(const std::vector<ArithFormula>& fs);

/// Free variables with their orders. Throws ShapeError when a variable is
/// used at inconsistent orders.
std::map<std::string, int> arith_free_vars(const ArithFormula& f);

/// Validates order consistency of every variable (bound and free).
void check_var_orders(const ArithFormula& f);

/// Sigma^2_1 shape: a (possibly empty) block of existential third-order
/// quantifiers, outermost, over a body with only first/second-order
/// quantifiers.
bool is_sigma21(const ArithFormula& f);

bool arith_has_third_order(const ArithFormula& f);
std::size_t arith_node_count(const ArithFormula& f);
ArithFormula rename_apart_arith(const ArithFormula& f);
ArithFormula make_anode(ANode n);

}  // namespace hyperq
