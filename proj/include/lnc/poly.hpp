#pragma once

// Sparse multivariate polynomials over GF(q), monomial orderings, and the
// field-equation machinery: remainders modulo (X_i^q - X_i), nonzero-point
// search, and footprint zero-count bounds.

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lnc/gf.hpp"

namespace lnc {

using BigInt = boost::multiprecision::cpp_int;

struct VariableId {
  std::uint32_t index = 0;
  friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

class Monomial {
 public:
  struct Factor {
    VariableId var;
    std::uint32_t exp = 0;
    friend auto operator<=>(const Factor&, const Factor&) = default;
  };

  Monomial() = default;
  /// Sorts, merges repeated variables, drops zero exponents.
  explicit Monomial(std::vector<Factor> factors);

  static Monomial variable(VariableId v, std::uint32_t exp = 1);

  std::span<const Factor> factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  std::uint32_t exponent(VariableId v) const;
  std::uint64_t degree() const;
  bool divides(const Monomial& other) const;
  /// other / *this; requires divides(other).
  Monomial cofactor_in(const Monomial& other) const;
  bool is_multilinear() const;

  std::size_t hash() const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  /// Storage order: lexicographic on the sorted factor list. Not a monomial
  /// ordering; used only for canonical storage and maps.
  friend auto operator<=>(const Monomial&, const Monomial&) = default;
  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  std::vector<Factor> factors_;
};

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const { return m.hash(); }
};

class MultiPoly {
 public:
  struct Term {
    Monomial mono;
    ElemCode coeff = 0;
    friend bool operator==(const Term&, const Term&) = default;
  };

  explicit MultiPoly(FieldPtr field);
  /// Merges like terms and drops zero coefficients.
  MultiPoly(FieldPtr field, std::vector<Term> terms);

  static MultiPoly constant(FieldPtr field, ElemCode c);
  static MultiPoly variable(FieldPtr field, VariableId v);
  static MultiPoly monomial(FieldPtr field, Monomial m, ElemCode c = 1);

  const FieldPtr& field() const { return field_; }
  std::span<const Term> terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Coefficient of the monomial 1.
  ElemCode constant_term() const;
  ElemCode coefficient(const Monomial& m) const;

  /// Sorted, duplicate-free.
  std::vector<VariableId> variables() const;
  std::uint32_t degree_in(VariableId v) const;
  std::uint64_t total_degree() const;

  MultiPoly scaled(ElemCode c) const;
  MultiPoly operator-() const;

  friend MultiPoly operator+(const MultiPoly& f, const MultiPoly& g);
  friend MultiPoly operator-(const MultiPoly& f, const MultiPoly& g);
  friend MultiPoly operator*(const MultiPoly& f, const MultiPoly& g);
  friend bool operator==(const MultiPoly& f, const MultiPoly& g);

 private:
  void normalize();

  FieldPtr field_;
  std::vector<Term> terms_;
};

using Assignment = std::map<VariableId, FieldElement>;
using VariableNamer = std::function<std::string(VariableId)>;

MultiPoly p_add(const MultiPoly& f, const MultiPoly& g);
MultiPoly p_mul(const MultiPoly& f, const MultiPoly& g);

/// Substitutes the assigned variables; the rest stay symbolic.
MultiPoly p_eval_partial(const MultiPoly& f, const Assignment& assignment);

/// Full evaluation. Every variable of f must be assigned.
FieldElement p_evaluate(const MultiPoly& f, const Assignment& assignment);

/// Re-expresses f over `target`, whose prime subfield contains the
/// coefficients of f. Only prime-field coefficients can be embedded.
MultiPoly embed_prime_subfield(const MultiPoly& f, const FieldPtr& target);

/// Exact division in the polynomial ring; throws DomainError when g does
/// not divide f.
MultiPoly divide_exact(const MultiPoly& f, const MultiPoly& g);

enum class OrderKind { lex, grlex, grevlex };

/// A monomial ordering with an explicit variable priority. The priority is
/// listed smallest first, so lex over {a, b, c} builds a < b < c.
/// Variables missing from the list rank below every listed one, by index.
class MonomialOrder {
 public:
  MonomialOrder(OrderKind kind, std::vector<VariableId> ascending);

  OrderKind kind() const { return kind_; }
  std::span<const VariableId> ascending() const { return ascending_; }

  /// Negative, zero or positive as a precedes, equals or follows b.
  int compare(const Monomial& a, const Monomial& b) const;
  bool less(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }

  std::string describe(const VariableNamer& namer) const;

 private:
  std::int64_t rank(VariableId v) const;

  OrderKind kind_;
  std::vector<VariableId> ascending_;
  std::vector<std::int64_t> rank_;
};

Monomial leading_monomial(const MultiPoly& f, const MonomialOrder& order);
/// Leading monomial among an explicit support set.
Monomial leading_monomial(std::span<const Monomial> support, const MonomialOrder& order);

/// Folds every exponent e >= q of the listed variables to ((e-1) mod (q-1))+1,
/// which is the remainder modulo {X^q - X : X in vars}.
MultiPoly field_equation_remainder(const MultiPoly& f, std::uint64_t q,
                                   std::span<const VariableId> vars);
/// Same, folding every variable of f.
MultiPoly field_equation_remainder(const MultiPoly& f, std::uint64_t q);

/// True iff f is nonzero at some point of GF(q)^n. q must be the order of
/// f's coefficient field.
bool has_nonzero_point(const MultiPoly& f, std::uint64_t q);

/// Greedy search following the constructive argument: variables in
/// ascending index order, candidate values in enumeration order, keep the
/// first value that leaves the reduced remainder nonzero.
Assignment find_nonzero_point(const MultiPoly& f, std::uint64_t q);

/// q^n - prod_v (q - j_v) where j = LM(f rem field equations) and n counts
/// the variables in `scope` (which must cover f's variables).
BigInt zero_count_bound(const MultiPoly& f, std::uint64_t q, const MonomialOrder& order,
                        std::span<const VariableId> scope);

struct CountOptions {
  /// Abort with TooLargeError after this many recursion nodes.
  std::uint64_t node_budget = 20'000'000;
};

/// Number of points x in GF(q)^scope at which at least one polynomial of
/// `system` is nonzero. Exact; uses substitution with memoisation rather
/// than enumeration of GF(q)^scope.
BigInt count_nonvanishing(std::span<const MultiPoly> system, std::span<const VariableId> scope,
                          const CountOptions& options = {});

/// Canonical rendering: terms in descending `order`, coefficients as element
/// codes (omitted when 1), factors joined with '*'.
std::string to_string(const MultiPoly& f, const VariableNamer& namer, const MonomialOrder& order);
std::string to_string(const Monomial& m, const VariableNamer& namer);

struct ParseOptions {
  /// Treat every letter as its own variable ("bcegh" = b*c*e*g*h).
  bool single_letter_names = false;
};

/// Parses sums of products such as "b^2c^2e^2gh + c^2f^2gh" or
/// "a[1,1]*f[1,3] - 2*b[t1,1,3]". `resolve` maps names to variables and
/// returns nullopt for unknown names (which raises FormatError).
MultiPoly parse_poly(std::string_view text, const FieldPtr& field,
                     const std::function<std::optional<VariableId>(std::string_view)>& resolve,
                     const ParseOptions& options = {});

}  // namespace lnc
