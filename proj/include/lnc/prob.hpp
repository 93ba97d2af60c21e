#pragma once

// Random linear network coding: fixings, the reduced determinant
// polynomials, lower bounds on the success probability, and exact and
// sampled success probabilities.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "lnc/network.hpp"
#include "lnc/poly.hpp"

namespace lnc {

using Rational = boost::multiprecision::cpp_rational;

/// Pre-assigned a/f coefficients. Values are element codes so one fixing
/// can be used over several fields; they are range-checked against q when
/// applied.
struct Fixing {
  std::map<std::pair<std::uint32_t, std::uint32_t>, ElemCode> fixed_a;
  std::map<std::pair<std::uint32_t, std::uint32_t>, ElemCode> fixed_f;
  /// The remaining a/f variables, registry order.
  std::vector<VariableId> random_vars;

  std::size_t mu() const { return random_vars.size(); }
};

/// f[i,j] = 1 when edge i is the only edge into tail(j); a[i,j] follows the
/// identity pattern at origins whose outdegree equals their symbol count;
/// everything else is random. Explicit `fix` lines of the fixture override.
Fixing default_fixing(const Network& net, const VariableRegistry& reg);

/// Every a/f variable random except the fixture's explicit `fix` lines.
Fixing open_fixing(const Network& net, const VariableRegistry& reg);

/// The given declarations fixed, everything else random.
Fixing fixing_from_decls(const Network& net, const VariableRegistry& reg, const std::vector<FixDecl>& decls);

/// Reads `fix` lines (and comments) from a file.
std::vector<FixDecl> load_fix_file(const std::filesystem::path& path);

/// The fixed values as an assignment over `field`; throws DomainError for
/// values outside the field.
Assignment fixed_assignment(const VariableRegistry& reg, const Fixing& fixing, const FieldPtr& field);

/// Number of edges j with a random a[i,j] or f[l,j].
std::size_t eta(const Network& net, const VariableRegistry& reg, const Fixing& fixing);

/// |M_t| with the fixed values substituted, one per sink.
std::vector<MultiPoly> p_tilde_factors(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                                       const FieldPtr& field);

/// Product of p_tilde_factors.
MultiPoly build_p_tilde(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                        const FieldPtr& field);

/// Field-equation remainder over the random variables only.
MultiPoly build_p_hat(const MultiPoly& p_tilde, std::uint64_t q, std::span<const VariableId> random_vars);

/// Groups the terms of f by their monomial in `outer`; each coefficient is
/// the remaining polynomial. Keys are monomials in `outer` variables only.
std::map<Monomial, MultiPoly> coefficients_by(const MultiPoly& f, std::span<const VariableId> outer);

/// Projection of the support of f onto the random variables.
std::vector<Monomial> random_support(const MultiPoly& p_hat, std::span<const VariableId> random_vars);

/// q^-mu prod (q - j_v) for the leading random-variable monomial j of P-hat.
Rational bound_lm(const MultiPoly& p_hat, std::uint64_t q, std::span<const VariableId> random_vars,
                  const MonomialOrder& order);

/// Minimum of q^-mu prod (q - s_v) over the random-variable support of P-hat.
Rational bound_support_min(const MultiPoly& p_hat, std::uint64_t q, std::span<const VariableId> random_vars);

struct BestOrdering {
  Rational bound;
  MonomialOrder order;
};

/// Maximum of bound_lm over all mu! lex orders. Refused for mu > limit.
BestOrdering bound_best_ordering(const MultiPoly& p_hat, std::uint64_t q,
                                 std::span<const VariableId> random_vars, std::size_t limit = 8);

/// ((q - |T|) / q)^eta; NotApplicableError unless q > |T|.
Rational ho_bound(const Network& net, const VariableRegistry& reg, const Fixing& fixing, std::uint64_t q);

/// Global coding vectors propagated in topological edge order; decodable
/// when the vectors entering the sink span GF(q)^h.
bool transfer_rank_decodable(const Network& net, const VariableRegistry& reg, const Assignment& scheme,
                             NodeIndex sink);

/// Precompiled form of transfer_rank_decodable for repeated evaluation.
class RankOracle {
 public:
  RankOracle(const Network& net, const VariableRegistry& reg, FieldPtr field);

  /// `values[v.index]` is the code of a/f variable v; b entries are ignored.
  bool decodable(std::span<const ElemCode> values, NodeIndex sink) const;
  bool all_decodable(std::span<const ElemCode> values) const;

  /// Global coding vector of every edge, indexed by edge id - 1.
  std::vector<std::vector<ElemCode>> coding_vectors(std::span<const ElemCode> values) const;

 private:
  bool spans(const std::vector<std::vector<ElemCode>>& vectors, NodeIndex sink) const;

  struct Incoming {
    bool from_symbol;
    std::uint32_t source;  // symbol index or edge id
    std::uint32_t var;     // registry index of the coefficient
  };
  const Network* net_;
  FieldPtr field_;
  std::vector<std::vector<Incoming>> incoming_;  // by edge id - 1
};

struct ProbabilityResult {
  enum class Kind { exact, monte_carlo } kind = Kind::exact;
  std::uint64_t q = 0;
  std::size_t mu = 0;
  // exact
  Rational exact;
  BigInt successes;
  BigInt total;
  /// True when the count was repeated point by point with the rank oracle.
  bool cross_checked = false;
  // monte_carlo
  double estimate = 0;
  double stderr_ = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

struct ExactOptions {
  /// Point-by-point rank-oracle cross-check up to this many points.
  std::uint64_t cross_check_limit = std::uint64_t{1} << 24;
  CountOptions count;
};

/// Counts x in GF(q)^mu with P-tilde(x) nonzero as a polynomial in the
/// b-variables. Throws InternalError if the cross-check disagrees.
ProbabilityResult exact_probability(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                                    const FieldPtr& field, const ExactOptions& options = {});

struct MonteCarloOptions {
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  /// 0 means one per hardware thread. Does not affect the result.
  unsigned workers = 0;
};

ProbabilityResult monte_carlo(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                              const FieldPtr& field, const MonteCarloOptions& options);

/// Uniform draw from 0..bound-1 by rejection on 64-bit outputs.
template <class Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = bound == 0 ? 0 : (~std::uint64_t{0} / bound) * bound;
  while (true) {
    const std::uint64_t x = engine();
    if (x < limit) return x % bound;
  }
}

/// Truncates to `digits` significant digits: 36/256 -> "0.140",
/// 0.0703125 -> "0.0703".
std::string format_decimal(const Rational& r, int digits = 3);

}  // namespace lnc
