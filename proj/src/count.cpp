#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "lnc/error.hpp"
#include "lnc/poly.hpp"

namespace lnc {

namespace {

using System = std::vector<MultiPoly>;

struct KeyHash {
  std::size_t operator()(const std::vector<std::uint64_t>& k) const {
    std::size_t h = k.size();
    for (auto x : k) h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

// Counts common zeros. Every Z(...) is taken over exactly the variables
// that occur in its (normalised) argument.
class ZeroCounter {
 public:
  ZeroCounter(FieldPtr field, const CountOptions& options)
      : field_(std::move(field)), q_(field_->order()), options_(options) {}

  BigInt power(std::size_t n) const {
    BigInt r = 1;
    for (std::size_t i = 0; i < n; ++i) r *= q_;
    return r;
  }

  // Returns nullopt when some member is a nonzero constant (no common zero).
  std::optional<System> normalise(const System& in) const {
    System out;
    out.reserve(in.size());
    for (const auto& f : in) {
      MultiPoly r = field_equation_remainder(f, q_);
      if (r.is_zero()) continue;
      if (r.is_constant()) return std::nullopt;
      const ElemCode lead = r.terms().back().coeff;
      if (lead != 1) r = r.scaled(field_->inv(lead));
      out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), [](const MultiPoly& a, const MultiPoly& b) {
      return std::lexicographical_compare(
          a.terms().begin(), a.terms().end(), b.terms().begin(), b.terms().end(),
          [](const MultiPoly::Term& x, const MultiPoly::Term& y) {
            if (x.mono != y.mono) return x.mono < y.mono;
            return x.coeff < y.coeff;
          });
    });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  static std::vector<VariableId> vars_of(const System& s) {
    std::vector<VariableId> out;
    for (const auto& f : s) {
      auto v = f.variables();
      out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  static std::vector<std::uint64_t> key_of(const System& s) {
    std::vector<std::uint64_t> key;
    for (const auto& f : s) {
      key.push_back(~std::uint64_t{0});
      for (const auto& t : f.terms()) {
        key.push_back(t.coeff);
        for (const auto& fac : t.mono.factors()) {
          key.push_back((std::uint64_t{fac.var.index} << 32) | fac.exp);
        }
        key.push_back(~std::uint64_t{1});
      }
    }
    return key;
  }

  // Z over the variables of the normalised form of `s`, then lifted to
  // `nvars` variables (which must contain them).
  BigInt zeros_lifted(const System& s, std::size_t nvars) {
    auto norm = normalise(s);
    if (!norm) return 0;
    const std::size_t own = vars_of(*norm).size();
    return zeros(*norm) * power(nvars - own);
  }

  // `s` must already be normalised.
  BigInt zeros(const System& s) {
    if (s.empty()) return 1;
    if (++nodes_ > options_.node_budget) {
      throw TooLargeError("exact count exceeded its node budget of " +
                          std::to_string(options_.node_budget));
    }
    auto key = key_of(s);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    BigInt result = compute(s);
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  BigInt compute(const System& s) {
    const auto vars = vars_of(s);
    const std::size_t n = vars.size();

    // A single monomial vanishes unless every variable is nonzero.
    if (s.size() == 1 && s[0].size() == 1) {
      return power(n) - boost::multiprecision::pow(BigInt(q_ - 1), static_cast<unsigned>(n));
    }

    if (auto r = split_components(s, vars)) return *r;
    if (auto r = common_monomial(s, n)) return *r;
    if (auto r = frobenius(s)) return *r;
    if (auto r = isolated_linear(s, n)) return *r;
    if (s.size() == 1) {
      if (auto r = linear_single(s[0], n)) return *r;
    }
    return branch(s, vars);
  }

  std::optional<BigInt> split_components(const System& s, const std::vector<VariableId>& vars) {
    if (s.size() < 2) return std::nullopt;
    std::vector<std::size_t> parent(s.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    std::unordered_map<std::uint32_t, std::size_t> owner;
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (auto v : s[i].variables()) {
        auto [it, inserted] = owner.emplace(v.index, i);
        if (!inserted) parent[find(i)] = find(it->second);
      }
    }
    std::unordered_map<std::size_t, System> groups;
    for (std::size_t i = 0; i < s.size(); ++i) groups[find(i)].push_back(s[i]);
    if (groups.size() < 2) return std::nullopt;
    (void)vars;
    BigInt product = 1;
    for (auto& [root, group] : groups) {
      auto norm = normalise(group);
      product *= zeros(*norm);
    }
    return product;
  }

  // f_i = g * h_i with g a monomial sharing no variable with any h_i:
  // Z = |Z(g) x GF(q)^h  union  GF(q)^g x Z(h)|.
  std::optional<BigInt> common_monomial(const System& s, std::size_t n) {
    Monomial g = s[0].terms()[0].mono;
    for (const auto& f : s) {
      for (const auto& t : f.terms()) {
        std::vector<Monomial::Factor> keep;
        for (const auto& fac : g.factors()) {
          const auto e = t.mono.exponent(fac.var);
          if (e > 0) keep.push_back({fac.var, std::min(e, fac.exp)});
        }
        g = Monomial(std::move(keep));
        if (g.is_one()) return std::nullopt;
      }
    }
    System rest;
    for (const auto& f : s) {
      std::vector<MultiPoly::Term> terms;
      for (const auto& t : f.terms()) terms.push_back({g.cofactor_in(t.mono), t.coeff});
      rest.emplace_back(field_, std::move(terms));
    }
    const auto rest_vars = vars_of(rest);
    for (const auto& fac : g.factors()) {
      if (std::binary_search(rest_vars.begin(), rest_vars.end(), fac.var)) return std::nullopt;
    }
    const std::size_t ng = g.factors().size();
    const std::size_t nh = n - ng;
    const BigInt zg = power(ng) - boost::multiprecision::pow(BigInt(q_ - 1), static_cast<unsigned>(ng));
    const BigInt zh = zeros_lifted(rest, nh);
    return zg * power(nh) + zh * power(ng) - zg * zh;
  }

  // All exponents divisible by p: f = (f')^p with the same zero set.
  std::optional<BigInt> frobenius(const System& s) {
    const std::uint64_t p = field_->characteristic();
    for (const auto& f : s) {
      for (const auto& t : f.terms()) {
        for (const auto& fac : t.mono.factors()) {
          if (fac.exp % p != 0) return std::nullopt;
        }
      }
    }
    System roots;
    for (const auto& f : s) {
      std::vector<MultiPoly::Term> terms;
      for (const auto& t : f.terms()) {
        std::vector<Monomial::Factor> factors(t.mono.factors().begin(), t.mono.factors().end());
        for (auto& fac : factors) fac.exp = static_cast<std::uint32_t>(fac.exp / p);
        terms.push_back({Monomial(std::move(factors)), field_->pth_root(t.coeff)});
      }
      roots.emplace_back(field_, std::move(terms));
    }
    return zeros(*normalise(roots));
  }

  // Some member is c*x + B with x occurring nowhere else: x is determined.
  std::optional<BigInt> isolated_linear(const System& s, std::size_t n) {
    std::unordered_map<std::uint32_t, int> occurrences;
    for (const auto& f : s) {
      for (const auto& t : f.terms()) {
        for (const auto& fac : t.mono.factors()) ++occurrences[fac.var.index];
      }
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (const auto& t : s[i].terms()) {
        if (t.mono.factors().size() != 1 || t.mono.factors()[0].exp != 1) continue;
        const VariableId x = t.mono.factors()[0].var;
        if (occurrences[x.index] != 1) continue;
        System rest;
        for (std::size_t j = 0; j < s.size(); ++j) {
          if (j != i) rest.push_back(s[j]);
        }
        return zeros_lifted(rest, n - 1);
      }
    }
    return std::nullopt;
  }

  // f = x*A + B with A, B free of x:
  // Z(f) = q^(n-1) - Z(A) + q * Z({A, B}).
  std::optional<BigInt> linear_single(const MultiPoly& f, std::size_t n) {
    std::optional<VariableId> best;
    std::size_t best_size = 0;
    for (auto v : f.variables()) {
      if (f.degree_in(v) != 1) continue;
      std::size_t count = 0;
      for (const auto& t : f.terms()) count += t.mono.exponent(v) ? 1 : 0;
      if (!best || count < best_size) {
        best = v;
        best_size = count;
      }
    }
    if (!best) return std::nullopt;
    const Monomial x = Monomial::variable(*best);
    std::vector<MultiPoly::Term> a_terms;
    std::vector<MultiPoly::Term> b_terms;
    for (const auto& t : f.terms()) {
      if (t.mono.exponent(*best)) {
        a_terms.push_back({x.cofactor_in(t.mono), t.coeff});
      } else {
        b_terms.push_back(t);
      }
    }
    const MultiPoly a(field_, std::move(a_terms));
    const MultiPoly b(field_, std::move(b_terms));
    const BigInt za = zeros_lifted({a}, n - 1);
    const BigInt zab = zeros_lifted({a, b}, n - 1);
    return power(n - 1) - za + zab * q_;
  }

  BigInt branch(const System& s, const std::vector<VariableId>& vars) {
    std::unordered_map<std::uint32_t, std::size_t> weight;
    for (const auto& f : s) {
      for (const auto& t : f.terms()) {
        for (const auto& fac : t.mono.factors()) ++weight[fac.var.index];
      }
    }
    VariableId pick = vars.front();
    for (auto v : vars) {
      if (weight[v.index] > weight[pick.index]) pick = v;
    }
    if (!field_->enumerable()) throw TooLargeError("exact count needs an enumerable field");
    BigInt total = 0;
    for (ElemCode c = 0; c < q_; ++c) {
      const Assignment at{{pick, FieldElement(field_, c)}};
      System sub;
      sub.reserve(s.size());
      for (const auto& f : s) sub.push_back(p_eval_partial(f, at));
      total += zeros_lifted(sub, vars.size() - 1);
    }
    return total;
  }

  FieldPtr field_;
  std::uint64_t q_;
  CountOptions options_;
  std::uint64_t nodes_ = 0;
  std::unordered_map<std::vector<std::uint64_t>, BigInt, KeyHash> memo_;
};

}  // namespace

BigInt count_nonvanishing(std::span<const MultiPoly> system, std::span<const VariableId> scope,
                          const CountOptions& options) {
  std::vector<VariableId> sorted_scope(scope.begin(), scope.end());
  std::sort(sorted_scope.begin(), sorted_scope.end());
  if (std::adjacent_find(sorted_scope.begin(), sorted_scope.end()) != sorted_scope.end()) {
    throw DomainError("counting scope lists a variable twice");
  }
  BigInt total = 1;
  if (system.empty()) return 0;
  const FieldPtr& field = system.front().field();
  for (std::size_t i = 0; i < sorted_scope.size(); ++i) total *= field->order();
  System s;
  for (const auto& f : system) {
    if (!same_field(*f.field(), *field)) throw DomainError("system mixes coefficient fields");
    for (auto v : f.variables()) {
      if (!std::binary_search(sorted_scope.begin(), sorted_scope.end(), v)) {
        throw DomainError("counting scope does not cover the system");
      }
    }
    s.push_back(f);
  }
  ZeroCounter counter(field, options);
  return total - counter.zeros_lifted(s, sorted_scope.size());
}

}  // namespace lnc
