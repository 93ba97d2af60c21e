#include "lnc/poly.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <unordered_map>

#include "lnc/error.hpp"

namespace lnc {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end(),
            [](const Factor& a, const Factor& b) { return a.var < b.var; });
  for (const auto& f : factors) {
    if (f.exp == 0) continue;
    if (!factors_.empty() && factors_.back().var == f.var) {
      factors_.back().exp += f.exp;
    } else {
      factors_.push_back(f);
    }
  }
}

Monomial Monomial::variable(VariableId v, std::uint32_t exp) {
  Monomial m;
  if (exp > 0) m.factors_.push_back({v, exp});
  return m;
}

std::uint32_t Monomial::exponent(VariableId v) const {
  auto it = std::lower_bound(factors_.begin(), factors_.end(), v,
                             [](const Factor& f, VariableId x) { return f.var < x; });
  return (it != factors_.end() && it->var == v) ? it->exp : 0;
}

std::uint64_t Monomial::degree() const {
  std::uint64_t d = 0;
  for (const auto& f : factors_) d += f.exp;
  return d;
}

bool Monomial::divides(const Monomial& other) const {
  auto it = other.factors_.begin();
  for (const auto& f : factors_) {
    while (it != other.factors_.end() && it->var < f.var) ++it;
    if (it == other.factors_.end() || it->var != f.var || it->exp < f.exp) return false;
  }
  return true;
}

Monomial Monomial::cofactor_in(const Monomial& other) const {
  Monomial out;
  auto it = factors_.begin();
  for (const auto& f : other.factors_) {
    while (it != factors_.end() && it->var < f.var) ++it;
    std::uint32_t sub = (it != factors_.end() && it->var == f.var) ? it->exp : 0;
    if (f.exp > sub) out.factors_.push_back({f.var, f.exp - sub});
  }
  return out;
}

bool Monomial::is_multilinear() const {
  return std::all_of(factors_.begin(), factors_.end(), [](const Factor& f) { return f.exp == 1; });
}

std::size_t Monomial::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ull;
  for (const auto& f : factors_) {
    h ^= (static_cast<std::size_t>(f.var.index) << 8 | f.exp) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors_.reserve(a.factors_.size() + b.factors_.size());
  auto i = a.factors_.begin();
  auto j = b.factors_.begin();
  while (i != a.factors_.end() && j != b.factors_.end()) {
    if (i->var < j->var) {
      out.factors_.push_back(*i++);
    } else if (j->var < i->var) {
      out.factors_.push_back(*j++);
    } else {
      out.factors_.push_back({i->var, i->exp + j->exp});
      ++i;
      ++j;
    }
  }
  out.factors_.insert(out.factors_.end(), i, a.factors_.end());
  out.factors_.insert(out.factors_.end(), j, b.factors_.end());
  return out;
}

// ---------------------------------------------------------------- MultiPoly

namespace {

void require_same_field(const MultiPoly& f, const MultiPoly& g) {
  if (!same_field(*f.field(), *g.field())) {
    throw DomainError("polynomials over different fields (GF(" + f.field()->spec().label() +
                      ") vs GF(" + g.field()->spec().label() + "))");
  }
}

}  // namespace

MultiPoly::MultiPoly(FieldPtr field) : field_(std::move(field)) {
  if (!field_) throw DomainError("polynomial without a coefficient field");
}

MultiPoly::MultiPoly(FieldPtr field, std::vector<Term> terms) : MultiPoly(std::move(field)) {
  terms_ = std::move(terms);
  normalize();
}

void MultiPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.mono < b.mono; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!field_->contains(t.coeff)) throw DomainError("coefficient outside the field");
    if (!merged.empty() && merged.back().mono == t.mono) {
      merged.back().coeff = field_->add(merged.back().coeff, t.coeff);
    } else {
      if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
      merged.push_back(std::move(t));
    }
  }
  if (!merged.empty() && merged.back().coeff == 0) merged.pop_back();
  terms_ = std::move(merged);
}

MultiPoly MultiPoly::constant(FieldPtr field, ElemCode c) {
  MultiPoly p(std::move(field));
  if (!p.field_->contains(c)) throw DomainError("coefficient outside the field");
  if (c != 0) p.terms_.push_back({Monomial(), c});
  return p;
}

MultiPoly MultiPoly::variable(FieldPtr field, VariableId v) {
  return monomial(std::move(field), Monomial::variable(v), 1);
}

MultiPoly MultiPoly::monomial(FieldPtr field, Monomial m, ElemCode c) {
  MultiPoly p(std::move(field));
  if (!p.field_->contains(c)) throw DomainError("coefficient outside the field");
  if (c != 0) p.terms_.push_back({std::move(m), c});
  return p;
}

bool MultiPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

ElemCode MultiPoly::constant_term() const {
  return (!terms_.empty() && terms_[0].mono.is_one()) ? terms_[0].coeff : 0;
}

ElemCode MultiPoly::coefficient(const Monomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& t, const Monomial& x) { return t.mono < x; });
  return (it != terms_.end() && it->mono == m) ? it->coeff : 0;
}

std::vector<VariableId> MultiPoly::variables() const {
  std::vector<VariableId> out;
  for (const auto& t : terms_) {
    for (const auto& f : t.mono.factors()) out.push_back(f.var);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::uint32_t MultiPoly::degree_in(VariableId v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

std::uint64_t MultiPoly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.degree());
  return d;
}

MultiPoly MultiPoly::scaled(ElemCode c) const {
  MultiPoly out(field_);
  if (c == 0) return out;
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = field_->mul(t.coeff, c);
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly out(field_);
  out.terms_ = terms_;
  for (auto& t : out.terms_) t.coeff = field_->neg(t.coeff);
  return out;
}

MultiPoly operator+(const MultiPoly& f, const MultiPoly& g) {
  require_same_field(f, g);
  MultiPoly out(f.field_);
  out.terms_.reserve(f.terms_.size() + g.terms_.size());
  auto i = f.terms_.begin();
  auto j = g.terms_.begin();
  const Field& k = *f.field_;
  while (i != f.terms_.end() && j != g.terms_.end()) {
    if (i->mono < j->mono) {
      out.terms_.push_back(*i++);
    } else if (j->mono < i->mono) {
      out.terms_.push_back(*j++);
    } else {
      const ElemCode c = k.add(i->coeff, j->coeff);
      if (c != 0) out.terms_.push_back({i->mono, c});
      ++i;
      ++j;
    }
  }
  out.terms_.insert(out.terms_.end(), i, f.terms_.end());
  out.terms_.insert(out.terms_.end(), j, g.terms_.end());
  return out;
}

MultiPoly operator-(const MultiPoly& f, const MultiPoly& g) { return f + (-g); }

MultiPoly operator*(const MultiPoly& f, const MultiPoly& g) {
  require_same_field(f, g);
  const Field& k = *f.field_;
  if (f.is_zero() || g.is_zero()) return MultiPoly(f.field_);
  if (g.terms_.size() == 1 && g.terms_[0].mono.is_one()) return f.scaled(g.terms_[0].coeff);
  if (f.terms_.size() == 1 && f.terms_[0].mono.is_one()) return g.scaled(f.terms_[0].coeff);
  std::unordered_map<Monomial, ElemCode, MonomialHash> acc;
  acc.reserve(f.terms_.size() * g.terms_.size());
  for (const auto& a : f.terms_) {
    for (const auto& b : g.terms_) {
      auto [it, inserted] = acc.try_emplace(a.mono * b.mono, 0);
      it->second = k.add(it->second, k.mul(a.coeff, b.coeff));
    }
  }
  std::vector<MultiPoly::Term> terms;
  terms.reserve(acc.size());
  for (auto& [m, c] : acc) {
    if (c != 0) terms.push_back({m, c});
  }
  return MultiPoly(f.field_, std::move(terms));
}

bool operator==(const MultiPoly& f, const MultiPoly& g) {
  return same_field(*f.field_, *g.field_) && f.terms_ == g.terms_;
}

MultiPoly p_add(const MultiPoly& f, const MultiPoly& g) { return f + g; }
MultiPoly p_mul(const MultiPoly& f, const MultiPoly& g) { return f * g; }

MultiPoly p_eval_partial(const MultiPoly& f, const Assignment& assignment) {
  if (assignment.empty()) return f;
  const Field& k = *f.field();
  for (const auto& [v, value] : assignment) {
    if (!same_field(*value.field(), k)) {
      throw DomainError("assigned value is not in the polynomial's coefficient field");
    }
  }
  std::vector<MultiPoly::Term> out;
  out.reserve(f.size());
  std::vector<Monomial::Factor> rest;
  for (const auto& t : f.terms()) {
    ElemCode c = t.coeff;
    rest.clear();
    for (const auto& fac : t.mono.factors()) {
      auto it = assignment.find(fac.var);
      if (it == assignment.end()) {
        rest.push_back(fac);
      } else {
        c = k.mul(c, k.pow(it->second.code(), fac.exp));
        if (c == 0) break;
      }
    }
    if (c != 0) out.push_back({Monomial(rest), c});
  }
  return MultiPoly(f.field(), std::move(out));
}

FieldElement p_evaluate(const MultiPoly& f, const Assignment& assignment) {
  const MultiPoly r = p_eval_partial(f, assignment);
  if (!r.is_constant()) throw DomainError("evaluation leaves unassigned variables");
  return FieldElement(f.field(), r.constant_term());
}

MultiPoly embed_prime_subfield(const MultiPoly& f, const FieldPtr& target) {
  if (f.field()->characteristic() != target->characteristic()) {
    throw DomainError("cannot embed between fields of different characteristic");
  }
  std::vector<MultiPoly::Term> terms(f.terms().begin(), f.terms().end());
  for (const auto& t : terms) {
    if (t.coeff >= f.field()->characteristic()) {
      throw DomainError("coefficient outside the prime subfield cannot be embedded");
    }
  }
  // Prime-subfield elements keep their codes under the packing sum(c_i p^i).
  return MultiPoly(target, std::move(terms));
}

namespace {

// Lex with higher variable index more significant; used for division.
struct LexGreater {
  bool operator()(const Monomial& a, const Monomial& b) const {
    auto fa = a.factors();
    auto fb = b.factors();
    auto i = fa.rbegin();
    auto j = fb.rbegin();
    for (; i != fa.rend() && j != fb.rend(); ++i, ++j) {
      if (i->var != j->var) return i->var > j->var;
      if (i->exp != j->exp) return i->exp > j->exp;
    }
    return i != fa.rend() && j == fb.rend();
  }
};

}  // namespace

MultiPoly divide_exact(const MultiPoly& f, const MultiPoly& g) {
  require_same_field(f, g);
  if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
  const Field& k = *f.field();
  if (g.is_constant()) return f.scaled(k.inv(g.constant_term()));
  const auto& gt = g.terms();
  auto lead_it = std::min_element(gt.begin(), gt.end(), [](const auto& a, const auto& b) {
    return LexGreater{}(a.mono, b.mono);
  });
  const Monomial lead = lead_it->mono;
  const ElemCode lead_inv = k.inv(lead_it->coeff);

  std::map<Monomial, ElemCode, LexGreater> rem;
  for (const auto& t : f.terms()) rem.emplace(t.mono, t.coeff);
  std::vector<MultiPoly::Term> quotient;
  while (!rem.empty()) {
    const auto top = rem.begin();
    if (!lead.divides(top->first)) throw DomainError("polynomial division is not exact");
    const Monomial m = lead.cofactor_in(top->first);
    const ElemCode c = k.mul(top->second, lead_inv);
    quotient.push_back({m, c});
    for (const auto& t : gt) {
      const Monomial prod = m * t.mono;
      auto [it, inserted] = rem.try_emplace(prod, 0);
      it->second = k.sub(it->second, k.mul(c, t.coeff));
      if (it->second == 0) rem.erase(it);
    }
  }
  return MultiPoly(f.field(), std::move(quotient));
}

// ---------------------------------------------------------- MonomialOrder

MonomialOrder::MonomialOrder(OrderKind kind, std::vector<VariableId> ascending)
    : kind_(kind), ascending_(std::move(ascending)) {
  std::uint32_t max_index = 0;
  for (auto v : ascending_) max_index = std::max(max_index, v.index);
  rank_.assign(ascending_.empty() ? 0 : max_index + 1, -1);
  for (std::size_t i = 0; i < ascending_.size(); ++i) {
    auto& r = rank_[ascending_[i].index];
    if (r != -1) throw DomainError("monomial order lists a variable twice");
    r = static_cast<std::int64_t>(i);
  }
}

std::int64_t MonomialOrder::rank(VariableId v) const {
  if (v.index < rank_.size() && rank_[v.index] >= 0) return rank_[v.index];
  return static_cast<std::int64_t>(v.index) - (std::int64_t{1} << 40);
}

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
  if (kind_ != OrderKind::lex) {
    const auto da = a.degree();
    const auto db = b.degree();
    if (da != db) return da < db ? -1 : 1;
  }
  auto ranked = [&](const Monomial& m) {
    std::vector<std::pair<std::int64_t, std::uint32_t>> out;
    out.reserve(m.factors().size());
    for (const auto& f : m.factors()) out.emplace_back(rank(f.var), f.exp);
    std::sort(out.begin(), out.end());
    return out;
  };
  const auto ra = ranked(a);
  const auto rb = ranked(b);
  if (kind_ == OrderKind::grevlex) {
    // Smallest variable where the exponents differ: smaller exponent wins.
    std::size_t i = 0;
    std::size_t j = 0;
    while (i < ra.size() && j < rb.size()) {
      if (ra[i].first != rb[j].first) return ra[i].first < rb[j].first ? -1 : 1;
      if (ra[i].second != rb[j].second) return ra[i].second > rb[j].second ? -1 : 1;
      ++i;
      ++j;
    }
    if (i < ra.size()) return -1;
    if (j < rb.size()) return 1;
    return 0;
  }
  // lex / grlex tie-break: largest variable where the exponents differ.
  auto i = ra.rbegin();
  auto j = rb.rbegin();
  for (; i != ra.rend() && j != rb.rend(); ++i, ++j) {
    if (i->first != j->first) return i->first > j->first ? 1 : -1;
    if (i->second != j->second) return i->second > j->second ? 1 : -1;
  }
  if (i != ra.rend()) return 1;
  if (j != rb.rend()) return -1;
  return 0;
}

std::string MonomialOrder::describe(const VariableNamer& namer) const {
  std::string out = kind_ == OrderKind::lex ? "lex" : kind_ == OrderKind::grlex ? "grlex" : "grevlex";
  out += ":";
  for (std::size_t i = 0; i < ascending_.size(); ++i) {
    if (i) out += "<";
    out += namer(ascending_[i]);
  }
  return out;
}

Monomial leading_monomial(std::span<const Monomial> support, const MonomialOrder& order) {
  if (support.empty()) throw DomainError("leading monomial of the zero polynomial is undefined");
  const Monomial* best = &support[0];
  for (const auto& m : support.subspan(1)) {
    if (order.less(*best, m)) best = &m;
  }
  return *best;
}

Monomial leading_monomial(const MultiPoly& f, const MonomialOrder& order) {
  if (f.is_zero()) throw DomainError("leading monomial of the zero polynomial is undefined");
  std::vector<Monomial> support;
  support.reserve(f.size());
  for (const auto& t : f.terms()) support.push_back(t.mono);
  return leading_monomial(support, order);
}

// ------------------------------------------------- field-equation remainder

MultiPoly field_equation_remainder(const MultiPoly& f, std::uint64_t q,
                                   std::span<const VariableId> vars) {
  if (q < 2) throw DomainError("field order must be at least 2");
  std::vector<VariableId> sorted(vars.begin(), vars.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<MultiPoly::Term> out;
  out.reserve(f.size());
  bool changed = false;
  for (const auto& t : f.terms()) {
    std::vector<Monomial::Factor> factors(t.mono.factors().begin(), t.mono.factors().end());
    for (auto& fac : factors) {
      if (fac.exp >= q && std::binary_search(sorted.begin(), sorted.end(), fac.var)) {
        fac.exp = static_cast<std::uint32_t>((fac.exp - 1) % (q - 1) + 1);
        changed = true;
      }
    }
    out.push_back({Monomial(std::move(factors)), t.coeff});
  }
  if (!changed) return f;
  return MultiPoly(f.field(), std::move(out));
}

MultiPoly field_equation_remainder(const MultiPoly& f, std::uint64_t q) {
  const auto vars = f.variables();
  return field_equation_remainder(f, q, vars);
}

namespace {
void require_native_order(const MultiPoly& f, std::uint64_t q) {
  if (q != f.field()->order()) {
    throw DomainError("q = " + std::to_string(q) + " is not the order of GF(" +
                      f.field()->spec().label() + ")");
  }
}
}  // namespace

bool has_nonzero_point(const MultiPoly& f, std::uint64_t q) {
  require_native_order(f, q);
  return !field_equation_remainder(f, q).is_zero();
}

Assignment find_nonzero_point(const MultiPoly& f, std::uint64_t q) {
  require_native_order(f, q);
  MultiPoly current = field_equation_remainder(f, q);
  if (current.is_zero()) throw InfeasibleError("polynomial vanishes on all of GF(q)^n");
  const FieldPtr& field = f.field();
  if (!field->enumerable()) throw TooLargeError("field too large for nonzero-point search");
  Assignment result;
  for (VariableId v : f.variables()) {
    bool found = false;
    for (ElemCode c = 0; c < q; ++c) {
      Assignment step{{v, FieldElement(field, c)}};
      MultiPoly next = field_equation_remainder(p_eval_partial(current, step), q);
      if (!next.is_zero()) {
        current = std::move(next);
        result.emplace(v, FieldElement(field, c));
        found = true;
        break;
      }
    }
    if (!found) throw InternalError("greedy nonzero-point search got stuck");
  }
  if (p_evaluate(f, result).is_zero()) throw InternalError("nonzero-point search self-check failed");
  return result;
}

BigInt zero_count_bound(const MultiPoly& f, std::uint64_t q, const MonomialOrder& order,
                        std::span<const VariableId> scope) {
  const MultiPoly r = field_equation_remainder(f, q, scope);
  if (r.is_zero()) throw DomainError("zero-count bound needs a nonzero remainder");
  for (VariableId v : r.variables()) {
    if (std::find(scope.begin(), scope.end(), v) == scope.end()) {
      throw DomainError("zero-count bound scope does not cover the polynomial");
    }
  }
  const Monomial lm = leading_monomial(r, order);
  BigInt total = 1;
  BigInt nonzero = 1;
  for (VariableId v : scope) {
    total *= q;
    nonzero *= q - lm.exponent(v);
  }
  return total - nonzero;
}

// --------------------------------------------------------------- rendering

std::string to_string(const Monomial& m, const VariableNamer& namer) {
  if (m.is_one()) return "1";
  std::string out;
  for (const auto& f : m.factors()) {
    if (!out.empty()) out += "*";
    out += namer(f.var);
    if (f.exp != 1) out += "^" + std::to_string(f.exp);
  }
  return out;
}

std::string to_string(const MultiPoly& f, const VariableNamer& namer, const MonomialOrder& order) {
  if (f.is_zero()) return "0";
  std::vector<const MultiPoly::Term*> terms;
  for (const auto& t : f.terms()) terms.push_back(&t);
  std::stable_sort(terms.begin(), terms.end(), [&](const auto* a, const auto* b) {
    return order.compare(a->mono, b->mono) > 0;
  });
  std::string out;
  for (const auto* t : terms) {
    if (!out.empty()) out += " + ";
    if (t->mono.is_one()) {
      out += std::to_string(t->coeff);
    } else if (t->coeff == 1) {
      out += to_string(t->mono, namer);
    } else {
      out += std::to_string(t->coeff) + "*" + to_string(t->mono, namer);
    }
  }
  return out;
}

// ----------------------------------------------------------------- parsing

MultiPoly parse_poly(std::string_view text, const FieldPtr& field,
                     const std::function<std::optional<VariableId>(std::string_view)>& resolve,
                     const ParseOptions& options) {
  std::size_t pos = 0;
  auto fail = [&](const std::string& what) -> FormatError {
    return FormatError("polynomial parse error at offset " + std::to_string(pos) + ": " + what);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto read_uint = [&]() -> std::uint64_t {
    std::uint64_t v = 0;
    const std::size_t start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(text[pos] - '0');
      ++pos;
    }
    if (pos == start) throw fail("expected a number");
    return v;
  };
  auto read_name = [&]() -> std::string_view {
    const std::size_t start = pos;
    if (options.single_letter_names) {
      ++pos;
      return text.substr(start, 1);
    }
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
      ++pos;
    }
    if (pos < text.size() && text[pos] == '[') {
      const auto close = text.find(']', pos);
      if (close == std::string_view::npos) throw fail("unterminated '['");
      pos = close + 1;
    }
    return text.substr(start, pos - start);
  };

  MultiPoly result(field);
  skip_ws();
  if (pos < text.size() && text.substr(pos) == "0") return result;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }
  while (true) {
    skip_ws();
    ElemCode coeff = 1;
    std::vector<Monomial::Factor> factors;
    bool any = false;
    while (true) {
      skip_ws();
      if (pos >= text.size() || text[pos] == '+' || text[pos] == '-') break;
      if (text[pos] == '*') {
        ++pos;
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
        const std::uint64_t v = read_uint();
        coeff = field->mul(coeff, field->from_int(static_cast<std::int64_t>(v % (1ull << 62))));
        any = true;
        continue;
      }
      if (!std::isalpha(static_cast<unsigned char>(text[pos]))) throw fail("unexpected character");
      const std::string_view name = read_name();
      const auto var = resolve(name);
      if (!var) throw fail("unknown variable '" + std::string(name) + "'");
      std::uint32_t exp = 1;
      skip_ws();
      if (pos < text.size() && text[pos] == '^') {
        ++pos;
        skip_ws();
        exp = static_cast<std::uint32_t>(read_uint());
      }
      factors.push_back({*var, exp});
      any = true;
    }
    if (!any) throw fail("empty term");
    if (negative) coeff = field->neg(coeff);
    result = result + MultiPoly::monomial(field, Monomial(std::move(factors)), coeff);
    if (pos >= text.size()) break;
    negative = text[pos] == '-';
    ++pos;
  }
  return result;
}

}  // namespace lnc
