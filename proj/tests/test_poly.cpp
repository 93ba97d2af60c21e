#include <doctest.h>

#include <random>

#include "lnc/error.hpp"
#include "lnc/poly.hpp"

using namespace lnc;

namespace {

const VariableId X{0}, Y{1}, Z{2};

std::string name_of(VariableId v) { return std::string(1, static_cast<char>('x' + v.index)); }

std::optional<VariableId> resolve_xyz(std::string_view s) {
  if (s.size() == 1 && s[0] >= 'x' && s[0] <= 'z') return VariableId{static_cast<std::uint32_t>(s[0] - 'x')};
  if (s.size() == 1 && s[0] >= 'a' && s[0] <= 'h') return VariableId{static_cast<std::uint32_t>(10 + s[0] - 'a')};
  return std::nullopt;
}

MultiPoly parse(std::string_view text, const FieldPtr& f) { return parse_poly(text, f, resolve_xyz); }

// x > y > z
MonomialOrder xyz(OrderKind kind) { return MonomialOrder(kind, {Z, Y, X}); }

MultiPoly random_poly(std::mt19937_64& rng, const FieldPtr& f, unsigned nvars, unsigned max_exp, unsigned max_terms) {
  std::vector<MultiPoly::Term> terms;
  const unsigned n = 1 + rng() % max_terms;
  for (unsigned i = 0; i < n; ++i) {
    std::vector<Monomial::Factor> fs;
    for (unsigned v = 0; v < nvars; ++v) fs.push_back({VariableId{v}, static_cast<std::uint32_t>(rng() % (max_exp + 1))});
    terms.push_back({Monomial(fs), 1 + rng() % (f->order() - 1)});
  }
  return MultiPoly(f, terms);
}

Monomial random_monomial(std::mt19937_64& rng, unsigned nvars, unsigned max_exp) {
  std::vector<Monomial::Factor> fs;
  for (unsigned v = 0; v < nvars; ++v) fs.push_back({VariableId{v}, static_cast<std::uint32_t>(rng() % (max_exp + 1))});
  return Monomial(fs);
}

// Every point of GF(q)^n over variables 0..n-1.
template <class F>
void for_each_point(const FieldPtr& f, unsigned n, F&& visit) {
  const std::uint64_t q = f->order();
  std::vector<ElemCode> x(n, 0);
  while (true) {
    Assignment a;
    for (unsigned v = 0; v < n; ++v) a.emplace(VariableId{v}, FieldElement(f, x[v]));
    visit(a);
    unsigned i = 0;
    while (i < n && ++x[i] == q) x[i++] = 0;
    if (i == n) return;
  }
}

std::uint64_t brute_zero_count(const MultiPoly& p, unsigned n) {
  std::uint64_t zeros = 0;
  for_each_point(p.field(), n, [&](const Assignment& a) { zeros += p_evaluate(p, a).is_zero(); });
  return zeros;
}

std::vector<VariableId> first_vars(unsigned n) {
  std::vector<VariableId> v;
  for (unsigned i = 0; i < n; ++i) v.push_back(VariableId{i});
  return v;
}

}  // namespace

TEST_CASE("leading monomial of a four-term polynomial under each order") {
  const FieldPtr f = make_field(13, 1);
  const MultiPoly p = parse("4*x*y^2*z + 4*z^2 - 5*x^3 + 7*x^2*z^2", f);
  CHECK(p.size() == 4);
  const auto render = [&](const Monomial& m) { return to_string(m, name_of); };
  CHECK(render(leading_monomial(p, xyz(OrderKind::lex))) == "x^3");
  CHECK(render(leading_monomial(p, xyz(OrderKind::grlex))) == "x^2*z^2");
  CHECK(render(leading_monomial(p, xyz(OrderKind::grevlex))) == "x*y^2*z");
  CHECK(to_string(p, name_of, xyz(OrderKind::lex)) == "8*x^3 + 7*x^2*z^2 + 4*x*y^2*z + 4*z^2");
}

TEST_CASE("unlisted variables rank below listed ones") {
  const MonomialOrder ord(OrderKind::lex, {X});
  CHECK(ord.less(Monomial::variable(Y, 5), Monomial::variable(X)));
  CHECK(ord.less(Monomial::variable(Y), Monomial::variable(Z)));
}

TEST_CASE("monomial orders are total, multiplicative and well founded") {
  std::mt19937_64 rng(11);
  for (OrderKind kind : {OrderKind::lex, OrderKind::grlex, OrderKind::grevlex}) {
    const MonomialOrder ord(kind, {VariableId{3}, Y, X, Z});
    for (int i = 0; i < 500; ++i) {
      const Monomial a = random_monomial(rng, 4, 3), b = random_monomial(rng, 4, 3), c = random_monomial(rng, 4, 3);
      CHECK(ord.compare(a, b) == -ord.compare(b, a));
      CHECK((ord.compare(a, b) == 0) == (a == b));
      CHECK(ord.compare(a * c, b * c) == ord.compare(a, b));
      CHECK(ord.compare(Monomial(), a * c) <= 0);
      if (ord.less(a, b) && ord.less(b, c)) CHECK(ord.less(a, c));
      if (kind != OrderKind::lex && a.degree() < b.degree()) CHECK(ord.less(a, b));
    }
  }
}

TEST_CASE("polynomial arithmetic") {
  const FieldPtr f = make_field(3, 1);
  const MultiPoly p = parse("x + y", f);
  CHECK(p * p == parse("x^2 + 2*x*y + y^2", f));
  CHECK((p * p * p) == parse("x^3 + y^3", f));
  CHECK((p - p).is_zero());
  CHECK(parse("2*x + x", f).is_zero());
  CHECK(parse("3", f).is_zero());
  CHECK(parse("0", f).is_zero());
  CHECK(parse("x*x*y", f) == parse("x^2*y", f));
  CHECK(p.variables() == std::vector<VariableId>{X, Y});
  CHECK(parse("x^2*y + z", f).total_degree() == 3);
  CHECK(parse("x^2*y + z + 2", f).constant_term() == 2);
  CHECK(parse("x^2*y + z", f).degree_in(X) == 2);
  CHECK_THROWS_AS(parse("w", f), FormatError);
  CHECK_THROWS_AS(parse("x + ", f), FormatError);
  CHECK_THROWS_AS(parse("x ^", f), FormatError);
}

TEST_CASE("single-letter parsing") {
  const FieldPtr f = make_field(2, 1);
  ParseOptions opts;
  opts.single_letter_names = true;
  const MultiPoly p = parse_poly("b^2c^2e^2gh + c^2f^2gh", f, resolve_xyz, opts);
  CHECK(p.size() == 2);
  CHECK(p.total_degree() == 8);
}

TEST_CASE("to_string and parse round trip") {
  std::mt19937_64 rng(5);
  for (auto [p, k] : {std::pair<std::uint64_t, unsigned>{2, 1}, {7, 1}, {13, 1}}) {
    const FieldPtr f = make_field(p, k);
    for (int i = 0; i < 100; ++i) {
      const MultiPoly poly = random_poly(rng, f, 3, 4, 6);
      const std::string s = to_string(poly, name_of, xyz(OrderKind::grevlex));
      CHECK(parse(s, f) == poly);
    }
  }
}

TEST_CASE("exact division recovers the cofactor") {
  std::mt19937_64 rng(3);
  const FieldPtr f = make_field(5, 1);
  for (int i = 0; i < 100; ++i) {
    const MultiPoly a = random_poly(rng, f, 3, 2, 4), b = random_poly(rng, f, 3, 2, 4);
    CHECK(divide_exact(a * b, b) == a);
  }
  CHECK_THROWS_AS(divide_exact(parse("x + 1", f), parse("x + 2", f)), DomainError);
  CHECK_THROWS_AS(divide_exact(parse("x", f), MultiPoly(f)), DivisionByZero);
}

TEST_CASE("partial evaluation and full evaluation agree") {
  std::mt19937_64 rng(9);
  const FieldPtr f = make_field(2, 3);
  for (int i = 0; i < 100; ++i) {
    const MultiPoly p = random_poly(rng, f, 3, 5, 5);
    Assignment full, part;
    for (unsigned v = 0; v < 3; ++v) {
      FieldElement e(f, rng() % 8);
      full.emplace(VariableId{v}, e);
      if (v != 1) part.emplace(VariableId{v}, e);
    }
    const MultiPoly rest = p_eval_partial(p, part);
    CHECK(rest.variables().size() <= 1);
    CHECK(p_evaluate(rest, full) == p_evaluate(p, full));
  }
  CHECK_THROWS_AS(p_evaluate(parse("x*y", f), Assignment{{X, FieldElement(f, 1)}}), DomainError);
}

TEST_CASE("embedding into an extension preserves values on the prime field") {
  const FieldPtr f2 = make_field(2, 1), f8 = make_field(2, 3);
  const MultiPoly p = parse("x*y + x + 1", f2);
  const MultiPoly e = embed_prime_subfield(p, f8);
  CHECK(e.field()->order() == 8);
  for_each_point(f2, 2, [&](const Assignment& a) {
    Assignment b;
    for (const auto& [v, x] : a) b.emplace(v, FieldElement(f8, x.code()));
    CHECK(p_evaluate(e, b).code() == p_evaluate(p, a).code());
  });
  CHECK_THROWS_AS(embed_prime_subfield(parse("x", make_field(3, 1)), f8), DomainError);
}

TEST_CASE("field-equation folding") {
  const FieldPtr f = make_field(3, 1);
  CHECK(field_equation_remainder(parse("x^3", f), 3) == parse("x", f));
  CHECK(field_equation_remainder(parse("x^4*y^2", f), 3) == parse("x^2*y^2", f));
  CHECK(field_equation_remainder(parse("x^5", f), 3) == parse("x", f));
  CHECK(field_equation_remainder(parse("x^3 - x", f), 3).is_zero());
  const std::vector<VariableId> only_y{Y};
  CHECK(field_equation_remainder(parse("x^3*y^3", f), 3, only_y) == parse("x^3*y", f));
}

// Random instances of the remainder and nonvanishing properties on small fields.
TEST_CASE("remainder, nonvanishing and zero-count properties on random polynomials") {
  std::mt19937_64 rng(2024);
  const std::pair<std::uint64_t, unsigned> fields[] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {2, 3}};
  int instances = 0;
  for (const auto& [p, k] : fields) {
    const FieldPtr f = make_field(p, k);
    const std::uint64_t q = f->order();
    const unsigned n = q <= 4 ? 3 : 2;
    for (int i = 0; i < 120; ++i, ++instances) {
      // Sparse products of linear forms give many polynomials with roots.
      MultiPoly poly = random_poly(rng, f, n, static_cast<unsigned>(2 * q), 4);
      if (i % 3 == 0) poly = poly * random_poly(rng, f, n, 1, 2);
      if (i % 7 == 0) poly = poly * parse("x^" + std::to_string(q) + " - x", f);
      const MultiPoly rem = field_equation_remainder(poly, q);
      for (const auto& t : rem.terms())
        for (const auto& fac : t.mono.factors()) CHECK(fac.exp < q);

      bool some_nonzero = false;
      for_each_point(f, n, [&](const Assignment& a) {
        const auto v = p_evaluate(poly, a);
        CHECK(p_evaluate(rem, a) == v);
        some_nonzero = some_nonzero || !v.is_zero();
      });
      CHECK(has_nonzero_point(poly, q) == some_nonzero);
      CHECK(rem.is_zero() == !some_nonzero);

      if (some_nonzero) {
        const Assignment pt = find_nonzero_point(poly, q);
        Assignment full = pt;
        for (unsigned v = 0; v < n; ++v) full.emplace(VariableId{v}, FieldElement::zero(f));
        CHECK_FALSE(p_evaluate(poly, full).is_zero());
        const std::uint64_t zeros = brute_zero_count(poly, n);
        const auto scope = first_vars(n);
        for (OrderKind kind : {OrderKind::lex, OrderKind::grlex, OrderKind::grevlex}) {
          const MonomialOrder ord(kind, {Z, X, Y});
          CHECK(BigInt(zeros) <= zero_count_bound(poly, q, ord, scope));
        }
      } else {
        CHECK_THROWS_AS(find_nonzero_point(poly, q), InfeasibleError);
      }
    }
  }
  CHECK(instances >= 500);
}

TEST_CASE("zero-count bound is tight for a product of distinct linear factors") {
  const FieldPtr f = make_field(5, 1);
  // x(x+1)(x+2) has 3 * 5 zeros in GF(5)^2 over {x, y}.
  const MultiPoly g = parse("x^3 + 3*x^2 + 2*x", f);
  const auto scope = first_vars(2);
  CHECK(zero_count_bound(g, 5, xyz(OrderKind::lex), scope) == 15);
  CHECK(brute_zero_count(g, 2) == 15);
}

TEST_CASE("nonzero-point search rejects a mismatched q") {
  const FieldPtr f = make_field(2, 2);
  CHECK_THROWS_AS(has_nonzero_point(parse("x", f), 2), DomainError);
}
