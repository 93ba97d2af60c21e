#include <doctest.h>

#include <random>

#include "lnc/error.hpp"
#include "lnc/gf.hpp"

using namespace lnc;

namespace {

const std::uint64_t kSmallOrders[][2] = {{2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3},
                                         {3, 2}, {11, 1}, {13, 1}, {2, 4}};

}  // namespace

TEST_CASE("field axioms hold exhaustively for every q <= 16") {
  for (const auto& pk : kSmallOrders) {
    const FieldPtr f = make_field(pk[0], static_cast<unsigned>(pk[1]));
    const std::uint64_t q = f->order();
    CAPTURE(q);
    for (ElemCode a = 0; a < q; ++a) {
      CHECK(f->add(a, 0) == a);
      CHECK(f->mul(a, 1) == a);
      CHECK(f->add(a, f->neg(a)) == 0);
      CHECK(f->sub(a, a) == 0);
      if (a != 0) {
        CHECK(f->mul(a, f->inv(a)) == 1);
        CHECK(f->pow(a, q - 1) == 1);
      }
      CHECK(f->pow(f->pth_root(a), f->characteristic()) == a);
      for (ElemCode b = 0; b < q; ++b) {
        CHECK(f->add(a, b) == f->add(b, a));
        CHECK(f->mul(a, b) == f->mul(b, a));
        CHECK(f->sub(f->add(a, b), b) == a);
        for (ElemCode c = 0; c < q; ++c) {
          CHECK(f->add(f->add(a, b), c) == f->add(a, f->add(b, c)));
          CHECK(f->mul(f->mul(a, b), c) == f->mul(a, f->mul(b, c)));
          CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
        }
      }
    }
  }
}

TEST_CASE("GF(4) multiplication matches the hand table for x^2 + x + 1") {
  const FieldPtr f = make_field(2, 2);
  CHECK(f->spec().modulus() == std::vector<std::uint64_t>{1, 1, 1});
  // codes: 2 = x, 3 = x + 1
  CHECK(f->mul(2, 2) == 3);
  CHECK(f->mul(2, 3) == 1);
  CHECK(f->mul(3, 3) == 2);
  CHECK(f->add(2, 3) == 1);
}

TEST_CASE("find_irreducible picks the smallest lower-coefficient code") {
  CHECK(find_irreducible(2, 1).modulus() == std::vector<std::uint64_t>{0, 1});
  CHECK(find_irreducible(2, 3).modulus() == std::vector<std::uint64_t>{1, 1, 0, 1});
  CHECK(find_irreducible(2, 4).modulus() == std::vector<std::uint64_t>{1, 1, 0, 0, 1});
  CHECK(find_irreducible(3, 2).modulus() == std::vector<std::uint64_t>{1, 0, 1});
  CHECK(find_irreducible(2, 8).modulus() == std::vector<std::uint64_t>{1, 1, 0, 1, 1, 0, 0, 0, 1});
}

TEST_CASE("irreducibility test agrees with a root count for quadratics and cubics") {
  for (std::uint64_t p : {2, 3, 5, 7}) {
    for (unsigned k : {2u, 3u}) {
      std::vector<std::uint64_t> poly(k + 1, 0);
      poly[k] = 1;
      const std::uint64_t lower = checked_power(p, k);
      for (std::uint64_t code = 0; code < lower; ++code) {
        std::uint64_t c = code;
        for (unsigned i = 0; i < k; ++i) {
          poly[i] = c % p;
          c /= p;
        }
        // Degree <= 3: irreducible iff no root in GF(p).
        bool has_root = false;
        for (std::uint64_t x = 0; x < p && !has_root; ++x) {
          std::uint64_t v = 0;
          for (unsigned i = k + 1; i-- > 0;) v = (v * x + poly[i]) % p;
          has_root = v == 0;
        }
        CHECK(is_irreducible(p, poly) == !has_root);
      }
    }
  }
}

TEST_CASE("reducible or malformed moduli are rejected") {
  CHECK_THROWS_AS(FieldSpec(2, {1, 0, 1}), DomainError);
  CHECK_THROWS_AS(FieldSpec(4, {1, 1}), DomainError);
  CHECK_THROWS_AS(FieldSpec(2, {1, 1, 2}), DomainError);
  CHECK_THROWS_AS(FieldSpec(3, {1, 3, 1}), DomainError);
  CHECK_THROWS_AS(make_field(6, 1), DomainError);
  CHECK_THROWS_AS(make_field(2, 0), DomainError);
}

TEST_CASE("large fields without tables stay consistent") {
  std::mt19937_64 rng(7);
  for (auto [p, k] : {std::pair<std::uint64_t, unsigned>{2, 20}, {3, 13}, {65537, 1}, {2, 40}}) {
    const FieldPtr f = make_field(p, k);
    const std::uint64_t q = f->order();
    CAPTURE(q);
    for (int i = 0; i < 200; ++i) {
      const ElemCode a = 1 + rng() % (q - 1);
      const ElemCode b = rng() % q;
      const ElemCode c = rng() % q;
      CHECK(f->mul(a, f->inv(a)) == 1);
      CHECK(f->mul(a, f->add(b, c)) == f->add(f->mul(a, b), f->mul(a, c)));
      CHECK(f->pow(f->pth_root(b), p) == b);
      if (q < (std::uint64_t{1} << 32)) CHECK(f->pow(a, q - 1) == 1);
    }
  }
}

TEST_CASE("field elements") {
  const FieldPtr f4 = make_field(2, 2);
  const FieldPtr f8 = make_field(2, 3);
  const FieldElement x(f4, 2);
  CHECK(x.coeffs() == std::vector<std::uint64_t>{0, 1});
  CHECK((x * x).code() == 3);
  CHECK((x + x).is_zero());
  CHECK(ff_inv(x).code() == 3);
  CHECK(ff_pow(x, 3).code() == 1);
  CHECK_THROWS_AS(ff_inv(FieldElement::zero(f4)), DivisionByZero);
  CHECK_THROWS_AS(ff_add(x, FieldElement(f8, 2)), DomainError);
  CHECK_THROWS_AS(FieldElement(f4, 4), DomainError);
  CHECK(ff_enumerate(f8).size() == 8);
  CHECK_THROWS_AS(ff_enumerate(make_field(2, 17)), TooLargeError);
  CHECK(make_field(3, 1)->from_int(-1) == 2);
  CHECK(make_field(3, 2)->from_int(5) == 2);
}

TEST_CASE("field order parsing") {
  CHECK(parse_field_order("2^3") == std::pair<std::uint64_t, unsigned>{2, 3});
  CHECK(parse_field_order("8") == std::pair<std::uint64_t, unsigned>{2, 3});
  CHECK(parse_field_order("9") == std::pair<std::uint64_t, unsigned>{3, 2});
  CHECK(parse_field_order("13") == std::pair<std::uint64_t, unsigned>{13, 1});
  CHECK_THROWS_AS(parse_field_order("6"), DomainError);
  CHECK_THROWS_AS(parse_field_order("1"), DomainError);
  CHECK_THROWS_AS(parse_field_order("4^2"), DomainError);
  CHECK_THROWS_AS(parse_field_order("x"), DomainError);
}
