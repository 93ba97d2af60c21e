#include <doctest.h>

#include "fixtures.hpp"
#include "lnc/det.hpp"
#include "lnc/error.hpp"
#include "lnc/fieldsize.hpp"
#include "lnc/prob.hpp"

using namespace lnc;
using lnc::test::fixture;

namespace {

MultiPoly full_remainder(const Network& net, const VariableRegistry& reg, const FieldPtr& field) {
  MultiPoly p = MultiPoly::constant(field, 1);
  for (const auto& d : sink_determinants(net, reg, field)) p = p * d;
  return field_equation_remainder(p, field->order(), reg.af_variables());
}

}  // namespace

TEST_CASE("minimum field sizes of the fixtures") {
  struct Case {
    const char* name;
    std::uint64_t p;
    std::uint64_t q;
  };
  for (const Case& c : {Case{"butterfly", 2, 2}, Case{"example1", 2, 2}, Case{"example2", 2, 2}, Case{"chain", 2, 2},
                        Case{"chain", 3, 3}, Case{"combination42", 2, 4}, Case{"combination42", 3, 3},
                        Case{"butterfly", 5, 5}}) {
    CAPTURE(c.name);
    CAPTURE(c.p);
    const Network net = fixture(c.name);
    const FieldSizeResult r = min_field_size(net, c.p);
    CHECK(r.q == c.q);
    CHECK(r.trials.back().q == c.q);
    CHECK(r.trials.back().feasible);
    for (std::size_t i = 0; i + 1 < r.trials.size(); ++i) CHECK_FALSE(r.trials[i].feasible);
  }
}

TEST_CASE("expected trial count") {
  const FieldSizeResult comb = min_field_size(fixture("combination42"), 2);
  // |T| = 6: floor(log2 6) = 2 fields, GF(2) and GF(4).
  CHECK(comb.expected_trials == 2);
  CHECK(comb.trials.size() == 2);
  CHECK_FALSE(comb.exceeded_expected);
  const FieldSizeResult bf = min_field_size(fixture("butterfly"), 3);
  CHECK(bf.expected_trials == 1);
  CHECK(bf.trials.size() == 1);
}

TEST_CASE("the certificate is a term of the reduced product polynomial") {
  for (auto [name, p] : {std::pair<const char*, std::uint64_t>{"butterfly", 2}, {"example1", 2},
                         {"combination42", 2}, {"combination42", 3}, {"chain", 3}}) {
    CAPTURE(name);
    const Network net = fixture(name);
    const VariableRegistry reg(net);
    const FieldSizeResult r = min_field_size(net, p);
    const MultiPoly rem = full_remainder(net, reg, r.field);
    CHECK(r.certificate.coeff != 0);
    CHECK(rem.coefficient(r.certificate.mono) == r.certificate.coeff);
  }
}

TEST_CASE("no GF(2) code exists for the four-relay combination network") {
  const Network net = fixture("combination42");
  const VariableRegistry reg(net);
  const FieldPtr f2 = make_field(2, 1);
  const RankOracle oracle(net, reg, f2);
  const auto af = reg.af_variables();
  // 2 x 4 source coefficients and 4 x 3 relay coefficients.
  REQUIRE(af.size() == 20);
  std::vector<ElemCode> values(reg.size(), 0);
  std::uint64_t decodable = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << af.size()); ++x) {
    for (std::size_t i = 0; i < af.size(); ++i) values[af[i].index] = (x >> i) & 1;
    decodable += oracle.all_decodable(values);
  }
  CHECK(decodable == 0);
  CHECK(full_remainder(net, reg, f2).is_zero());
  CHECK_THROWS_AS(find_coding_scheme(net, reg, f2), InfeasibleError);
}

TEST_CASE("coding schemes are decodable at every sink") {
  for (auto [name, q] : {std::pair<const char*, unsigned>{"butterfly", 2}, {"example1", 2}, {"example2", 2},
                         {"combination42", 4}, {"combination42", 3}, {"example2", 8}}) {
    CAPTURE(name);
    CAPTURE(q);
    const Network net = fixture(name);
    const VariableRegistry reg(net);
    const auto [p, k] = parse_field_order(std::to_string(q));
    const FieldPtr field = make_field(p, k);
    const CodingScheme s = find_coding_scheme(net, reg, field);
    CHECK(s.values.size() == reg.size());
    for (auto t : net.sinks()) CHECK(transfer_rank_decodable(net, reg, s.values, t));
  }
}

TEST_CASE("the chain over GF(2) needs every coefficient equal to one") {
  const Network net = fixture("chain");
  const VariableRegistry reg(net);
  const CodingScheme s = find_coding_scheme(net, reg, make_field(2, 1));
  for (const auto& [v, x] : s.values) CHECK(x.code() == 1);
}

TEST_CASE("insufficient min-cut and bad characteristic") {
  const Network net = fixture("deficient");
  const VariableRegistry reg(net);
  CHECK_THROWS_AS(min_field_size(net, 2), InfeasibleError);
  CHECK_THROWS_AS(find_coding_scheme(net, reg, make_field(7, 1)), InfeasibleError);
  CHECK_THROWS_AS(min_field_size(fixture("butterfly"), 4), DomainError);
}
