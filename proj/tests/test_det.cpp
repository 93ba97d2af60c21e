#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fixtures.hpp"
#include "lnc/det.hpp"
#include "lnc/error.hpp"

using namespace lnc;
using lnc::test::fixture;

namespace {

MultiPoly leibniz(const SymbolicMatrix& m) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  MultiPoly total(m.field());
  do {
    std::size_t inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    MultiPoly term = MultiPoly::constant(m.field(), 1);
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term = term * m.at(i, perm[i]);
    total = inversions % 2 ? total - term : total + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

SymbolicMatrix random_matrix(std::mt19937_64& rng, const FieldPtr& f, std::size_t n, unsigned nvars) {
  SymbolicMatrix m(f, n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      switch (rng() % 4) {
        case 0:
          break;
        case 1:
          m.set(r, c, MultiPoly::constant(f, rng() % f->order()));
          break;
        case 2:
          m.set(r, c, MultiPoly::variable(f, VariableId{static_cast<std::uint32_t>(rng() % nvars)}).scaled(1 + rng() % (f->order() - 1)));
          break;
        default:
          m.set(r, c, MultiPoly::variable(f, VariableId{static_cast<std::uint32_t>(rng() % nvars)}) +
                          MultiPoly::constant(f, rng() % f->order()));
      }
    }
  return m;
}

std::set<Monomial> support(const MultiPoly& p) {
  std::set<Monomial> s;
  for (const auto& t : p.terms()) s.insert(t.mono);
  return s;
}

}  // namespace

TEST_CASE("small determinants") {
  const FieldPtr f = make_field(7, 1);
  SymbolicMatrix m(f, 2, 2);
  m.set(0, 0, MultiPoly::variable(f, VariableId{0}));
  m.set(0, 1, MultiPoly::variable(f, VariableId{1}));
  m.set(1, 0, MultiPoly::variable(f, VariableId{2}));
  m.set(1, 1, MultiPoly::variable(f, VariableId{3}));
  const MultiPoly expected = MultiPoly::variable(f, VariableId{0}) * MultiPoly::variable(f, VariableId{3}) -
                             MultiPoly::variable(f, VariableId{1}) * MultiPoly::variable(f, VariableId{2});
  CHECK(det_bareiss(m) == expected);
  CHECK(det_laplace(m) == expected);
  CHECK(det_bareiss(SymbolicMatrix(f, 3, 3)).is_zero());
  CHECK(det_bareiss(SymbolicMatrix(f, 0, 0)) == MultiPoly::constant(f, 1));
  CHECK_THROWS_AS(det_bareiss(SymbolicMatrix(f, 2, 3)), DomainError);
  CHECK_THROWS_AS(det_laplace(SymbolicMatrix(f, 3, 2)), DomainError);
}

TEST_CASE("Bareiss and Laplace agree with the Leibniz formula on random matrices") {
  std::mt19937_64 rng(31);
  const FieldPtr fields[] = {make_field(2, 1), make_field(3, 1), make_field(2, 2), make_field(7, 1)};
  for (int i = 0; i < 200; ++i) {
    const FieldPtr& f = fields[i % 4];
    const std::size_t n = 1 + rng() % 6;
    const SymbolicMatrix m = random_matrix(rng, f, n, 4);
    const MultiPoly oracle = leibniz(m);
    CHECK(det_bareiss(m) == oracle);
    CHECK(det_laplace(m) == oracle);
  }
}

TEST_CASE("the butterfly monomial built from two paths is in the support") {
  const Network net = fixture("butterfly");
  const VariableRegistry reg(net);
  const NodeIndex t1 = net.sink_by_name("t1");
  const auto n = build_appendix_matrix(net, t1, reg, make_field(2, 1));
  const MultiPoly d = det_bareiss(n);
  std::vector<Monomial::Factor> k;
  for (auto v : {*reg.a(1, 1), *reg.a(2, 2), *reg.b(t1, 1, 3), *reg.b(t1, 2, 8), *reg.f(7, 8), *reg.f(5, 7),
                 *reg.f(2, 5), *reg.f(1, 3)})
    k.push_back({v, 1});
  CHECK(d.coefficient(Monomial(k)) == 1);
  CHECK(d.size() == 4);
}

TEST_CASE("butterfly path systems into t1") {
  const Network net = fixture("butterfly");
  const VariableRegistry reg(net);
  const NodeIndex t1 = net.sink_by_name("t1");
  const auto systems = enumerate_path_systems(net, t1);
  // Paths 1-3 and 2-5-7-8 in either symbol order, each decodable either way.
  CHECK(systems.size() == 4);
  const std::set<std::vector<std::uint32_t>> expected{{1, 3}, {2, 5, 7, 8}};
  for (const auto& ps : systems) {
    REQUIRE(ps.paths.size() == 2);
    CHECK(std::set<std::vector<std::uint32_t>>(ps.paths.begin(), ps.paths.end()) == expected);
  }
  CHECK(std::is_sorted(systems.begin(), systems.end()));
  CHECK(support_via_paths(net, t1, reg).size() == 4);
}

TEST_CASE("determinant support equals the path-system support on every fixture") {
  for (const char* name : {"butterfly", "example1", "example2", "chain", "combination42"}) {
    const Network net = fixture(name);
    const VariableRegistry reg(net);
    for (auto t : net.sinks()) {
      CAPTURE(name);
      CAPTURE(net.node_name(t));
      const auto paths = support_via_paths(net, t, reg);
      const MultiPoly d2 = det_bareiss(build_edmonds(net, t, reg, make_field(2, 1)));
      const MultiPoly d3 = det_bareiss(build_edmonds(net, t, reg, make_field(3, 1)));
      CHECK(support(d2) == paths);
      CHECK(support(d3) == paths);
      CHECK(det_laplace(build_appendix_matrix(net, t, reg, make_field(2, 1))) == d2);
      // No cancellation: every coefficient is a sign.
      for (const auto& term : d3.terms()) CHECK((term.coeff == 1 || term.coeff == 2));
      // Multilinear in every variable.
      for (const auto& term : d3.terms()) CHECK(term.mono.is_multilinear());
    }
  }
}

TEST_CASE("support sizes") {
  const auto size_at = [](const char* name, const char* sink) {
    const Network net = fixture(name);
    const VariableRegistry reg(net);
    return support_via_paths(net, net.sink_by_name(sink), reg).size();
  };
  CHECK(size_at("example1", "v12") == 12);
  CHECK(size_at("example1", "v13") == 12);
  CHECK(size_at("example2", "v11") == 36);
  CHECK(size_at("example2", "v12") == 108);
  CHECK(size_at("example2", "v13") == 36);
}

TEST_CASE("chain and deficient networks") {
  const Network chain = fixture("chain");
  const VariableRegistry rc(chain);
  const auto dets = sink_determinants(chain, rc, make_field(2, 1));
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].size() == 1);
  CHECK(dets[0].total_degree() == 3);

  const Network def = fixture("deficient");
  const VariableRegistry rd(def);
  CHECK(sink_determinants(def, rd, make_field(3, 1))[0].is_zero());
  CHECK(enumerate_path_systems(def, def.sinks()[0]).empty());
}

TEST_CASE("path system monomials are distinct and carry one a and one b per path") {
  const Network net = fixture("example2");
  const VariableRegistry reg(net);
  for (auto t : net.sinks()) {
    for (const auto& ps : enumerate_path_systems(net, t)) {
      const Monomial m = path_system_to_monomial(net, ps, reg);
      std::size_t a = 0, b = 0, f = 0;
      for (const auto& fac : m.factors()) {
        CHECK(fac.exp == 1);
        switch (reg.key(fac.var).kind) {
          case VarKind::a: ++a; break;
          case VarKind::b: ++b; break;
          case VarKind::f: ++f; break;
        }
      }
      std::size_t hops = 0;
      for (const auto& p : ps.paths) hops += p.size() - 1;
      CHECK(a == net.h());
      CHECK(b == net.h());
      CHECK(f == hops);
    }
  }
}
