#include "lnc/det.hpp"

#include <algorithm>
#include <bit>
#include <future>
#include <numeric>
#include <unordered_map>

#include "lnc/error.hpp"

namespace lnc {

namespace {

void require_square(const SymbolicMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DomainError("determinant of a non-square " + std::to_string(m.rows()) + "x" +
                      std::to_string(m.cols()) + " matrix");
  }
}

}  // namespace

MultiPoly det_bareiss(const SymbolicMatrix& m) {
  require_square(m);
  const FieldPtr& field = m.field();
  const std::size_t n = m.rows();
  if (n == 0) return MultiPoly::constant(field, 1);

  std::vector<std::vector<MultiPoly>> a(n);
  for (std::size_t r = 0; r < n; ++r) {
    a[r].reserve(n);
    for (std::size_t c = 0; c < n; ++c) a[r].push_back(m.at(r, c));
  }
  bool negate = false;
  MultiPoly prev = MultiPoly::constant(field, 1);

  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> row_nz(n, 0);
    std::vector<std::size_t> col_nz(n, 0);
    for (std::size_t r = k; r < n; ++r) {
      for (std::size_t c = k; c < n; ++c) {
        if (!a[r][c].is_zero()) {
          ++row_nz[r];
          ++col_nz[c];
        }
      }
    }
    std::size_t pr = n;
    std::size_t pc = n;
    std::tuple<bool, std::size_t, std::size_t> best{};
    for (std::size_t r = k; r < n; ++r) {
      for (std::size_t c = k; c < n; ++c) {
        if (a[r][c].is_zero()) continue;
        const std::tuple<bool, std::size_t, std::size_t> score{
            !a[r][c].is_constant(), a[r][c].size(), (row_nz[r] - 1) * (col_nz[c] - 1)};
        if (pr == n || score < best) {
          best = score;
          pr = r;
          pc = c;
        }
      }
    }
    if (pr == n) return MultiPoly(field);
    if (pr != k) {
      std::swap(a[pr], a[k]);
      negate = !negate;
    }
    if (pc != k) {
      for (auto& row : a) std::swap(row[pc], row[k]);
      negate = !negate;
    }

    const MultiPoly& pivot = a[k][k];
    const bool cheap = pivot.is_constant() && prev.is_constant();
    const ElemCode ratio = cheap ? field->mul(pivot.constant_term(), field->inv(prev.constant_term())) : 0;
    for (std::size_t i = k + 1; i < n; ++i) {
      const MultiPoly lead = a[i][k];
      for (std::size_t j = k + 1; j < n; ++j) {
        if (lead.is_zero() || a[k][j].is_zero()) {
          if (a[i][j].is_zero()) continue;
          a[i][j] = cheap ? a[i][j].scaled(ratio) : divide_exact(a[i][j] * pivot, prev);
          continue;
        }
        MultiPoly num = a[i][j] * pivot - lead * a[k][j];
        if (prev.is_constant()) {
          a[i][j] = num.scaled(field->inv(prev.constant_term()));
        } else {
          a[i][j] = divide_exact(num, prev);
        }
      }
      a[i][k] = MultiPoly(field);
    }
    prev = a[k][k];
  }
  MultiPoly det = a[n - 1][n - 1];
  return negate ? -det : det;
}

MultiPoly det_laplace(const SymbolicMatrix& m) {
  require_square(m);
  const FieldPtr& field = m.field();
  const std::size_t n = m.rows();
  if (n == 0) return MultiPoly::constant(field, 1);
  if (n > 63) throw TooLargeError("cofactor expansion limited to 63x63 matrices");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<std::size_t> nz(n, 0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) nz[r] += m.is_zero(r, c) ? 0 : 1;
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return nz[x] < nz[y]; });
  if (nz[order[0]] == 0) return MultiPoly(field);

  // Sign of the row permutation, by counting inversions.
  bool negate = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (order[i] > order[j]) negate = !negate;
    }
  }

  constexpr std::size_t kCacheLimit = std::size_t{1} << 20;
  std::unordered_map<std::uint64_t, MultiPoly> memo;
  std::function<MultiPoly(std::size_t, std::uint64_t)> expand = [&](std::size_t depth, std::uint64_t cols) {
    if (depth == n) return MultiPoly::constant(field, 1);
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    const std::size_t row = order[depth];
    MultiPoly sum(field);
    std::size_t position = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cols >> c & 1)) continue;
      const MultiPoly& entry = m.at(row, c);
      if (!entry.is_zero()) {
        MultiPoly minor = expand(depth + 1, cols & ~(std::uint64_t{1} << c));
        if (!minor.is_zero()) {
          MultiPoly term = entry * minor;
          sum = (position % 2 == 0) ? sum + term : sum - term;
        }
      }
      ++position;
    }
    if (memo.size() < kCacheLimit) memo.emplace(cols, sum);
    return sum;
  };
  MultiPoly det = expand(0, (std::uint64_t{1} << n) - 1);
  return negate ? -det : det;
}

std::vector<PathSystem> enumerate_path_systems(const Network& net, NodeIndex sink) {
  net.sink_position(sink);
  const std::uint32_t h = net.h();
  std::vector<bool> used(net.edge_count() + 1, false);
  std::vector<std::vector<std::uint32_t>> current(h);
  std::vector<std::vector<std::vector<std::uint32_t>>> tuples;

  std::function<void(std::uint32_t)> path_for;
  std::function<void(std::uint32_t, NodeIndex)> extend = [&](std::uint32_t u, NodeIndex at) {
    if (at == sink) {
      path_for(u + 1);
      return;
    }
    for (auto j : net.out_edges(at)) {
      if (used[j]) continue;
      used[j] = true;
      current[u - 1].push_back(j);
      extend(u, net.edge(j).head);
      current[u - 1].pop_back();
      used[j] = false;
    }
  };
  path_for = [&](std::uint32_t u) {
    if (u > h) {
      tuples.push_back(current);
      return;
    }
    extend(u, net.symbol_origin(u));
  };
  // A symbol whose origin is the sink itself cannot occur: sinks are never origins.
  path_for(1);

  std::vector<std::uint32_t> perm(h);
  std::iota(perm.begin(), perm.end(), 1);
  std::vector<PathSystem> out;
  do {
    for (const auto& t : tuples) out.push_back({sink, perm, t});
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(out.begin(), out.end());
  return out;
}

Monomial path_system_to_monomial(const Network& net, const PathSystem& ps, const VariableRegistry& reg) {
  auto need = [](std::optional<VariableId> v) {
    if (!v) throw InternalError("path system uses an unregistered variable");
    return Monomial::Factor{*v, 1};
  };
  std::vector<Monomial::Factor> factors;
  for (std::uint32_t u = 1; u <= ps.paths.size(); ++u) {
    const auto& path = ps.paths[u - 1];
    if (path.empty()) throw DomainError("empty path in path system");
    factors.push_back(need(reg.a(u, path.front())));
    for (std::size_t k = 0; k + 1 < path.size(); ++k) factors.push_back(need(reg.f(path[k], path[k + 1])));
    factors.push_back(need(reg.b(ps.sink, ps.symbols.at(u - 1), path.back())));
  }
  (void)net;
  return Monomial(std::move(factors));
}

std::set<Monomial> support_via_paths(const Network& net, NodeIndex sink, const VariableRegistry& reg) {
  std::set<Monomial> out;
  for (const auto& ps : enumerate_path_systems(net, sink)) {
    if (!out.insert(path_system_to_monomial(net, ps, reg)).second) {
      throw InternalError("two path systems map to the same monomial");
    }
  }
  return out;
}

std::vector<MultiPoly> sink_determinants(const Network& net, const VariableRegistry& reg,
                                         const FieldPtr& field) {
  std::vector<std::future<MultiPoly>> jobs;
  for (auto t : net.sinks()) {
    jobs.push_back(std::async(std::launch::async, [&net, &reg, &field, t] {
      return det_bareiss(build_edmonds(net, t, reg, field));
    }));
  }
  std::vector<MultiPoly> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

}  // namespace lnc
