#pragma once

// Symbolic determinants and the path-system description of their support.

#include <set>
#include <vector>

#include "lnc/network.hpp"
#include "lnc/poly.hpp"

namespace lnc {

/// Fraction-free elimination with sparsity-driven full pivoting.
MultiPoly det_bareiss(const SymbolicMatrix& m);

/// Cofactor expansion, rows taken sparsest first, memoised on the set of
/// remaining columns.
MultiPoly det_laplace(const SymbolicMatrix& m);

/// h edge-disjoint paths into one sink. Path u leaves the origin of symbol
/// u (carrying a[u, first edge]) and is decoded as symbol symbols[u-1]
/// (carrying b[t, symbols[u-1], last edge]).
struct PathSystem {
  NodeIndex sink = 0;
  std::vector<std::uint32_t> symbols;
  std::vector<std::vector<std::uint32_t>> paths;
  friend auto operator<=>(const PathSystem&, const PathSystem&) = default;
};

/// Every path system for `sink`, sorted by (symbols, paths).
std::vector<PathSystem> enumerate_path_systems(const Network& net, NodeIndex sink);

Monomial path_system_to_monomial(const Network& net, const PathSystem& ps, const VariableRegistry& reg);

/// Monomials of all path systems. Throws InternalError if two systems map
/// to the same monomial.
std::set<Monomial> support_via_paths(const Network& net, NodeIndex sink, const VariableRegistry& reg);

/// |M_t| for every sink, in sink order, computed concurrently.
std::vector<MultiPoly> sink_determinants(const Network& net, const VariableRegistry& reg,
                                         const FieldPtr& field);

}  // namespace lnc
