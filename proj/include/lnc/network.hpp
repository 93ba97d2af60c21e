#pragma once

// Acyclic multicast networks, the a/f/b coefficient variables and the
// Edmonds matrices built from them.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lnc/gf.hpp"
#include "lnc/poly.hpp"

namespace lnc {

using NodeIndex = std::size_t;

struct Edge {
  std::uint32_t id = 0;
  NodeIndex tail = 0;
  NodeIndex head = 0;
};

enum class VarKind { a, f, b };

/// A `fix a|f <i> <j> <value>` line. The value is an element code.
struct FixDecl {
  VarKind kind = VarKind::f;
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  ElemCode value = 0;
};

/// An `alias <name> = a|f <i> <j>` line.
struct AliasDecl {
  std::string name;
  VarKind kind = VarKind::f;
  std::uint32_t i = 0;
  std::uint32_t j = 0;
};

/// Unvalidated contents of a fixture document.
struct NetworkDescription {
  std::string name;
  std::uint32_t symbols = 0;
  std::vector<std::string> nodes;
  struct EdgeDecl {
    std::uint32_t id;
    std::string tail;
    std::string head;
  };
  std::vector<EdgeDecl> edges;
  std::vector<std::pair<std::string, std::vector<std::uint32_t>>> sources;
  std::vector<std::string> sinks;
  std::vector<FixDecl> fixes;
  std::vector<AliasDecl> aliases;
};

class Network {
 public:
  /// Validates the description; throws FormatError or ValidationError.
  explicit Network(NetworkDescription desc);

  const std::string& name() const { return name_; }
  std::uint32_t h() const { return h_; }

  std::size_t node_count() const { return node_names_.size(); }
  const std::string& node_name(NodeIndex v) const { return node_names_.at(v); }
  std::optional<NodeIndex> find_node(std::string_view name) const;

  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Edge by its 1-based id.
  const Edge& edge(std::uint32_t id) const;

  /// Origin node of symbol i (1-based).
  NodeIndex symbol_origin(std::uint32_t i) const;
  /// Symbols originating at v, ascending.
  const std::vector<std::uint32_t>& symbols_at(NodeIndex v) const { return symbols_at_.at(v); }

  const std::vector<NodeIndex>& sinks() const { return sinks_; }
  bool is_sink(NodeIndex v) const;
  /// Position of v in the sink list; throws DomainError when v is not a sink.
  std::size_t sink_position(NodeIndex v) const;
  /// Sink by name; throws DomainError when unknown.
  NodeIndex sink_by_name(std::string_view name) const;

  /// Edge ids, ascending.
  const std::vector<std::uint32_t>& in_edges(NodeIndex v) const { return in_.at(v); }
  const std::vector<std::uint32_t>& out_edges(NodeIndex v) const { return out_.at(v); }

  /// Edge ids such that i precedes j whenever head(i) = tail(j). Stable.
  const std::vector<std::uint32_t>& topological_edges() const { return topo_edges_; }

  const std::vector<FixDecl>& fixes() const { return fixes_; }
  const std::vector<AliasDecl>& aliases() const { return aliases_; }

 private:
  std::string name_;
  std::uint32_t h_ = 0;
  std::vector<std::string> node_names_;
  std::map<std::string, NodeIndex, std::less<>> node_index_;
  std::vector<Edge> edges_;
  std::vector<NodeIndex> origin_;
  std::vector<std::vector<std::uint32_t>> symbols_at_;
  std::vector<NodeIndex> sinks_;
  std::vector<std::vector<std::uint32_t>> in_;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::uint32_t> topo_edges_;
  std::vector<FixDecl> fixes_;
  std::vector<AliasDecl> aliases_;
};

NetworkDescription parse_network_description(std::string_view text);
Network parse_network(std::string_view text);
/// Reads and parses a fixture file; throws IoError when it cannot be read.
Network load_network(const std::filesystem::path& path);

struct VariableKey {
  VarKind kind = VarKind::a;
  std::uint32_t i = 0;
  std::uint32_t j = 0;
  /// Sink node for b-variables; unused otherwise.
  NodeIndex sink = 0;
  friend auto operator<=>(const VariableKey&, const VariableKey&) = default;
};

/// Dense numbering of every coefficient variable of a network: a(i,j) by
/// (i, j), then f(i,j) by (i, j), then b(t,i,j) by (sink order, i, j).
class VariableRegistry {
 public:
  explicit VariableRegistry(const Network& net);

  std::size_t size() const { return keys_.size(); }
  const VariableKey& key(VariableId v) const { return keys_.at(v.index); }

  std::optional<VariableId> find(const VariableKey& key) const;
  std::optional<VariableId> a(std::uint32_t i, std::uint32_t j) const;
  std::optional<VariableId> f(std::uint32_t i, std::uint32_t j) const;
  std::optional<VariableId> b(NodeIndex sink, std::uint32_t i, std::uint32_t j) const;

  /// All a- and f-variables in registry order.
  std::vector<VariableId> af_variables() const;
  /// b-variables of one sink, in registry order.
  std::vector<VariableId> b_variables(NodeIndex sink) const;
  std::vector<VariableId> all() const;

  /// "a[1,1]", "f[7,8]", "b[t1,2,8]".
  std::string name(VariableId v) const;
  /// The fixture alias when one is declared, otherwise name(v).
  std::string display_name(VariableId v) const;
  VariableNamer namer(bool use_aliases = true) const;
  /// Accepts canonical names and aliases.
  std::optional<VariableId> resolve(std::string_view name) const;

 private:
  VariableId add(VariableKey key);

  const Network* net_;
  std::vector<VariableKey> keys_;
  std::map<VariableKey, VariableId> index_;
  std::map<std::uint32_t, std::string> aliases_;
  std::map<std::string, VariableId, std::less<>> by_name_;
};

/// Dense square-or-rectangular matrix of polynomials over one field.
class SymbolicMatrix {
 public:
  SymbolicMatrix(FieldPtr field, std::size_t rows, std::size_t cols);

  const FieldPtr& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  const MultiPoly& at(std::size_t r, std::size_t c) const { return entries_.at(r * cols_ + c); }
  void set(std::size_t r, std::size_t c, MultiPoly value);
  bool is_zero(std::size_t r, std::size_t c) const { return at(r, c).is_zero(); }
  std::size_t nonzero_count() const;

 private:
  FieldPtr field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<MultiPoly> entries_;
};

/// M_t = [[A, 0], [I - F, B_t^T]]. Rows: h symbol rows, then one row per
/// edge. Columns: one per edge, then one per symbol.
SymbolicMatrix build_edmonds(const Network& net, NodeIndex sink, const VariableRegistry& reg,
                             const FieldPtr& field);

/// N_t = [[I + F, B_t^T], [A, 0]]: edge rows first, +f entries.
SymbolicMatrix build_appendix_matrix(const Network& net, NodeIndex sink,
                                     const VariableRegistry& reg, const FieldPtr& field);

/// Unit-capacity max-flow from a super-source (feeding each origin with
/// capacity equal to its symbol count) to `sink`.
std::uint32_t min_cut(const Network& net, NodeIndex sink);

}  // namespace lnc
