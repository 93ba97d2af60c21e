#include "lnc/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/edmonds_karp_max_flow.hpp>

#include "lnc/error.hpp"

namespace lnc {

// ------------------------------------------------------------------ parsing

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  std::vector<std::string> out;
  std::string current;
  for (char c : line) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

std::uint64_t parse_uint(const std::string& token, std::size_t line_no, const char* what) {
  std::uint64_t v = 0;
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw FormatError("line " + std::to_string(line_no) + ": expected " + what + ", got '" +
                      token + "'");
  }
  return v;
}

std::uint32_t parse_u32(const std::string& token, std::size_t line_no, const char* what) {
  const auto v = parse_uint(token, line_no, what);
  if (v > UINT32_MAX) throw FormatError("line " + std::to_string(line_no) + ": " + what + " too large");
  return static_cast<std::uint32_t>(v);
}

VarKind parse_kind(const std::string& token, std::size_t line_no) {
  if (token == "a") return VarKind::a;
  if (token == "f") return VarKind::f;
  throw FormatError("line " + std::to_string(line_no) + ": expected 'a' or 'f', got '" + token + "'");
}

}  // namespace

NetworkDescription parse_network_description(std::string_view text) {
  NetworkDescription desc;
  std::size_t line_no = 0;
  bool have_symbols = false;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = tokenize(line);
    if (tok.empty()) continue;
    const std::string& kw = tok[0];
    auto expect = [&](std::size_t n, const char* usage) {
      if (tok.size() != n) {
        throw FormatError("line " + std::to_string(line_no) + ": expected '" + usage + "'");
      }
    };
    if (kw == "net") {
      expect(2, "net <name>");
      desc.name = tok[1];
    } else if (kw == "symbols") {
      expect(2, "symbols <h>");
      desc.symbols = parse_u32(tok[1], line_no, "symbol count");
      have_symbols = true;
    } else if (kw == "node") {
      if (tok.size() < 2) throw FormatError("line " + std::to_string(line_no) + ": expected 'node <id>'");
      for (std::size_t i = 1; i < tok.size(); ++i) {
        if (tok[i] != "node") desc.nodes.push_back(tok[i]);
      }
    } else if (kw == "edge") {
      expect(4, "edge <id> <tail> <head>");
      desc.edges.push_back({parse_u32(tok[1], line_no, "edge id"), tok[2], tok[3]});
    } else if (kw == "source") {
      if (tok.size() < 3) {
        throw FormatError("line " + std::to_string(line_no) + ": expected 'source <node> <i>[,<i>...]'");
      }
      std::string list;
      for (std::size_t i = 2; i < tok.size(); ++i) list += tok[i];
      std::vector<std::uint32_t> symbols;
      std::stringstream ss(list);
      std::string item;
      while (std::getline(ss, item, ',')) symbols.push_back(parse_u32(item, line_no, "symbol index"));
      desc.sources.emplace_back(tok[1], std::move(symbols));
    } else if (kw == "sink") {
      expect(2, "sink <node>");
      desc.sinks.push_back(tok[1]);
    } else if (kw == "fix") {
      expect(5, "fix a|f <i> <j> <value>");
      desc.fixes.push_back({parse_kind(tok[1], line_no), parse_u32(tok[2], line_no, "index"),
                            parse_u32(tok[3], line_no, "index"),
                            parse_uint(tok[4], line_no, "field element code")});
    } else if (kw == "alias") {
      expect(6, "alias <name> = a|f <i> <j>");
      if (tok[2] != "=") throw FormatError("line " + std::to_string(line_no) + ": expected '='");
      desc.aliases.push_back({tok[1], parse_kind(tok[3], line_no), parse_u32(tok[4], line_no, "index"),
                              parse_u32(tok[5], line_no, "index")});
    } else {
      throw FormatError("line " + std::to_string(line_no) + ": unknown directive '" + kw + "'");
    }
  }
  if (!have_symbols) throw FormatError("missing 'symbols' line");
  return desc;
}

Network parse_network(std::string_view text) { return Network(parse_network_description(text)); }

Network load_network(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read fixture '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_network(buffer.str());
  } catch (const FormatError& e) {
    throw FormatError(path.filename().string() + ": " + e.what());
  }
}

// ------------------------------------------------------------------ Network

Network::Network(NetworkDescription desc)
    : name_(std::move(desc.name)), h_(desc.symbols), fixes_(std::move(desc.fixes)),
      aliases_(std::move(desc.aliases)) {
  if (h_ == 0) throw FormatError("symbol count must be at least 1");

  auto add_node = [&](const std::string& n) {
    if (node_index_.emplace(n, node_names_.size()).second) node_names_.push_back(n);
  };
  for (const auto& n : desc.nodes) add_node(n);
  for (const auto& e : desc.edges) {
    add_node(e.tail);
    add_node(e.head);
  }
  auto lookup = [&](const std::string& n, const char* role) {
    auto it = node_index_.find(n);
    if (it == node_index_.end()) throw FormatError(std::string(role) + " refers to unknown node '" + n + "'");
    return it->second;
  };

  const std::size_t m = desc.edges.size();
  edges_.resize(m);
  std::vector<bool> seen(m, false);
  for (const auto& e : desc.edges) {
    if (e.id < 1 || e.id > m) {
      throw FormatError("edge id " + std::to_string(e.id) + " outside 1.." + std::to_string(m));
    }
    if (seen[e.id - 1]) throw FormatError("duplicate edge id " + std::to_string(e.id));
    seen[e.id - 1] = true;
    edges_[e.id - 1] = {e.id, lookup(e.tail, "edge"), lookup(e.head, "edge")};
    if (e.tail == e.head) {
      throw ValidationError("edge " + std::to_string(e.id) + " is a self-loop at '" + e.tail + "'");
    }
  }

  in_.assign(node_count(), {});
  out_.assign(node_count(), {});
  for (const auto& e : edges_) {
    out_[e.tail].push_back(e.id);
    in_[e.head].push_back(e.id);
  }

  origin_.assign(h_, SIZE_MAX);
  symbols_at_.assign(node_count(), {});
  for (const auto& [node, symbols] : desc.sources) {
    const NodeIndex v = lookup(node, "source");
    for (auto i : symbols) {
      if (i < 1 || i > h_) {
        throw ValidationError("symbol " + std::to_string(i) + " outside 1.." + std::to_string(h_));
      }
      if (origin_[i - 1] != SIZE_MAX) {
        throw ValidationError("symbol " + std::to_string(i) + " has two origins");
      }
      origin_[i - 1] = v;
      symbols_at_[v].push_back(i);
    }
  }
  for (std::uint32_t i = 1; i <= h_; ++i) {
    if (origin_[i - 1] == SIZE_MAX) throw ValidationError("symbol " + std::to_string(i) + " has no origin");
    if (out_[origin_[i - 1]].empty()) {
      throw ValidationError("origin '" + node_names_[origin_[i - 1]] + "' has no outgoing edge");
    }
  }
  for (auto& s : symbols_at_) std::sort(s.begin(), s.end());

  if (desc.sinks.empty()) throw ValidationError("network has no sink");
  for (const auto& n : desc.sinks) {
    const NodeIndex v = lookup(n, "sink");
    if (std::find(sinks_.begin(), sinks_.end(), v) != sinks_.end()) {
      throw ValidationError("sink '" + n + "' listed twice");
    }
    if (!symbols_at_[v].empty()) throw ValidationError("sink '" + n + "' is also a symbol origin");
    sinks_.push_back(v);
  }

  // Kahn's algorithm; ties broken by node declaration order.
  std::vector<std::size_t> indegree(node_count());
  for (const auto& e : edges_) ++indegree[e.head];
  std::priority_queue<NodeIndex, std::vector<NodeIndex>, std::greater<>> ready;
  for (NodeIndex v = 0; v < node_count(); ++v) {
    if (indegree[v] == 0) ready.push(v);
  }
  std::vector<std::size_t> position(node_count(), SIZE_MAX);
  std::size_t placed = 0;
  while (!ready.empty()) {
    const NodeIndex v = ready.top();
    ready.pop();
    position[v] = placed++;
    for (auto id : out_[v]) {
      if (--indegree[edges_[id - 1].head] == 0) ready.push(edges_[id - 1].head);
    }
  }
  if (placed != node_count()) {
    // Walk backwards along unplaced nodes until one repeats.
    NodeIndex v = 0;
    while (position[v] != SIZE_MAX) ++v;
    std::vector<NodeIndex> walk;
    std::vector<std::size_t> where(node_count(), SIZE_MAX);
    while (where[v] == SIZE_MAX) {
      where[v] = walk.size();
      walk.push_back(v);
      for (auto id : in_[v]) {
        if (position[edges_[id - 1].tail] == SIZE_MAX) {
          v = edges_[id - 1].tail;
          break;
        }
      }
    }
    std::vector<NodeIndex> cycle(walk.begin() + static_cast<std::ptrdiff_t>(where[v]), walk.end());
    std::reverse(cycle.begin(), cycle.end());
    std::string msg = "network has a cycle: ";
    for (auto n : cycle) msg += node_names_[n] + " -> ";
    msg += node_names_[cycle.front()];
    throw ValidationError(msg);
  }
  topo_edges_.resize(m);
  for (std::uint32_t id = 1; id <= m; ++id) topo_edges_[id - 1] = id;
  std::stable_sort(topo_edges_.begin(), topo_edges_.end(), [&](std::uint32_t x, std::uint32_t y) {
    return position[edges_[x - 1].tail] < position[edges_[y - 1].tail];
  });

  auto check_pair = [&](VarKind kind, std::uint32_t i, std::uint32_t j, const std::string& what) {
    if (j < 1 || j > m) throw ValidationError(what + ": no edge " + std::to_string(j));
    if (kind == VarKind::a) {
      if (i < 1 || i > h_) throw ValidationError(what + ": no symbol " + std::to_string(i));
      if (edges_[j - 1].tail != origin_[i - 1]) {
        throw ValidationError(what + ": edge " + std::to_string(j) + " does not leave the origin of symbol " +
                              std::to_string(i));
      }
    } else {
      if (i < 1 || i > m) throw ValidationError(what + ": no edge " + std::to_string(i));
      if (edges_[i - 1].head != edges_[j - 1].tail) {
        throw ValidationError(what + ": edges " + std::to_string(i) + " and " + std::to_string(j) +
                              " are not adjacent");
      }
    }
  };
  std::set<std::tuple<VarKind, std::uint32_t, std::uint32_t>> fixed;
  for (const auto& fx : fixes_) {
    check_pair(fx.kind, fx.i, fx.j, "fix");
    if (!fixed.emplace(fx.kind, fx.i, fx.j).second) throw ValidationError("variable fixed twice");
  }
  std::set<std::string> alias_names;
  for (const auto& al : aliases_) {
    check_pair(al.kind, al.i, al.j, "alias '" + al.name + "'");
    if (!alias_names.insert(al.name).second) throw ValidationError("alias '" + al.name + "' declared twice");
  }
}

std::optional<NodeIndex> Network::find_node(std::string_view name) const {
  auto it = node_index_.find(name);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

const Edge& Network::edge(std::uint32_t id) const {
  if (id < 1 || id > edges_.size()) throw DomainError("no edge " + std::to_string(id));
  return edges_[id - 1];
}

NodeIndex Network::symbol_origin(std::uint32_t i) const {
  if (i < 1 || i > h_) throw DomainError("no symbol " + std::to_string(i));
  return origin_[i - 1];
}

bool Network::is_sink(NodeIndex v) const {
  return std::find(sinks_.begin(), sinks_.end(), v) != sinks_.end();
}

std::size_t Network::sink_position(NodeIndex v) const {
  auto it = std::find(sinks_.begin(), sinks_.end(), v);
  if (it == sinks_.end()) {
    throw DomainError("'" + (v < node_count() ? node_names_[v] : std::to_string(v)) + "' is not a sink");
  }
  return static_cast<std::size_t>(it - sinks_.begin());
}

NodeIndex Network::sink_by_name(std::string_view name) const {
  auto v = find_node(name);
  if (!v || !is_sink(*v)) throw DomainError("'" + std::string(name) + "' is not a sink");
  return *v;
}

// ------------------------------------------------------- VariableRegistry

VariableRegistry::VariableRegistry(const Network& net) : net_(&net) {
  for (std::uint32_t i = 1; i <= net.h(); ++i) {
    for (auto j : net.out_edges(net.symbol_origin(i))) add({VarKind::a, i, j, 0});
  }
  for (const auto& e : net.edges()) {
    for (auto j : net.out_edges(e.head)) add({VarKind::f, e.id, j, 0});
  }
  for (auto t : net.sinks()) {
    for (std::uint32_t i = 1; i <= net.h(); ++i) {
      for (auto j : net.in_edges(t)) add({VarKind::b, i, j, t});
    }
  }
  // a/f were added in (i, j) order already; b by (sink, i, j).
  for (const auto& al : net.aliases()) {
    auto v = find({al.kind, al.i, al.j, 0});
    if (!v) throw InternalError("alias refers to an unregistered variable");
    aliases_[v->index] = al.name;
  }
  for (std::uint32_t k = 0; k < keys_.size(); ++k) {
    by_name_.emplace(name(VariableId{k}), VariableId{k});
  }
  for (const auto& [k, alias] : aliases_) {
    if (!by_name_.emplace(alias, VariableId{k}).second) {
      throw ValidationError("alias '" + alias + "' clashes with a variable name");
    }
  }
}

VariableId VariableRegistry::add(VariableKey key) {
  const VariableId id{static_cast<std::uint32_t>(keys_.size())};
  if (!index_.emplace(key, id).second) throw InternalError("variable registered twice");
  keys_.push_back(key);
  return id;
}

std::optional<VariableId> VariableRegistry::find(const VariableKey& key) const {
  VariableKey k = key;
  if (k.kind != VarKind::b) k.sink = 0;
  auto it = index_.find(k);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<VariableId> VariableRegistry::a(std::uint32_t i, std::uint32_t j) const {
  return find({VarKind::a, i, j, 0});
}

std::optional<VariableId> VariableRegistry::f(std::uint32_t i, std::uint32_t j) const {
  return find({VarKind::f, i, j, 0});
}

std::optional<VariableId> VariableRegistry::b(NodeIndex sink, std::uint32_t i, std::uint32_t j) const {
  return find({VarKind::b, i, j, sink});
}

std::vector<VariableId> VariableRegistry::af_variables() const {
  std::vector<VariableId> out;
  for (std::uint32_t k = 0; k < keys_.size(); ++k) {
    if (keys_[k].kind != VarKind::b) out.push_back({k});
  }
  return out;
}

std::vector<VariableId> VariableRegistry::b_variables(NodeIndex sink) const {
  std::vector<VariableId> out;
  for (std::uint32_t k = 0; k < keys_.size(); ++k) {
    if (keys_[k].kind == VarKind::b && keys_[k].sink == sink) out.push_back({k});
  }
  return out;
}

std::vector<VariableId> VariableRegistry::all() const {
  std::vector<VariableId> out(keys_.size());
  for (std::uint32_t k = 0; k < keys_.size(); ++k) out[k] = {k};
  return out;
}

std::string VariableRegistry::name(VariableId v) const {
  const auto& k = key(v);
  switch (k.kind) {
    case VarKind::a:
      return "a[" + std::to_string(k.i) + "," + std::to_string(k.j) + "]";
    case VarKind::f:
      return "f[" + std::to_string(k.i) + "," + std::to_string(k.j) + "]";
    case VarKind::b:
      return "b[" + net_->node_name(k.sink) + "," + std::to_string(k.i) + "," + std::to_string(k.j) + "]";
  }
  return {};
}

std::string VariableRegistry::display_name(VariableId v) const {
  auto it = aliases_.find(v.index);
  return it == aliases_.end() ? name(v) : it->second;
}

VariableNamer VariableRegistry::namer(bool use_aliases) const {
  if (use_aliases) return [this](VariableId v) { return display_name(v); };
  return [this](VariableId v) { return name(v); };
}

std::optional<VariableId> VariableRegistry::resolve(std::string_view name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

// ---------------------------------------------------------- SymbolicMatrix

SymbolicMatrix::SymbolicMatrix(FieldPtr field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, MultiPoly(field_)) {}

void SymbolicMatrix::set(std::size_t r, std::size_t c, MultiPoly value) {
  if (r >= rows_ || c >= cols_) throw DomainError("matrix index out of range");
  if (!same_field(*value.field(), *field_)) throw DomainError("matrix entry over a different field");
  entries_[r * cols_ + c] = std::move(value);
}

std::size_t SymbolicMatrix::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries_.begin(), entries_.end(), [](const MultiPoly& p) { return !p.is_zero(); }));
}

namespace {

struct Layout {
  std::size_t symbol_row0;
  std::size_t edge_row0;
  ElemCode f_sign;
};

SymbolicMatrix build_blocks(const Network& net, NodeIndex sink, const VariableRegistry& reg,
                            const FieldPtr& field, const Layout& layout) {
  net.sink_position(sink);
  const std::size_t m = net.edge_count();
  const std::size_t h = net.h();
  SymbolicMatrix mat(field, h + m, m + h);
  auto var = [&](std::optional<VariableId> v, ElemCode c) {
    if (!v) throw InternalError("matrix entry refers to an unregistered variable");
    return MultiPoly::monomial(field, Monomial::variable(*v), c);
  };
  for (std::uint32_t i = 1; i <= h; ++i) {
    for (auto j : net.out_edges(net.symbol_origin(i))) {
      mat.set(layout.symbol_row0 + i - 1, j - 1, var(reg.a(i, j), 1));
    }
  }
  for (const auto& e : net.edges()) {
    const std::size_t row = layout.edge_row0 + e.id - 1;
    mat.set(row, e.id - 1, MultiPoly::constant(field, 1));
    for (auto j : net.out_edges(e.head)) mat.set(row, j - 1, var(reg.f(e.id, j), layout.f_sign));
  }
  for (auto j : net.in_edges(sink)) {
    for (std::uint32_t i = 1; i <= h; ++i) {
      mat.set(layout.edge_row0 + j - 1, m + i - 1, var(reg.b(sink, i, j), 1));
    }
  }
  return mat;
}

}  // namespace

SymbolicMatrix build_edmonds(const Network& net, NodeIndex sink, const VariableRegistry& reg,
                             const FieldPtr& field) {
  return build_blocks(net, sink, reg, field, {0, net.h(), field->neg(1)});
}

SymbolicMatrix build_appendix_matrix(const Network& net, NodeIndex sink, const VariableRegistry& reg,
                                     const FieldPtr& field) {
  return build_blocks(net, sink, reg, field, {net.edge_count(), 0, 1});
}

// ------------------------------------------------------------------ min cut

std::uint32_t min_cut(const Network& net, NodeIndex sink) {
  net.sink_position(sink);
  using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
  using Graph = boost::adjacency_list<
      boost::vecS, boost::vecS, boost::directedS, boost::no_property,
      boost::property<boost::edge_capacity_t, long,
                      boost::property<boost::edge_residual_capacity_t, long,
                                      boost::property<boost::edge_reverse_t, Traits::edge_descriptor>>>>;
  const std::size_t n = net.node_count();
  Graph g(n + 1);
  auto capacity = boost::get(boost::edge_capacity, g);
  auto reverse = boost::get(boost::edge_reverse, g);
  auto arc = [&](std::size_t u, std::size_t v, long cap) {
    auto e = boost::add_edge(u, v, g).first;
    auto r = boost::add_edge(v, u, g).first;
    capacity[e] = cap;
    capacity[r] = 0;
    reverse[e] = r;
    reverse[r] = e;
  };
  for (const auto& e : net.edges()) arc(e.tail, e.head, 1);
  const std::size_t super = n;
  for (NodeIndex v = 0; v < n; ++v) {
    if (!net.symbols_at(v).empty()) arc(super, v, static_cast<long>(net.symbols_at(v).size()));
  }
  return static_cast<std::uint32_t>(boost::edmonds_karp_max_flow(g, super, sink));
}

}  // namespace lnc
