#include "lnc/prob.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include "lnc/det.hpp"
#include "lnc/error.hpp"

namespace lnc {

// ------------------------------------------------------------------ fixings

namespace {

void apply_decls(Fixing& fx, const std::vector<FixDecl>& decls) {
  for (const auto& d : decls) {
    auto& target = d.kind == VarKind::a ? fx.fixed_a : fx.fixed_f;
    target[{d.i, d.j}] = d.value;
  }
}

void collect_random(Fixing& fx, const VariableRegistry& reg) {
  fx.random_vars.clear();
  for (auto v : reg.af_variables()) {
    const auto& k = reg.key(v);
    const auto& fixed = k.kind == VarKind::a ? fx.fixed_a : fx.fixed_f;
    if (!fixed.count({k.i, k.j})) fx.random_vars.push_back(v);
  }
}

void check_decls(const VariableRegistry& reg, const std::vector<FixDecl>& decls) {
  for (const auto& d : decls) {
    const bool known = d.kind == VarKind::a ? reg.a(d.i, d.j).has_value() : reg.f(d.i, d.j).has_value();
    if (!known) {
      throw ValidationError(std::string("fix ") + (d.kind == VarKind::a ? "a " : "f ") + std::to_string(d.i) +
                            " " + std::to_string(d.j) + " names no coefficient of this network");
    }
  }
}

}  // namespace

Fixing default_fixing(const Network& net, const VariableRegistry& reg) {
  Fixing fx;
  for (const auto& e : net.edges()) {
    if (net.in_edges(e.tail).size() == 1) fx.fixed_f[{net.in_edges(e.tail)[0], e.id}] = 1;
  }
  for (NodeIndex v = 0; v < net.node_count(); ++v) {
    const auto& symbols = net.symbols_at(v);
    const auto& out = net.out_edges(v);
    if (symbols.empty() || out.size() != symbols.size()) continue;
    for (std::size_t s = 0; s < symbols.size(); ++s) {
      for (std::size_t k = 0; k < out.size(); ++k) fx.fixed_a[{symbols[s], out[k]}] = s == k ? 1 : 0;
    }
  }
  apply_decls(fx, net.fixes());
  collect_random(fx, reg);
  return fx;
}

Fixing open_fixing(const Network& net, const VariableRegistry& reg) {
  Fixing fx;
  apply_decls(fx, net.fixes());
  collect_random(fx, reg);
  return fx;
}

Fixing fixing_from_decls(const Network& net, const VariableRegistry& reg, const std::vector<FixDecl>& decls) {
  check_decls(reg, decls);
  Fixing fx = open_fixing(net, reg);
  apply_decls(fx, decls);
  collect_random(fx, reg);
  return fx;
}

std::vector<FixDecl> load_fix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read fixing file '" + path.string() + "'");
  std::stringstream text;
  std::string line;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream words(line);
    std::string first;
    if (!(words >> first)) continue;
    if (first != "fix") throw FormatError(path.filename().string() + ": only 'fix' lines are allowed");
    text << line << '\n';
  }
  // Reuse the fixture grammar for the fix lines.
  return parse_network_description("symbols 1\n" + text.str()).fixes;
}

Assignment fixed_assignment(const VariableRegistry& reg, const Fixing& fixing, const FieldPtr& field) {
  Assignment out;
  auto put = [&](std::optional<VariableId> v, ElemCode c) {
    if (!v) throw ValidationError("fixing names a coefficient that does not exist");
    if (!field->contains(c)) {
      throw DomainError("fixed value " + std::to_string(c) + " is not an element of GF(" +
                        field->spec().label() + ")");
    }
    out.emplace(*v, FieldElement(field, c));
  };
  for (const auto& [ij, c] : fixing.fixed_a) put(reg.a(ij.first, ij.second), c);
  for (const auto& [ij, c] : fixing.fixed_f) put(reg.f(ij.first, ij.second), c);
  return out;
}

std::size_t eta(const Network& net, const VariableRegistry& reg, const Fixing& fixing) {
  std::vector<bool> random(net.edge_count() + 1, false);
  for (auto v : fixing.random_vars) random[reg.key(v).j] = true;
  return static_cast<std::size_t>(std::count(random.begin(), random.end(), true));
}

// ------------------------------------------------------------- polynomials

std::vector<MultiPoly> p_tilde_factors(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                                       const FieldPtr& field) {
  const Assignment fixed = fixed_assignment(reg, fixing, field);
  std::vector<std::future<MultiPoly>> jobs;
  for (auto t : net.sinks()) {
    jobs.push_back(std::async(std::launch::async, [&, t] {
      SymbolicMatrix m = build_edmonds(net, t, reg, field);
      for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
          if (!m.is_zero(r, c)) m.set(r, c, p_eval_partial(m.at(r, c), fixed));
        }
      }
      return det_bareiss(m);
    }));
  }
  std::vector<MultiPoly> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

MultiPoly build_p_tilde(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                        const FieldPtr& field) {
  MultiPoly product = MultiPoly::constant(field, 1);
  for (const auto& f : p_tilde_factors(net, reg, fixing, field)) product = product * f;
  return product;
}

MultiPoly build_p_hat(const MultiPoly& p_tilde, std::uint64_t q, std::span<const VariableId> random_vars) {
  return field_equation_remainder(p_tilde, q, random_vars);
}

std::map<Monomial, MultiPoly> coefficients_by(const MultiPoly& f, std::span<const VariableId> outer) {
  std::vector<VariableId> sorted(outer.begin(), outer.end());
  std::sort(sorted.begin(), sorted.end());
  std::map<Monomial, std::vector<MultiPoly::Term>> groups;
  for (const auto& t : f.terms()) {
    std::vector<Monomial::Factor> out_part;
    std::vector<Monomial::Factor> in_part;
    for (const auto& fac : t.mono.factors()) {
      (std::binary_search(sorted.begin(), sorted.end(), fac.var) ? out_part : in_part).push_back(fac);
    }
    groups[Monomial(std::move(out_part))].push_back({Monomial(std::move(in_part)), t.coeff});
  }
  std::map<Monomial, MultiPoly> result;
  for (auto& [m, terms] : groups) result.emplace(m, MultiPoly(f.field(), std::move(terms)));
  return result;
}

std::vector<Monomial> random_support(const MultiPoly& p_hat, std::span<const VariableId> random_vars) {
  std::vector<Monomial> out;
  for (const auto& [m, coeff] : coefficients_by(p_hat, random_vars)) out.push_back(m);
  return out;
}

// ------------------------------------------------------------------ bounds

namespace {

Rational footprint_fraction(const Monomial& m, std::uint64_t q, std::span<const VariableId> random_vars) {
  BigInt num = 1;
  BigInt den = 1;
  for (auto v : random_vars) {
    const std::uint32_t j = m.exponent(v);
    if (j >= q) throw DomainError("polynomial is not reduced by the field equations");
    num *= q - j;
    den *= q;
  }
  return Rational(num, den);
}

std::vector<Monomial> nonzero_support(const MultiPoly& p_hat, std::span<const VariableId> random_vars) {
  if (p_hat.is_zero()) throw InfeasibleError("the reduced polynomial is zero: this fixing admits no solution");
  return random_support(p_hat, random_vars);
}

}  // namespace

Rational bound_lm(const MultiPoly& p_hat, std::uint64_t q, std::span<const VariableId> random_vars,
                  const MonomialOrder& order) {
  const auto support = nonzero_support(p_hat, random_vars);
  return footprint_fraction(leading_monomial(support, order), q, random_vars);
}

Rational bound_support_min(const MultiPoly& p_hat, std::uint64_t q, std::span<const VariableId> random_vars) {
  const auto support = nonzero_support(p_hat, random_vars);
  Rational best = 1;
  for (const auto& m : support) best = std::min(best, footprint_fraction(m, q, random_vars));
  return best;
}

BestOrdering bound_best_ordering(const MultiPoly& p_hat, std::uint64_t q,
                                 std::span<const VariableId> random_vars, std::size_t limit) {
  if (random_vars.size() > limit) {
    throw TooLargeError("ordering search over " + std::to_string(random_vars.size()) +
                        "! orders refused (limit " + std::to_string(limit) + " variables)");
  }
  const auto support = nonzero_support(p_hat, random_vars);
  std::vector<VariableId> perm(random_vars.begin(), random_vars.end());
  std::sort(perm.begin(), perm.end());
  std::optional<BestOrdering> best;
  do {
    MonomialOrder order(OrderKind::lex, perm);
    Rational value = footprint_fraction(leading_monomial(support, order), q, random_vars);
    if (!best || value > best->bound) best = BestOrdering{value, std::move(order)};
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *best;
}

Rational ho_bound(const Network& net, const VariableRegistry& reg, const Fixing& fixing, std::uint64_t q) {
  const std::uint64_t sinks = net.sinks().size();
  if (q <= sinks) {
    throw NotApplicableError("the bound needs q > |T| (q = " + std::to_string(q) + ", |T| = " +
                             std::to_string(sinks) + ")");
  }
  const auto n = static_cast<unsigned>(eta(net, reg, fixing));
  return Rational(boost::multiprecision::pow(BigInt(q - sinks), n), boost::multiprecision::pow(BigInt(q), n));
}

// ------------------------------------------------------------- rank oracle

RankOracle::RankOracle(const Network& net, const VariableRegistry& reg, FieldPtr field)
    : net_(&net), field_(std::move(field)), incoming_(net.edge_count()) {
  for (const auto& e : net.edges()) {
    auto& in = incoming_[e.id - 1];
    for (auto i : net.symbols_at(e.tail)) in.push_back({true, i, reg.a(i, e.id)->index});
    for (auto l : net.in_edges(e.tail)) in.push_back({false, l, reg.f(l, e.id)->index});
  }
}

namespace {

std::size_t rank_of(const Field& k, std::vector<std::vector<ElemCode>> rows, std::size_t width) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < width && rank < rows.size(); ++col) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    const ElemCode inv = k.inv(rows[rank][col]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][col] == 0) continue;
      const ElemCode factor = k.mul(rows[r][col], inv);
      for (std::size_t c = col; c < width; ++c) {
        rows[r][c] = k.sub(rows[r][c], k.mul(factor, rows[rank][c]));
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace

std::vector<std::vector<ElemCode>> RankOracle::coding_vectors(std::span<const ElemCode> values) const {
  const Field& k = *field_;
  const std::size_t h = net_->h();
  std::vector<std::vector<ElemCode>> vec(net_->edge_count(), std::vector<ElemCode>(h, 0));
  for (auto id : net_->topological_edges()) {
    auto& out = vec[id - 1];
    for (const auto& in : incoming_[id - 1]) {
      const ElemCode c = values[in.var];
      if (c == 0) continue;
      if (in.from_symbol) {
        out[in.source - 1] = k.add(out[in.source - 1], c);
      } else {
        const auto& src = vec[in.source - 1];
        for (std::size_t s = 0; s < h; ++s) out[s] = k.add(out[s], k.mul(c, src[s]));
      }
    }
  }
  return vec;
}

bool RankOracle::spans(const std::vector<std::vector<ElemCode>>& vectors, NodeIndex sink) const {
  std::vector<std::vector<ElemCode>> rows;
  for (auto id : net_->in_edges(sink)) rows.push_back(vectors[id - 1]);
  return rank_of(*field_, std::move(rows), net_->h()) == net_->h();
}

bool RankOracle::all_decodable(std::span<const ElemCode> values) const {
  const auto vec = coding_vectors(values);
  return std::all_of(net_->sinks().begin(), net_->sinks().end(), [&](NodeIndex t) { return spans(vec, t); });
}

bool RankOracle::decodable(std::span<const ElemCode> values, NodeIndex sink) const {
  net_->sink_position(sink);
  return spans(coding_vectors(values), sink);
}

bool transfer_rank_decodable(const Network& net, const VariableRegistry& reg, const Assignment& scheme,
                             NodeIndex sink) {
  if (scheme.empty()) throw DomainError("empty coding scheme");
  const FieldPtr field = scheme.begin()->second.field();
  std::vector<ElemCode> values(reg.size(), 0);
  for (auto v : reg.af_variables()) {
    auto it = scheme.find(v);
    if (it == scheme.end()) throw DomainError("coding scheme does not assign " + reg.name(v));
    if (!same_field(*it->second.field(), *field)) throw DomainError("coding scheme mixes fields");
    values[v.index] = it->second.code();
  }
  return RankOracle(net, reg, field).decodable(values, sink);
}

// ----------------------------------------------------------- probabilities

namespace {

BigInt power(std::uint64_t q, std::size_t n) {
  return boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(n));
}

std::vector<ElemCode> fixed_values(const VariableRegistry& reg, const Fixing& fixing, const FieldPtr& field) {
  std::vector<ElemCode> values(reg.size(), 0);
  for (const auto& [v, x] : fixed_assignment(reg, fixing, field)) values[v.index] = x.code();
  return values;
}

std::vector<VariableId> all_b_variables(const Network& net, const VariableRegistry& reg) {
  std::vector<VariableId> out;
  for (auto t : net.sinks()) {
    auto b = reg.b_variables(t);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace

ProbabilityResult exact_probability(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                                    const FieldPtr& field, const ExactOptions& options) {
  const std::uint64_t q = field->order();
  const std::size_t mu = fixing.mu();
  const BigInt total = power(q, mu);
  const auto bvars = all_b_variables(net, reg);

  // P-tilde(x) != 0 iff every sink factor has a nonzero b-coefficient at x.
  std::vector<std::vector<MultiPoly>> systems;
  bool some_zero = false;
  for (const auto& f : p_tilde_factors(net, reg, fixing, field)) {
    std::vector<MultiPoly> sys;
    for (auto& [m, coeff] : coefficients_by(f, bvars)) sys.push_back(std::move(coeff));
    some_zero = some_zero || sys.empty();
    systems.push_back(std::move(sys));
  }
  BigInt successes = 0;
  if (!some_zero) {
    // Inclusion-exclusion over the sinks' zero sets.
    const std::size_t n = systems.size();
    if (n > 20) throw TooLargeError("exact probability supports at most 20 sinks");
    BigInt union_zeros = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      std::vector<MultiPoly> joint;
      for (std::size_t t = 0; t < n; ++t) {
        if (mask >> t & 1) joint.insert(joint.end(), systems[t].begin(), systems[t].end());
      }
      const BigInt zeros = total - count_nonvanishing(joint, fixing.random_vars, options.count);
      if (std::popcount(mask) % 2 == 1) {
        union_zeros += zeros;
      } else {
        union_zeros -= zeros;
      }
    }
    successes = total - union_zeros;
  }

  ProbabilityResult r;
  r.kind = ProbabilityResult::Kind::exact;
  r.q = q;
  r.mu = mu;
  r.successes = successes;
  r.total = total;
  r.exact = Rational(successes, total);

  if (field->enumerable() && total <= options.cross_check_limit) {
    RankOracle oracle(net, reg, field);
    std::vector<ElemCode> values = fixed_values(reg, fixing, field);
    std::vector<ElemCode> digits(mu, 0);
    std::uint64_t count = 0;
    while (true) {
      for (std::size_t i = 0; i < mu; ++i) values[fixing.random_vars[i].index] = digits[i];
      if (oracle.all_decodable(values)) ++count;
      std::size_t i = 0;
      while (i < mu && ++digits[i] == q) digits[i++] = 0;
      if (i == mu) break;
    }
    if (BigInt(count) != successes) {
      throw InternalError("symbolic count " + successes.str() + " disagrees with rank-oracle count " +
                          std::to_string(count));
    }
    r.cross_checked = true;
  }
  return r;
}

ProbabilityResult monte_carlo(const Network& net, const VariableRegistry& reg, const Fixing& fixing,
                              const FieldPtr& field, const MonteCarloOptions& options) {
  if (options.trials == 0) throw DomainError("Monte Carlo needs at least one trial");
  constexpr std::uint64_t kShard = 4096;
  const std::uint64_t q = field->order();
  const std::uint64_t shards = (options.trials + kShard - 1) / kShard;
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, shards));

  const RankOracle oracle(net, reg, field);
  const std::vector<ElemCode> base = fixed_values(reg, fixing, field);
  std::vector<std::uint64_t> per_shard(shards, 0);

  auto run = [&](unsigned w) {
    std::vector<ElemCode> values = base;
    for (std::uint64_t s = w; s < shards; s += workers) {
      const auto lo32 = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
      const auto hi32 = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
      std::seed_seq seq{lo32(options.seed), hi32(options.seed), lo32(s), hi32(s)};
      std::mt19937_64 engine(seq);
      const std::uint64_t n = std::min(kShard, options.trials - s * kShard);
      std::uint64_t ok = 0;
      for (std::uint64_t i = 0; i < n; ++i) {
        for (auto v : fixing.random_vars) values[v.index] = uniform_below(engine, q);
        if (oracle.all_decodable(values)) ++ok;
      }
      per_shard[s] = ok;
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(run, w);
  run(0);
  for (auto& t : pool) t.join();

  std::uint64_t successes = 0;
  for (auto s : per_shard) successes += s;
  ProbabilityResult r;
  r.kind = ProbabilityResult::Kind::monte_carlo;
  r.q = q;
  r.mu = fixing.mu();
  r.trials = options.trials;
  r.seed = options.seed;
  r.successes = successes;
  r.total = options.trials;
  r.estimate = static_cast<double>(successes) / static_cast<double>(options.trials);
  r.stderr_ = std::sqrt(r.estimate * (1 - r.estimate) / static_cast<double>(options.trials));
  return r;
}

// --------------------------------------------------------------- rendering

std::string format_decimal(const Rational& r, int digits) {
  if (digits < 1) throw DomainError("need at least one significant digit");
  if (r < 0) return "-" + format_decimal(-r, digits);
  if (r == 0) return "0";
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  // e = floor(log10 r)
  int e = 0;
  {
    BigInt n = num;
    BigInt d = den;
    while (n >= d * 10) {
      d *= 10;
      ++e;
    }
    while (n < d) {
      n *= 10;
      --e;
    }
  }
  const int shift = digits - 1 - e;
  BigInt scaled_num = num;
  BigInt scaled_den = den;
  if (shift >= 0) {
    scaled_num *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(shift));
  } else {
    scaled_den *= boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(-shift));
  }
  const std::string s = BigInt(scaled_num / scaled_den).str();
  if (shift <= 0) return s + std::string(static_cast<std::size_t>(-shift), '0');
  if (e < 0) return "0." + std::string(static_cast<std::size_t>(-e - 1), '0') + s;
  return s.substr(0, static_cast<std::size_t>(e + 1)) + "." + s.substr(static_cast<std::size_t>(e + 1));
}

}  // namespace lnc
