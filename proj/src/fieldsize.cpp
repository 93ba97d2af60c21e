#include "lnc/fieldsize.hpp"

#include <algorithm>

#include "lnc/det.hpp"
#include "lnc/error.hpp"
#include "lnc/prob.hpp"

namespace lnc {

namespace {

struct Block {
  Monomial b_part;
  MultiPoly coeff;
};

void require_min_cut(const Network& net) {
  for (auto t : net.sinks()) {
    const auto cut = min_cut(net, t);
    if (cut < net.h()) {
      throw InfeasibleError("sink '" + net.node_name(t) + "' has min-cut " + std::to_string(cut) + " < h = " +
                            std::to_string(net.h()) + "; no field admits a solution");
    }
  }
}

MultiPoly monic(const MultiPoly& f) {
  const ElemCode lead = f.terms().back().coeff;
  return lead == 1 ? f : f.scaled(f.field()->inv(lead));
}

// |M_t| = sum over b-monomials beta of g_beta * beta; one block per beta,
// dropping blocks that are scalar multiples of an earlier one.
std::vector<std::vector<Block>> sink_blocks(const Network& net, const VariableRegistry& reg,
                                            const FieldPtr& field) {
  std::vector<VariableId> bvars;
  for (auto t : net.sinks()) {
    auto b = reg.b_variables(t);
    bvars.insert(bvars.end(), b.begin(), b.end());
  }
  std::vector<std::vector<Block>> out;
  for (const auto& det : sink_determinants(net, reg, field)) {
    std::vector<Block> blocks;
    std::vector<MultiPoly> seen;
    for (auto& [b, g] : coefficients_by(det, bvars)) {
      MultiPoly key = monic(g);
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(std::move(key));
      blocks.push_back({b, g});
    }
    out.push_back(std::move(blocks));
  }
  return out;
}

struct Choice {
  std::vector<std::size_t> picks;
  MultiPoly remainder;
};

// The remainder of P is nonzero iff some choice of one block per sink has a
// nonzero remainder product, since distinct choices carry distinct
// b-monomials. Zero partial remainders stay zero, which prunes the search.
std::optional<Choice> search_blocks(const std::vector<std::vector<Block>>& blocks, const FieldPtr& field,
                                    const std::vector<VariableId>& af, std::size_t max_terms) {
  const std::uint64_t q = field->order();
  std::vector<std::vector<MultiPoly>> embedded(blocks.size());
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    for (const auto& b : blocks[t]) {
      MultiPoly g = same_field(*b.coeff.field(), *field) ? b.coeff : embed_prime_subfield(b.coeff, field);
      embedded[t].push_back(field_equation_remainder(g, q, af));
    }
  }
  std::vector<std::size_t> picks;
  std::function<std::optional<MultiPoly>(std::size_t, const MultiPoly&)> dfs =
      [&](std::size_t t, const MultiPoly& partial) -> std::optional<MultiPoly> {
    if (t == embedded.size()) return partial;
    for (std::size_t i = 0; i < embedded[t].size(); ++i) {
      MultiPoly next = field_equation_remainder(partial * embedded[t][i], q, af);
      if (next.size() > max_terms) {
        throw TooLargeError("intermediate product has " + std::to_string(next.size()) +
                            " terms, above the cap of " + std::to_string(max_terms));
      }
      if (next.is_zero()) continue;
      picks.push_back(i);
      if (auto r = dfs(t + 1, next)) return r;
      picks.pop_back();
    }
    return std::nullopt;
  };
  auto r = dfs(0, MultiPoly::constant(field, 1));
  if (!r) return std::nullopt;
  return Choice{picks, std::move(*r)};
}

}  // namespace

FieldSizeResult min_field_size(const Network& net, std::uint64_t p, const FieldSizeOptions& options) {
  if (!is_prime(p)) throw DomainError(std::to_string(p) + " is not a prime");
  require_min_cut(net);
  const VariableRegistry reg(net);
  const auto af = reg.af_variables();
  const FieldPtr base = make_field(p, 1);
  const auto blocks = sink_blocks(net, reg, base);

  unsigned floor_log = 0;
  for (std::uint64_t power = p; power <= net.sinks().size(); power *= p) ++floor_log;
  // GF(p) itself always counts as one try.
  const unsigned expected = std::max(floor_log, 1u);

  FieldSizeResult result;
  result.p = p;
  result.expected_trials = expected;
  // p^(floor_log + 1) > |T|, where a solution is guaranteed.
  for (unsigned k = 1; k <= floor_log + 1; ++k) {
    const FieldPtr field = make_field(p, k);
    auto choice = search_blocks(blocks, field, af, options.max_terms);
    result.trials.push_back({field->order(), choice.has_value()});
    if (!choice) continue;
    result.k = k;
    result.q = field->order();
    result.field = field;
    result.exceeded_expected = k > expected;
    const Monomial lead = leading_monomial(choice->remainder, MonomialOrder(OrderKind::grlex, {}));
    Monomial b_part;
    for (std::size_t t = 0; t < blocks.size(); ++t) b_part = b_part * blocks[t][choice->picks[t]].b_part;
    result.certificate = {lead * b_part, choice->remainder.coefficient(lead)};
    return result;
  }
  throw InternalError("no field of characteristic " + std::to_string(p) +
                      " up to order exceeding |T| admits a solution despite sufficient min-cut");
}

CodingScheme find_coding_scheme(const Network& net, const VariableRegistry& reg, const FieldPtr& field,
                                const FieldSizeOptions& options) {
  require_min_cut(net);
  const std::uint64_t q = field->order();
  if (!field->enumerable()) throw TooLargeError("coding-scheme search needs an enumerable field");
  const auto af = reg.af_variables();
  const auto blocks = sink_blocks(net, reg, field);
  const auto choice = search_blocks(blocks, field, af, options.max_terms);
  if (!choice) {
    throw InfeasibleError("no linear network code exists over GF(" + field->spec().label() + ")");
  }

  CodingScheme scheme{field, {}};
  const Assignment point = find_nonzero_point(choice->remainder, q);
  for (auto v : af) {
    auto it = point.find(v);
    scheme.values.emplace(v, it != point.end() ? it->second : FieldElement::zero(field));
  }
  const auto dets = sink_determinants(net, reg, field);
  for (std::size_t s = 0; s < net.sinks().size(); ++s) {
    const NodeIndex t = net.sinks()[s];
    const MultiPoly in_b = p_eval_partial(dets[s], scheme.values);
    const Assignment b_point = find_nonzero_point(in_b, q);
    for (auto v : reg.b_variables(t)) {
      auto it = b_point.find(v);
      scheme.values.emplace(v, it != b_point.end() ? it->second : FieldElement::zero(field));
    }
  }
  for (std::size_t s = 0; s < net.sinks().size(); ++s) {
    const NodeIndex t = net.sinks()[s];
    if (p_evaluate(dets[s], scheme.values).is_zero()) {
      throw InternalError("constructed scheme leaves |M_t| zero at sink '" + net.node_name(t) + "'");
    }
    if (!transfer_rank_decodable(net, reg, scheme.values, t)) {
      throw InternalError("constructed scheme is not decodable at sink '" + net.node_name(t) + "'");
    }
  }
  return scheme;
}

}  // namespace lnc
