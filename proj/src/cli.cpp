#include "lnc/cli.hpp"

#include <CLI11.hpp>
#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <json.hpp>

#include "lnc/det.hpp"
#include "lnc/error.hpp"
#include "lnc/fieldsize.hpp"
#include "lnc/network.hpp"
#include "lnc/prob.hpp"

#ifndef LNC_FIXTURE_DIR
#define LNC_FIXTURE_DIR ""
#endif
#ifndef LNC_INSTALLED_FIXTURE_DIR
#define LNC_INSTALLED_FIXTURE_DIR ""
#endif

namespace lnc::cli {

namespace {

using json = nlohmann::json;

// Bad flag values discovered after CLI11 parsing; exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string fixture;
  bool json = false;
  std::string sink;
  std::string q;
  std::uint64_t characteristic = 0;
  bool appendix = false;
  bool laplace = false;
  std::string order;
  bool search_orders = false;
  std::size_t search_limit = 8;
  std::string fix = "default";
  bool print_poly = false;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 0;
  unsigned workers = 0;
  std::uint64_t cross_check_limit = std::uint64_t{1} << 24;
  std::size_t max_terms = 2'000'000;
};

FieldPtr field_from(const std::string& text) {
  try {
    auto [p, k] = parse_field_order(text);
    return make_field(p, k);
  } catch (const DomainError& e) {
    throw UsageError(std::string("--q: ") + e.what());
  }
}

json big(const BigInt& v) {
  if (v >= 0 && v <= BigInt(std::numeric_limits<std::uint64_t>::max())) {
    return static_cast<std::uint64_t>(v);
  }
  return v.str();
}

json rational_json(const Rational& r) {
  return {{"num", big(boost::multiprecision::numerator(r))},
          {"den", big(boost::multiprecision::denominator(r))},
          {"decimal", format_decimal(r)}};
}

std::string fraction(const Rational& r) {
  std::ostringstream s;
  s << boost::multiprecision::numerator(r) << "/" << boost::multiprecision::denominator(r);
  return s.str();
}

std::vector<NodeIndex> selected_sinks(const Network& net, const Options& o) {
  if (o.sink.empty()) return net.sinks();
  return {net.sink_by_name(o.sink)};
}

FieldPtr matrix_field(const Options& o) {
  if (o.characteristic) {
    if (!is_prime(o.characteristic)) throw UsageError("--char must be a prime");
    return make_field(o.characteristic, 1);
  }
  return field_from(o.q.empty() ? "2" : o.q);
}

MonomialOrder parse_order(const std::string& text, const VariableRegistry& reg,
                          std::span<const VariableId> fallback) {
  std::string kind = text;
  std::string list;
  if (auto colon = text.find(':'); colon != std::string::npos) {
    kind = text.substr(0, colon);
    list = text.substr(colon + 1);
  }
  OrderKind k;
  if (kind == "lex") {
    k = OrderKind::lex;
  } else if (kind == "grlex") {
    k = OrderKind::grlex;
  } else if (kind == "grevlex") {
    k = OrderKind::grevlex;
  } else {
    throw UsageError("--order: unknown ordering '" + kind + "' (use lex, grlex or grevlex)");
  }
  std::vector<VariableId> ascending;
  if (list.empty()) {
    ascending.assign(fallback.begin(), fallback.end());
  } else {
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
      auto v = reg.resolve(name);
      if (!v) throw UsageError("--order: unknown variable '" + name + "'");
      ascending.push_back(*v);
    }
  }
  try {
    return MonomialOrder(k, std::move(ascending));
  } catch (const DomainError& e) {
    throw UsageError(std::string("--order: ") + e.what());
  }
}

Fixing choose_fixing(const Options& o, const Network& net, const VariableRegistry& reg) {
  if (o.fix == "default") return default_fixing(net, reg);
  if (o.fix == "none") return open_fixing(net, reg);
  return fixing_from_decls(net, reg, load_fix_file(o.fix));
}

std::string names(const VariableRegistry& reg, std::span<const VariableId> vars) {
  std::string s;
  for (auto v : vars) s += (s.empty() ? "" : " ") + reg.display_name(v);
  return s.empty() ? "(none)" : s;
}

// ---------------------------------------------------------------- commands

void cmd_validate(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  json sinks = json::array();
  for (auto t : net.sinks()) {
    sinks.push_back({{"sink", net.node_name(t)}, {"min_cut", min_cut(net, t)}});
  }
  if (o.json) {
    out << json{{"command", "validate"}, {"network", net.name()}, {"nodes", net.node_count()},
                {"edges", net.edge_count()}, {"symbols", net.h()}, {"sinks", sinks}}
               .dump(2)
        << "\n";
    return;
  }
  out << "network " << net.name() << ": " << net.node_count() << " nodes, " << net.edge_count()
      << " edges, h = " << net.h() << "\n";
  for (const auto& s : sinks) {
    const auto cut = s["min_cut"].get<std::uint32_t>();
    out << "  sink " << s["sink"].get<std::string>() << ": min-cut " << cut
        << (cut < net.h() ? " (below h: no code exists)" : "") << "\n";
  }
  out << "valid\n";
}

void cmd_edmonds(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = matrix_field(o);
  const auto namer = reg.namer(false);
  const MonomialOrder order(OrderKind::grlex, {});
  json all = json::array();
  for (auto t : selected_sinks(net, o)) {
    const SymbolicMatrix m =
        o.appendix ? build_appendix_matrix(net, t, reg, field) : build_edmonds(net, t, reg, field);
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(to_string(m.at(r, c), namer, order));
      rows.push_back(row);
    }
    if (o.json) {
      all.push_back({{"sink", net.node_name(t)}, {"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}});
      continue;
    }
    out << (o.appendix ? "N_" : "M_") << net.node_name(t) << " (" << m.rows() << "x" << m.cols() << ", GF("
        << field->spec().label() << ")), nonzero entries (row, column), 1-based:\n";
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (!m.is_zero(r, c)) out << "  (" << r + 1 << "," << c + 1 << ") " << rows[r][c].get<std::string>() << "\n";
      }
    }
  }
  if (o.json) out << json{{"command", "edmonds"}, {"field", field->spec().label()}, {"matrices", all}}.dump(2) << "\n";
}

void cmd_det(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = matrix_field(o);
  const auto namer = reg.namer(false);
  const MonomialOrder order(OrderKind::grlex, {});
  json all = json::array();
  for (auto t : selected_sinks(net, o)) {
    const SymbolicMatrix m =
        o.appendix ? build_appendix_matrix(net, t, reg, field) : build_edmonds(net, t, reg, field);
    const MultiPoly d = o.laplace ? det_laplace(m) : det_bareiss(m);
    if (o.json) {
      json terms = json::array();
      for (const auto& term : d.terms()) terms.push_back({{"monomial", to_string(term.mono, namer)}, {"coeff", term.coeff}});
      all.push_back({{"sink", net.node_name(t)}, {"terms", terms}, {"polynomial", to_string(d, namer, order)}});
      continue;
    }
    out << "|" << (o.appendix ? "N_" : "M_") << net.node_name(t) << "| over GF(" << field->spec().label()
        << "), " << d.size() << " terms:\n  " << to_string(d, namer, order) << "\n";
  }
  if (o.json) out << json{{"command", "det"}, {"field", field->spec().label()}, {"determinants", all}}.dump(2) << "\n";
}

void cmd_paths(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const auto namer = reg.namer(false);
  json all = json::array();
  for (auto t : selected_sinks(net, o)) {
    const auto systems = enumerate_path_systems(net, t);
    if (!o.json) out << "sink " << net.node_name(t) << ": " << systems.size() << " path systems\n";
    std::size_t n = 0;
    for (const auto& ps : systems) {
      const Monomial m = path_system_to_monomial(net, ps, reg);
      if (o.json) {
        all.push_back({{"sink", net.node_name(t)}, {"decoded_as", ps.symbols}, {"paths", ps.paths},
                       {"monomial", to_string(m, namer)}});
        continue;
      }
      out << "  system " << ++n << " (decoded as";
      for (auto v : ps.symbols) out << " " << v;
      out << ")\n";
      for (std::size_t u = 0; u < ps.paths.size(); ++u) {
        out << "    symbol " << u + 1 << ":";
        for (std::size_t k = 0; k < ps.paths[u].size(); ++k) out << (k ? " -> " : " ") << ps.paths[u][k];
        out << "\n";
      }
      out << "    (" << to_string(m, namer) << ")\n";
    }
  }
  if (o.json) out << json{{"command", "paths"}, {"systems", all}}.dump(2) << "\n";
}

void cmd_min_field(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  FieldSizeOptions fo;
  fo.max_terms = o.max_terms;
  const FieldSizeResult r = min_field_size(net, o.characteristic, fo);
  const std::string cert =
      std::to_string(r.certificate.coeff) + "*" + to_string(r.certificate.mono, reg.namer(false));
  if (o.json) {
    json trials = json::array();
    for (const auto& t : r.trials) trials.push_back({{"q", t.q}, {"feasible", t.feasible}});
    out << json{{"command", "min-field"}, {"p", r.p}, {"q", r.q}, {"k", r.k}, {"trials", trials},
                {"certificate", cert}, {"expected_trials", r.expected_trials},
                {"exceeded_expected", r.exceeded_expected}}
               .dump(2)
        << "\n";
    return;
  }
  for (const auto& t : r.trials) {
    out << "GF(" << t.q << "): " << (t.feasible ? "remainder nonzero" : "remainder zero") << "\n";
  }
  out << "q = " << r.q << "\n";
  out << "certificate term: " << cert << "\n";
  if (r.exceeded_expected) {
    out << "note: needed " << r.trials.size() << " fields, more than floor(log_p |T|) = " << r.expected_trials << "\n";
  }
}

void cmd_solve(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = field_from(o.q);
  FieldSizeOptions fo;
  fo.max_terms = o.max_terms;
  const CodingScheme scheme = find_coding_scheme(net, reg, field, fo);
  if (o.json) {
    json values = json::object();
    for (const auto& [v, x] : scheme.values) values[reg.name(v)] = x.code();
    out << json{{"command", "solve"}, {"q", field->order()}, {"values", values}}.dump(2) << "\n";
    return;
  }
  out << "# linear network code for " << net.name() << " over GF(" << field->spec().label() << ")\n";
  for (const auto& [v, x] : scheme.values) {
    const auto& k = reg.key(v);
    if (k.kind == VarKind::b) continue;
    out << "fix " << (k.kind == VarKind::a ? "a " : "f ") << k.i << " " << k.j << " " << x.code() << "\n";
  }
  for (const auto& [v, x] : scheme.values) {
    if (reg.key(v).kind == VarKind::b) out << "# " << reg.name(v) << " = " << x.code() << "\n";
  }
}

void cmd_bounds(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = field_from(o.q);
  const std::uint64_t q = field->order();
  const Fixing fx = choose_fixing(o, net, reg);
  const MonomialOrder order = parse_order(o.order.empty() ? "lex" : o.order, reg, fx.random_vars);
  const MultiPoly p_tilde = build_p_tilde(net, reg, fx, field);
  const MultiPoly p_hat = build_p_hat(p_tilde, q, fx.random_vars);
  const Rational lm = bound_lm(p_hat, q, fx.random_vars, order);
  const Rational smin = bound_support_min(p_hat, q, fx.random_vars);
  std::optional<Rational> ho;
  std::string ho_note;
  try {
    ho = ho_bound(net, reg, fx, q);
  } catch (const NotApplicableError& e) {
    ho_note = e.what();
  }
  std::optional<BestOrdering> best;
  if (o.search_orders) best = bound_best_ordering(p_hat, q, fx.random_vars, o.search_limit);
  const auto namer = reg.namer();
  const std::size_t e = eta(net, reg, fx);

  if (o.json) {
    json j{{"command", "bounds"},
           {"network", net.name()},
           {"q", q},
           {"mu", fx.mu()},
           {"eta", e},
           {"random_variables", json::array()},
           {"order", order.describe(namer)},
           {"bound_lm", rational_json(lm)},
           {"bound_support_min", rational_json(smin)},
           {"bound_ho", ho ? rational_json(*ho) : json(nullptr)}};
    for (auto v : fx.random_vars) j["random_variables"].push_back(reg.display_name(v));
    if (best) j["best_order"] = {{"bound", rational_json(best->bound)}, {"order", best->order.describe(namer)}};
    if (o.print_poly) {
      j["p_tilde"] = to_string(p_tilde, namer, order);
      j["p_hat"] = to_string(p_hat, namer, order);
    }
    out << j.dump(2) << "\n";
    return;
  }
  out << "network              " << net.name() << "\n";
  out << "field                GF(" << field->spec().label() << "), q = " << q << "\n";
  out << "mu                   " << fx.mu() << "  (" << names(reg, fx.random_vars) << ")\n";
  out << "eta                  " << e << "\n";
  out << "order                " << order.describe(namer) << "\n";
  out << "leading-monomial     " << format_decimal(lm) << "  " << fraction(lm) << "\n";
  out << "support minimum      " << format_decimal(smin) << "  " << fraction(smin) << "\n";
  if (ho) {
    out << "Ho bound             " << format_decimal(*ho) << "  " << fraction(*ho) << "\n";
  } else {
    out << "Ho bound             n/a (" << ho_note << ")\n";
  }
  if (best) {
    out << "best lex order       " << format_decimal(best->bound) << "  " << fraction(best->bound) << "  "
        << best->order.describe(namer) << "\n";
  }
  if (o.print_poly) {
    out << "P~ = " << to_string(p_tilde, namer, order) << "\n";
    out << "P^ = " << to_string(p_hat, namer, order) << "\n";
  }
}

void cmd_exact(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = field_from(o.q);
  const Fixing fx = choose_fixing(o, net, reg);
  ExactOptions eo;
  eo.cross_check_limit = o.cross_check_limit;
  const ProbabilityResult r = exact_probability(net, reg, fx, field, eo);
  if (o.json) {
    out << json{{"command", "exact"}, {"network", net.name()}, {"q", r.q}, {"mu", r.mu},
                {"exact", rational_json(r.exact)}, {"successes", big(r.successes)}, {"total", big(r.total)},
                {"cross_checked", r.cross_checked}}
               .dump(2)
        << "\n";
    return;
  }
  out << "success probability over GF(" << field->spec().label() << "), mu = " << r.mu << ": "
      << format_decimal(r.exact) << "  " << fraction(r.exact) << "  (" << r.successes << " of " << r.total
      << " points)\n";
  out << (r.cross_checked ? "rank-oracle enumeration agrees\n"
                          : "rank-oracle enumeration skipped (point count above --cross-check-limit)\n");
}

void cmd_simulate(const Options& o, std::ostream& out) {
  const Network net = load_network(locate_fixture(o.fixture));
  const VariableRegistry reg(net);
  const FieldPtr field = field_from(o.q);
  const Fixing fx = choose_fixing(o, net, reg);
  MonteCarloOptions mo;
  mo.trials = o.trials;
  mo.seed = o.seed;
  mo.workers = o.workers;
  const ProbabilityResult r = monte_carlo(net, reg, fx, field, mo);
  char estimate[32];
  char stderr_text[32];
  std::snprintf(estimate, sizeof estimate, "%.6f", r.estimate);
  std::snprintf(stderr_text, sizeof stderr_text, "%.6f", r.stderr_);
  if (o.json) {
    out << json{{"command", "simulate"}, {"network", net.name()}, {"q", r.q}, {"mu", r.mu},
                {"estimate", r.estimate}, {"stderr", r.stderr_}, {"trials", r.trials},
                {"successes", big(r.successes)}, {"seed", r.seed}}
               .dump(2)
        << "\n";
    return;
  }
  out << "estimate " << estimate << " +- " << stderr_text << "  (" << r.successes << " of " << r.trials
      << " trials, q = " << r.q << ", seed " << r.seed << ")\n";
}

}  // namespace

std::filesystem::path locate_fixture(std::string_view name) {
  const std::filesystem::path given(name);
  if (std::filesystem::exists(given)) return given;
  std::vector<std::filesystem::path> names{given};
  if (given.extension() != ".nc") names.push_back(std::string(name) + ".nc");
  for (const char* dir : {LNC_FIXTURE_DIR, LNC_INSTALLED_FIXTURE_DIR}) {
    if (!*dir) continue;
    for (const auto& n : names) {
      const auto candidate = std::filesystem::path(dir) / n;
      if (std::filesystem::exists(candidate)) return candidate;
    }
  }
  throw IoError("fixture '" + std::string(name) + "' not found");
}

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear network coding: field sizes and success-probability bounds", "lnc"};
  app.require_subcommand(1);
  Options o;

  auto add_fixture = [&](CLI::App* sub) {
    sub->add_option("fixture", o.fixture, "Network fixture (path or bundled name)")->required();
    sub->add_flag("--json", o.json, "Machine-readable output");
  };
  auto add_fix = [&](CLI::App* sub) {
    sub->add_option("--fix", o.fix, "default, none, or a file of 'fix' lines")->capture_default_str();
  };
  auto add_sink = [&](CLI::App* sub) { sub->add_option("--sink", o.sink, "Only this sink"); };
  auto add_matrix_field = [&](CLI::App* sub) {
    auto* q = sub->add_option("--q", o.q, "Field order, p^k or an integer (default 2)");
    auto* c = sub->add_option("--char", o.characteristic, "Prime field GF(p)");
    q->excludes(c);
  };

  auto* validate = app.add_subcommand("validate", "Parse and check a fixture");
  add_fixture(validate);

  auto* edmonds = app.add_subcommand("edmonds", "Print Edmonds matrices");
  add_fixture(edmonds);
  add_sink(edmonds);
  add_matrix_field(edmonds);
  edmonds->add_flag("--appendix", o.appendix, "Block-swapped matrix with +F");

  auto* det = app.add_subcommand("det", "Symbolic determinants of the Edmonds matrices");
  add_fixture(det);
  add_sink(det);
  add_matrix_field(det);
  det->add_flag("--appendix", o.appendix, "Block-swapped matrix with +F");
  det->add_flag("--laplace", o.laplace, "Use cofactor expansion instead of elimination");

  auto* paths = app.add_subcommand("paths", "Enumerate edge-disjoint path systems");
  add_fixture(paths);
  add_sink(paths);

  auto* min_field = app.add_subcommand("min-field", "Smallest feasible field of a characteristic");
  add_fixture(min_field);
  min_field->add_option("--char", o.characteristic, "Characteristic p")->required();
  min_field->add_option("--max-terms", o.max_terms, "Abort above this many terms")->capture_default_str();

  auto* solve = app.add_subcommand("solve", "Construct a linear network code");
  add_fixture(solve);
  solve->add_option("--q", o.q, "Field order, p^k or an integer")->required();
  solve->add_option("--max-terms", o.max_terms, "Abort above this many terms")->capture_default_str();

  auto* bounds = app.add_subcommand("bounds", "Lower bounds on the random-coding success probability");
  add_fixture(bounds);
  add_fix(bounds);
  bounds->add_option("--q", o.q, "Field order, p^k or an integer")->required();
  bounds->add_option("--order", o.order, "lex|grlex|grevlex[:v1,v2,...], smallest variable first");
  bounds->add_flag("--search-orders", o.search_orders, "Maximise over all lex orders");
  bounds->add_option("--search-limit", o.search_limit, "Refuse the search above this many variables")
      ->capture_default_str();
  bounds->add_flag("--print-poly", o.print_poly, "Print the determinant polynomials");

  auto* exact = app.add_subcommand("exact", "Exact success probability");
  add_fixture(exact);
  add_fix(exact);
  exact->add_option("--q", o.q, "Field order, p^k or an integer")->required();
  exact->add_option("--cross-check-limit", o.cross_check_limit, "Enumerate with the rank oracle up to this many points")
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the success probability");
  add_fixture(simulate);
  add_fix(simulate);
  simulate->add_option("--q", o.q, "Field order, p^k or an integer")->required();
  simulate->add_option("--trials", o.trials, "Number of trials")->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "Random seed")->required();
  simulate->add_option("--workers", o.workers, "Worker threads (0: one per core)")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (validate->parsed()) cmd_validate(o, out);
    if (edmonds->parsed()) cmd_edmonds(o, out);
    if (det->parsed()) cmd_det(o, out);
    if (paths->parsed()) cmd_paths(o, out);
    if (min_field->parsed()) cmd_min_field(o, out);
    if (solve->parsed()) cmd_solve(o, out);
    if (bounds->parsed()) cmd_bounds(o, out);
    if (exact->parsed()) cmd_exact(o, out);
    if (simulate->parsed()) cmd_simulate(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace lnc::cli
