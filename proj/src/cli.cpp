#include "covsys/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "covsys/bounds.hpp"
#include "covsys/construct.hpp"
#include "covsys/decompose.hpp"
#include "covsys/density.hpp"
#include "covsys/stats.hpp"
#include "covsys/system_io.hpp"
#include "json.hpp"

namespace covsys::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json rational(const Rational& q) { return to_string(q); }

json integer(const BigInt& v) {
  if (auto u = to_u64(v)) return *u;
  return v.get_str();
}

json classes_json(const ResidueSystem& system) {
  json a = json::array();
  for (const auto& c : system) a.push_back({c.modulus(), c.residue()});
  return a;
}

json moduli_json(const ModuliSet& T) { return T.expanded(); }

std::vector<std::uint64_t> parse_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, item.find_last_not_of(" \t") - b + 1);
    std::size_t used = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || item[0] == '-') throw InputError("expected a positive integer, got \"" + item + "\"");
    if (v == 0) throw InputError("moduli must be >= 1");
    out.push_back(v);
  }
  return out;
}

ModuliSet parse_moduli(const std::string& text) {
  auto v = parse_list(text);
  return ModuliSet(v);
}

std::vector<ModuliSet> parse_family(const std::string& text) {
  std::vector<ModuliSet> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (item.find_first_not_of(" \t") != std::string::npos) out.push_back(parse_moduli(item));
  if (out.empty()) throw InputError("empty family");
  return out;
}

std::pair<double, double> parse_pair(const std::string& text, const char* what) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw InputError(std::string(what) + " expects A:B");
  try {
    return {std::stod(text.substr(0, colon)), std::stod(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw InputError(std::string(what) + " expects two numbers A:B");
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  json inputs = json::object();
  std::optional<std::uint64_t> seed;
  json result = json::object();
  json diagnostics = json::object();
  std::optional<Table> table;  // preferred CSV rendering
};

void write_csv(const Report& r, std::ostream& out) {
  if (r.table) {
    for (std::size_t i = 0; i < r.table->header.size(); ++i)
      out << (i ? "," : "") << csv_field(r.table->header[i]);
    out << "\n";
    for (const auto& row : r.table->rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(row[i]);
      out << "\n";
    }
    return;
  }
  out << "key,value\n";
  for (auto& [k, v] : r.result.items())
    if (!v.is_structured()) out << csv_field(k) << "," << csv_field(scalar_text(v)) << "\n";
}

void write_json(const Report& r, std::ostream& out) {
  ordered_json j;
  j["command"] = r.command;
  j["inputs"] = r.inputs;
  if (r.seed) j["seed"] = *r.seed;
  j["result"] = r.result;
  j["diagnostics"] = r.diagnostics;
  out << j.dump(2) << "\n";
}

// Options shared by every command that reads a residue system.
struct SystemSource {
  std::string input;
  std::string inline_text;
  std::string input_format = "json";
};

void add_system_options(CLI::App* sub, SystemSource& src) {
  sub->add_option("--input,-i", src.input, "system file (JSON or text), - for stdin");
  sub->add_option("--system", src.inline_text, "inline text system, e.g. \"0 mod 2; 1 mod 3\"");
  sub->add_option("--input-format", src.input_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));
}

SystemDocument load_system(const SystemSource& src, std::istream& in) {
  if (!src.inline_text.empty()) return parse_system_text(src.inline_text);
  if (src.input.empty()) throw InputError("a system is required: pass --input FILE or --system TEXT");
  std::string text;
  if (src.input == "-") {
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ifstream f(src.input);
    if (!f) throw InputError("cannot read " + src.input);
    std::ostringstream ss;
    ss << f.rdbuf();
    text = ss.str();
  }
  return src.input_format == "text" ? parse_system_text(text) : parse_system_json(text);
}

json certificate_json(const BoundCertificate& cert, bool with_terms) {
  json j;
  j["kind"] = std::string(to_string(cert.kind));
  j["lower_bound"] = rational(cert.lower_bound);
  j["conclusion"] = std::string(to_string(cert.conclusion()));
  for (const auto& [k, v] : cert.components) j[k] = rational(v);
  if (with_terms) {
    json terms = json::array();
    for (const auto& t : cert.terms)
      terms.push_back({{"h", t.representative_h},
                       {"count", t.count},
                       {"alpha", rational(t.alpha)},
                       {"beta", rational(t.beta)},
                       {"bound", rational(t.bound)}});
    j["terms"] = std::move(terms);
  }
  return j;
}

Table certificate_table(const BoundCertificate& cert) {
  Table t{{"h", "count", "alpha", "beta", "bound"}, {}};
  for (const auto& term : cert.terms)
    t.rows.push_back({std::to_string(term.representative_h), std::to_string(term.count), to_string(term.alpha),
                      to_string(term.beta), to_string(term.bound)});
  return t;
}

json moments_json(const MomentReport& m) {
  json j{{"method", std::string(to_string(m.method))},
         {"mean", rational(m.mean)},
         {"second_moment", rational(m.second_moment)},
         {"variance", rational(m.variance)},
         {"approx_bound_ratio", m.bound_ratio}};
  if (m.method == MomentMethod::monte_carlo) {
    j["sample_count"] = m.sample_count;
    j["approx_standard_error"] = m.standard_error;
  }
  return j;
}

void record_inputs(const CLI::App* sub, Report& report) {
  for (const CLI::Option* opt : sub->get_options()) {
    if (opt->count() == 0) continue;
    std::string name = opt->get_single_name();
    if (name == "help") continue;
    const auto& results = opt->results();
    if (opt->get_type_size() == 0) report.inputs[name] = true;
    else if (results.size() == 1) report.inputs[name] = results[0];
    else report.inputs[name] = results;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, std::istream& in) {
  CLI::App app{"Exact analysis and construction of covering systems of congruences", "covsys"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "report format: json, or csv for tables")
      ->check(CLI::IsMember({"json", "csv"}));

  Report report;
  std::function<void()> action;
  CLI::App* active = nullptr;
  auto command = [&](const char* name, const char* help) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&, sub, name] {
      active = sub;
      report.command = name;
    });
    return sub;
  };

  // density
  SystemSource density_src;
  std::string density_method = "best";
  double density_Q = 0;
  std::uint64_t scan_guard = kDefaultScanGuard;
  std::uint64_t decomposition_guard = kDefaultDecompositionGuard;
  auto* density = command("density", "exact uncovered density");
  add_system_options(density, density_src);
  density->add_option("--method", density_method, "best, auto, scan or decomposed")
      ->check(CLI::IsMember({"best", "auto", "scan", "decomposed"}));
  density->add_option("--Q", density_Q, "smoothness bound for --method decomposed");
  density->add_option("--guard", scan_guard, "ceiling on the scanned period");
  density->add_option("--decomposition-guard", decomposition_guard, "ceiling on M");

  // bounds
  SystemSource bounds_src;
  bool bounds_refined = false, bounds_sort = false;
  std::string smooth_tail, threshold;
  auto* bounds = command("bounds", "alpha, beta and the pair lower bound; smooth tails; L(N, s)");
  add_system_options(bounds, bounds_src);
  bounds->add_flag("--refined", bounds_refined, "damp each dependent pair by the later factors");
  bounds->add_flag("--sort-desc", bounds_sort, "order classes by decreasing modulus first");
  bounds->add_option("--smooth-tail", smooth_tail, "N:Q, exact sum of 1/n over Q-smooth n > N");
  bounds->add_option("--threshold", threshold, "N:s, evaluate L(N, s)");

  // certify
  SystemSource certify_src;
  double certify_Q = 0;
  bool certify_refined = false, certify_terms = false;
  auto* certify = command("certify", "decomposed positivity certificate");
  add_system_options(certify, certify_src);
  certify->add_option("--Q", certify_Q, "smoothness bound (default: largest prime <= sqrt(max modulus))");
  certify->add_flag("--refined", certify_refined, "refined pair sum inside each subsystem");
  certify->add_flag("--terms", certify_terms, "include the per-subsystem terms");
  certify->add_option("--guard", decomposition_guard, "ceiling on M");
  certify->add_option("--scan-guard", scan_guard, "ceiling on subsystem scans");

  // decompose
  SystemSource decompose_src;
  double decompose_Q = 0;
  bool decompose_check = false, decompose_floor = false, decompose_beta = false;
  auto* decompose_cmd = command("decompose", "smooth-part decomposition into subsystems");
  add_system_options(decompose_cmd, decompose_src);
  decompose_cmd->add_option("--Q", decompose_Q, "smoothness bound");
  decompose_cmd->add_flag("--check", decompose_check, "verify delta(C) = (1/M) sum delta(C_h) by scanning");
  decompose_cmd->add_flag("--alpha-floor", decompose_floor, "averaged alpha against its floor");
  decompose_cmd->add_flag("--beta", decompose_beta, "averaged beta");
  decompose_cmd->add_option("--guard", decomposition_guard, "ceiling on M");
  decompose_cmd->add_option("--scan-guard", scan_guard, "ceiling on scans");

  // delta-minus / delta-plus
  std::string moduli_text, minus_mode = "exhaustive";
  std::uint64_t moduli_guard = kDefaultScanGuard;
  auto* minus = command("delta-minus", "minimum uncovered density over residue choices");
  minus->add_option("--moduli", moduli_text, "comma separated moduli")->required();
  minus->add_option("--mode", minus_mode, "exhaustive or greedy")
      ->check(CLI::IsMember({"exhaustive", "greedy"}));
  minus->add_option("--guard", moduli_guard, "ceiling on prod(n) (exhaustive) or lcm (greedy)");
  auto* plus = command("delta-plus", "maximum uncovered density (all residues 0)");
  plus->add_option("--moduli", moduli_text, "comma separated moduli")->required();
  plus->add_option("--guard", moduli_guard, "ceiling on inclusion-exclusion terms");

  // greedy
  std::uint64_t greedy_N = 0, greedy_K = 0, greedy_seed = 0, greedy_window = 0;
  bool greedy_exact = false, greedy_steps = true;
  auto* greedy = command("greedy", "random then greedy near cover with moduli in (N, KN]");
  greedy->add_option("--N", greedy_N, "interval start")->required();
  greedy->add_option("--K", greedy_K, "interval ratio")->required();
  greedy->add_option("--seed", greedy_seed, "seed for the random phase");
  greedy->add_option("--window", greedy_window, "scan width (default 10 K N)");
  greedy->add_flag("--exact", greedy_exact, "use the full period lcm(N+1..KN) as window");
  greedy->add_flag("!--no-steps", greedy_steps, "omit the per-step trace from JSON");

  // construct-exact
  unsigned construct_J = 1;
  std::string construct_schedule = "standard";
  std::uint64_t construct_guard = kDefaultConstructGuard;
  auto* construct = command("construct-exact", "exact covering system C_J with squarefree moduli");
  construct->add_option("--J", construct_J, "depth")->required()->check(CLI::PositiveNumber);
  construct->add_option("--schedule", construct_schedule, "standard or minimal")
      ->check(CLI::IsMember({"standard", "minimal"}));
  construct->add_option("--guard", construct_guard, "ceiling on the number of classes");

  // haight
  std::uint64_t haight_N = 0, haight_guard = kDefaultHaightGuard, haight_exact = kDefaultHaightExactGuard;
  bool haight_full = false;
  auto* haight = command("haight", "primes above e^sqrt(log N) log N and divisor statistics");
  haight->add_option("--N", haight_N, "upper end of the prime interval")->required();
  haight->add_flag("--full", haight_full, "statistics over all divisors d > 1 of H");
  haight->add_option("--guard", haight_guard, "ceiling on 2^(number of primes)");
  haight->add_option("--exact-guard", haight_exact, "ceiling for the exact alpha product");

  // witness
  SystemSource witness_src;
  std::uint64_t witness_B = 0, witness_s = 1;
  auto* witness = command("witness", "uncovered integer: direct scan, or smooth-part extension with --B");
  add_system_options(witness, witness_src);
  witness->add_option("--B", witness_B, "bound on the moduli; enables the extension");
  witness->add_option("--s", witness_s, "multiplicity bound for the extension");
  witness->add_option("--guard", scan_guard, "ceiling on the scanned period");

  // stats
  std::string stats_family, stats_mode = "enumerate";
  std::uint64_t stats_trials = 1000, stats_seed = 0, stats_guard = 0;
  auto* stats = command("stats", "moments of delta over random residue systems");
  stats->add_option("--moduli", moduli_text, "comma separated moduli T");
  stats->add_option("--family", stats_family, "moduli sets separated by ';' (for --mode scan)");
  stats->add_option("--mode", stats_mode, "expected, enumerate, pair, sample or scan")
      ->check(CLI::IsMember({"expected", "enumerate", "pair", "sample", "scan"}));
  stats->add_option("--trials", stats_trials, "samples for --mode sample");
  stats->add_option("--seed", stats_seed, "seed for --mode sample");
  stats->add_option("--guard", stats_guard, "ceiling on W(T) or on 2^|T|");

  // verify-exact-cover
  SystemSource verify_src;
  auto* verify = command("verify-exact-cover", "disjointness plus sum of 1/n = 1");
  add_system_options(verify, verify_src);

  // xineq
  unsigned xineq_j = 0, xineq_from = 0, xineq_to = 0;
  auto* xineq = command("xineq", "sum over X_{j-1} < p <= X_j of [X_j/p] against X_{j-1}");
  xineq->add_option("--j", xineq_j, "single index");
  xineq->add_option("--from", xineq_from, "first index of a range");
  xineq->add_option("--to", xineq_to, "last index of a range");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return input_error;
  }

  try {
    if (active == density) {
      auto doc = load_system(density_src, in);
      DensityReport r;
      DecompositionGuards guards{decomposition_guard, scan_guard};
      if (density_method == "scan") r = exact_density(doc.system, scan_guard);
      else if (density_method == "auto") r = density_auto(doc.system, scan_guard);
      else if (density_method == "decomposed") {
        double Q = density_Q > 0 ? density_Q : suggest_Q(doc.system);
        report.diagnostics["Q"] = Q;
        r = density_decomposed(doc.system, Q, guards);
      } else {
        r = density_best(doc.system, guards);
      }
      report.result["delta"] = rational(r.value);
      report.result["period"] = integer(r.period);
      report.result["uncovered_count"] = integer(r.uncovered_count);
      report.result["covers"] = r.value == 0;
      report.result["approx_delta"] = to_double(r.value);
      report.diagnostics["method"] = std::string(to_string(r.method));
      report.diagnostics["classes"] = doc.system.size();
    } else if (active == bounds) {
      if (!smooth_tail.empty()) {
        auto [N, Q] = parse_pair(smooth_tail, "--smooth-tail");
        if (N < 1 || N != std::floor(N)) throw InputError("--smooth-tail N must be a positive integer");
        auto t = smooth_tail_sum(static_cast<std::uint64_t>(N), Q);
        report.result = {{"tail", rational(t.tail)},
                         {"euler_product", rational(t.euler_product)},
                         {"head", rational(t.head)},
                         {"head_terms", t.head_terms},
                         {"approx_tail", to_double(t.tail)},
                         {"approx_u", t.u},
                         {"approx_bound_shape", t.approx_bound_shape}};
      } else if (!threshold.empty()) {
        auto [N, s] = parse_pair(threshold, "--threshold");
        try {
          report.result["approx_L"] = L_threshold(N, s);
        } catch (const std::domain_error& e) {
          throw InputError(e.what());
        }
      } else {
        auto doc = load_system(bounds_src, in);
        auto cert = lemma1_bound(doc.system, {bounds_refined, bounds_sort});
        report.result = certificate_json(cert, false);
        if (bounds_refined) report.result["beta"] = rational(beta(doc.system));
      }
    } else if (active == certify) {
      auto doc = load_system(certify_src, in);
      double Q = certify_Q > 0 ? certify_Q : suggest_Q(doc.system);
      auto cert = positivity_certificate(doc.system, Q, {decomposition_guard, scan_guard}, certify_refined);
      report.result = certificate_json(cert, certify_terms);
      report.result["Q"] = Q;
      report.diagnostics["groups"] = cert.terms.size();
      report.table = certificate_table(cert);
    } else if (active == decompose_cmd) {
      auto doc = load_system(decompose_src, in);
      double Q = decompose_Q > 0 ? decompose_Q : suggest_Q(doc.system);
      DecompositionGuards guards{decomposition_guard, scan_guard};
      auto d = decompose(doc.system, Q, decomposition_guard);
      report.result["Q"] = Q;
      report.result["M"] = d.M;
      report.result["group_count"] = d.groups.size();
      report.result["total_pairs"] = d.total_pairs();
      report.result["smooth_subsystem"] = classes_json(d.smooth_subsystem);
      json groups = json::array();
      Table table{{"h", "count", "classes"}, {}};
      for (const auto& g : d.groups) {
        groups.push_back({{"h", g.representative_h}, {"count", g.count}, {"classes", classes_json(g.system)}});
        std::string cls;
        for (const auto& c : g.system) cls += (cls.empty() ? "" : "; ") + std::to_string(c.residue()) + " mod " +
                                              std::to_string(c.modulus());
        table.rows.push_back({std::to_string(g.representative_h), std::to_string(g.count), cls});
      }
      report.result["groups"] = std::move(groups);
      report.table = std::move(table);
      if (decompose_check) {
        auto id = decomposition_identity(doc.system, Q, guards);
        report.result["identity"] = {{"lhs", rational(id.lhs)}, {"rhs", rational(id.rhs)}, {"equal", id.equal}};
      }
      if (decompose_floor) {
        auto a = averaged_alpha_floor(doc.system, Q, guards);
        report.result["alpha_floor"] = {{"avg_alpha", rational(a.avg_alpha)},
                                        {"smooth_density", rational(a.smooth_density)},
                                        {"approx_floor", a.floor},
                                        {"holds", a.holds}};
      }
      if (decompose_beta) {
        auto b = averaged_beta(doc.system, Q, decomposition_guard);
        report.result["avg_beta"] = {{"value", rational(b.value)},
                                     {"s", b.s},
                                     {"approx_K", b.K},
                                     {"approx_shape", b.approx_shape}};
      }
    } else if (active == minus) {
      auto T = parse_moduli(moduli_text);
      auto mode = minus_mode == "greedy" ? DeltaMinusMode::greedy : DeltaMinusMode::exhaustive;
      auto r = delta_minus(T, mode, moduli_guard);
      report.result = {{"mode", minus_mode},
                       {"value", rational(r.value)},
                       {"exact", mode == DeltaMinusMode::exhaustive},
                       {"witness", classes_json(r.witness)},
                       {"alpha", rational(r.alpha)},
                       {"reciprocal_sum", rational(r.reciprocal_sum)}};
    } else if (active == plus) {
      auto T = parse_moduli(moduli_text);
      report.result = {{"value", rational(delta_plus(T, moduli_guard))}, {"moduli", moduli_json(T)}};
    } else if (active == greedy) {
      GreedyOptions opt{greedy_seed, greedy_window};
      if (greedy_exact) {
        auto w = greedy_exact_window(greedy_N, greedy_K, std::numeric_limits<std::uint32_t>::max());
        if (!w) throw GuardExceeded("exact greedy window", "lcm(N+1..KN) > 2^32", "2^32");
        opt.window = *w;
      }
      auto trace = greedy_cover(greedy_N, greedy_K, opt);
      report.seed = greedy_seed;
      const double K = static_cast<double>(greedy_K), N = static_cast<double>(greedy_N);
      const double stronger = std::exp(-std::log(K) / (3 * N)) / K;
      const double achieved = to_double(trace.final_uncovered_fraction);
      report.result["window"] = trace.window;
      report.result["exact_period"] = trace.exact_period;
      report.result["final_uncovered_fraction"] = rational(trace.final_uncovered_fraction);
      report.result["approx_final_uncovered_fraction"] = achieved;
      report.result["meets_one_over_K"] = trace.final_uncovered_fraction * greedy_K <= 1;
      report.result["approx_stronger_bound"] = stronger;
      report.result["meets_stronger_bound"] = achieved <= stronger;
      report.result["invariant_holds"] = greedy_step_invariant(trace);
      report.result["system"] = classes_json(trace.final_system);
      Table table{{"j", "phase", "D", "f", "r", "uncovered_before", "uncovered_after"}, {}};
      json steps = json::array();
      for (const auto& s : trace.steps) {
        std::string D;
        for (auto d : s.D) D += (D.empty() ? "" : " ") + std::to_string(d);
        table.rows.push_back({std::to_string(s.j), std::string(to_string(s.phase)), D, std::to_string(s.f),
                              std::to_string(s.r), std::to_string(s.uncovered_before),
                              std::to_string(s.uncovered_after)});
        if (greedy_steps)
          steps.push_back({{"j", s.j},
                           {"phase", std::string(to_string(s.phase))},
                           {"D", s.D},
                           {"f", s.f},
                           {"r", s.r},
                           {"uncovered_before", s.uncovered_before},
                           {"uncovered_after", s.uncovered_after}});
      }
      if (greedy_steps) report.result["steps"] = std::move(steps);
      report.table = std::move(table);
    } else if (active == construct) {
      auto schedule = construct_schedule == "minimal" ? XSchedule::minimal : XSchedule::standard;
      auto plan = exact_cover_construct(construct_J, schedule, construct_guard);
      auto verdict = is_exact_cover(plan.system);
      bool above = true;
      for (const auto& c : plan.system)
        if (to_big(c.modulus()) <= plan.N_J) above = false;
      bool multiplicity = plan.system.max_multiplicity() <= plan.X[plan.J];
      report.result = {{"J", plan.J},
                       {"schedule", construct_schedule},
                       {"X", plan.X},
                       {"N_J", integer(plan.N_J)},
                       {"class_count", plan.system.size()},
                       {"distinct_moduli", plan.system.moduli().counts().size()},
                       {"max_multiplicity", plan.system.max_multiplicity()},
                       {"verified",
                        {{"exact_cover", verdict.exact},
                         {"moduli_exceed_N_J", above},
                         {"multiplicity_at_most_X_J", multiplicity}}},
                       {"system", json::parse(to_json({plan.system, "C_" + std::to_string(plan.J), "construct-exact"}))}};
    } else if (active == haight) {
      auto h = haight_moduli(haight_N, haight_full, haight_guard, haight_exact);
      report.result = {{"N", h.N},
                       {"approx_threshold", h.threshold},
                       {"primes", h.primes},
                       {"prime_count", h.primes.size()},
                       {"sigma_ratio", rational(h.sigma_ratio)},
                       {"approx_sigma_ratio", to_double(h.sigma_ratio)}};
      if (haight_full) {
        report.result["divisor_count"] = h.divisor_count;
        report.result["approx_alpha"] = static_cast<double>(h.alpha);
        report.result["approx_log_alpha"] = static_cast<double>(h.log_alpha);
        if (h.alpha_exact) report.result["alpha_exact_bits"] = bit_length(h.alpha_exact->get_den());
        report.result["beta"] = rational(*h.beta);
        report.result["beta_stage1"] = rational(*h.beta_stage1);
        report.result["beta_stage2"] = rational(*h.beta_stage2);
        report.result["approx_beta"] = to_double(*h.beta);
        report.result["approx_beta_stage1"] = to_double(*h.beta_stage1);
        report.result["approx_beta_stage2"] = to_double(*h.beta_stage2);
        report.result["alpha_exceeds_beta_chain"] =
            static_cast<double>(h.alpha) > to_double(*h.beta_stage2) && *h.beta <= *h.beta_stage1 &&
            *h.beta_stage1 <= *h.beta_stage2;
      }
    } else if (active == witness) {
      auto doc = load_system(witness_src, in);
      if (witness_B > 0) {
        auto w = extend_witness(doc.system, witness_B, witness_s);
        json b = json::object();
        for (auto [p, v] : w.b) b[std::to_string(p)] = v;
        report.result = {{"A", integer(w.A)},
                         {"a", w.a},
                         {"L", integer(w.L)},
                         {"approx_cutoff", w.cutoff},
                         {"smooth_classes", w.smooth_classes},
                         {"b", b},
                         {"verified", true}};
      } else {
        auto a = uncovered_witness(doc.system, scan_guard);
        report.result["covers"] = !a.has_value();
        report.result["A"] = a ? json(*a) : json(nullptr);
      }
    } else if (active == stats) {
      if (stats_mode == "scan") {
        auto family = parse_family(stats_family.empty() ? moduli_text : stats_family);
        auto scan = stats_guard ? variance_bound_scan(family, stats_guard, stats_guard) : variance_bound_scan(family);
        json rows = json::array();
        Table table{{"T", "method", "variance", "approx_scale", "approx_ratio"}, {}};
        for (const auto& row : scan.rows) {
          rows.push_back({{"T", moduli_json(row.T)},
                          {"method", std::string(to_string(row.method))},
                          {"variance", rational(row.variance)},
                          {"approx_scale", row.scale},
                          {"approx_ratio", row.ratio}});
          std::string T;
          for (auto n : row.T.expanded()) T += (T.empty() ? "" : " ") + std::to_string(n);
          table.rows.push_back({T, std::string(to_string(row.method)), to_string(row.variance),
                                json(row.scale).dump(), json(row.ratio).dump()});
        }
        report.result = {{"rows", rows}, {"approx_max_ratio", scan.max_ratio}};
        report.table = std::move(table);
      } else {
        if (moduli_text.empty()) throw InputError("--moduli is required");
        auto T = parse_moduli(moduli_text);
        report.result["W"] = integer(system_count(T));
        if (stats_mode == "expected") {
          report.result["mean"] = rational(expected_delta(T));
        } else {
          MomentReport m;
          if (stats_mode == "enumerate") m = stats_guard ? enumerate_moments(T, stats_guard) : enumerate_moments(T);
          else if (stats_mode == "pair") m = stats_guard ? pair_formula_moments(T, stats_guard) : pair_formula_moments(T);
          else {
            report.seed = stats_seed;
            m = sample_moments(T, stats_trials, stats_seed);
          }
          json moments = moments_json(m);
          for (auto& [k, v] : moments.items()) report.result[k] = v;
        }
      }
    } else if (active == verify) {
      auto doc = load_system(verify_src, in);
      auto v = is_exact_cover(doc.system);
      report.result = {{"exact", v.exact},
                       {"reciprocal_sum", rational(v.reciprocal_sum)},
                       {"deficit", rational(v.deficit)},
                       {"violation", v.violation}};
      report.result["overlapping_pair"] =
          v.overlapping_pair ? json{v.overlapping_pair->first, v.overlapping_pair->second} : json(nullptr);
    } else if (active == xineq) {
      unsigned lo = xineq_j, hi = xineq_j;
      if (xineq_j == 0) {
        if (xineq_from == 0 || xineq_to < xineq_from) throw InputError("pass --j, or --from and --to with from <= to");
        lo = xineq_from;
        hi = xineq_to;
      }
      json rows = json::array();
      Table table{{"j", "lhs", "rhs", "holds"}, {}};
      bool all = true;
      for (unsigned j = lo; j <= hi; ++j) {
        auto x = xineq_check(j);
        all = all && x.holds;
        rows.push_back({{"j", j}, {"lhs", x.lhs}, {"rhs", x.rhs}, {"holds", x.holds}});
        table.rows.push_back({std::to_string(j), std::to_string(x.lhs), std::to_string(x.rhs), x.holds ? "true" : "false"});
      }
      report.result = {{"rows", rows}, {"all_hold", all}};
      report.table = std::move(table);
    }
    record_inputs(active, report);
  } catch (const GuardExceeded& e) {
    err << "guard exceeded: " << e.guard() << " needs " << e.needed() << ", limit " << e.limit() << "\n";
    return guard_exceeded;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return input_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return input_error;
  }

  if (format == "csv") write_csv(report, out);
  else write_json(report, out);
  return ok;
}

}  // namespace covsys::cli
