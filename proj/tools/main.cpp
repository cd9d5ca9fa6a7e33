// cubica: command-line front end.
//
// Exit codes: 0 success, 1 usage or parse error, 2 resource budget
// exceeded, 3 a property check failed.

#include "cubica/errors.hpp"
#include "cubica/fraisse_builder.hpp"
#include "cubica/io.hpp"
#include "cubica/isocubic_groups.hpp"
#include "cubica/representation_lab.hpp"
#include "cubica/sampling.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace cubica;

namespace {

enum Exit { ok = 0, usage = 1, budget = 2, property = 3 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string command;
  int p = 2;
  std::size_t dim = 2;
  std::size_t depth = 1;
  std::size_t k = 0;
  std::uint64_t trials = 40'000;
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  std::uint64_t budget = 0;  // 0: command default
  std::string instance;
  std::string out;
  std::string format;
  int verbosity = 0;

  Json to_json() const {
    Json j{{"command", command}, {"p", p}, {"seed", seed}, {"budget", budget}, {"out", out},
           {"format", format},   {"verbosity", verbosity}};
    if (command == "classify" || command == "train-check") j["dim"] = dim;
    if (command == "fraisse") j["depth"] = depth;
    if (command == "extension-stats") {
      j["k"] = k;
      j["trials"] = trials;
    }
    if (command == "fraisse" || command == "train-check" || command == "rep-check") j["samples"] = samples;
    if (command == "rep-check") j["instance"] = instance;
    return j;
  }
};

void validate(RunConfig& c) {
  if (!Field::is_prime(c.p)) throw UsageError("--p must be prime, got " + std::to_string(c.p));
  const std::string default_format = c.command == "classify" ? "csv" : "json";
  if (c.format.empty()) c.format = default_format;
  if (c.format != "json" && c.format != "csv") throw UsageError("--format must be json or csv");
  if (c.format == "csv" && c.command != "classify") throw UsageError("--format csv is only available for classify");
  if (c.command == "extension-stats" && c.trials == 0) throw UsageError("--trials must be at least 1");
  if (c.command == "train-check" && c.dim > 4) throw UsageError("--dim for train-check is at most 4");
  if (c.budget == 0) c.budget = c.command == "classify" ? (std::uint64_t{1} << 30) : kDefaultGrowthBudget;
}

void emit(const RunConfig& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw UsageError("cannot open --out file " + c.out);
  f << text;
}

void emit(const RunConfig& c, const Json& j) { emit(c, j.dump(2) + "\n"); }

void note(const RunConfig& c, const std::string& msg) {
  if (c.verbosity > 0) std::cerr << "[cubica] " << msg << '\n';
}

// ---------------------------------------------------------------- commands

int cmd_classify(const RunConfig& c) {
  EnumerationCaps caps;
  caps.form_budget = c.budget;
  const OrbitTable t = classify_forms(c.dim, Field(c.p), caps);
  if (c.format == "csv") {
    emit(c, orbit_table_csv(t));
  } else {
    Json j = to_json(t);
    j["config"] = c.to_json();
    emit(c, j);
  }
  return t.consistent() ? ok : property;
}

int cmd_extension_stats(const RunConfig& c) {
  const ExtensionStats s = extension_statistics(Field(c.p), c.k, c.trials, c.seed);
  Json j{{"config", c.to_json()}};
  j.update(to_json(s));
  emit(c, j);
  return s.within() ? ok : property;
}

int cmd_fraisse(const RunConfig& c) {
  const Field f(c.p);
  note(c, "building a " + std::to_string(c.depth) + "-universal ambient");
  const AmbientSpace amb = build_d_universal(c.depth, f, c.seed, c.budget);
  const AuditReport exhaustive = audit_extension_property_exhaustive(amb.space(), c.depth);
  // independent route: sampled demands solved by search
  const AuditReport sampled = audit_extension_property(amb.space(), c.depth, c.samples, c.seed);
  Json j{{"config", c.to_json()},
         {"ambient", ambient_snapshot(amb)},
         {"audit_exhaustive", to_json(exhaustive)},
         {"audit_sampled", to_json(sampled)}};
  emit(c, j);
  return exhaustive.passed() && sampled.passed() ? ok : property;
}

int cmd_train_check(const RunConfig& c) {
  const CategoryCheckReport r = check_category_axioms(Field(c.p), c.dim, c.samples, c.seed);
  auto tallies = [](const std::vector<LawTally>& v) {
    Json a = Json::array();
    for (const auto& t : v) a.push_back(Json{{"law", t.law}, {"checked", t.checked}, {"failures", t.failures}});
    return a;
  };
  Json j{{"config", c.to_json()},
         {"finite_sets", tallies(r.sets)},
         {"cubic_spaces", tallies(r.cubic)},
         {"nontrivial_compositions", r.nontrivial_compositions},
         {"passed", r.passed()}};
  if (c.samples == 0) {
    j["warning"] = "samples = 0: vacuous pass";
    std::cerr << "warning: --samples 0 checks nothing\n";
  }
  emit(c, j);
  return r.passed() ? ok : property;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read instance file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
}

SigmaRep sigma_from_name(const std::string& name, const GroupElements& gamma) {
  if (name == "trivial") return SigmaRep::trivial(gamma);
  if (name == "regular") return SigmaRep::regular(gamma);
  if (name == "on_vectors") return SigmaRep::on_vectors(gamma);
  throw InvalidInput("unknown sigma '" + name + "' (trivial, regular, on_vectors)");
}

int cmd_rep_check(const RunConfig& c) {
  const Json in = read_json_file(c.instance);
  if (!in.is_object() || !in.contains("ambient") || !in.contains("anchor"))
    throw InvalidInput("instance needs \"ambient\" and \"anchor\"");
  const CubicSpace x = cubic_space_from_json(in.at("ambient"));
  const Field f = x.field();
  const std::size_t n = x.dim();
  if (n > 6) throw InvalidInput("rep-check ambients are limited to dimension 6");
  const Subspace anchor = subspace_from_json(f, n, in.at("anchor"));
  const GroupElements gamma = realizable_gamma(x, anchor);
  const SigmaRep sigma = sigma_from_name(in.value("sigma", std::string("regular")), gamma);
  note(c, "enumerating E(A)");
  const InducedRep rep(x, anchor, sigma, EnumerationCaps::ambient(n));
  const AmbientSpace amb(x, ambient_mode_from_string(in.value("mode", std::string("forced"))), c.seed);
  RealizationOptions opt;
  opt.growth.growth_budget = c.budget;

  bool passed = true;
  Json mult = Json::array();
  std::vector<Matrix> pool{Matrix::identity(f, n)};
  std::vector<Subspace> subspaces{anchor};
  if (in.contains("instances")) {
    if (!in.at("instances").is_array()) throw InvalidInput("\"instances\" must be an array");
    for (const auto& inst : in.at("instances")) {
      const Matrix p = matrix_from_json(f, inst.at("p"), n, n);
      const Matrix q = matrix_from_json(f, inst.at("q"), n, n);
      const Subspace b = subspace_from_json(f, n, inst.at("B"));
      const Subspace cc = subspace_from_json(f, n, inst.at("C"));
      const Subspace d = subspace_from_json(f, n, inst.at("D"));
      const auto r = check_multiplicativity(rep, p, q, b, cc, d, amb, opt);
      if (r.r_found && !(r.displaced_identity && r.morphism_check)) passed = false;
      mult.push_back(to_json(r));
      pool.push_back(p);
      pool.push_back(q);
      for (const auto* s : {&b, &cc, &d}) subspaces.push_back(*s);
    }
  }
  const EndAutReport ea = check_end_aut_vanishing(rep);
  passed = passed && ea.passed();
  const GnsReport gns = gns_consistency(rep, pool, subspaces, c.samples, c.seed, amb, opt);
  passed = passed && gns.ok();

  Json j{{"config", c.to_json()},
         {"ambient", to_json(x)},
         {"anchor_dim", anchor.dim()},
         {"gamma_order", gamma.size()},
         {"sigma_dim", sigma.dim()},
         {"orbits", rep.orbit_representatives().size()},
         {"multiplicativity", std::move(mult)},
         {"end_aut", to_json(ea)},
         {"gns", to_json(gns)},
         {"passed", passed}};
  emit(c, j);
  return passed ? ok : property;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cubic spaces over finite fields: orbit tables, extension statistics, universal ambients, "
               "partial-isomorphism categories and induced representations."};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--p", cfg.p, "field characteristic (prime)")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--budget", cfg.budget,
                    "resource budget: form count for classify, appended coordinates otherwise");
    sub->add_option("--out", cfg.out, "output file (default stdout)");
    sub->add_option("--format", cfg.format, "json or csv (csv only for classify)");
    sub->add_flag("-v,--verbose", cfg.verbosity, "progress on stderr");
  };

  auto* classify = app.add_subcommand("classify", "GL-orbits of cubic forms on F_p^dim");
  common(classify);
  classify->add_option("--dim", cfg.dim, "dimension")->capture_default_str();

  auto* stats = app.add_subcommand("extension-stats", "Monte Carlo single-candidate extension probability");
  common(stats);
  stats->add_option("--k", cfg.k, "dimension of v")->capture_default_str();
  stats->add_option("--trials", cfg.trials, "number of trials")->capture_default_str();

  auto* fraisse = app.add_subcommand("fraisse", "build and audit a d-universal ambient");
  common(fraisse);
  fraisse->add_option("--depth", cfg.depth, "d: demands with dim v < d")->capture_default_str();
  fraisse->add_option("--samples", cfg.samples, "sampled audit demands")->capture_default_str();

  auto* train = app.add_subcommand("train-check", "category axioms on random composable triples");
  common(train);
  train->add_option("--dim", cfg.dim, "largest object dimension")->capture_default_str();
  train->add_option("--samples", cfg.samples, "triples per instance")->capture_default_str();

  auto* repc = app.add_subcommand("rep-check", "multiplicativity, End/Aut vanishing and GNS consistency");
  common(repc);
  repc->add_option("instance", cfg.instance, "instance JSON file")->required();
  repc->add_option("--samples", cfg.samples, "GNS samples")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return usage;
  }

  try {
    cfg.command = app.get_subcommands().front()->get_name();
    validate(cfg);
    if (cfg.command == "classify") return cmd_classify(cfg);
    if (cfg.command == "extension-stats") return cmd_extension_stats(cfg);
    if (cfg.command == "fraisse") return cmd_fraisse(cfg);
    if (cfg.command == "train-check") return cmd_train_check(cfg);
    return cmd_rep_check(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const CapExceeded& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return budget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return usage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed instance: " << e.what() << '\n';
    return usage;
  }
}
