// Command-line front end: parse colored-graph files, run the analyses and
// seeded verifications, and emit deterministic reports.
//
//   roadcolor analyze FILE [--machine]
//   roadcolor simulate FILE --steps N [--seed S] [--out PATH]
//   roadcolor verify FILE [--mode auto|strong|nonstrong] [--trials T] [--seed S] [--machine]
//   roadcolor find-coloring FILE
//
// Exit codes: 0 success, 1 usage, 2 input validation, 3 structural
// precondition, 4 insufficient data.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "roadcolor/roadcolor.hpp"

namespace rc = roadcolor;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rc::input_error("cannot open input file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string format_site_set(const std::set<int>& sites) {
  std::string out = "{";
  bool first = true;
  for (int x : sites) {
    if (!first) out += ",";
    out += std::to_string(x + 1);
    first = false;
  }
  return out + "}";
}

// Words are shown in application order: first listed color is applied first.
std::string format_word(const rc::Word& w) {
  std::string out;
  for (int c : w.colors_applied_order()) {
    if (!out.empty()) out += " ";
    out += std::to_string(c + 1);
  }
  return out;
}

json word_json(const rc::Word& w) {
  json arr = json::array();
  for (int c : w.colors_applied_order()) arr.push_back(c + 1);
  return arr;
}

json site_set_json(const std::set<int>& sites) {
  json arr = json::array();
  for (int x : sites) arr.push_back(x + 1);
  return arr;
}

json rational_list_json(const std::vector<rc::Rat>& values) {
  json arr = json::array();
  for (const auto& v : values) arr.push_back(rc::format_rational(v));
  return arr;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string sci3(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

struct LoadedInput {
  std::string path;
  std::string digest;
  rc::InputDocument doc;
};

LoadedInput load(const std::string& path) {
  const std::string text = read_file(path);
  char digest[32];
  std::snprintf(digest, sizeof digest, "%016llx",
                static_cast<unsigned long long>(rc::fnv1a64(text)));
  return {path, digest, rc::parse_input(text)};
}

std::vector<rc::Rat> weights_or_uniform(const rc::InputDocument& doc) {
  if (doc.probabilities) return *doc.probabilities;
  const int d = doc.coloring->color_count();
  return std::vector<rc::Rat>(d, rc::Rat(1, d));
}

void print_provenance(const LoadedInput& in) {
  std::cout << "input: " << in.path << " (fnv1a64 " << in.digest << ")\n";
  std::cout << "tool: roadcolor " << rc::version << "\n";
}

json provenance_json(const LoadedInput& in) {
  return {{"input", in.path}, {"digest", in.digest}, {"version", rc::version}};
}

// ---------------------------------------------------------------- analyze

int cmd_analyze(const LoadedInput& in, bool machine) {
  if (!in.doc.coloring)
    throw rc::input_error("analyze needs a colored input (color lines, not a matrix)");
  const rc::RoadColoring& coloring = *in.doc.coloring;
  const auto weights = weights_or_uniform(in.doc);
  const rc::GraphProperties props = rc::analyze_graph(coloring.graph());
  const rc::SyncReport sync = rc::analyze_sync(coloring);

  json out;
  out["provenance"] = provenance_json(in);
  out["sites"] = coloring.site_count();
  out["colors"] = coloring.color_count();
  out["weights"] = rational_list_json(weights);
  out["weights_defaulted"] = !in.doc.probabilities.has_value();
  out["outdegree"] = props.outdegree ? json(*props.outdegree) : json();
  out["strongly_connected"] = props.strongly_connected;
  out["period"] = props.period ? json(*props.period) : json();
  out["positivity_exponent"] =
      props.positivity_exponent ? json(*props.positivity_exponent) : json();
  out["synchronizing"] = sync.synchronizing;
  out["min_rank"] = sync.min_rank;
  out["witness_word"] = word_json(sync.witness_word);
  if (sync.shortest_word) out["shortest_word"] = word_json(*sync.shortest_word);
  out["f_cliques"] = json::array();
  for (const auto& clique : sync.clique_list) out["f_cliques"].push_back(site_set_json(clique));
  json anchors = json::array();
  for (int a : sync.partition.anchors) anchors.push_back(a + 1);
  out["anchors"] = anchors;
  out["partition"] = json::array();
  for (const auto& block : sync.partition.blocks) out["partition"].push_back(site_set_json(block));

  if (!machine) {
    print_provenance(in);
    std::cout << "sites: " << coloring.site_count() << "   colors: " << coloring.color_count()
              << "\n";
    std::cout << "weights:";
    for (const auto& w : weights) std::cout << " " << rc::format_rational(w);
    std::cout << (in.doc.probabilities ? "" : "   (default uniform)") << "\n";
    std::cout << "outdegree: " << (props.outdegree ? std::to_string(*props.outdegree) : "non-constant")
              << "\n";
    std::cout << "strongly connected: " << (props.strongly_connected ? "yes" : "no") << "\n";
    if (props.period) std::cout << "period: " << *props.period << "\n";
    if (props.positivity_exponent)
      std::cout << "positivity exponent: " << *props.positivity_exponent << "\n";
    std::cout << "synchronizing: " << (sync.synchronizing ? "yes" : "no") << "\n";
    std::cout << "minimal image rank: " << sync.min_rank << "\n";
    if (sync.shortest_word) {
      std::cout << "shortest reset word: " << format_word(*sync.shortest_word)
                << "   (colors applied left to right)\n";
      std::cout << "reset target: "
                << (*sync.shortest_word->composition().constant_target() + 1) << "\n";
    } else {
      std::cout << "rank witness word: " << format_word(sync.witness_word)
                << "   (colors applied left to right)\n";
    }
    std::cout << "F-cliques:";
    for (const auto& clique : sync.clique_list) std::cout << " " << format_site_set(clique);
    std::cout << "\n";
    std::cout << "partition:";
    for (std::size_t i = 0; i < sync.partition.blocks.size(); ++i)
      std::cout << " " << (sync.partition.anchors[i] + 1) << ":"
                << format_site_set(sync.partition.blocks[i]);
    std::cout << "\n";
  }

  if (!props.strongly_connected) {
    out["note"] = "stationary analysis needs strong connectivity";
    if (!machine) std::cout << "note: stationary analysis needs strong connectivity\n";
  } else if (props.aperiodic) {
    const rc::SiteLaw lambda = rc::stationary_law(coloring, weights);
    out["stationary_law"] = rational_list_json(lambda.weights);
    const auto uniformity = rc::check_uniformity(lambda, sync.partition.blocks);
    out["uniformity"] = {{"uniform", uniformity.uniform},
                         {"block_masses", rational_list_json(uniformity.block_masses)}};
    if (!machine) {
      std::cout << "stationary law:";
      for (const auto& w : lambda.weights) std::cout << " " << rc::format_rational(w);
      std::cout << "\n";
      std::cout << "uniformity over partition: " << (uniformity.uniform ? "exact" : "no")
                << "   masses:";
      for (const auto& m : uniformity.block_masses) std::cout << " " << rc::format_rational(m);
      std::cout << "\n";
    }
  } else {
    const rc::MappingLaw mu = rc::law_from_coloring(coloring, weights);
    const rc::CyclicDecomposition dec = rc::cyclic_parts(coloring.graph(), mu);
    const auto verdicts = rc::periodic_strongness(coloring.graph(), mu);
    out["cyclic"] = json::object();
    out["cyclic"]["period"] = dec.period;
    out["cyclic"]["parts"] = json::array();
    for (const auto& part : dec.parts) {
      json arr = json::array();
      for (int x : part) arr.push_back(x + 1);
      out["cyclic"]["parts"].push_back(arr);
    }
    out["cyclic"]["part_laws"] = json::array();
    for (const auto& law : dec.part_laws)
      out["cyclic"]["part_laws"].push_back(rational_list_json(law.weights));
    out["cyclic"]["part_strong"] = json::array();
    for (const auto& v : verdicts) out["cyclic"]["part_strong"].push_back(v.strong);
    if (!machine) {
      std::cout << "cyclic decomposition: period " << dec.period << "\n";
      for (int i = 0; i < dec.period; ++i) {
        std::cout << "  part " << (i + 1) << ": {";
        for (std::size_t j = 0; j < dec.parts[i].size(); ++j)
          std::cout << (j ? "," : "") << (dec.parts[i][j] + 1);
        std::cout << "}   d-step law:";
        for (const auto& w : dec.part_laws[i].weights) std::cout << " " << rc::format_rational(w);
        std::cout << "   strong: " << (verdicts[i].strong ? "yes" : "no") << "\n";
      }
    }
  }

  if (machine) std::cout << out.dump(2) << "\n";
  return 0;
}

// --------------------------------------------------------------- simulate

int cmd_simulate(const LoadedInput& in, std::int64_t steps, std::uint64_t seed,
                 const std::string& out_path) {
  if (!in.doc.coloring)
    throw rc::input_error("simulate needs a colored input (color lines, not a matrix)");
  const auto weights = weights_or_uniform(in.doc);
  const rc::WalkTrace trace = rc::simulate_walk(*in.doc.coloring, weights, steps, seed);
  if (out_path.empty()) {
    rc::write_trace(std::cout, trace);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw rc::input_error("cannot open output file '" + out_path + "'");
    rc::write_trace(out, trace);
  }
  return 0;
}

// ----------------------------------------------------------------- verify

int cmd_verify(const LoadedInput& in, const std::string& mode, std::int64_t trials,
               std::uint64_t seed, bool machine) {
  if (!in.doc.coloring)
    throw rc::input_error("verify needs a colored input (color lines, not a matrix)");
  const rc::RoadColoring& coloring = *in.doc.coloring;
  const auto weights = weights_or_uniform(in.doc);
  const rc::GraphProperties props = rc::analyze_graph(coloring.graph());
  if (!rc::is_primitive(props))
    throw rc::structure_error(
        "verify needs a constant-outdegree, strongly connected, aperiodic graph");
  const rc::SyncReport sync = rc::analyze_sync(coloring);

  // The toolkit's equivalence: (i) the coloring is synchronizing, (ii) the
  // backward color compositions converge, (iii) the walk is reconstructable
  // from its colors. Mode refusal names the clause that settles the case.
  if (mode == "strong" && !sync.synchronizing)
    throw rc::structure_error(
        "refused: coloring is non-synchronizing, clause (i) fails, so the walk is not strong; "
        "use --mode nonstrong");
  if (mode == "nonstrong" && sync.synchronizing)
    throw rc::structure_error(
        "refused: coloring is synchronizing, clause (i) holds, so the walk is strong; "
        "use --mode strong");
  const bool strong_path = sync.synchronizing;

  json out;
  out["provenance"] = provenance_json(in);
  out["mode"] = strong_path ? "strong" : "nonstrong";
  out["clause"] = strong_path ? "(i) holds -> (iii): reconstruction check"
                              : "(i) fails -> non-strong: uniformity and independence evidence";
  out["seed"] = seed;

  if (!machine) {
    print_provenance(in);
    std::cout << "mode: " << (strong_path ? "strong" : "nonstrong") << "   clause: "
              << (strong_path ? "(i) holds -> (iii)" : "(i) fails -> non-strong") << "\n";
  }

  if (strong_path) {
    const std::int64_t steps = trials;
    const rc::WalkTrace trace = rc::simulate_walk(coloring, weights, steps, seed);
    const rc::StrongVerification v = rc::verify_strong(trace, coloring, *sync.shortest_word);
    const bool pass = v.agreements == v.reconstructable && v.coverage() >= 0.999;
    out["reset_word"] = word_json(*sync.shortest_word);
    out["steps"] = v.steps;
    out["reconstructable"] = v.reconstructable;
    out["agreements"] = v.agreements;
    out["coverage"] = v.coverage();
    out["pass"] = pass;
    if (!machine) {
      std::cout << "reset word: " << format_word(*sync.shortest_word)
                << "   (colors applied left to right)\n";
      std::cout << "steps: " << v.steps << "\n";
      std::cout << "reconstructable: " << v.reconstructable << " (" << fixed6(v.coverage())
                << ")\n";
      std::cout << "agreement: " << v.agreements << "/" << v.reconstructable << " ("
                << fixed6(v.agreement_rate()) << ")\n";
      std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    }
    if (machine) std::cout << out.dump(2) << "\n";
    return pass ? 0 : 4;
  }

  const rc::Word padded =
      rc::pad_word(sync.witness_word, coloring, *props.positivity_exponent);
  // Window sized so a trial misses every occurrence with probability ~e^-6.
  double occurrence_prob = 1.0;
  for (const auto& letter : padded.applied_order()) {
    double mass = 0.0;
    for (int c = 0; c < coloring.color_count(); ++c)
      if (coloring.color(c) == letter) mass += rc::rat_to_double(weights[c]);
    occurrence_prob *= mass;
  }
  const std::int64_t window =
      std::max<std::int64_t>(16 * padded.length(),
                             static_cast<std::int64_t>(std::ceil(6.0 / occurrence_prob)));

  const rc::NonstrongEvidence ev =
      rc::nonstrong_evidence(coloring, weights, padded, trials, window, seed);
  const rc::EmpiricalLaw mu_hat =
      rc::estimate_induced_law(coloring, weights, padded, trials, seed + 1);
  const rc::LawConvergence conv = rc::induced_law_convergence(mu_hat, 64, 1e-3 + 2e-2);
  const bool pass = ev.uniform_pass && ev.independent_pass && conv.converged;

  out["padded_word"] = word_json(padded);
  out["window"] = ev.window;
  out["trials_used"] = ev.trials_used;
  out["trials_dropped"] = ev.trials_dropped;
  out["block_counts"] = ev.block_counts;
  out["uniformity"] = {{"chi2", ev.uniformity.statistic},
                       {"dof", ev.uniformity.dof},
                       {"p_value", ev.uniformity.p_value},
                       {"pass", ev.uniform_pass}};
  out["independence"] = {{"chi2", ev.independence.statistic},
                         {"dof", ev.independence.dof},
                         {"p_value", ev.independence.p_value},
                         {"pass", ev.independent_pass}};
  out["induced_law_trials"] = mu_hat.total;
  out["induced_law_convergence"] = {{"power", conv.power},
                                    {"max_deviation", conv.max_deviation},
                                    {"pass", conv.converged}};
  out["pass"] = pass;

  if (!machine) {
    std::cout << "padded word: " << format_word(padded) << "   (colors applied left to right)\n";
    std::cout << "trials: " << ev.trials_used << " used, " << ev.trials_dropped
              << " dropped (window " << ev.window << ")\n";
    std::cout << "block counts:";
    for (auto c : ev.block_counts) std::cout << " " << c;
    std::cout << "\n";
    std::cout << "uniformity: chi2=" << fixed6(ev.uniformity.statistic)
              << " dof=" << ev.uniformity.dof << " p=" << sci3(ev.uniformity.p_value) << " -> "
              << (ev.uniform_pass ? "pass" : "fail") << "\n";
    std::cout << "independence: chi2=" << fixed6(ev.independence.statistic)
              << " dof=" << ev.independence.dof << " p=" << sci3(ev.independence.p_value)
              << " -> " << (ev.independent_pass ? "pass" : "fail") << "\n";
    std::cout << "induced-law convergence (n=" << conv.power
              << "): max deviation=" << sci3(conv.max_deviation) << " -> "
              << (conv.converged ? "pass" : "fail") << "\n";
    std::cout << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
  }
  if (machine) std::cout << out.dump(2) << "\n";
  return pass ? 0 : 4;
}

// ---------------------------------------------------------- find-coloring

int cmd_find_coloring(const LoadedInput& in) {
  const rc::DirectedGraph& graph = in.doc.graph;
  print_provenance(in);
  const auto coloring = rc::find_synchronizing_coloring(graph);
  if (!coloring) {
    const rc::GraphProperties props = rc::analyze_graph(graph);
    std::cout << "none found";
    if (props.period && *props.period > 1)
      std::cout << " (graph period " << *props.period << ", no coloring can synchronize)";
    else if (!props.strongly_connected)
      std::cout << " (graph is not strongly connected)";
    std::cout << "\n";
    return 0;
  }
  std::cout << "synchronizing coloring found; input-file syntax:\n";
  rc::InputDocument doc{coloring->graph(), *coloring, std::nullopt};
  std::cout << rc::print_input(doc);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"road-coloring analysis toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("roadcolor ") + rc::version);

  std::string file;
  bool machine = false;
  std::int64_t steps = 0;
  std::int64_t trials = 100000;
  std::uint64_t seed = 1;
  std::string mode = "auto";
  std::string out_path;

  auto* analyze = app.add_subcommand("analyze", "graph, synchronization and stationary report");
  analyze->add_option("FILE", file)->required();
  analyze->add_flag("--machine", machine, "machine-readable JSON output");

  auto* simulate = app.add_subcommand("simulate", "seeded walk simulation, trace export");
  simulate->add_option("FILE", file)->required();
  simulate->add_option("--steps", steps, "number of steps")->required()->check(CLI::PositiveNumber);
  simulate->add_option("--seed", seed, "seed (default 1)");
  simulate->add_option("--out", out_path, "trace file (default stdout)");

  auto* verify = app.add_subcommand("verify", "reconstruction / non-strongness evidence");
  verify->add_option("FILE", file)->required();
  verify->add_option("--mode", mode, "auto|strong|nonstrong (default auto)")
      ->check(CLI::IsMember({"auto", "strong", "nonstrong"}));
  verify->add_option("--trials", trials, "trials (nonstrong) or steps (strong), default 100000")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "seed (default 1)");
  verify->add_flag("--machine", machine, "machine-readable JSON output");

  auto* find = app.add_subcommand("find-coloring", "search for a synchronizing coloring");
  find->add_option("FILE", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    const LoadedInput in = load(file);
    if (analyze->parsed()) return cmd_analyze(in, machine);
    if (simulate->parsed()) return cmd_simulate(in, steps, seed, out_path);
    if (verify->parsed()) return cmd_verify(in, mode, trials, seed, machine);
    if (find->parsed()) return cmd_find_coloring(in);
    return 1;
  } catch (const rc::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const rc::structure_error& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return 3;
  } catch (const rc::unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const rc::insufficient_data_error& e) {
    std::cerr << "insufficient data: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 70;
  }
}
