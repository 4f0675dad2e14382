// mubforge command-line driver.
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mubforge/bases.hpp"
#include "mubforge/error.hpp"
#include "mubforge/experiments.hpp"
#include "mubforge/games.hpp"
#include "mubforge/hierarchy.hpp"
#include "mubforge/parallel.hpp"
#include "mubforge/seesaw.hpp"

using nlohmann::json;
using namespace mubforge;

namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string out;
  std::string format = "json";
  double tol = 0.0;  // 0: module default
  unsigned threads = 0;

  unsigned thread_count() const { return threads > 0 ? threads : default_thread_count(); }
  double tol_or(double fallback) const { return tol > 0.0 ? tol : fallback; }
};

// Result of one command: a JSON payload, optionally a CSV rendering, and the
// exit code it asks for.
struct Output {
  json result;
  std::string csv;
  int code = 0;
};

void emit(const Global& g, const std::string& command, const json& config, const Output& o,
          double wall_time) {
  std::ostringstream text;
  if (g.format == "csv") {
    if (o.csv.empty()) throw ContractError("command '" + command + "' has no CSV output");
    text << "# command=" << command << '\n';
    for (const auto& [k, v] : config.items()) text << "# " << k << '=' << v.dump() << '\n';
    text << o.csv;
    std::cerr << "wall_time=" << wall_time << '\n';
  } else {
    json doc{{"command", command}, {"config", config}, {"result", o.result}, {"wall_time", wall_time}};
    text << doc.dump(2) << '\n';
  }
  if (g.out.empty()) {
    std::cout << text.str();
  } else {
    std::ofstream f(g.out);
    if (!f) throw ValidationError("cannot open " + g.out + " for writing");
    f << text.str();
  }
}

json pair_table(const BasisSet& set) {
  json rows = json::array();
  for (int a = 0; a < set.size(); ++a)
    for (int b = a + 1; b < set.size(); ++b) {
      const BasisSet pair = set.subset({a, b});
      rows.push_back({{"a", a},
                      {"b", b},
                      {"distance_sq", distance_sq(set[a], set[b])},
                      {"pbar", pbar(pair)},
                      {"qbar", qbar(pair)}});
    }
  return rows;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mubforge: mutually unbiased bases, QRAC games and their bounds"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--out", g.out, "Write output to this file instead of stdout");
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol, "Solver tolerance override")->check(CLI::PositiveNumber);
  app.add_option("--threads", g.threads, "Worker threads (default: MUBFORGE_THREADS or all cores)");
  app.fallthrough();

  int d = 0, n = 0, m = 0, k = 1, seeds = 20, rounds = 500, count = 10000, stall_k = 10;
  int bins = 50;
  double bin_width = 1e-6;
  std::string bases_path, level_text = "Q1", dump_path, grid_path;

  auto* mubs = app.add_subcommand("mubs", "Write the complete MUB family for prime-power d");
  mubs->add_option("--d", d, "Dimension")->required();

  auto* measure = app.add_subcommand("measure", "Distance and QRAC measures of a basis-set file");
  measure->add_option("--bases", bases_path, "Basis-set file")->required();

  auto* qrac = app.add_subcommand("qrac", "Optimal (n,m)^d QRAC value for a basis-set file");
  qrac->add_option("--bases", bases_path, "Basis-set file")->required();
  qrac->add_option("--m", m, "Promise size (default n, the plain QRAC)");

  auto* anomaly = app.add_subcommand("anomaly", "QRAC values of all n-subsets of the MUB family");
  anomaly->add_option("--d", d, "Dimension")->required();
  anomaly->add_option("--n", n, "Subset size")->required();
  anomaly->add_option("--bin", bin_width, "Bin width")->capture_default_str();

  auto* seesaw = app.add_subcommand("seesaw", "See-saw optimization of the (n,2)^d pQRAC");
  seesaw->add_option("--n", n, "Number of bases")->required();
  seesaw->add_option("--d", d, "Dimension")->required();
  seesaw->add_option("--seeds", seeds, "Number of random starts (seed, seed+1, ...)")->capture_default_str();
  seesaw->add_option("--rounds", rounds, "Round cap per start")->capture_default_str();

  auto* bound = app.add_subcommand("bound", "Symmetry-reduced hierarchy upper bound");
  bound->add_option("--n", n, "Number of bases")->required();
  bound->add_option("--d", d, "Dimension")->required();
  bound->add_option("--level", level_text, "Q1 or Q1succ")->capture_default_str();
  bound->add_option("--stall-k", stall_k, "Span discovery stall count")->capture_default_str();
  bound->add_option("--dump", dump_path, "Write the LMI in text form to this file");

  auto* mc = app.add_subcommand("mc", "Monte Carlo of pbar against dbar_sq");
  mc->add_option("--n", n, "Number of bases")->required();
  mc->add_option("--d", d, "Dimension")->required();
  mc->add_option("--count", count, "Samples")->capture_default_str();
  mc->add_option("--bins", bins, "Density grid bins per axis")->capture_default_str();
  mc->add_option("--grid", grid_path, "Write the density grid CSV to this file");

  auto* plan = app.add_subcommand("plan", "Memory estimate of hierarchy level k");
  plan->add_option("--n", n, "Number of bases")->required();
  plan->add_option("--d", d, "Dimension")->required();
  plan->add_option("--k", k, "Hierarchy level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  json config{{"seed", g.seed}, {"format", g.format}};
  if (g.tol > 0.0) config["tol"] = g.tol;
  const auto start = std::chrono::steady_clock::now();
  try {
    Output o;
    if (command == "mubs") {
      config["d"] = d;
      const BasisSet set = mub_family(d);
      o.result = basis_set_to_json(set);
      if (!g.out.empty() && g.format == "json") {
        // The bare basis-set document, readable by --bases.
        save_basis_set(set, g.out);
        std::cerr << "wrote " << set.size() << " bases to " << g.out << '\n';
        return 0;
      }
    } else if (command == "measure") {
      config["bases"] = bases_path;
      const BasisSet set = load_basis_set(bases_path);
      o.result = {{"d", set.dim()}, {"n", set.size()}, {"pairs", pair_table(set)}};
      if (set.size() >= 2 && set.dim() >= 2) {
        o.result["dbar_sq"] = avg_distance_sq(set);
        o.result["pbar"] = pbar(set);
        o.result["qbar"] = qbar(set);
      }
      std::ostringstream csv;
      csv.precision(17);
      csv << "a,b,distance_sq,pbar,qbar\n";
      for (const auto& r : o.result["pairs"])
        csv << r["a"] << ',' << r["b"] << ',' << r["distance_sq"].get<double>() << ','
            << r["pbar"].get<double>() << ',' << r["qbar"].get<double>() << '\n';
      o.csv = csv.str();
    } else if (command == "qrac") {
      const BasisSet set = load_basis_set(bases_path);
      const int mm = m == 0 ? set.size() : m;
      config["bases"] = bases_path;
      config["m"] = mm;
      const GameValueReport r = mm == set.size() ? qrac_value(set) : pqrac_value(set, mm);
      o.result = {{"n", set.size()}, {"m", mm}, {"d", set.dim()}, {"value", r.value},
                  {"inputs", r.per_input_success.size()}};
      std::ostringstream csv;
      csv.precision(17);
      csv << "input,success\n";
      for (std::size_t i = 0; i < r.per_input_success.size(); ++i)
        csv << input_label(set.size(), mm, set.dim(), i) << ',' << r.per_input_success[i] << '\n';
      o.csv = csv.str();
    } else if (command == "anomaly") {
      config["d"] = d;
      config["n"] = n;
      config["bin"] = bin_width;
      const AnomalyScan scan = anomaly_scan(d, n, bin_width);
      json binsj = json::array();
      std::ostringstream csv;
      csv.precision(10);
      csv << "value,count\n";
      for (const auto& [key, c] : scan.bins) {
        binsj.push_back({{"value", scan.bin_value(key)}, {"count", c}});
        csv << scan.bin_value(key) << ',' << c << '\n';
      }
      json subsets = json::array();
      for (const auto& e : scan.subsets) subsets.push_back({{"subset", e.subset}, {"value", e.value}});
      o.result = {{"d", d}, {"n", n}, {"bins", binsj}, {"subsets", subsets},
                  {"anomaly", scan.bins.size() > 1}};
      o.csv = csv.str();
    } else if (command == "seesaw") {
      SeesawConfig cfg;
      cfg.n = n;
      cfg.d = d;
      cfg.max_rounds = rounds;
      cfg.threads = g.thread_count();
      cfg.sdp_tol = g.tol_or(kSdpTol);
      if (seeds < 1) throw ContractError("--seeds must be positive");
      cfg.seeds.clear();
      for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(g.seed + static_cast<std::uint64_t>(s));
      config.update({{"n", n}, {"d", d}, {"seeds", seeds}, {"rounds", rounds},
                     {"improvement_eps", cfg.improvement_eps}, {"rounding", "loewdin"},
                     {"sdp_tol", cfg.sdp_tol}});
      const SeesawReport r = run(cfg);
      o.result = seesaw_report_to_json(r);
      o.csv = trajectory_csv(r);
    } else if (command == "bound") {
      const Level level = parse_level(level_text);
      BoundOptions opts;
      opts.span.seed = g.seed;
      opts.span.stall_k = stall_k;
      opts.span.threads = g.thread_count();
      opts.tol = g.tol_or(kSdpTol);
      config.update({{"n", n}, {"d", d}, {"level", to_string(level)}, {"stall_k", stall_k},
                     {"span_tol", opts.span.tol}, {"sdp_tol", opts.tol},
                     {"max_iter", opts.max_iter}});
      if (!dump_path.empty()) {
        const WordSpace space(n, d, level);
        const HierarchyLmi lmi = build_hierarchy_lmi(space, discover_span(space, opts.span));
        std::ofstream f(dump_path);
        if (!f) throw ValidationError("cannot open " + dump_path + " for writing");
        write_lmi_dump(lmi.problem, f);
      }
      const BoundReport r = upper_bound(n, d, level, opts);
      o.result = bound_report_to_json(r);
      o.result["seeds"] = json::array({g.seed});
      if (r.status != SdpStatus::optimal) o.code = 1;
    } else if (command == "mc") {
      config.update({{"n", n}, {"d", d}, {"count", count}, {"bins", bins}});
      const auto samples = monte_carlo(n, d, count, g.seed, g.thread_count());
      std::vector<double> xs, ys;
      int violations = 0;
      const double lo = classical_pair_value(d) - 1e-9, hi = quantum_pair_value(d) + 1e-9;
      for (const auto& s : samples) {
        xs.push_back(s.pbar);
        ys.push_back(s.dbar_sq);
        if (s.pbar < lo || s.pbar > hi || s.dbar_sq < 0.0 || s.dbar_sq > 1.0 + 1e-9) ++violations;
      }
      o.result = {{"n", n}, {"d", d}, {"count", count}, {"range_violations", violations}};
      if (count >= 2) o.result["spearman"] = spearman(xs, ys);
      json sj = json::array();
      for (const auto& s : samples) sj.push_back({{"seed", s.seed}, {"pbar", s.pbar}, {"dbar_sq", s.dbar_sq}});
      o.result["samples"] = std::move(sj);
      o.csv = samples_csv(samples);
      if (!grid_path.empty()) {
        std::ofstream f(grid_path);
        if (!f) throw ValidationError("cannot open " + grid_path + " for writing");
        f << grid_csv(density_grid(samples, bins, bins));
      }
    } else if (command == "plan") {
      config.update({{"n", n}, {"d", d}, {"k", k}});
      const MemoryEstimate e = memory_estimate(n, d, k);
      o.result = {{"a_plus_b", e.a_plus_b}, {"word_count", e.word_count},
                  {"saturated", e.saturated}, {"parameter_count_estimate", e.parameter_count},
                  {"bytes_estimate", e.bytes}};
      std::ostringstream csv;
      csv.precision(17);
      csv << "a_plus_b,word_count,parameter_count_estimate,bytes_estimate\n"
          << e.a_plus_b << ',' << e.word_count << ',' << e.parameter_count << ',' << e.bytes << '\n';
      o.csv = csv.str();
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    emit(g, command, config, o, wall);
    return o.code;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
