#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rotor/games.hpp"
#include "rotor/generators.hpp"
#include "rotor/instance_io.hpp"
#include "rotor/oracle.hpp"
#include "rotor/path_graph.hpp"
#include "rotor/return_flows.hpp"
#include "rotor/simple_graph.hpp"

using namespace rotor;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

enum ExitCode { ok = 0, usage = 1, invalid = 2, refusal = 3, mismatch = 4 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Small counts stay JSON numbers, big ones become decimal strings, infinity is "inf".
Json count_json(const ExtendedCount& c) {
  if (c.is_infinite()) return "inf";
  auto v = c.to_u64();
  if (v && *v <= (std::uint64_t{1} << 53)) return *v;
  return c.to_string();
}

std::string pair_name(const RotorGraph& g, std::size_t id) {
  auto [u, k] = g.pair_at(id);
  return g.name(u) + "->" + g.name(g.out_neighbors(u)[k].head);
}

Instance load_or_throw(const std::string& path) {
  auto res = load_instance(path);
  for (const auto& d : res.diagnostics) std::cerr << path << ": " << format_diagnostic(d) << "\n";
  if (!res.ok()) throw InvalidInstance("could not load " + path);
  return std::move(*res.instance);
}

VertexId resolve_start(const Instance& inst, const std::string& name) {
  if (!name.empty()) {
    auto v = inst.graph.find_vertex(name);
    if (!v) throw UsageError("unknown vertex '" + name + "'");
    return *v;
  }
  if (inst.start) return *inst.start;
  for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v)
    if (!inst.graph.is_sink(vertex_at(v))) return vertex_at(v);
  return vertex_at(0);
}

Json strategy_json(const Instance& inst, const Strategy& s, Owner who) {
  Json j = Json::object();
  if (s.size() != inst.graph.vertex_count()) return j;
  for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v)
    if (inst.owner[v] == who && s.has(vertex_at(v))) j[inst.graph.name(vertex_at(v))] = inst.arc_names[ix(s[vertex_at(v)])];
  return j;
}

Json counters_json(const SolverCounters& c) {
  auto peak = [](const std::vector<std::uint32_t>& v) { return v.empty() ? 0u : *std::max_element(v.begin(), v.end()); };
  auto sum = [](const std::vector<std::uint32_t>& v) {
    std::uint64_t s = 0;
    for (auto x : v) s += x;
    return s;
  };
  return Json{{"routine_calls", sum(c.routine_calls)},
              {"routine_calls_max_per_vertex", peak(c.routine_calls)},
              {"closed_form_evaluations", sum(c.closed_form_evaluations)},
              {"closed_form_evaluations_max_per_vertex", peak(c.closed_form_evaluations)}};
}

Json table_json(const RotorGraph& g, const std::vector<std::optional<ExtendedCount>>& by_pair) {
  Json j = Json::object();
  for (std::size_t id = 0; id < by_pair.size(); ++id)
    if (by_pair[id]) j[pair_name(g, id)] = count_json(*by_pair[id]);
  return j;
}

Json table_json(const RotorGraph& g, const ReturnFlowTable& t) {
  std::vector<std::optional<ExtendedCount>> v(t.size());
  for (std::size_t id = 0; id < t.size(); ++id) v[id] = t.by_pair(id);
  return table_json(g, v);
}

struct Report {
  Json doc;
  explicit Report(std::string command) {
    doc["schema_version"] = kSchemaVersion;
    doc["instance"] = nullptr;
    doc["query"] = Json{{"command", std::move(command)}};
    doc["result"] = Json::object();
  }
  void instance(const Instance& inst, const std::string& file) {
    doc["instance"] = Json{{"name", inst.name},
                           {"file", file},
                           {"vertices", inst.graph.vertex_count()},
                           {"arcs", inst.graph.arc_count()}};
  }
  Json& query() { return doc["query"]; }
  Json& result() { return doc["result"]; }
  Json& witness() { return doc["witness"]; }
  Json& counters() { return doc["counters"]; }
  void print() {
    if (!doc.contains("counters")) doc["counters"] = Json::object();
    std::cout << doc.dump(2) << "\n";
  }
};

// Text output: one "key: value" line per top-level result entry.
void print_text(const Json& j) {
  for (const auto& [k, v] : j.items()) {
    if (v.is_object()) {
      std::cout << k << ":\n";
      for (const auto& [k2, v2] : v.items()) std::cout << "  " << k2 << ": " << (v2.is_string() ? v2.get<std::string>() : v2.dump()) << "\n";
    } else {
      std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    }
  }
}

GameVariant parse_variant(const std::string& s) {
  if (s == "positional") return GameVariant::positional;
  if (s == "free-order") return GameVariant::free_rotor_order;
  if (s == "per-visit") return GameVariant::free_per_visit;
  throw UsageError("unknown variant '" + s + "'");
}

bool binary_sinks(const Instance& inst) {
  for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v)
    if (inst.graph.is_sink(vertex_at(v)) && (inst.sink_value[v] < 0 || inst.sink_value[v] > 1)) return false;
  return true;
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      std::size_t n = std::stoul(s);
      return {n, n};
    }
    std::size_t a = std::stoul(s.substr(0, dots)), b = std::stoul(s.substr(dots + 2));
    if (a > b) throw UsageError("empty range '" + s + "'");
    return {a, b};
  } catch (const std::logic_error&) {
    throw UsageError("bad range '" + s + "'");
  }
}

// ---- subcommands

int cmd_validate(const std::string& file, bool json) {
  auto res = load_instance(file);
  std::size_t warnings = 0, errors = 0;
  Json diags = Json::array();
  for (const auto& d : res.diagnostics) {
    (d.severity == Severity::error ? errors : warnings)++;
    diags.push_back(Json{{"line", d.line}, {"severity", d.severity == Severity::error ? "error" : "warning"}, {"message", d.message}});
    if (!json) std::cerr << file << ": " << format_diagnostic(d) << "\n";
  }
  Report rep("validate");
  rep.query()["file"] = file;
  rep.result()["valid"] = res.ok();
  rep.result()["errors"] = errors;
  rep.result()["warnings"] = warnings;
  if (res.ok()) {
    const auto& g = res.instance->graph;
    rep.instance(*res.instance, file);
    rep.result()["simple"] = is_simple(g);
    rep.result()["tree_like"] = is_tree_like(g);
    rep.result()["stopping"] = is_stopping(g);
  }
  rep.result()["diagnostics"] = diags;
  if (json) rep.print();
  else print_text(rep.result());
  return res.ok() ? ok : invalid;
}

int cmd_simulate(const std::string& file, const std::string& start, std::optional<std::uint64_t> cap, bool trace,
                 bool flows, bool json) {
  Instance inst = load_or_throw(file);
  check_config(inst.graph, inst.config);
  VertexId u = resolve_start(inst, start);
  WalkOptions opt;
  opt.step_cap = cap;
  opt.record_trace = trace;
  opt.record_flows = flows;
  auto w = run_maximal_walk(inst.graph, inst.config, u, opt);
  Report rep("simulate");
  rep.instance(inst, file);
  rep.query()["start"] = inst.graph.name(u);
  if (cap) rep.query()["cap"] = *cap;
  const char* status = w.status == WalkStatus::reached_sink ? "reached_sink" : w.status == WalkStatus::trapped ? "trapped" : "cap_hit";
  rep.result()["status"] = status;
  rep.result()["exit"] = w.exit ? Json(inst.graph.name(*w.exit)) : Json(nullptr);
  rep.result()["value"] = w.exit ? Json(inst.sink_value[ix(*w.exit)]) : Json(nullptr);
  rep.result()["steps"] = count_json(w.steps);
  if (trace) {
    Json t = Json::array();
    for (VertexId v : w.trace) t.push_back(inst.graph.name(v));
    rep.result()["trace"] = t;
  }
  if (flows) {
    Json f = Json::object();
    for (std::size_t a = 0; a < inst.graph.arc_count(); ++a) f[inst.arc_names[a]] = w.arc_flows[a];
    rep.result()["flows"] = f;
  }
  if (json) {
    rep.print();
  } else {
    std::cout << "status: " << status << "\nexit: " << (w.exit ? inst.graph.name(*w.exit) : "-") << "\nsteps: " << w.steps.to_string() << "\n";
    if (trace) {
      std::cout << "trace:";
      for (VertexId v : w.trace) std::cout << " " << inst.graph.name(v);
      std::cout << "\n";
    }
    if (flows)
      for (std::size_t a = 0; a < inst.graph.arc_count(); ++a) std::cout << "flow " << inst.arc_names[a] << " " << w.arc_flows[a] << "\n";
  }
  return ok;
}

int cmd_destination(const std::string& file, const std::string& root, bool force_multigraph, bool json) {
  Instance inst = load_or_throw(file);
  const RotorGraph& g = inst.graph;
  check_config(g, inst.config);
  VertexId r = root.empty() ? vertex_at(0) : resolve_start(inst, root);
  bool simple = !force_multigraph && is_simple(g);
  DestinationResult d = simple ? destination_forest_simple(g, inst.config, r) : compute_destination_forest(g, inst.config, r);
  Report rep("destination");
  rep.instance(inst, file);
  rep.query()["solver"] = simple ? "simple" : "multigraph";
  Json exits = Json::object(), dest = Json::object();
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (g.is_sink(vid)) continue;
    exits[g.name(vid)] = g.name(d.exits[v]);
    dest[g.name(vid)] = inst.arc_names[ix(d.destination[vid])];
  }
  rep.result()["exits"] = exits;
  rep.result()["destination"] = dest;
  rep.witness()["return_flows"] = table_json(g, d.table);
  rep.counters() = counters_json(d.counters);
  if (json) rep.print();
  else print_text(rep.result());
  return ok;
}

int cmd_solve0(const std::string& file, const std::string& start, bool json) {
  Instance inst = load_or_throw(file);
  const RotorGraph& g = inst.graph;
  check_config(g, inst.config);
  VertexId u = resolve_start(inst, start);
  auto d = is_simple(g) ? destination_forest_simple(g, inst.config) : compute_destination_forest(g, inst.config);
  auto flows = walk_flows(g, inst.config, d.table, u);
  Report rep("solve0");
  rep.instance(inst, file);
  rep.query()["start"] = g.name(u);
  VertexId e = g.is_sink(u) ? u : d.exits[ix(u)];
  rep.result()["exit"] = g.name(e);
  rep.result()["value"] = inst.sink_value[ix(e)];
  ExtendedCount steps(0);
  Json f = Json::object();
  for (std::size_t id = 0; id < flows.size(); ++id) {
    steps += flows[id];
    f[pair_name(g, id)] = count_json(flows[id]);
  }
  rep.result()["steps"] = count_json(steps);
  rep.witness()["flows"] = f;
  rep.counters() = counters_json(d.counters);
  if (json) rep.print();
  else print_text(rep.result());
  return ok;
}

int cmd_solve(const std::string& file, const std::string& start, bool two_player, bool binary, bool integer,
              const std::string& variant_name, bool all_vertices, bool simple_solver, bool json) {
  Instance inst = load_or_throw(file);
  GameSpec game = inst.game();
  VertexId u = resolve_start(inst, start);
  GameVariant variant = parse_variant(variant_name);
  if (binary && integer) throw UsageError("--binary and --integer exclude each other");
  if (!binary && !integer) binary = binary_sinks(inst);
  if (two_player && variant != GameVariant::positional) throw UsageError("two-player games only have the positional variant");
  Report rep(two_player ? "solve2" : "solve1");
  rep.instance(inst, file);
  rep.query()["start"] = inst.graph.name(u);
  rep.query()["kind"] = binary ? "binary" : "integer";
  rep.query()["variant"] = variant_name;

  if (all_vertices) {
    if (!binary || variant != GameVariant::positional) throw UsageError("--all-vertices solves positional binary games");
    auto sol = one_player_binary_all_vertices(game);
    Json vals = Json::object();
    for (std::size_t v = 0; v < inst.graph.vertex_count(); ++v) vals[inst.graph.name(vertex_at(v))] = sol.value[v];
    rep.query()["all_vertices"] = true;
    rep.result()["values"] = vals;
    rep.witness()["return_flows"] = table_json(inst.graph, sol.table);
    rep.counters() = counters_json(sol.counters);
  } else if (simple_solver) {
    if (two_player || binary || variant != GameVariant::positional)
      throw UsageError("--simple solves positional one-player integer games");
    auto sol = one_player_integer_simple(game, u);
    rep.query()["solver"] = "simple";
    rep.result()["value"] = sol.value;
    rep.result()["best_sink"] = sol.best_sink == kNoVertex ? Json(nullptr) : Json(inst.graph.name(sol.best_sink));
    rep.witness()["max_strategy"] = strategy_json(inst, sol.access.strategy, Owner::max);
    rep.witness()["access_flows"] = table_json(inst.graph, sol.access.access);
  } else {
    GameSolution sol = two_player ? (binary ? solve_two_player_binary(game, u) : solve_two_player_integer(game, u))
                                  : (binary ? solve_one_player_binary(game, u, variant)
                                            : solve_one_player_integer(game, u, variant));
    rep.result()["value"] = sol.value;
    if (variant != GameVariant::free_per_visit) rep.witness()["max_strategy"] = strategy_json(inst, sol.max_strategy, Owner::max);
    if (two_player) rep.witness()["min_strategy"] = strategy_json(inst, sol.min_strategy, Owner::min);
    if (variant == GameVariant::free_rotor_order) {
      Json orders = Json::object();
      for (std::size_t v = 0; v < sol.chosen_orders.size(); ++v) {
        if (sol.chosen_orders[v].empty()) continue;
        Json o = Json::array();
        for (ArcId a : sol.chosen_orders[v]) o.push_back(inst.arc_names[ix(a)]);
        orders[inst.graph.name(vertex_at(v))] = o;
      }
      rep.witness()["rotor_orders"] = orders;
    }
    rep.counters() = counters_json(sol.counters);
    rep.counters()["probes"] = sol.probes;
  }
  if (json) rep.print();
  else print_text(rep.result());
  return ok;
}

int cmd_access(const std::string& file, const std::string& start, bool json) {
  Instance inst = load_or_throw(file);
  GameSpec game = inst.game();
  VertexId u = resolve_start(inst, start);
  SolverCounters counters(inst.graph.vertex_count());
  auto t = access_flows(game, u, &counters);
  auto best = one_player_integer_simple(game, u);
  Report rep("access");
  rep.instance(inst, file);
  rep.query()["start"] = inst.graph.name(u);
  rep.result()["access_flows"] = table_json(inst.graph, t.access);
  rep.result()["value"] = best.value;
  rep.witness()["max_strategy"] = strategy_json(inst, t.strategy, Owner::max);
  rep.witness()["return_flows"] = table_json(inst.graph, t.return_flows);
  rep.counters() = counters_json(counters);
  if (json) rep.print();
  else print_text(rep.result());
  return ok;
}

int cmd_pathgraph(const std::string& dirs, std::size_t start, const std::string& particles, bool json) {
  PathInstance p = PathInstance::from_string(dirs);
  if (p.n == 0) throw UsageError("empty path configuration");
  Report rep("pathgraph");
  rep.query()["config"] = p.to_string();
  std::size_t k = right_count(p);
  rep.result()["n"] = p.n;
  rep.result()["class"] = k;
  Json pattern = Json::object();
  auto pat = path_exit_pattern(p);
  for (std::size_t i = 1; i <= p.n; ++i) pattern["u" + std::to_string(i)] = pat[i - 1] == PathSide::s1 ? "s1" : "s0";
  rep.result()["exits"] = pattern;
  if (start) {
    check_index(p, start);
    rep.query()["start"] = start;
    rep.result()["class_after_routing"] = class_after_routing(p.n, k, start);
  }
  if (!particles.empty()) {
    std::vector<std::pair<std::size_t, ExtendedCount>> starts;
    std::stringstream ss(particles);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto colon = item.find(':');
      try {
        std::size_t i = std::stoul(item.substr(0, colon));
        ExtendedCount c = colon == std::string::npos ? ExtendedCount(1) : ExtendedCount::parse(item.substr(colon + 1));
        starts.emplace_back(i, c);
      } catch (const std::logic_error&) {
        throw UsageError("bad particle list '" + particles + "'");
      }
    }
    auto m = multi_particle_outcome(p.n, k, starts);
    rep.query()["particles"] = particles;
    rep.result()["final_class"] = m.final_class;
    rep.result()["at_s0"] = count_json(m.at_s0);
    rep.result()["at_s1"] = count_json(m.at_s1);
  }
  if (json) rep.print();
  else print_text(rep.result());
  return ok;
}

struct GenerateArgs {
  std::string family = "exp_path";
  std::size_t n = 3;
  std::string config;
  std::uint64_t seed = 1;
  std::uint32_t mult = 2;
  std::size_t sinks = 3;
  double p_max = 0, p_min = 0;
  std::int64_t max_value = 1;
  std::string out;
};

Instance generate(const GenerateArgs& a) {
  if (a.family == "exp_path") return exp_path(a.n);
  if (a.family == "simple_path") {
    if (!a.config.empty()) return simple_path(PathInstance::from_string(a.config));
    Rng rng(a.seed);
    std::vector<bool> r(a.n);
    for (std::size_t i = 0; i < a.n; ++i) r[i] = rng.below(2) == 1;
    return simple_path(PathInstance(a.n, r));
  }
  if (a.family == "random_tree") {
    RandomTreeParams p;
    p.plain = a.n;
    p.sinks = a.sinks;
    p.max_multiplicity = a.mult;
    p.p_max = a.p_max;
    p.p_min = a.p_min;
    p.max_value = a.max_value;
    return random_tree_like(p, a.seed);
  }
  throw UsageError("unknown family '" + a.family + "'");
}

int cmd_generate(const GenerateArgs& a) {
  std::string text = serialize_instance(generate(a));
  if (a.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(a.out);
    if (!f || !(f << text)) throw std::runtime_error("could not write " + a.out);
  }
  return ok;
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_bench(GenerateArgs a, const std::string& range, std::size_t sim_max) {
  auto [lo, hi] = parse_range(range);
  std::cout << "family,n,arcs,steps,sim_ms,solve_ms,match\n";
  for (std::size_t n = lo; n <= hi; ++n) {
    a.n = n;
    Instance inst = generate(a);
    const RotorGraph& g = inst.graph;
    VertexId u = resolve_start(inst, "");
    auto t0 = std::chrono::steady_clock::now();
    auto d = compute_destination_forest(g, inst.config);
    auto flows = walk_flows(g, inst.config, d.table, u);
    double solve_ms = ms_since(t0);
    ExtendedCount steps(0);
    for (const auto& f : flows) steps += f;
    std::string sim_ms = "", match = "skipped";
    if (n <= sim_max) {
      t0 = std::chrono::steady_clock::now();
      auto w = run_maximal_walk(g, inst.config, u);
      sim_ms = std::to_string(ms_since(t0));
      bool same = w.exit && *w.exit == d.exits[ix(u)] && w.steps == steps;
      match = same ? "yes" : "no";
    }
    std::cout << a.family << "," << n << "," << g.arc_count() << "," << steps.to_string() << "," << sim_ms << ","
              << solve_ms << "," << match << "\n";
    std::cout.flush();
  }
  return ok;
}

struct VerifyTally {
  std::size_t checks = 0, failures = 0, skipped = 0;
  std::vector<std::string> notes;
  void check(bool good, const std::string& what) {
    ++checks;
    if (!good) {
      ++failures;
      notes.push_back(what);
    }
  }
};

void verify_instance(const Instance& inst, VerifyTally& tally) {
  const RotorGraph& g = inst.graph;
  const std::string tag = inst.name.empty() ? "instance" : inst.name;
  oracle::EnumerationBudget budget;
  if (!is_forest_like(g) || !is_stopping(g)) {
    ++tally.skipped;
    return;
  }
  auto d = compute_destination_forest(g, inst.config);
  auto sim = oracle::exit_pattern_by_simulation(g, inst.config, budget);
  auto pushed = exit_pattern_from_acyclic(g, destination_forest_by_pushing(g, inst.config).forest);
  bool exits_ok = true;
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    exits_ok = exits_ok && sim[v] && *sim[v] == d.exits[v] && pushed[v] == d.exits[v];
  tally.check(exits_ok, tag + ": destination forest vs simulation and cycle pushing");
  if (is_simple(g)) {
    auto s = destination_forest_simple(g, inst.config);
    tally.check(s.exits == d.exits && s.destination == d.destination, tag + ": simple destination forest");
  }
  bool has_max = false, has_min = false;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    has_max = has_max || inst.owner[v] == Owner::max;
    has_min = has_min || inst.owner[v] == Owner::min;
  }
  if (!has_max && !has_min) return;
  GameSpec game = inst.game();
  VertexId u = resolve_start(inst, "");
  try {
    if (!has_min) {
      auto e = oracle::enumerate_one_player(game, u, budget);
      tally.check(solve_one_player_integer(game, u).value == e.value, tag + ": one-player value vs enumeration");
    } else {
      auto e = oracle::enumerate_two_player(game, u, budget);
      tally.check(e.maximin == e.minimax && solve_two_player_integer(game, u).value == e.maximin,
                  tag + ": two-player value vs enumeration");
    }
  } catch (const CapExceeded&) {
    ++tally.skipped;
  }
}

int cmd_verify(const std::string& file, std::size_t batch, GenerateArgs a, bool json) {
  VerifyTally tally;
  Report rep("verify");
  if (!file.empty()) {
    Instance inst = load_or_throw(file);
    rep.instance(inst, file);
    verify_instance(inst, tally);
  } else {
    if (batch == 0) throw UsageError("verify needs an instance file or --batch N");
    a.family = "random_tree";
    rep.query()["batch"] = batch;
    rep.query()["seed"] = a.seed;
    std::uint64_t seed0 = a.seed;
    for (std::size_t i = 0; i < batch; ++i) {
      a.seed = seed0 + i;
      verify_instance(generate(a), tally);
    }
  }
  rep.result()["checks"] = tally.checks;
  rep.result()["failures"] = tally.failures;
  rep.result()["skipped"] = tally.skipped;
  rep.result()["mismatches"] = tally.notes;
  if (json) {
    rep.print();
  } else {
    std::cout << "checks: " << tally.checks << "\nfailures: " << tally.failures << "\nskipped: " << tally.skipped << "\n";
    for (const auto& n : tally.notes) std::cout << "mismatch: " << n << "\n";
  }
  return tally.failures ? mismatch : ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rotor-routing walks, destination forests and rotor games"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Print a JSON document");

  std::string file, start, root, variant = "positional", particles, range = "5..30", path_config;
  std::optional<std::uint64_t> cap;
  bool trace = false, flows = false, force_multigraph = false, binary = false, integer = false, all_vertices = false,
       simple_solver = false;
  std::size_t path_start = 0, sim_max = 22, batch = 0;
  GenerateArgs gen;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check an instance file");
  validate_cmd->add_option("file", file)->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Run the walk step by step");
  simulate_cmd->add_option("file", file)->required();
  simulate_cmd->add_option("--start", start, "Start vertex");
  simulate_cmd->add_option("--cap", cap, "Stop after this many steps");
  simulate_cmd->add_flag("--trace", trace, "Print every visited vertex");
  simulate_cmd->add_flag("--flows", flows, "Print the number of crossings of every arc");

  auto* destination_cmd = app.add_subcommand("destination", "Destination forest and exit of every vertex");
  destination_cmd->add_option("file", file)->required();
  destination_cmd->add_option("--root", root, "Vertex the traversal starts from");
  destination_cmd->add_flag("--force-multigraph", force_multigraph, "Skip the simple-graph solver");

  auto* solve0_cmd = app.add_subcommand("solve0", "Exit and arc flows of one walk, without simulating it");
  solve0_cmd->add_option("file", file)->required();
  solve0_cmd->add_option("--start", start, "Start vertex");

  auto add_game_options = [&](CLI::App* c) {
    c->add_option("file", file)->required();
    c->add_option("--start", start, "Start vertex");
    c->add_flag("--binary", binary, "Sink values are 0 or 1");
    c->add_flag("--integer", integer, "Integer sink values");
  };
  auto* solve1_cmd = app.add_subcommand("solve1", "One-player game value and optimal strategy");
  add_game_options(solve1_cmd);
  solve1_cmd->add_option("--variant", variant, "positional, free-order or per-visit")
      ->check(CLI::IsMember({"positional", "free-order", "per-visit"}));
  solve1_cmd->add_flag("--all-vertices", all_vertices, "Value from every vertex (simple graphs)");
  solve1_cmd->add_flag("--simple", simple_solver, "Integer value through access flows (simple graphs)");
  auto* solve2_cmd = app.add_subcommand("solve2", "Two-player game value and optimal strategies");
  add_game_options(solve2_cmd);

  auto* access_cmd = app.add_subcommand("access", "Access flows of a one-player game on a simple graph");
  access_cmd->add_option("file", file)->required();
  access_cmd->add_option("--start", start, "Start vertex");

  auto* path_cmd = app.add_subcommand("pathgraph", "Simple path: exit pattern and routing classes");
  path_cmd->add_option("--config", path_config, "Directions of u1..un, e.g. RRLL")->required();
  path_cmd->add_option("--start", path_start, "Route one particle from u_i");
  path_cmd->add_option("--particles", particles, "Particles as i:count,... routed one after another");

  auto add_family_options = [&](CLI::App* c) {
    c->add_option("--family", gen.family, "exp_path, simple_path or random_tree")
        ->check(CLI::IsMember({"exp_path", "simple_path", "random_tree"}));
    c->add_option("--seed", gen.seed, "Seed for the random families");
    c->add_option("--mult", gen.mult, "Largest arc multiplicity (random_tree)");
    c->add_option("--sinks", gen.sinks, "Number of sinks (random_tree)");
    c->add_option("--p-max", gen.p_max, "Probability of a MAX vertex (random_tree)");
    c->add_option("--p-min", gen.p_min, "Probability of a MIN vertex (random_tree)");
    c->add_option("--max-value", gen.max_value, "Largest sink value (random_tree)");
  };
  auto* generate_cmd = app.add_subcommand("generate", "Write a generated instance");
  add_family_options(generate_cmd);
  generate_cmd->add_option("--n", gen.n, "Size parameter");
  generate_cmd->add_option("--config", gen.config, "Directions for simple_path, e.g. RRLL");
  generate_cmd->add_option("-o,--output", gen.out, "Output file (default: stdout)");

  auto* bench_cmd = app.add_subcommand("bench", "CSV timings of simulation against the destination solver");
  add_family_options(bench_cmd);
  bench_cmd->add_option("--n", range, "Sizes, e.g. 5..30");
  bench_cmd->add_option("--sim-max", sim_max, "Largest size that is also simulated");

  auto* verify_cmd = app.add_subcommand("verify", "Cross-check the solvers against brute force");
  verify_cmd->add_option("file", file);
  verify_cmd->add_option("--batch", batch, "Number of generated instances");
  add_family_options(verify_cmd);
  verify_cmd->add_option("--n", gen.n, "Plain vertices per generated instance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? ok : usage;
  }

  try {
    if (*validate_cmd) return cmd_validate(file, json);
    if (*simulate_cmd) return cmd_simulate(file, start, cap, trace, flows, json);
    if (*destination_cmd) return cmd_destination(file, root, force_multigraph, json);
    if (*solve0_cmd) return cmd_solve0(file, start, json);
    if (*solve1_cmd) return cmd_solve(file, start, false, binary, integer, variant, all_vertices, simple_solver, json);
    if (*solve2_cmd) return cmd_solve(file, start, true, binary, integer, "positional", false, false, json);
    if (*access_cmd) return cmd_access(file, start, json);
    if (*path_cmd) return cmd_pathgraph(path_config, path_start, particles, json);
    if (*generate_cmd) return cmd_generate(gen);
    if (*bench_cmd) return cmd_bench(gen, range, sim_max);
    if (*verify_cmd) {
      gen.n = verify_cmd->count("--n") ? gen.n : 8;
      return cmd_verify(file, batch, gen, json);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const InvalidInstance& e) {
    std::cerr << "invalid instance: " << e.what() << "\n";
    return invalid;
  } catch (const SolverRefusal& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return refusal;
  } catch (const CapExceeded& e) {
    std::cerr << "refused: " << e.what() << "\n";
    return refusal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  }
  return usage;
}
