#pragma once

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rotor/game_spec.hpp"
#include "rotor/graph.hpp"
#include "rotor/walk.hpp"

namespace rotor {

// Everything one instance file can carry.
struct Instance {
  std::string name;
  RotorGraph graph;
  std::vector<std::string> arc_names;
  RotorConfig config;
  std::vector<Owner> owner;
  std::vector<std::int64_t> sink_value;
  std::optional<VertexId> start;

  GameSpec game() const { return GameSpec{graph, owner, sink_value, config}; }

  friend bool operator==(const Instance& a, const Instance& b) {
    if (a.graph.vertex_count() != b.graph.vertex_count() || a.graph.arc_count() != b.graph.arc_count()) return false;
    for (std::size_t i = 0; i < a.graph.arc_count(); ++i) {
      const Arc &x = a.graph.arc(arc_at(i)), &y = b.graph.arc(arc_at(i));
      if (x.tail != y.tail || x.head != y.head) return false;
    }
    return a.name == b.name && a.graph.names() == b.graph.names() && a.graph.roles() == b.graph.roles() &&
           a.graph.rotor_orders() == b.graph.rotor_orders() && a.arc_names == b.arc_names && a.config == b.config &&
           a.owner == b.owner && a.sink_value == b.sink_value && a.start == b.start;
  }
};

enum class Severity { warning, error };

struct Diagnostic {
  std::size_t line;  // 0 when not tied to a line
  Severity severity;
  std::string message;
};

struct ParseResult {
  std::optional<Instance> instance;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return instance.has_value(); }
};

inline std::string format_diagnostic(const Diagnostic& d) {
  std::string s = d.line ? "line " + std::to_string(d.line) + ": " : std::string();
  return s + (d.severity == Severity::error ? "error: " : "warning: ") + d.message;
}

namespace detail {

inline std::vector<std::string_view> tokens(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline bool parse_int(std::string_view s, std::int64_t& out) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace detail

// Line-oriented format:
//   name <text>
//   vertex <name> plain|sink [value=<n>] [owner=rand|max|min]
//   arc <id> <tail> <head>
//   order <vertex> <arc id>...
//   config <vertex> <arc id>
//   start <vertex>
// '#' starts a comment.
inline ParseResult parse_instance(std::string_view text) {
  ParseResult res;
  auto error = [&](std::size_t line, std::string msg) { res.diagnostics.push_back({line, Severity::error, std::move(msg)}); };
  auto warn = [&](std::size_t line, std::string msg) { res.diagnostics.push_back({line, Severity::warning, std::move(msg)}); };

  std::string name;
  std::vector<std::string> vnames;
  std::vector<VertexRole> roles;
  std::vector<Owner> owners;
  std::vector<std::int64_t> values;
  std::vector<std::size_t> vline;
  std::map<std::string, std::size_t, std::less<>> vindex;
  std::vector<std::string> anames;
  std::vector<Arc> arcs;
  std::map<std::string, std::size_t, std::less<>> aindex;
  std::map<std::size_t, std::pair<std::vector<ArcId>, std::size_t>> orders;
  std::map<std::size_t, std::pair<ArcId, std::size_t>> configs;
  std::optional<std::pair<std::string, std::size_t>> start;

  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (auto h = line.find('#'); h != std::string_view::npos) line = line.substr(0, h);
    auto tok = detail::tokens(line);
    if (tok.empty()) continue;
    auto kw = tok[0];
    auto vertex_ref = [&](std::string_view s) -> std::optional<std::size_t> {
      auto it = vindex.find(s);
      if (it == vindex.end()) {
        error(lineno, "unknown vertex '" + std::string(s) + "'");
        return std::nullopt;
      }
      return it->second;
    };
    auto arc_ref = [&](std::string_view s) -> std::optional<ArcId> {
      auto it = aindex.find(s);
      if (it == aindex.end()) {
        error(lineno, "unknown arc '" + std::string(s) + "'");
        return std::nullopt;
      }
      return arc_at(it->second);
    };
    if (kw == "name") {
      if (tok.size() != 2) error(lineno, "expected: name <text>");
      else name = std::string(tok[1]);
    } else if (kw == "vertex") {
      if (tok.size() < 3) {
        error(lineno, "expected: vertex <name> plain|sink [value=<n>] [owner=rand|max|min]");
        continue;
      }
      std::string vn(tok[1]);
      if (vindex.count(vn)) {
        error(lineno, "duplicate vertex '" + vn + "'");
        continue;
      }
      VertexRole role;
      if (tok[2] == "plain") role = VertexRole::plain;
      else if (tok[2] == "sink") role = VertexRole::sink;
      else {
        error(lineno, "vertex role must be plain or sink");
        continue;
      }
      Owner owner = Owner::random;
      std::int64_t value = 0;
      bool bad = false;
      for (std::size_t i = 3; i < tok.size(); ++i) {
        auto t = tok[i];
        if (t.substr(0, 6) == "value=") {
          if (role != VertexRole::sink) error(lineno, "value= is only allowed on sinks"), bad = true;
          else if (!detail::parse_int(t.substr(6), value)) error(lineno, "bad value '" + std::string(t.substr(6)) + "'"), bad = true;
          else if (value < 0) error(lineno, "sink values must be nonnegative"), bad = true;
        } else if (t.substr(0, 6) == "owner=") {
          auto o = t.substr(6);
          if (role == VertexRole::sink) error(lineno, "owner= is only allowed on plain vertices"), bad = true;
          else if (o == "rand") owner = Owner::random;
          else if (o == "max") owner = Owner::max;
          else if (o == "min") owner = Owner::min;
          else error(lineno, "owner must be rand, max or min"), bad = true;
        } else {
          error(lineno, "unknown vertex attribute '" + std::string(t) + "'"), bad = true;
        }
      }
      if (bad) continue;
      vindex.emplace(vn, vnames.size());
      vnames.push_back(vn);
      roles.push_back(role);
      owners.push_back(owner);
      values.push_back(value);
      vline.push_back(lineno);
    } else if (kw == "arc") {
      if (tok.size() != 4) {
        error(lineno, "expected: arc <id> <tail> <head>");
        continue;
      }
      std::string an(tok[1]);
      if (aindex.count(an)) {
        error(lineno, "duplicate arc id '" + an + "'");
        continue;
      }
      auto t = vertex_ref(tok[2]);
      auto h = vertex_ref(tok[3]);
      if (!t || !h) continue;
      aindex.emplace(an, arcs.size());
      anames.push_back(an);
      arcs.push_back({vertex_at(*t), vertex_at(*h)});
    } else if (kw == "order") {
      if (tok.size() < 2) {
        error(lineno, "expected: order <vertex> <arc id>...");
        continue;
      }
      auto v = vertex_ref(tok[1]);
      if (!v) continue;
      if (orders.count(*v)) {
        error(lineno, "second order line for '" + std::string(tok[1]) + "'");
        continue;
      }
      std::vector<ArcId> ord;
      bool bad = false;
      for (std::size_t i = 2; i < tok.size(); ++i) {
        auto a = arc_ref(tok[i]);
        if (!a) bad = true;
        else ord.push_back(*a);
      }
      if (!bad) orders.emplace(*v, std::make_pair(std::move(ord), lineno));
    } else if (kw == "config") {
      if (tok.size() != 3) {
        error(lineno, "expected: config <vertex> <arc id>");
        continue;
      }
      auto v = vertex_ref(tok[1]);
      auto a = arc_ref(tok[2]);
      if (!v || !a) continue;
      if (configs.count(*v)) {
        error(lineno, "second config line for '" + std::string(tok[1]) + "'");
        continue;
      }
      configs.emplace(*v, std::make_pair(*a, lineno));
    } else if (kw == "start") {
      if (tok.size() != 2) error(lineno, "expected: start <vertex>");
      else start = std::make_pair(std::string(tok[1]), lineno);
    } else {
      error(lineno, "unknown directive '" + std::string(kw) + "'");
    }
  }

  const std::size_t n = vnames.size();
  std::vector<std::vector<ArcId>> order(n);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    std::size_t t = ix(arcs[i].tail);
    if (!orders.count(t)) order[t].push_back(arc_at(i));
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (auto it = orders.find(v); it != orders.end()) {
      order[v] = it->second.first;
      for (ArcId a : order[v])
        if (ix(arcs[ix(a)].tail) != v)
          error(it->second.second, "arc '" + anames[ix(a)] + "' in the order of '" + vnames[v] + "' does not leave it");
    } else if (roles[v] == VertexRole::plain && !order[v].empty()) {
      warn(vline[v], "no order line for '" + vnames[v] + "'; using declaration order");
    }
  }
  std::optional<VertexId> start_id;
  if (start) {
    auto it = vindex.find(start->first);
    if (it == vindex.end()) error(start->second, "unknown start vertex '" + start->first + "'");
    else start_id = vertex_at(it->second);
  }
  for (const auto& [v, cfg] : configs) {
    if (roles[v] == VertexRole::sink) error(cfg.second, "config given for sink '" + vnames[v] + "'");
    else if (ix(arcs[ix(cfg.first)].tail) != v)
      error(cfg.second, "config arc '" + anames[ix(cfg.first)] + "' does not leave '" + vnames[v] + "'");
  }
  for (const auto& d : res.diagnostics)
    if (d.severity == Severity::error) return res;

  RotorGraph g(vnames, roles, arcs, order);
  for (const auto& v : validate(g)) {
    std::size_t line = 0;
    if (v.vertex != kNoVertex) {
      auto it = orders.find(ix(v.vertex));
      line = v.kind == ViolationKind::rotor_order_not_permutation && it != orders.end() ? it->second.second : vline[ix(v.vertex)];
    }
    error(line, v.message);
  }
  for (const auto& d : res.diagnostics)
    if (d.severity == Severity::error) return res;

  Instance inst;
  inst.name = name;
  inst.graph = std::move(g);
  inst.arc_names = std::move(anames);
  inst.owner = std::move(owners);
  inst.sink_value = std::move(values);
  inst.config = RotorConfig(n);
  inst.start = start_id;
  for (std::size_t v = 0; v < n; ++v) {
    VertexId vid = vertex_at(v);
    if (inst.graph.is_sink(vid)) continue;
    if (auto it = configs.find(v); it != configs.end()) {
      inst.config.set(vid, it->second.first);
    } else {
      inst.config.set(vid, inst.graph.rotor_order(vid)[0]);
      if (inst.owner[v] == Owner::random) warn(vline[v], "no config for '" + vnames[v] + "'; using the first arc of its order");
    }
  }
  res.instance = std::move(inst);
  return res;
}

inline std::string serialize_instance(const Instance& inst) {
  const RotorGraph& g = inst.graph;
  std::ostringstream os;
  if (!inst.name.empty()) os << "name " << inst.name << '\n';
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    os << "vertex " << g.name(vid) << (g.is_sink(vid) ? " sink" : " plain");
    if (g.is_sink(vid)) os << " value=" << inst.sink_value[v];
    else if (inst.owner[v] != Owner::random) os << " owner=" << owner_name(inst.owner[v]);
    os << '\n';
  }
  for (std::size_t a = 0; a < g.arc_count(); ++a)
    os << "arc " << inst.arc_names[a] << ' ' << g.name(g.tail(arc_at(a))) << ' ' << g.name(g.head(arc_at(a))) << '\n';
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    VertexId vid = vertex_at(v);
    if (g.is_sink(vid)) continue;
    os << "order " << g.name(vid);
    for (ArcId a : g.rotor_order(vid)) os << ' ' << inst.arc_names[ix(a)];
    os << '\n';
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v)
    if (inst.config.has(vertex_at(v))) os << "config " << g.name(vertex_at(v)) << ' ' << inst.arc_names[ix(inst.config[vertex_at(v)])] << '\n';
  if (inst.start) os << "start " << g.name(*inst.start) << '\n';
  return os.str();
}

inline ParseResult load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    ParseResult r;
    r.diagnostics.push_back({0, Severity::error, "cannot open '" + path + "'"});
    return r;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

// Instance around a bare graph and config, with default names and values.
inline Instance make_instance(const RotorGraph& g, const RotorConfig& c, std::string name = {}) {
  Instance inst;
  inst.name = std::move(name);
  inst.graph = g;
  inst.config = c;
  for (std::size_t a = 0; a < g.arc_count(); ++a) inst.arc_names.push_back("a" + std::to_string(a));
  inst.owner.assign(g.vertex_count(), Owner::random);
  inst.sink_value.assign(g.vertex_count(), 0);
  return inst;
}

}  // namespace rotor
