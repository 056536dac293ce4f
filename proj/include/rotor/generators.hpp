#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "rotor/instance_io.hpp"
#include "rotor/path_graph.hpp"

namespace rotor {

// Small deterministic helpers on top of mt19937_64 so that a seed gives the same
// instance on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t below(std::uint64_t n) { return n <= 1 ? 0 : static_cast<std::uint64_t>((static_cast<unsigned __int128>(eng_()) * n) >> 64); }
  std::int64_t between(std::int64_t lo, std::int64_t hi) { return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }
  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

// Path u_n ... u_1 u_0 s. Every u_i with i < n sends two arcs towards u_{i+1} and one towards
// u_{i-1} (or s), in that rotor order, starting on the first of the two. u_n only points back.
// The walk from u_0 crosses u_i -> u_{i+1} exactly 2^(i+1) times.
inline Instance exp_path(std::size_t n) {
  if (n == 0) throw std::invalid_argument("exp_path needs n >= 1");
  GraphBuilder b;
  for (std::size_t i = 0; i <= n; ++i) b.add_vertex("u" + std::to_string(i));
  VertexId s = b.add_sink("s");
  std::vector<ArcId> first(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    first[i] = b.add_arcs(vertex_at(i), vertex_at(i + 1), 2);
    b.add_arc(vertex_at(i), i == 0 ? s : vertex_at(i - 1));
  }
  first[n] = b.add_arc(vertex_at(n), vertex_at(n - 1));
  RotorGraph g = b.build();
  RotorConfig c(g.vertex_count());
  for (std::size_t i = 0; i <= n; ++i) c.set(vertex_at(i), first[i]);
  Instance inst = make_instance(g, c, "exp_path_" + std::to_string(n));
  inst.start = vertex_at(0);
  return inst;
}

inline Instance simple_path(const PathInstance& p) {
  auto pr = to_rotor_graph(p);
  Instance inst = make_instance(pr.graph, pr.config, "simple_path_" + p.to_string());
  if (p.n) inst.start = vertex_at(1);
  return inst;
}

struct RandomTreeParams {
  std::size_t plain = 8;
  std::size_t sinks = 3;
  std::uint32_t max_multiplicity = 2;
  double p_max = 0.0;  // the rest is random
  double p_min = 0.0;
  std::int64_t max_value = 1;
  bool stopping = true;
  // Probability that a plain-plain edge carries arcs in only one direction.
  double one_way = 0.25;
};

// Random tree-like rotor multigraph: a random recursive tree on the plain vertices with
// sinks hung as leaves. With `stopping`, every plain vertex keeps an arc towards the first sink.
inline Instance random_tree_like(const RandomTreeParams& prm, std::uint64_t seed) {
  if (prm.plain == 0 || prm.sinks == 0) throw std::invalid_argument("random_tree_like needs a plain vertex and a sink");
  if (prm.max_multiplicity == 0) throw std::invalid_argument("random_tree_like needs max_multiplicity >= 1");
  Rng rng(seed);
  const std::size_t np = prm.plain, ns = prm.sinks, n = np + ns;
  std::vector<std::size_t> attach(n);
  for (std::size_t i = 1; i < np; ++i) attach[i] = rng.below(i);
  for (std::size_t j = 0; j < ns; ++j) attach[np + j] = rng.below(np);
  // Orientation towards the first sink.
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 1; i < n; ++i) {
    adj[i].push_back(attach[i]);
    adj[attach[i]].push_back(i);
  }
  std::vector<std::size_t> toward(n, n);
  {
    std::vector<std::size_t> queue{np};
    std::vector<bool> seen(n, false);
    seen[np] = true;
    for (std::size_t h = 0; h < queue.size(); ++h)
      for (std::size_t w : adj[queue[h]])
        if (!seen[w]) {
          seen[w] = true;
          toward[w] = queue[h];
          queue.push_back(w);
        }
  }
  GraphBuilder b;
  for (std::size_t i = 0; i < np; ++i) b.add_vertex("u" + std::to_string(i));
  for (std::size_t j = 0; j < ns; ++j) b.add_sink("s" + std::to_string(j));
  auto mult = [&](std::uint32_t lo) { return static_cast<std::size_t>(rng.between(lo, prm.max_multiplicity)); };
  for (std::size_t i = 1; i < n; ++i) {
    std::size_t p = attach[i];
    if (i >= np) {
      b.add_arcs(vertex_at(p), vertex_at(i), mult(1));
      continue;
    }
    bool i_to_p_forced = prm.stopping && toward[i] == p;
    bool p_to_i_forced = prm.stopping && toward[p] == i;
    std::size_t a = mult(i_to_p_forced ? 1 : 0), c = mult(p_to_i_forced ? 1 : 0);
    if (rng.unit() < prm.one_way) {
      if (rng.below(2) == 0 && !i_to_p_forced) a = 0;
      else if (!p_to_i_forced) c = 0;
    }
    if (a == 0 && c == 0) (rng.below(2) ? a : c) = 1;
    if (a) b.add_arcs(vertex_at(i), vertex_at(p), a);
    if (c) b.add_arcs(vertex_at(p), vertex_at(i), c);
  }
  RotorGraph g0 = b.build();
  // Every plain vertex needs an out-arc.
  for (std::size_t v = 0; v < np; ++v)
    if (g0.out_degree(vertex_at(v)) == 0) b.add_arc(vertex_at(v), vertex_at(adj[v][rng.below(adj[v].size())]));
  g0 = b.build();
  for (std::size_t v = 0; v < np; ++v) {
    auto out = g0.out_arcs(vertex_at(v));
    std::vector<ArcId> ord(out.begin(), out.end());
    rng.shuffle(ord);
    b.set_rotor_order(vertex_at(v), ord);
  }
  RotorGraph g = b.build();
  RotorConfig cfg(n);
  for (std::size_t v = 0; v < np; ++v) {
    auto out = g.out_arcs(vertex_at(v));
    cfg.set(vertex_at(v), out[rng.below(out.size())]);
  }
  Instance inst = make_instance(g, cfg, "random_" + std::to_string(seed));
  for (std::size_t v = 0; v < np; ++v) {
    double x = rng.unit();
    inst.owner[v] = x < prm.p_max ? Owner::max : x < prm.p_max + prm.p_min ? Owner::min : Owner::random;
  }
  for (std::size_t j = 0; j < ns; ++j) inst.sink_value[np + j] = rng.between(0, prm.max_value);
  inst.start = vertex_at(0);
  return inst;
}

}  // namespace rotor
