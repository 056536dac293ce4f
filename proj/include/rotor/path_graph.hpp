#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotor/extended_count.hpp"
#include "rotor/graph.hpp"
#include "rotor/walk.hpp"

namespace rotor {

// Path s0, u1..un, s1 with every interior vertex pointing left or right.
// right[i-1] is true when u_i points towards s1.
struct PathInstance {
  std::size_t n = 0;
  std::vector<bool> right;

  PathInstance() = default;
  PathInstance(std::size_t length, std::vector<bool> toward_s1) : n(length), right(std::move(toward_s1)) {
    if (right.size() != n) throw std::invalid_argument("PathInstance: direction count differs from length");
  }

  // "RRLL" style, u1 first.
  static PathInstance from_string(const std::string& dirs) {
    std::vector<bool> r;
    for (char ch : dirs) {
      if (ch == 'R' || ch == 'r' || ch == '1') r.push_back(true);
      else if (ch == 'L' || ch == 'l' || ch == '0') r.push_back(false);
      else throw std::invalid_argument("PathInstance: direction must be L or R");
    }
    return PathInstance(r.size(), r);
  }
  std::string to_string() const {
    std::string s;
    for (bool b : right) s += b ? 'R' : 'L';
    return s;
  }
  friend bool operator==(const PathInstance&, const PathInstance&) = default;
};

enum class PathSide { s0 = 0, s1 = 1 };

inline std::size_t right_count(const PathInstance& p) {
  std::size_t c = 0;
  for (bool b : p.right) c += b;
  return c;
}

inline void check_index(const PathInstance& p, std::size_t i) {
  if (i < 1 || i > p.n) throw std::out_of_range("path vertex index must lie in 1..n");
}

// u_i exits at s0 exactly for the first n - (#right) vertices.
inline std::vector<PathSide> path_exit_pattern(const PathInstance& p) {
  std::size_t left = p.n - right_count(p);
  std::vector<PathSide> out(p.n);
  for (std::size_t i = 1; i <= p.n; ++i) out[i - 1] = i <= left ? PathSide::s0 : PathSide::s1;
  return out;
}

// Right-pointing count after routing one particle from u_i, starting from count k.
inline std::size_t class_after_routing(std::size_t n, std::size_t k, std::size_t i) {
  if (k > n) throw std::out_of_range("class index must lie in 0..n");
  if (i < 1 || i > n) throw std::out_of_range("path vertex index must lie in 1..n");
  return (k + i) % (n + 1);
}

struct MultiParticleOutcome {
  std::size_t final_class;
  ExtendedCount at_s1;
  ExtendedCount at_s0;
};

// Particles given as (start index, how many), routed one after another in any order.
inline MultiParticleOutcome multi_particle_outcome(std::size_t n, std::size_t k,
                                                   const std::vector<std::pair<std::size_t, ExtendedCount>>& starts) {
  if (k > n) throw std::out_of_range("class index must lie in 0..n");
  ExtendedCount total(k), particles(0);
  for (const auto& [i, count] : starts) {
    if (i < 1 || i > n) throw std::out_of_range("path vertex index must lie in 1..n");
    if (count.is_infinite()) throw std::invalid_argument("particle count must be finite");
    total += ExtendedCount(i) * count;
    particles += count;
  }
  ExtendedCount mod(n + 1);
  MultiParticleOutcome out;
  out.final_class = static_cast<std::size_t>(*(total % mod).to_u64());
  out.at_s1 = total / mod;
  out.at_s0 = particles - out.at_s1;
  return out;
}

struct SideCounts {
  std::size_t from_left;   // vertices left of u_i pointing right
  std::size_t from_right;  // vertices right of u_i pointing left
};

inline SideCounts side_counts(const PathInstance& p, std::size_t i) {
  check_index(p, i);
  SideCounts c{0, 0};
  for (std::size_t j = 1; j < i; ++j) c.from_left += p.right[j - 1];
  for (std::size_t j = i + 1; j <= p.n; ++j) c.from_right += !p.right[j - 1];
  return c;
}

inline PathSide exit_by_side_counts(const PathInstance& p, std::size_t i) {
  auto c = side_counts(p, i);
  bool s1 = c.from_right < c.from_left || (c.from_right == c.from_left && p.right[i - 1]);
  return s1 ? PathSide::s1 : PathSide::s0;
}

// The acyclic member of class k: u1..u_{n-k} left, the rest right.
inline PathInstance canonical_path(std::size_t n, std::size_t k) {
  if (k > n) throw std::out_of_range("class index must lie in 0..n");
  std::vector<bool> r(n, false);
  for (std::size_t i = n - k; i < n; ++i) r[i] = true;
  return PathInstance(n, r);
}

// Vertex ids: s0 = 0, u_i = i, s1 = n+1. Arc 2(i-1) goes left, 2(i-1)+1 right.
struct PathRotorGraph {
  RotorGraph graph;
  RotorConfig config;
};

inline PathRotorGraph to_rotor_graph(const PathInstance& p) {
  GraphBuilder b;
  b.add_sink("s0");
  for (std::size_t i = 1; i <= p.n; ++i) b.add_vertex("u" + std::to_string(i));
  b.add_sink("s1");
  for (std::size_t i = 1; i <= p.n; ++i) {
    b.add_arc(vertex_at(i), vertex_at(i - 1));
    b.add_arc(vertex_at(i), vertex_at(i + 1));
  }
  PathRotorGraph out{b.build(), {}};
  out.config = RotorConfig(p.n + 2);
  for (std::size_t i = 1; i <= p.n; ++i) out.config.set(vertex_at(i), arc_at(2 * (i - 1) + (p.right[i - 1] ? 1 : 0)));
  return out;
}

// Reads back a path from the layout produced by to_rotor_graph.
inline PathInstance from_rotor_graph(const RotorGraph& g, const RotorConfig& c) {
  if (g.vertex_count() < 2) throw std::invalid_argument("from_rotor_graph: not a path graph");
  std::size_t n = g.vertex_count() - 2;
  if (!g.is_sink(vertex_at(0)) || !g.is_sink(vertex_at(n + 1)) || g.arc_count() != 2 * n)
    throw std::invalid_argument("from_rotor_graph: not a path graph");
  std::vector<bool> r(n);
  for (std::size_t i = 1; i <= n; ++i) {
    VertexId u = vertex_at(i);
    if (g.is_sink(u) || g.out_degree(u) != 2) throw std::invalid_argument("from_rotor_graph: not a path graph");
    VertexId h = g.head(c[u]);
    if (h == vertex_at(i + 1)) r[i - 1] = true;
    else if (h == vertex_at(i - 1)) r[i - 1] = false;
    else throw std::invalid_argument("from_rotor_graph: not a path graph");
  }
  return PathInstance(n, r);
}

}  // namespace rotor
