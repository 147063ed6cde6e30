#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "kampen/core.hpp"

namespace kampen {

using VertexList = std::vector<int>;

struct OrientedSimplex {
  VertexList vertices;  // ascending
  int sign = 1;         // +-1 relative to ascending order
  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

// Sort the vertex list, track permutation parity. Duplicate vertices are an error.
inline OrientedSimplex canonicalize_simplex(VertexList v) {
  int inversions = 0;
  for (size_t i = 0; i < v.size(); ++i)
    for (size_t j = i + 1; j < v.size(); ++j) {
      if (v[i] > v[j]) ++inversions;
      if (v[i] == v[j]) throw input_error("duplicate vertex in simplex");
    }
  std::sort(v.begin(), v.end());
  return {std::move(v), inversions % 2 == 0 ? 1 : -1};
}

// Chain in a simplicial complex: canonical simplex -> coefficient, no zeros stored.
using SimplexChain = std::map<VertexList, Int>;

// d[v0..vk] = sum_i (-1)^i [v0..vi^..vk]; vertices have zero boundary.
inline SimplexChain simplex_boundary(const OrientedSimplex& s) {
  SimplexChain out;
  if (s.vertices.size() <= 1) return out;
  for (size_t i = 0; i < s.vertices.size(); ++i) {
    VertexList face;
    face.reserve(s.vertices.size() - 1);
    for (size_t j = 0; j < s.vertices.size(); ++j)
      if (j != i) face.push_back(s.vertices[j]);
    int c = (i % 2 == 0 ? 1 : -1) * s.sign;
    auto it = out.find(face);
    if (it == out.end())
      out.emplace(std::move(face), c);
    else if ((it->second += c) == 0)
      out.erase(it);
  }
  return out;
}

struct SimplicialComplex {
  std::string name;
  std::vector<int> vertices;                       // ascending labels
  std::vector<std::vector<VertexList>> simplices;  // per dimension, each list sorted

  int dim() const { return static_cast<int>(simplices.size()) - 1; }

  const std::vector<VertexList>& dim_cells(int d) const {
    static const std::vector<VertexList> empty;
    if (d < 0 || d > dim()) return empty;
    return simplices[d];
  }

  bool contains(const VertexList& s) const {
    int d = static_cast<int>(s.size()) - 1;
    if (d < 0 || d > dim()) return false;
    return std::binary_search(simplices[d].begin(), simplices[d].end(), s);
  }

  std::vector<VertexList> maximal_simplices() const {
    std::vector<VertexList> out;
    for (int d = 0; d <= dim(); ++d)
      for (const auto& s : simplices[d]) {
        bool is_face = false;
        for (int e = d + 1; e <= dim() && !is_face; ++e)
          for (const auto& t : simplices[e]) {
            if (std::includes(t.begin(), t.end(), s.begin(), s.end())) {
              is_face = true;
              break;
            }
          }
        if (!is_face) out.push_back(s);
      }
    return out;
  }

  static SimplicialComplex from_maximal(std::string name,
                                        const std::vector<VertexList>& maximal) {
    std::set<VertexList> closure;
    for (const auto& m : maximal) {
      VertexList s = canonicalize_simplex(m).vertices;
      size_t n = s.size();
      // all nonempty subsets
      for (unsigned mask = 1; mask < (1u << n); ++mask) {
        VertexList f;
        for (size_t i = 0; i < n; ++i)
          if (mask & (1u << i)) f.push_back(s[i]);
        closure.insert(std::move(f));
      }
    }
    SimplicialComplex K;
    K.name = std::move(name);
    for (const auto& s : closure) {
      int d = static_cast<int>(s.size()) - 1;
      if (d >= static_cast<int>(K.simplices.size())) K.simplices.resize(d + 1);
      K.simplices[d].push_back(s);
      if (d == 0) K.vertices.push_back(s[0]);
    }
    for (auto& lst : K.simplices) std::sort(lst.begin(), lst.end());
    std::sort(K.vertices.begin(), K.vertices.end());
    return K;
  }
};

// apexes * K: each apex is joined with every simplex of K; apexes are mutually
// non-adjacent. Apex labels must be disjoint from K's vertices.
inline SimplicialComplex join_complex(const std::vector<int>& apexes,
                                      const SimplicialComplex& K,
                                      std::string name = "") {
  for (int a : apexes)
    if (std::binary_search(K.vertices.begin(), K.vertices.end(), a))
      throw input_error("join apex collides with a vertex of K");
  std::vector<VertexList> maximal;
  auto maxi = K.maximal_simplices();
  for (int a : apexes) {
    if (maxi.empty()) maximal.push_back({a});
    for (const auto& s : maxi) {
      VertexList t = s;
      t.push_back(a);
      std::sort(t.begin(), t.end());
      maximal.push_back(std::move(t));
    }
  }
  if (name.empty()) name = "join*" + K.name;
  return SimplicialComplex::from_maximal(std::move(name), maximal);
}

// [3] * K with three fresh apexes labelled max+1, max+2, max+3
inline SimplicialComplex join3(const SimplicialComplex& K) {
  int base = K.vertices.empty() ? -1 : K.vertices.back();
  return join_complex({base + 1, base + 2, base + 3}, K, "[3]*" + K.name);
}

inline SimplicialComplex complete_graph(int n) {
  std::vector<VertexList> maximal;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) maximal.push_back({i, j});
  if (n == 1) maximal.push_back({0});
  return SimplicialComplex::from_maximal("K" + std::to_string(n), maximal);
}

inline SimplicialComplex complete_bipartite(int a, int b) {
  std::vector<VertexList> maximal;
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < b; ++j) maximal.push_back({i, a + j});
  return SimplicialComplex::from_maximal(
      "K" + std::to_string(a) + "_" + std::to_string(b), maximal);
}

// d-skeleton of the n-simplex (n+1 vertices)
inline SimplicialComplex skeleton(int d, int n) {
  if (d < 0 || d > n) throw input_error("skeleton: need 0 <= d <= n");
  std::vector<VertexList> maximal;
  std::vector<int> idx(d + 1);
  // all (d+1)-subsets of {0..n}
  for (int i = 0; i <= d; ++i) idx[i] = i;
  while (true) {
    maximal.emplace_back(idx.begin(), idx.end());
    int i = d;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j <= d; ++j) idx[j] = idx[j - 1] + 1;
  }
  return SimplicialComplex::from_maximal(
      "skel(" + std::to_string(d) + "," + std::to_string(n) + ")", maximal);
}

inline SimplicialComplex path_graph(int n) {
  std::vector<VertexList> maximal;
  for (int i = 0; i + 1 < n; ++i) maximal.push_back({i, i + 1});
  if (n == 1) maximal.push_back({0});
  return SimplicialComplex::from_maximal("P" + std::to_string(n), maximal);
}

inline SimplicialComplex cycle_graph(int n) {
  if (n < 3) throw input_error("cycle_graph: need n >= 3");
  std::vector<VertexList> maximal;
  for (int i = 0; i < n; ++i) {
    VertexList e{i, (i + 1) % n};
    std::sort(e.begin(), e.end());
    maximal.push_back(std::move(e));
  }
  return SimplicialComplex::from_maximal("C" + std::to_string(n), maximal);
}

// [3]*[3]*...*[3], k factors; k=1 gives three isolated vertices
inline SimplicialComplex join_power3(int k) {
  if (k < 1) throw input_error("join_power3: need k >= 1");
  SimplicialComplex C;
  C.name = "empty";
  for (int i = 0; i < k; ++i) C = join3(C);
  C.name = "join_power3(" + std::to_string(k) + ")";
  return C;
}

inline SimplicialComplex generate_corpus(const std::string& name,
                                         const std::vector<int>& params) {
  auto want = [&](size_t n) {
    if (params.size() != n)
      throw input_error("corpus generator '" + name + "' expects " +
                        std::to_string(n) + " parameter(s)");
  };
  if (name == "complete_graph") { want(1); return complete_graph(params[0]); }
  if (name == "complete_bipartite") { want(2); return complete_bipartite(params[0], params[1]); }
  if (name == "skeleton") { want(2); return skeleton(params[0], params[1]); }
  if (name == "join_power") { want(1); return join_power3(params[0]); }
  if (name == "path") { want(1); return path_graph(params[0]); }
  if (name == "cycle") { want(1); return cycle_graph(params[0]); }
  throw input_error("unknown corpus generator: " + name);
}

}  // namespace kampen
