#pragma once

#include "gbfrft/linalg.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace gbfrft {

/// A factor graph on n vertices. adjacency(i, j) holds the weight of the
/// edge j → i; zero means no edge.
struct Graph {
  int n = 0;
  MatrixXr adjacency;
  bool directed = false;
  bool weighted = false;
  std::string label;
  std::uint64_t seed = 0;
};

/// Cartesian product G1 □ G2. Vertex (i1, i2) has index i1 + N1·i2, which
/// matches column-stacking of an N1×N2 signal, so the adjacency is
/// A2 ⊗ I_{N1} + I_{N2} ⊗ A1.
struct ProductGraph {
  Graph factor1;
  Graph factor2;
  MatrixXr adjacency;
  bool directed = false;
  bool weighted = false;

  int size() const { return factor1.n * factor2.n; }
};

enum class GraphKind { Path, Cycle, Fan, Star, Complete };

GraphKind parse_graph_kind(std::string_view name);
std::string_view graph_kind_name(GraphKind kind);

/// Throws InvalidArgument when an invariant of Graph does not hold.
void validate(const Graph& g);

/// Wraps an adjacency matrix; directed/weighted flags are inferred.
Graph make_graph(const MatrixXr& adjacency, std::string label = "custom");

Graph make_named_graph(GraphKind kind, int n, bool directed = false, bool weighted = false,
                       std::uint64_t seed = 0);

/// Undirected, unweighted k-NN graph over the rows of `coords`, symmetrized
/// by union. Ties go to the lower vertex index.
Graph make_knn_graph(const MatrixXr& coords, int k);

ProductGraph cartesian_product(const Graph& g1, const Graph& g2);

/// Undirected graphs count each {i, j} once; directed graphs count arcs.
long edge_count(const Graph& g);
long edge_count(const ProductGraph& pg);

}  // namespace gbfrft
