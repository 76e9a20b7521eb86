#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bst {

using VertexId = std::uint32_t;
// Edge halves: pair p has positive half 2p and negative half 2p+1.
using EdgeId = std::uint32_t;
using PairId = std::uint32_t;

inline constexpr EdgeId inverse(EdgeId e) { return e ^ 1u; }
inline constexpr PairId pair_of(EdgeId e) { return e >> 1; }
inline constexpr bool is_positive(EdgeId e) { return (e & 1u) == 0; }
inline constexpr EdgeId positive_half(PairId p) { return p << 1; }

// Graph with an implicit fixpoint-free involution on edges.
class Graph {
public:
    VertexId add_vertex(std::string name = {});
    // Returns the positive half of the new pair.
    EdgeId add_edge(VertexId from, VertexId to, std::string name = {});

    std::size_t num_vertices() const { return vertex_names_.size(); }
    std::size_t num_pairs() const { return pairs_.size(); }
    std::size_t num_halves() const { return 2 * pairs_.size(); }

    VertexId origin(EdgeId e) const;
    VertexId target(EdgeId e) const;
    // Halves with origin v, in increasing id order.
    const std::vector<EdgeId>& star(VertexId v) const { return star_[v]; }
    std::size_t valence(VertexId v) const { return star_[v].size(); }
    bool is_loop(EdgeId e) const { return origin(e) == target(e); }

    const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }
    // Negative halves are named "<name>^-1".
    std::string edge_name(EdgeId e) const;
    const std::string& pair_name(PairId p) const { return pairs_[p].name; }
    std::optional<VertexId> find_vertex(const std::string& name) const;
    // Accepts "<name>" and "<name>^-1".
    std::optional<EdgeId> find_edge(const std::string& name) const;

    // Connected component index per vertex; returns the number of components.
    std::size_t components(std::vector<std::size_t>& comp) const;

private:
    struct Pair {
        VertexId from, to;
        std::string name;
    };
    std::vector<std::string> vertex_names_;
    std::vector<Pair> pairs_;
    std::vector<std::vector<EdgeId>> star_;
};

// Explicit origin/target/inverse tables, used to validate externally built graphs.
struct RawGraph {
    std::size_t num_vertices = 0;
    std::vector<VertexId> origin, target;
    std::vector<std::size_t> inverse;
};

struct GraphViolation {
    std::size_t edge;
    std::string reason;
};

std::vector<GraphViolation> validate_graph(const RawGraph& g);
// Requires validate_graph(g) to be empty.
Graph graph_from_raw(const RawGraph& g);
RawGraph to_raw(const Graph& g);

struct GraphPath {
    VertexId base = 0;
    std::vector<EdgeId> edges;
};

bool is_path(const Graph& g, const GraphPath& p);
VertexId path_end(const Graph& g, const GraphPath& p);

// Subgraph together with the ids of its vertices and pairs in the parent graph.
struct Subgraph {
    Graph graph;
    std::vector<VertexId> vertex_origin;
    std::vector<PairId> pair_origin;
};

Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep_vertex,
                          const std::vector<bool>& keep_pair);

Subgraph core(const Graph& g);
// Throws std::out_of_range for an unknown vertex.
Subgraph core_at(const Graph& g, VertexId u);

struct GraphMorphism {
    std::vector<VertexId> vertex_map;
    std::vector<EdgeId> edge_map;  // per half
};

bool is_graph_morphism(const Graph& src, const Graph& dst, const GraphMorphism& m);

struct FiberProduct {
    Graph graph;
    std::vector<std::pair<VertexId, VertexId>> vertex_pairs;
    std::vector<std::pair<EdgeId, EdgeId>> edge_pairs;  // per half
    GraphMorphism proj1, proj2;
};

FiberProduct fiber_product(const Graph& g1, const Graph& g2, const GraphMorphism& f1,
                           const GraphMorphism& f2);

// One line per edge pair, positive orientation only.
std::string to_dot(const Graph& g, const std::string& title = "G");

}  // namespace bst
