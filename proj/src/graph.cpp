#include "bst/graph.hpp"

#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace bst {

VertexId Graph::add_vertex(std::string name) {
    if (name.empty()) name = "v" + std::to_string(vertex_names_.size());
    vertex_names_.push_back(std::move(name));
    star_.emplace_back();
    return static_cast<VertexId>(vertex_names_.size() - 1);
}

EdgeId Graph::add_edge(VertexId from, VertexId to, std::string name) {
    if (from >= num_vertices() || to >= num_vertices())
        throw std::out_of_range("add_edge: unknown vertex");
    if (name.empty()) name = "e" + std::to_string(pairs_.size());
    pairs_.push_back({from, to, std::move(name)});
    EdgeId e = positive_half(static_cast<PairId>(pairs_.size() - 1));
    star_[from].push_back(e);
    star_[to].push_back(inverse(e));
    return e;
}

VertexId Graph::origin(EdgeId e) const {
    const Pair& p = pairs_.at(pair_of(e));
    return is_positive(e) ? p.from : p.to;
}

VertexId Graph::target(EdgeId e) const { return origin(inverse(e)); }

std::string Graph::edge_name(EdgeId e) const {
    const std::string& n = pairs_.at(pair_of(e)).name;
    return is_positive(e) ? n : n + "^-1";
}

std::optional<VertexId> Graph::find_vertex(const std::string& name) const {
    for (VertexId v = 0; v < vertex_names_.size(); ++v)
        if (vertex_names_[v] == name) return v;
    return std::nullopt;
}

std::optional<EdgeId> Graph::find_edge(const std::string& name) const {
    std::string base = name;
    bool inv = false;
    const std::string suffix = "^-1";
    if (base.size() > suffix.size() &&
        base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        base.resize(base.size() - suffix.size());
        inv = true;
    }
    for (PairId p = 0; p < pairs_.size(); ++p)
        if (pairs_[p].name == base) return inv ? inverse(positive_half(p)) : positive_half(p);
    return std::nullopt;
}

std::size_t Graph::components(std::vector<std::size_t>& comp) const {
    const std::size_t none = static_cast<std::size_t>(-1);
    comp.assign(num_vertices(), none);
    std::size_t count = 0;
    for (VertexId s = 0; s < num_vertices(); ++s) {
        if (comp[s] != none) continue;
        std::deque<VertexId> queue{s};
        comp[s] = count;
        while (!queue.empty()) {
            VertexId v = queue.front();
            queue.pop_front();
            for (EdgeId e : star_[v]) {
                VertexId w = target(e);
                if (comp[w] == none) {
                    comp[w] = count;
                    queue.push_back(w);
                }
            }
        }
        ++count;
    }
    return count;
}

std::vector<GraphViolation> validate_graph(const RawGraph& g) {
    std::vector<GraphViolation> out;
    const std::size_t m = g.origin.size();
    if (g.target.size() != m || g.inverse.size() != m) {
        out.push_back({0, "origin/target/inverse tables differ in length"});
        return out;
    }
    for (std::size_t e = 0; e < m; ++e) {
        if (g.origin[e] >= g.num_vertices || g.target[e] >= g.num_vertices) {
            out.push_back({e, "endpoint out of range"});
            continue;
        }
        std::size_t i = g.inverse[e];
        if (i >= m) {
            out.push_back({e, "inverse out of range"});
            continue;
        }
        if (i == e) out.push_back({e, "inverse(e) = e"});
        else if (g.inverse[i] != e) out.push_back({e, "inverse(inverse(e)) != e"});
        else if (g.target[i] != g.origin[e]) out.push_back({e, "target(inverse(e)) != origin(e)"});
    }
    return out;
}

Graph graph_from_raw(const RawGraph& g) {
    if (!validate_graph(g).empty()) throw std::invalid_argument("graph_from_raw: invalid graph");
    Graph out;
    for (std::size_t v = 0; v < g.num_vertices; ++v) out.add_vertex();
    for (std::size_t e = 0; e < g.origin.size(); ++e)
        if (e < g.inverse[e]) out.add_edge(g.origin[e], g.target[e]);
    return out;
}

RawGraph to_raw(const Graph& g) {
    RawGraph r;
    r.num_vertices = g.num_vertices();
    for (EdgeId e = 0; e < g.num_halves(); ++e) {
        r.origin.push_back(g.origin(e));
        r.target.push_back(g.target(e));
        r.inverse.push_back(inverse(e));
    }
    return r;
}

bool is_path(const Graph& g, const GraphPath& p) {
    if (p.base >= g.num_vertices()) return false;
    VertexId at = p.base;
    for (EdgeId e : p.edges) {
        if (e >= g.num_halves() || g.origin(e) != at) return false;
        at = g.target(e);
    }
    return true;
}

VertexId path_end(const Graph& g, const GraphPath& p) {
    return p.edges.empty() ? p.base : g.target(p.edges.back());
}

Subgraph induced_subgraph(const Graph& g, const std::vector<bool>& keep_vertex,
                          const std::vector<bool>& keep_pair) {
    Subgraph s;
    std::vector<VertexId> renum(g.num_vertices(), static_cast<VertexId>(-1));
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!keep_vertex[v]) continue;
        renum[v] = s.graph.add_vertex(g.vertex_name(v));
        s.vertex_origin.push_back(v);
    }
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        if (!keep_pair[p]) continue;
        EdgeId e = positive_half(p);
        VertexId a = g.origin(e), b = g.target(e);
        if (!keep_vertex[a] || !keep_vertex[b])
            throw std::logic_error("induced_subgraph: kept edge has a dropped endpoint");
        s.graph.add_edge(renum[a], renum[b], g.pair_name(p));
        s.pair_origin.push_back(p);
    }
    return s;
}

namespace {

// Removes vertices of valence <= 1 (other than `protect`) until none remain.
void prune(const Graph& g, std::vector<bool>& keep_vertex, std::vector<bool>& keep_pair,
           std::optional<VertexId> protect) {
    std::vector<std::size_t> val(g.num_vertices());
    for (VertexId v = 0; v < g.num_vertices(); ++v) val[v] = g.valence(v);
    std::deque<VertexId> queue;
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (val[v] <= 1 && v != protect) queue.push_back(v);
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        if (!keep_vertex[v]) continue;
        keep_vertex[v] = false;
        for (EdgeId e : g.star(v)) {
            if (!keep_pair[pair_of(e)]) continue;
            keep_pair[pair_of(e)] = false;
            VertexId w = g.target(e);
            if (w == v) continue;
            if (--val[w] <= 1 && keep_vertex[w] && w != protect) queue.push_back(w);
        }
    }
}

}  // namespace

Subgraph core(const Graph& g) {
    std::vector<bool> kv(g.num_vertices(), true), kp(g.num_pairs(), true);
    prune(g, kv, kp, std::nullopt);
    return induced_subgraph(g, kv, kp);
}

Subgraph core_at(const Graph& g, VertexId u) {
    if (u >= g.num_vertices()) throw std::out_of_range("core_at: unknown vertex");
    std::vector<bool> kv(g.num_vertices(), true), kp(g.num_pairs(), true);
    prune(g, kv, kp, u);
    // Keep only the component of u.
    std::vector<bool> reach(g.num_vertices(), false);
    std::deque<VertexId> queue{u};
    reach[u] = true;
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        for (EdgeId e : g.star(v)) {
            if (!kp[pair_of(e)]) continue;
            VertexId w = g.target(e);
            if (!reach[w]) {
                reach[w] = true;
                queue.push_back(w);
            }
        }
    }
    for (VertexId v = 0; v < g.num_vertices(); ++v) kv[v] = kv[v] && reach[v];
    for (PairId p = 0; p < g.num_pairs(); ++p) kp[p] = kp[p] && reach[g.origin(positive_half(p))];
    return induced_subgraph(g, kv, kp);
}

bool is_graph_morphism(const Graph& src, const Graph& dst, const GraphMorphism& m) {
    if (m.vertex_map.size() != src.num_vertices() || m.edge_map.size() != src.num_halves())
        return false;
    for (VertexId v : m.vertex_map)
        if (v >= dst.num_vertices()) return false;
    for (EdgeId e = 0; e < src.num_halves(); ++e) {
        EdgeId f = m.edge_map[e];
        if (f >= dst.num_halves()) return false;
        if (m.edge_map[inverse(e)] != inverse(f)) return false;
        if (dst.origin(f) != m.vertex_map[src.origin(e)]) return false;
    }
    return true;
}

FiberProduct fiber_product(const Graph& g1, const Graph& g2, const GraphMorphism& f1,
                           const GraphMorphism& f2) {
    FiberProduct fp;
    std::map<std::pair<VertexId, VertexId>, VertexId> index;
    for (VertexId v = 0; v < g1.num_vertices(); ++v)
        for (VertexId w = 0; w < g2.num_vertices(); ++w)
            if (f1.vertex_map[v] == f2.vertex_map[w]) {
                index[{v, w}] = fp.graph.add_vertex("(" + g1.vertex_name(v) + "," + g2.vertex_name(w) + ")");
                fp.vertex_pairs.emplace_back(v, w);
                fp.proj1.vertex_map.push_back(v);
                fp.proj2.vertex_map.push_back(w);
            }
    for (PairId p = 0; p < g1.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        for (EdgeId e2 = 0; e2 < g2.num_halves(); ++e2) {
            if (f1.edge_map[e] != f2.edge_map[e2]) continue;
            VertexId a = index.at({g1.origin(e), g2.origin(e2)});
            VertexId b = index.at({g1.target(e), g2.target(e2)});
            fp.graph.add_edge(a, b, "(" + g1.edge_name(e) + "," + g2.edge_name(e2) + ")");
            fp.edge_pairs.emplace_back(e, e2);
            fp.edge_pairs.emplace_back(inverse(e), inverse(e2));
            fp.proj1.edge_map.push_back(e);
            fp.proj1.edge_map.push_back(inverse(e));
            fp.proj2.edge_map.push_back(e2);
            fp.proj2.edge_map.push_back(inverse(e2));
        }
    }
    return fp;
}

std::string to_dot(const Graph& g, const std::string& title) {
    std::ostringstream out;
    out << "digraph \"" << title << "\" {\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        out << "  n" << v << " [label=\"" << g.vertex_name(v) << "\"];\n";
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        out << "  n" << g.origin(e) << " -> n" << g.target(e) << " [label=\"" << g.pair_name(p)
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

}  // namespace bst
