#include "bst/gog.hpp"

#include <algorithm>
#include <deque>
#include <functional>

namespace bst {

VertexId GraphOfGroups::add_vertex(std::string name, GroupPtr group) {
    vertex_groups_.push_back(std::move(group));
    return graph_.add_vertex(std::move(name));
}

EdgeId GraphOfGroups::add_edge(VertexId from, VertexId to, std::string name, GroupPtr group, Homomorphism alpha,
                               Homomorphism omega) {
    edges_.push_back({std::move(group), std::move(alpha), std::move(omega)});
    return graph_.add_edge(from, to, std::move(name));
}

EdgeId GraphOfGroups::add_edge(VertexId from, VertexId to, std::string name, GroupPtr group,
                               const std::vector<Element>& alpha_images, const std::vector<Element>& omega_images) {
    Homomorphism a(group, vertex_groups_.at(from), alpha_images);
    Homomorphism o(group, vertex_groups_.at(to), omega_images);
    return add_edge(from, to, std::move(name), group, std::move(a), std::move(o));
}

const Homomorphism& GraphOfGroups::alpha(EdgeId e) const {
    const EdgeData& d = edges_.at(pair_of(e));
    return is_positive(e) ? d.alpha : d.omega;
}

const Homomorphism& GraphOfGroups::omega(EdgeId e) const {
    const EdgeData& d = edges_.at(pair_of(e));
    return is_positive(e) ? d.omega : d.alpha;
}

std::vector<GogViolation> validate_gog(const GraphOfGroups& a) {
    std::vector<GogViolation> out;
    const Graph& g = a.graph();
    if (a.basepoint && *a.basepoint >= g.num_vertices()) out.push_back({"basepoint", "unknown vertex"});
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        const std::string name = g.pair_name(p);
        for (int side = 0; side < 2; ++side) {
            const Homomorphism& h = side == 0 ? a.alpha(e) : a.omega(e);
            const char* label = side == 0 ? "alpha" : "omega";
            VertexId v = side == 0 ? g.origin(e) : g.target(e);
            if (h.domain() != a.edge_group(e)) {
                out.push_back({name + "." + label, "domain is not the edge group"});
                continue;
            }
            if (h.codomain() != a.vertex_group(v)) {
                out.push_back({name + "." + label, "codomain is not the group of vertex " + g.vertex_name(v)});
                continue;
            }
            std::string why = h.check_monomorphism();
            if (!why.empty()) out.push_back({name + "." + label, why});
        }
    }
    return out;
}

APath trivial_apath(const GraphOfGroups& a, VertexId v) {
    return APath{v, {a.vertex_group(v)->identity()}, {}};
}

APath element_apath(VertexId v, Element x) { return APath{v, {std::move(x)}, {}}; }

VertexId apath_end(const GraphOfGroups& a, const APath& p) {
    return p.edges.empty() ? p.start : a.graph().target(p.edges.back());
}

std::string check_apath(const GraphOfGroups& a, const APath& p) {
    const Graph& g = a.graph();
    if (p.start >= g.num_vertices()) return "unknown start vertex";
    if (p.elems.size() != p.edges.size() + 1) return "element count must be edge count + 1";
    VertexId v = p.start;
    for (std::size_t i = 0; i <= p.edges.size(); ++i) {
        if (!a.vertex_group(v)->is_valid(p.elems[i]))
            return "element " + std::to_string(i) + " is not in the group of vertex " + g.vertex_name(v);
        if (i == p.edges.size()) break;
        EdgeId e = p.edges[i];
        if (e >= g.num_halves()) return "unknown edge";
        if (g.origin(e) != v) return "edge " + g.edge_name(e) + " does not start at " + g.vertex_name(v);
        v = g.target(e);
    }
    return {};
}

APath concat(const GraphOfGroups& a, const APath& p, const APath& q) {
    if (apath_end(a, p) != q.start) throw ContractError("concat: paths are not composable");
    APath r = p;
    const GroupPtr& g = a.vertex_group(q.start);
    r.elems.back() = g->multiply(r.elems.back(), q.elems.front());
    r.elems.insert(r.elems.end(), q.elems.begin() + 1, q.elems.end());
    r.edges.insert(r.edges.end(), q.edges.begin(), q.edges.end());
    return r;
}

APath inverse(const GraphOfGroups& a, const APath& p) {
    APath r;
    r.start = apath_end(a, p);
    VertexId v = r.start;
    for (std::size_t i = p.edges.size() + 1; i-- > 0;) {
        r.elems.push_back(a.vertex_group(v)->invert(p.elems[i]));
        if (i == 0) break;
        EdgeId e = inverse(p.edges[i - 1]);
        r.edges.push_back(e);
        v = a.graph().target(e);
    }
    return r;
}

APath reduce(const GraphOfGroups& a, const APath& p) {
    const Graph& g = a.graph();
    APath out{p.start, {p.elems.front()}, {}};
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        EdgeId e = p.edges[i];
        const Element& next = p.elems[i + 1];
        if (!out.edges.empty() && out.edges.back() == inverse(e)) {
            EdgeId f = out.edges.back();
            auto x = a.omega(f).preimage(out.elems.back());
            if (x) {
                out.edges.pop_back();
                out.elems.pop_back();
                const GroupPtr& grp = a.vertex_group(g.origin(f));
                out.elems.back() = grp->multiply(grp->multiply(out.elems.back(), a.alpha(f).apply(*x)), next);
                continue;
            }
        }
        out.edges.push_back(e);
        out.elems.push_back(next);
    }
    return out;
}

bool is_reduced(const GraphOfGroups& a, const APath& p) {
    for (std::size_t i = 0; i + 1 < p.edges.size(); ++i)
        if (p.edges[i + 1] == inverse(p.edges[i]) && a.omega(p.edges[i]).preimage(p.elems[i + 1])) return false;
    return true;
}

bool apaths_equal(const GraphOfGroups& a, const APath& p, const APath& q) {
    if (p.start != q.start || apath_end(a, p) != apath_end(a, q))
        throw ContractError("apaths_equal: paths are not coterminal");
    APath r = reduce(a, concat(a, p, inverse(a, q)));
    return r.edges.empty() && a.vertex_group(r.start)->is_identity(r.elems.front());
}

bool is_cyclically_reduced(const GraphOfGroups& a, const APath& p) {
    if (p.edges.empty() || apath_end(a, p) != p.start) return false;
    return is_reduced(a, concat(a, p, p));
}

CyclicReduction cyclically_reduce(const GraphOfGroups& a, const APath& p) {
    if (apath_end(a, p) != p.start) throw ContractError("cyclically_reduce: path is not closed");
    CyclicReduction r{trivial_apath(a, p.start), reduce(a, p)};
    while (r.core.length() > 0 && !is_reduced(a, concat(a, r.core, r.core))) {
        APath q{r.core.start, {r.core.elems.front(), a.vertex_group(a.graph().target(r.core.edges.front()))->identity()},
                {r.core.edges.front()}};
        r.core = reduce(a, concat(a, concat(a, inverse(a, q), r.core), q));
        r.conjugator = concat(a, r.conjugator, q);
    }
    return r;
}

std::string format_apath(const GraphOfGroups& a, const APath& p) {
    const Graph& g = a.graph();
    std::string s = "(";
    VertexId v = p.start;
    for (std::size_t i = 0; i < p.elems.size(); ++i) {
        if (i) {
            EdgeId e = p.edges[i - 1];
            s += ", " + g.edge_name(e) + ", ";
            v = g.target(e);
        }
        s += a.vertex_group(v)->format(p.elems[i]);
    }
    return s + ")";
}

SubGog restrict_gog(const GraphOfGroups& a, const std::vector<bool>& keep_vertex, const std::vector<bool>& keep_pair) {
    const Graph& g = a.graph();
    SubGog out;
    std::vector<VertexId> id(g.num_vertices(), static_cast<VertexId>(-1));
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        if (!keep_vertex[v]) continue;
        id[v] = out.gog.add_vertex(g.vertex_name(v), a.vertex_group(v));
        out.vertex_origin.push_back(v);
    }
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        if (!keep_pair[p]) continue;
        EdgeId e = positive_half(p);
        VertexId o = g.origin(e), t = g.target(e);
        if (!keep_vertex[o] || !keep_vertex[t]) throw ContractError("restrict_gog: pair endpoint not kept");
        out.gog.add_edge(id[o], id[t], g.pair_name(p), a.edge_group(e), a.alpha(e), a.omega(e));
        out.pair_origin.push_back(p);
    }
    if (a.basepoint && keep_vertex[*a.basepoint]) out.gog.basepoint = id[*a.basepoint];
    return out;
}

namespace {

// Turn graph on halves: e → f when t(e) = o(f) and f ≠ e⁻¹ unless ω_e is not onto.
std::vector<std::vector<EdgeId>> turn_graph(const GraphOfGroups& a) {
    const Graph& g = a.graph();
    const std::size_t n = g.num_halves();
    std::vector<bool> backtrack(n);
    for (EdgeId e = 0; e < n; ++e) backtrack[e] = !a.omega(e).is_surjective();
    std::vector<std::vector<EdgeId>> next(n);
    for (EdgeId e = 0; e < n; ++e)
        for (EdgeId f : g.star(g.target(e)))
            if (f != inverse(e) || backtrack[e]) next[e].push_back(f);
    return next;
}

SubGog from_halves(const GraphOfGroups& a, const std::vector<bool>& half, std::optional<VertexId> always) {
    const Graph& g = a.graph();
    std::vector<bool> kv(g.num_vertices(), false), kp(g.num_pairs(), false);
    if (always) kv[*always] = true;
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        if (half[e] && half[inverse(e)]) {
            kp[p] = true;
            kv[g.origin(e)] = kv[g.target(e)] = true;
        }
    }
    return restrict_gog(a, kv, kp);
}

}  // namespace

SubGog gog_core_at(const GraphOfGroups& a, VertexId u) {
    const Graph& g = a.graph();
    if (u >= g.num_vertices()) throw std::out_of_range("gog_core_at: unknown vertex");
    auto next = turn_graph(a);
    const std::size_t n = g.num_halves();
    std::vector<std::vector<EdgeId>> prev(n);
    for (EdgeId e = 0; e < n; ++e)
        for (EdgeId f : next[e]) prev[f].push_back(e);
    auto sweep = [&](const std::vector<std::vector<EdgeId>>& adj, std::vector<bool>& seen, std::deque<EdgeId> q) {
        for (EdgeId e : q) seen[e] = true;
        while (!q.empty()) {
            EdgeId e = q.front();
            q.pop_front();
            for (EdgeId f : adj[e])
                if (!seen[f]) {
                    seen[f] = true;
                    q.push_back(f);
                }
        }
    };
    std::vector<bool> fwd(n, false), bwd(n, false);
    std::deque<EdgeId> out_u, in_u;
    for (EdgeId e : g.star(u)) {
        out_u.push_back(e);
        in_u.push_back(inverse(e));
    }
    sweep(next, fwd, out_u);
    sweep(prev, bwd, in_u);
    std::vector<bool> half(n);
    for (EdgeId e = 0; e < n; ++e) half[e] = fwd[e] && bwd[e];
    return from_halves(a, half, u);
}

SubGog gog_core(const GraphOfGroups& a) {
    auto next = turn_graph(a);
    const std::size_t n = next.size();
    // Tarjan's strongly connected components; keep halves on a directed cycle.
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on(n, false), half(n, false);
    std::vector<EdgeId> stack;
    int counter = 0;
    std::function<void(EdgeId)> visit = [&](EdgeId e) {
        index[e] = low[e] = counter++;
        stack.push_back(e);
        on[e] = true;
        for (EdgeId f : next[e]) {
            if (index[f] < 0) {
                visit(f);
                low[e] = std::min(low[e], low[f]);
            } else if (on[f]) {
                low[e] = std::min(low[e], index[f]);
            }
        }
        if (low[e] != index[e]) return;
        std::vector<EdgeId> comp;
        EdgeId f;
        do {
            f = stack.back();
            stack.pop_back();
            on[f] = false;
            comp.push_back(f);
        } while (f != e);
        bool cyclic = comp.size() > 1 || std::find(next[e].begin(), next[e].end(), e) != next[e].end();
        if (cyclic)
            for (EdgeId h : comp) half[h] = true;
    };
    for (EdgeId e = 0; e < n; ++e)
        if (index[e] < 0) visit(e);
    return from_halves(a, half, std::nullopt);
}

std::optional<EdgeId> find_collapsible(const GraphOfGroups& a) {
    const Graph& g = a.graph();
    for (EdgeId e = 0; e < g.num_halves(); ++e)
        if (!g.is_loop(e) && a.alpha(e).is_surjective()) return e;
    return std::nullopt;
}

APath ReducedGog::transport(const APath& p0) const {
    APath p = p0;
    for (const Collapse& c : steps) {
        auto carry = [&](VertexId v, const Element& x) { return v == c.removed ? c.carry.apply(x) : x; };
        APath out{c.vertex_map[p.start], {carry(p.start, p.elems.front())}, {}};
        for (std::size_t i = 0; i < p.edges.size(); ++i) {
            EdgeId e = p.edges[i];
            Element x = carry(c.old_target[e], p.elems[i + 1]);
            if (c.half_map[e] == kNoEdge) {
                out.elems.back() = c.carry.codomain()->multiply(out.elems.back(), x);
            } else {
                out.edges.push_back(c.half_map[e]);
                out.elems.push_back(std::move(x));
            }
        }
        p = std::move(out);
    }
    return p;
}

ReducedGog reduce_gog(const GraphOfGroups& input, VertexId basepoint) {
    ReducedGog r;
    r.gog = input;
    r.basepoint = basepoint;
    while (auto e0 = find_collapsible(r.gog)) {
        const GraphOfGroups& a = r.gog;
        const Graph& g = a.graph();
        Collapse c;
        c.edge = *e0;
        c.removed = g.origin(*e0);
        c.into = g.target(*e0);
        const GroupPtr& from = a.vertex_group(c.removed);
        std::vector<Element> imgs;
        for (const Element& x : from->generators()) imgs.push_back(a.omega(*e0).apply(*a.alpha(*e0).preimage(x)));
        c.carry = Homomorphism(from, a.vertex_group(c.into), imgs);

        GraphOfGroups next;
        c.vertex_map.assign(g.num_vertices(), 0);
        for (VertexId v = 0; v < g.num_vertices(); ++v)
            if (v != c.removed) c.vertex_map[v] = next.add_vertex(g.vertex_name(v), a.vertex_group(v));
        c.vertex_map[c.removed] = c.vertex_map[c.into];
        c.half_map.assign(g.num_halves(), kNoEdge);
        for (EdgeId e = 0; e < g.num_halves(); ++e) c.old_target.push_back(g.target(e));
        for (PairId p = 0; p < g.num_pairs(); ++p) {
            if (p == pair_of(*e0)) continue;
            EdgeId e = positive_half(p);
            Homomorphism al = a.alpha(e), om = a.omega(e);
            if (g.origin(e) == c.removed) al = compose(c.carry, al);
            if (g.target(e) == c.removed) om = compose(c.carry, om);
            EdgeId ne = next.add_edge(c.vertex_map[g.origin(e)], c.vertex_map[g.target(e)], g.pair_name(p),
                                      a.edge_group(e), al, om);
            c.half_map[e] = ne;
            c.half_map[inverse(e)] = inverse(ne);
        }
        if (a.basepoint) next.basepoint = c.vertex_map[*a.basepoint];
        r.basepoint = c.vertex_map[r.basepoint];
        r.steps.push_back(std::move(c));
        r.gog = std::move(next);
    }
    return r;
}

}  // namespace bst
