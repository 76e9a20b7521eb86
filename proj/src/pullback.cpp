#include "bst/pullback.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

#include "bst/subgroup_group.hpp"

namespace bst {

namespace {

std::vector<std::optional<GraphPath>> bfs_tree(const Graph& g, VertexId root) {
    std::vector<std::optional<GraphPath>> out(g.num_vertices());
    out[root] = GraphPath{root, {}};
    std::deque<VertexId> q{root};
    while (!q.empty()) {
        VertexId v = q.front();
        q.pop_front();
        for (EdgeId e : g.star(v)) {
            VertexId t = g.target(e);
            if (out[t]) continue;
            GraphPath p = *out[v];
            p.edges.push_back(e);
            out[t] = p;
            q.push_back(t);
        }
    }
    return out;
}

APath path_with_identities(const GraphOfGroups& g, const GraphPath& p) {
    APath out{p.base, {}, p.edges};
    VertexId v = p.base;
    out.elems.push_back(g.vertex_group(v)->identity());
    for (EdgeId e : p.edges) {
        v = g.graph().target(e);
        out.elems.push_back(g.vertex_group(v)->identity());
    }
    return out;
}

Element mul3(const Group& g, const Element& a, const Element& b, const Element& c) {
    return g.multiply(g.multiply(a, b), c);
}

}  // namespace

std::size_t AProductFragment::num_explored() const {
    std::size_t n = 0;
    for (bool b : explored) n += b;
    return n;
}

std::size_t AProductFragment::num_frontier() const { return vertices.size() - num_explored(); }

APath AProductFragment::component_label(std::size_t x) const {
    const GraphOfGroups& a = *mb_.target;
    const ProductVertex& pv = vertices.at(x);
    if (!tree_b_[pv.v] || !tree_c_[pv.w]) throw ContractError("label: source vertex not reachable from its basepoint");
    APath pb = push_apath(mb_, path_with_identities(*mb_.source, *tree_b_[pv.v]));
    APath pc = push_apath(mc_, path_with_identities(*mc_.source, *tree_c_[pv.w]));
    VertexId u = mb_.vertex_map[pv.v];
    return concat(a, concat(a, pb, element_apath(u, pv.witness)), inverse(a, pc));
}

std::pair<APath, APath> AProductFragment::label_link(std::size_t i) const {
    const GraphOfGroups& a = *mb_.target;
    const ProductEdge& h = edges.at(i);
    const ProductVertex& xo = vertices[h.from];
    const ProductVertex& xt = vertices[h.to];
    VertexId u = mb_.vertex_map[xo.v], u2 = mb_.vertex_map[xt.v];
    const Group& gu2 = *a.vertex_group(u2);
    APath pbo = push_apath(mb_, path_with_identities(*mb_.source, *tree_b_[xo.v]));
    APath pbt = push_apath(mb_, path_with_identities(*mb_.source, *tree_b_[xt.v]));
    APath pco = push_apath(mc_, path_with_identities(*mc_.source, *tree_c_[xo.w]));
    APath pct = push_apath(mc_, path_with_identities(*mc_.source, *tree_c_[xt.w]));
    APath edge_b = push_apath(mb_, path_with_identities(*mb_.source, GraphPath{xo.v, {h.f}}));
    APath edge_c = push_apath(mc_, path_with_identities(*mc_.source, GraphPath{xo.w, {h.g}}));
    APath beta = concat(a, pbo, element_apath(u, h.b0));
    beta = concat(a, beta, edge_b);
    beta = concat(a, beta, element_apath(u2, gu2.invert(h.b1)));
    beta = concat(a, beta, inverse(a, pbt));
    APath gamma = concat(a, pct, element_apath(u2, gu2.invert(h.c1)));
    gamma = concat(a, gamma, inverse(a, edge_c));
    gamma = concat(a, gamma, element_apath(u, h.c0));
    gamma = concat(a, gamma, inverse(a, pco));
    return {reduce(a, beta), reduce(a, gamma)};
}

void AProductFragment::finish() {
    const GraphOfGroups& a = *mb_.target;
    d_ = std::make_shared<GraphOfGroups>();
    for (GoGMorphism* m : {&rho_a_, &rho_b_, &rho_c_}) *m = GoGMorphism{};
    rho_a_.target = mb_.target;
    rho_b_.target = mb_.source;
    rho_c_.target = mc_.source;
    std::vector<std::shared_ptr<const SubgroupGroup>> dv;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const ProductVertex& x = vertices[i];
        VertexId u = mb_.vertex_map[x.v];
        const GroupPtr& au = a.vertex_group(u);
        auto grp = make_subgroup_group(au, vertex_groups[i]);
        dv.push_back(grp);
        d_->add_vertex("x" + std::to_string(i), grp);
        std::vector<Element> to_b, to_c;
        for (const Element& d : grp->generators()) {
            to_b.push_back(mb_.mu_vertex[x.v].preimage(mul3(*au, x.witness, d, au->invert(x.witness))).value());
            to_c.push_back(mc_.mu_vertex[x.w].preimage(d).value());
        }
        rho_a_.vertex_map.push_back(u);
        rho_a_.mu_vertex.push_back(grp->inclusion(grp));
        rho_b_.vertex_map.push_back(x.v);
        rho_b_.mu_vertex.emplace_back(grp, mb_.source->vertex_group(x.v), to_b);
        rho_c_.vertex_map.push_back(x.w);
        rho_c_.mu_vertex.emplace_back(grp, mc_.source->vertex_group(x.w), to_c);
    }
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const ProductEdge& h = edges[i];
        EdgeId e = mb_.edge_map[h.f];
        const GroupPtr& ae = a.edge_group(e);
        const Group& go = *a.vertex_group(a.graph().origin(e));
        const Group& gt = *a.vertex_group(a.graph().target(e));
        auto grp = make_subgroup_group(ae, edge_groups[i]);
        Element ha = go.multiply(go.invert(h.c0), mc_.twist_alpha(h.g));
        Element hw = gt.multiply(gt.invert(h.c1), mc_.twist_omega(h.g));
        std::vector<Element> ai, oi, to_b, to_c;
        for (const Element& d : grp->generators()) {
            ai.push_back(mul3(go, ha, a.alpha(e).apply(d), go.invert(ha)));
            oi.push_back(mul3(gt, hw, a.omega(e).apply(d), gt.invert(hw)));
            to_b.push_back(mb_.mu_edge[pair_of(h.f)].preimage(mul3(*ae, h.witness, d, ae->invert(h.witness))).value());
            to_c.push_back(mc_.mu_edge[pair_of(h.g)].preimage(d).value());
        }
        d_->add_edge(static_cast<VertexId>(h.from), static_cast<VertexId>(h.to), "h" + std::to_string(i), grp, ai, oi);
        rho_a_.edge_map.push_back(e);
        rho_a_.edge_map.push_back(inverse(e));
        rho_a_.mu_edge.push_back(grp->inclusion(grp));
        rho_a_.twist_alpha_pos.push_back(ha);
        rho_a_.twist_omega_pos.push_back(hw);
        rho_b_.edge_map.push_back(h.f);
        rho_b_.edge_map.push_back(inverse(h.f));
        rho_b_.mu_edge.emplace_back(grp, mb_.source->edge_group(h.f), to_b);
        rho_b_.twist_alpha_pos.push_back(mb_.mu_vertex[vertices[h.from].v].preimage(h.b0).value());
        rho_b_.twist_omega_pos.push_back(mb_.mu_vertex[vertices[h.to].v].preimage(h.b1).value());
        rho_c_.edge_map.push_back(h.g);
        rho_c_.edge_map.push_back(inverse(h.g));
        rho_c_.mu_edge.emplace_back(grp, mc_.source->edge_group(h.g), to_c);
        const Group& cgo = *a.vertex_group(mc_.vertex_map[vertices[h.from].w]);
        const Group& cgt = *a.vertex_group(mc_.vertex_map[vertices[h.to].w]);
        rho_c_.twist_alpha_pos.push_back(mc_.mu_vertex[vertices[h.from].w].preimage(cgo.invert(h.c0)).value());
        rho_c_.twist_omega_pos.push_back(mc_.mu_vertex[vertices[h.to].w].preimage(cgt.invert(h.c1)).value());
    }
    d_->basepoint = 0;
    for (GoGMorphism* m : {&rho_a_, &rho_b_, &rho_c_}) m->source = d_;
}

AProductFragment build_product(const GoGMorphism& mb, VertexId v0, const GoGMorphism& mc, VertexId w0,
                               std::size_t budget, bool all_pairs) {
    if (mb.target != mc.target) throw ContractError("product: immersions have different targets");
    if (mb.vertex_map.at(v0) != mc.vertex_map.at(w0)) throw ContractError("product: basepoint images differ");
    const GraphOfGroups& a = *mb.target;
    const Graph& ga = a.graph();
    const Graph& gb = mb.source->graph();
    const Graph& gc = mc.source->graph();

    AProductFragment fr;
    fr.mb_ = mb;
    fr.mc_ = mc;
    fr.v0_ = v0;
    fr.w0_ = w0;
    fr.budget = budget;
    fr.tree_b_ = bfs_tree(gb, v0);
    fr.tree_c_ = bfs_tree(gc, w0);

    std::map<std::tuple<VertexId, VertexId, Element>, std::size_t> vindex;
    std::map<std::tuple<EdgeId, EdgeId, Element>, std::size_t> eindex;
    std::deque<std::size_t> queue;
    std::size_t current_component = 0;

    auto add_vertex = [&](VertexId v, VertexId w, const Element& x, std::size_t parent) {
        auto key = std::make_tuple(v, w, x);
        auto it = vindex.find(key);
        if (it != vindex.end()) return it->second;
        const Group& au = *a.vertex_group(mb.vertex_map[v]);
        std::size_t id = fr.vertices.size();
        fr.vertices.push_back({v, w, x});
        fr.explored.push_back(false);
        fr.unexpandable.emplace_back();
        fr.vertex_groups.push_back(au.intersect(au.conjugate(mb.vertex_image(v), x), mc.vertex_image(w)));
        fr.parent_edge.push_back(parent);
        fr.component.push_back(current_component);
        vindex.emplace(key, id);
        queue.push_back(id);
        return id;
    };

    // Canonical origin or target of the (f, g)-edge ã, with its factorization.
    struct End {
        VertexId v, w;
        Element witness, b, c;
    };
    auto end_of = [&](EdgeId f, EdgeId g, const Element& at) {
        EdgeId e = mb.edge_map[f];
        VertexId v = gb.origin(f), w = gc.origin(g);
        const Group& au = *a.vertex_group(ga.origin(e));
        Element s = mul3(au, mb.twist_alpha(f), a.alpha(e).apply(at), au.invert(mc.twist_alpha(g)));
        Element x = au.double_coset_rep(mb.vertex_image(v), s, mc.vertex_image(w));
        auto fac = au.double_coset_factor(mb.vertex_image(v), s, mc.vertex_image(w), x);
        if (!fac) throw std::logic_error("product: canonical witness outside its double coset");
        return End{v, w, x, fac->first, fac->second};
    };

    const Group& au0 = *a.vertex_group(mb.vertex_map[v0]);
    add_vertex(v0, w0, au0.double_coset_rep(mb.vertex_image(v0), au0.identity(), mc.vertex_image(w0)),
               AProductFragment::kRoot);

    std::vector<std::pair<VertexId, VertexId>> seeds;
    if (all_pairs)
        for (VertexId v = 0; v < gb.num_vertices(); ++v)
            for (VertexId w = 0; w < gc.num_vertices(); ++w)
                if (mb.vertex_map[v] == mc.vertex_map[w]) seeds.emplace_back(v, w);
    std::size_t next_seed = 0;

    std::size_t expanded = 0;
    bool stopped = false;
    while (true) {
        if (queue.empty()) {
            while (next_seed < seeds.size() && queue.empty()) {
                auto [v, w] = seeds[next_seed++];
                const Group& au = *a.vertex_group(mb.vertex_map[v]);
                Element x = au.double_coset_rep(mb.vertex_image(v), au.identity(), mc.vertex_image(w));
                if (vindex.count({v, w, x})) continue;
                ++current_component;
                add_vertex(v, w, x, AProductFragment::kRoot);
            }
            if (queue.empty()) break;
        }
        if (expanded >= budget) {
            stopped = true;
            break;
        }
        std::size_t xi = queue.front();
        queue.pop_front();
        ++expanded;
        fr.explored[xi] = true;
        current_component = fr.component[xi];
        const ProductVertex x = fr.vertices[xi];
        const Group& au = *a.vertex_group(mb.vertex_map[x.v]);
        struct Pending {
            EdgeId f, g;
            Element witness;
            End o, t;
            Subgroup group;
        };
        std::vector<Pending> pending;
        try {
            for (EdgeId f : gb.star(x.v))
                for (EdgeId g : gc.star(x.w)) {
                    EdgeId e = mb.edge_map[f];
                    if (mc.edge_map[g] != e) continue;
                    const Element& fa = mb.twist_alpha(f);
                    const Element& gal = mc.twist_alpha(g);
                    const Homomorphism& ae = a.alpha(e);
                    Slice s = au.slice(au.conjugate(mb.vertex_image(x.v), fa),
                                       mul3(au, au.invert(fa), x.witness, gal),
                                       au.conjugate(mc.vertex_image(x.w), gal), ae.image());
                    if (s.status != Slice::Status::Ok) {
                        fr.unexpandable[xi] = "edges over (" + gb.edge_name(f) + ", " + gc.edge_name(g) + "): " + s.note;
                        continue;
                    }
                    const Group& eg = *a.edge_group(e);
                    const Subgroup& bf = mb.mu_edge[pair_of(f)].image();
                    const Subgroup& cg = mc.mu_edge[pair_of(g)].image();
                    for (const Element& r : s.reps) {
                        Element at = eg.double_coset_rep(bf, ae.preimage(r).value(), cg);
                        EdgeId fp = is_positive(f) ? f : inverse(f);
                        EdgeId gp = is_positive(f) ? g : inverse(g);
                        if (eindex.count(std::make_tuple(fp, gp, at))) continue;
                        bool dup = false;
                        for (const Pending& q : pending)
                            if (q.f == fp && q.g == gp && q.witness == at) dup = true;
                        if (dup) continue;
                        pending.push_back({fp, gp, at, end_of(fp, gp, at), end_of(inverse(fp), inverse(gp), at),
                                           eg.intersect(eg.conjugate(bf, at), cg)});
                    }
                }
        } catch (const std::overflow_error& err) {
            fr.unexpandable[xi] = std::string("arithmetic overflow: ") + err.what();
            fr.explored[xi] = false;
            continue;
        }
        for (Pending& q : pending) {
            std::size_t ei = fr.edges.size();
            eindex.emplace(std::make_tuple(q.f, q.g, q.witness), ei);
            std::size_t from = add_vertex(q.o.v, q.o.w, q.o.witness, ei);
            std::size_t to = add_vertex(q.t.v, q.t.w, q.t.witness, ei);
            if (from != xi && to != xi) throw std::logic_error("product: edge is not incident to its vertex");
            fr.edges.push_back({q.f, q.g, q.witness, from, to, q.o.b, q.o.c, q.t.b, q.t.c});
            fr.edge_groups.push_back(std::move(q.group));
        }
    }
    bool ok = !stopped;
    for (const std::string& s : fr.unexpandable)
        if (!s.empty()) ok = false;
    fr.complete = ok;
    auto fac = au0.double_coset_factor(mb.vertex_image(v0), au0.identity(), mc.vertex_image(w0), fr.vertices[0].witness);
    fr.base_c_ = fac.value().second;
    fr.finish();
    return fr;
}

IntersectionGenerators intersection_generators(const AProductFragment& fr) {
    const GraphOfGroups& a = *fr.mb().target;
    const GraphOfGroups& d = fr.gog();
    const Graph& gd = d.graph();
    IntersectionGenerators out;
    out.exact = fr.complete;
    // D-paths from the base along the BFS tree.
    std::vector<std::optional<APath>> tau(fr.vertices.size());
    tau[0] = push_apath(fr.rho_a(), trivial_apath(d, 0));
    std::vector<bool> tree_pair(gd.num_pairs(), false);
    std::deque<std::size_t> q{0};
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop_front();
        for (EdgeId h : gd.star(static_cast<VertexId>(x))) {
            std::size_t t = gd.target(h);
            if (tau[t] || fr.parent_edge[t] != pair_of(h)) continue;
            tree_pair[pair_of(h)] = true;
            tau[t] = concat(a, *tau[x], push_apath(fr.rho_a(), path_with_identities(d, GraphPath{static_cast<VertexId>(x), {h}})));
            q.push_back(t);
        }
    }
    VertexId u0 = fr.mb().vertex_map[fr.vertices[0].v];
    const Group& g0 = *a.vertex_group(u0);
    const Element& c = fr.base_shift();
    auto emit = [&](APath p) {
        p = concat(a, concat(a, element_apath(u0, c), p), element_apath(u0, g0.invert(c)));
        p = reduce(a, p);
        if (p.length() == 0 && g0.is_identity(p.elems[0])) return;
        out.generators.push_back(std::move(p));
    };
    for (std::size_t x = 0; x < fr.vertices.size(); ++x) {
        if (!tau[x]) continue;
        VertexId u = fr.mb().vertex_map[fr.vertices[x].v];
        for (const Element& g : d.vertex_group(static_cast<VertexId>(x))->generators())
            emit(concat(a, concat(a, *tau[x], element_apath(u, g)), inverse(a, *tau[x])));
    }
    for (PairId p = 0; p < gd.num_pairs(); ++p) {
        EdgeId h = positive_half(p);
        std::size_t o = gd.origin(h), t = gd.target(h);
        if (tree_pair[p] || !tau[o] || !tau[t]) continue;
        APath step = push_apath(fr.rho_a(), path_with_identities(d, GraphPath{static_cast<VertexId>(o), {h}}));
        emit(concat(a, concat(a, *tau[o], step), inverse(a, *tau[t])));
    }
    return out;
}

RayCertificate certify_ray(const AProductFragment& fr, std::size_t min_repeats) {
    RayCertificate rc;
    if (fr.complete) {
        rc.detail = "fragment is complete";
        return rc;
    }
    const GraphOfGroups& d = fr.gog();
    const Graph& gd = d.graph();
    std::vector<std::size_t> frontier;
    for (std::size_t x = 0; x < fr.vertices.size(); ++x)
        if (!fr.explored[x]) frontier.push_back(x);
    if (frontier.size() != 1) {
        rc.detail = "frontier has " + std::to_string(frontier.size()) + " vertices";
        return rc;
    }
    // Walk back from the frontier vertex through vertices of valence two.
    std::vector<std::size_t> ray{frontier[0]};
    std::vector<EdgeId> halves;  // along the ray, pointing outward
    std::size_t x = frontier[0];
    if (gd.valence(static_cast<VertexId>(x)) != 1) {
        rc.detail = "frontier vertex has further known edges";
        return rc;
    }
    while (fr.parent_edge[x] != AProductFragment::kRoot) {
        EdgeId h = positive_half(static_cast<PairId>(fr.parent_edge[x]));
        if (gd.target(h) != x) h = inverse(h);
        std::size_t prev = gd.origin(h);
        if (prev == x) break;
        halves.push_back(h);
        ray.push_back(prev);
        x = prev;
        if (gd.valence(static_cast<VertexId>(x)) != 2) break;
    }
    std::reverse(ray.begin(), ray.end());
    std::reverse(halves.begin(), halves.end());
    const GraphOfGroups& a = *fr.mb().target;
    struct Sig {
        VertexId v, w;
        EdgeId f, g;
        std::string back, ahead;
        bool operator==(const Sig&) const = default;
    };
    std::vector<Sig> sigs;
    std::vector<bool> ascending;
    for (std::size_t i = 0; i < halves.size(); ++i) {
        EdgeId h = halves[i];
        const ProductEdge& pe = fr.edges[pair_of(h)];
        EdgeId f = is_positive(h) ? pe.f : inverse(pe.f);
        EdgeId g = is_positive(h) ? pe.g : inverse(pe.g);
        VertexId o = gd.origin(h), t = gd.target(h);
        const Group& go = *a.vertex_group(fr.rho_a().vertex_map[o]);
        const Group& gt = *a.vertex_group(fr.rho_a().vertex_map[t]);
        Index back = go.relative_index(d.alpha(h).image(), fr.vertex_groups[o]);
        Index ahead = gt.relative_index(d.omega(h).image(), fr.vertex_groups[t]);
        sigs.push_back({fr.vertices[o].v, fr.vertices[o].w, f, g, back.str(), ahead.str()});
        ascending.push_back(back.is_finite() && back.value() == 1 && ahead.is_finite() && ahead.value() > 1);
    }
    for (std::size_t p = 1; p <= 4; ++p) {
        std::size_t need = p * min_repeats;
        if (sigs.size() < need) break;
        std::size_t start = sigs.size() - need;
        bool periodic = true, asc = true;
        for (std::size_t i = start; i < sigs.size(); ++i) {
            if (i + p < sigs.size() && !(sigs[i] == sigs[i + p])) periodic = false;
            if (!ascending[i]) asc = false;
        }
        if (!periodic || !asc) continue;
        std::size_t reps = 0;
        for (std::size_t s = sigs.size(); s >= p; s -= p) {
            bool same = true;
            for (std::size_t i = s - p; i < s; ++i)
                if (!(sigs[i] == sigs[sigs.size() - p + (i - (s - p))]) || !ascending[i]) same = false;
            if (!same) break;
            ++reps;
        }
        rc.fired = true;
        rc.period = p;
        rc.repeats = reps;
        rc.detail = "provably infinite ascending union: ray of period " + std::to_string(p) + " repeated " +
                    std::to_string(reps) + " times, edge groups onto the inner and of index " + sigs.back().ahead +
                    " in the outer vertex group";
        return rc;
    }
    rc.detail = "no periodic ascending ray";
    return rc;
}

std::string format_vertex(const AProductFragment& fr, std::size_t x) {
    const ProductVertex& pv = fr.vertices.at(x);
    const GraphOfGroups& a = *fr.mb().target;
    return "(" + fr.mb().source->graph().vertex_name(pv.v) + ", " + fr.mc().source->graph().vertex_name(pv.w) + ", " +
           a.vertex_group(fr.mb().vertex_map[pv.v])->format(pv.witness) + ")";
}

}  // namespace bst
