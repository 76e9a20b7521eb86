#include "bst/morphism.hpp"

#include <deque>
#include <map>

#include "bst/subgroup_group.hpp"

namespace bst {

Subgroup GoGMorphism::edge_image_alpha(EdgeId f) const {
    return target->alpha(edge_map[f]).apply(mu_edge[pair_of(f)].image());
}

Subgroup GoGMorphism::alpha_image(EdgeId f) const { return target->alpha(edge_map[f]).image(); }

GoGMorphism identity_morphism(const GogPtr& a) {
    GoGMorphism m;
    m.source = m.target = a;
    const Graph& g = a->graph();
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        m.vertex_map.push_back(v);
        const GroupPtr& gv = a->vertex_group(v);
        m.mu_vertex.emplace_back(gv, gv, gv->generators());
    }
    for (EdgeId e = 0; e < g.num_halves(); ++e) m.edge_map.push_back(e);
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        const GroupPtr& ge = a->edge_group(e);
        m.mu_edge.emplace_back(ge, ge, ge->generators());
        m.twist_alpha_pos.push_back(a->vertex_group(g.origin(e))->identity());
        m.twist_omega_pos.push_back(a->vertex_group(g.target(e))->identity());
    }
    return m;
}

std::vector<std::string> validate_morphism(const GoGMorphism& m) {
    std::vector<std::string> out;
    const GraphOfGroups& b = *m.source;
    const GraphOfGroups& a = *m.target;
    const Graph& gb = b.graph();
    const Graph& ga = a.graph();
    if (m.vertex_map.size() != gb.num_vertices() || m.edge_map.size() != gb.num_halves() ||
        m.mu_vertex.size() != gb.num_vertices() || m.mu_edge.size() != gb.num_pairs() ||
        m.twist_alpha_pos.size() != gb.num_pairs() || m.twist_omega_pos.size() != gb.num_pairs()) {
        out.push_back("morphism data sizes do not match the source graph");
        return out;
    }
    for (VertexId v = 0; v < gb.num_vertices(); ++v) {
        const std::string where = "vertex " + gb.vertex_name(v);
        if (m.vertex_map[v] >= ga.num_vertices()) {
            out.push_back(where + ": image is not a target vertex");
            continue;
        }
        const Homomorphism& mu = m.mu_vertex[v];
        if (mu.domain() != b.vertex_group(v) || mu.codomain() != a.vertex_group(m.vertex_map[v])) {
            out.push_back(where + ": mu has the wrong domain or codomain");
            continue;
        }
        std::string why = mu.check_monomorphism();
        if (!why.empty()) out.push_back(where + ": mu " + why);
    }
    if (!out.empty()) return out;
    for (EdgeId f = 0; f < gb.num_halves(); ++f) {
        const std::string where = "edge " + gb.edge_name(f);
        EdgeId e = m.edge_map[f];
        if (e >= ga.num_halves()) {
            out.push_back(where + ": image is not a target edge");
            continue;
        }
        if (m.edge_map[inverse(f)] != inverse(e)) out.push_back(where + ": graph map does not respect inversion");
        if (ga.origin(e) != m.vertex_map[gb.origin(f)])
            out.push_back(where + ": graph map does not respect incidence");
    }
    if (!out.empty()) return out;
    for (PairId p = 0; p < gb.num_pairs(); ++p) {
        EdgeId f = positive_half(p);
        const std::string where = "edge " + gb.pair_name(p);
        const Homomorphism& mu = m.mu_edge[p];
        if (mu.domain() != b.edge_group(f) || mu.codomain() != a.edge_group(m.edge_map[f])) {
            out.push_back(where + ": mu has the wrong domain or codomain");
            continue;
        }
        std::string why = mu.check_monomorphism();
        if (!why.empty()) {
            out.push_back(where + ": mu " + why);
            continue;
        }
        bool twists_ok = true;
        for (EdgeId h : {f, inverse(f)}) {
            const Group& au = *a.vertex_group(ga.origin(m.edge_map[h]));
            if (!au.is_valid(m.twist_alpha(h))) {
                out.push_back("edge " + gb.edge_name(h) + ": twisting element is not in the target vertex group");
                twists_ok = false;
            }
        }
        if (!twists_ok) continue;
        const std::vector<Element> gens = b.edge_group(f)->generators();
        for (EdgeId h : {f, inverse(f)}) {
            EdgeId e = m.edge_map[h];
            const Group& au = *a.vertex_group(ga.origin(e));
            const Homomorphism& ae = a.alpha(e);
            const Homomorphism& bf = b.alpha(h);
            const Homomorphism& mv = m.mu_vertex[gb.origin(h)];
            for (std::size_t i = 0; i < gens.size(); ++i) {
                Element lhs = ae.apply(mu.apply(gens[i]));
                Element rhs = au.conjugate(mv.apply(bf.apply(gens[i])), m.twist_alpha(h));
                if (lhs != rhs)
                    out.push_back("edge " + gb.edge_name(h) + ", generator " + std::to_string(i) +
                                  ": twisted commutation fails (" + au.format(lhs) + " vs " + au.format(rhs) + ")");
            }
        }
    }
    return out;
}

ImmersionResult is_immersion(const GoGMorphism& m) {
    ImmersionResult r;
    const GraphOfGroups& a = *m.target;
    const Graph& gb = m.source->graph();
    for (VertexId v = 0; v < gb.num_vertices(); ++v) {
        const Group& au = *a.vertex_group(m.vertex_map[v]);
        const Subgroup& bv = m.vertex_image(v);
        std::map<EdgeId, ImmersionBlock> blocks;
        for (EdgeId f : gb.star(v)) {
            EdgeId e = m.edge_map[f];
            Element w = au.double_coset_rep(bv, m.twist_alpha(f), m.alpha_image(f));
            auto [it, fresh] = blocks.try_emplace(e, ImmersionBlock{v, e, {}});
            for (const auto& [g, wg] : it->second.witnesses)
                if (wg == w) {
                    r.failure = "condition (1) fails at vertex " + gb.vertex_name(v) + ": edges " + gb.edge_name(g) +
                                " and " + gb.edge_name(f) + " give the same double coset " + au.format(w);
                    return r;
                }
            it->second.witnesses.emplace_back(f, w);
        }
        for (auto& [e, blk] : blocks) r.blocks.push_back(std::move(blk));
    }
    for (EdgeId f = 0; f < gb.num_halves(); ++f) {
        const Group& au = *a.vertex_group(m.vertex_map[gb.origin(f)]);
        Subgroup lhs = m.edge_image_alpha(f);
        Subgroup rhs = au.intersect(au.conjugate(m.vertex_image(gb.origin(f)), m.twist_alpha(f)), m.alpha_image(f));
        if (!au.same_subgroup(lhs, rhs)) {
            r.failure = "condition (2) fails at edge " + gb.edge_name(f) + ": edge image " + au.format_subgroup(lhs) +
                        " but intersection " + au.format_subgroup(rhs);
            return r;
        }
        r.verified_edges.push_back(f);
    }
    r.ok = true;
    return r;
}

std::string to_string(Tri t) {
    switch (t) {
        case Tri::Yes: return "yes";
        case Tri::No: return "no";
        case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

CoveringResult is_covering(const GoGMorphism& m) {
    ImmersionResult imm = is_immersion(m);
    if (!imm.ok) return {Tri::No, "not an immersion: " + imm.failure};
    const GraphOfGroups& a = *m.target;
    const Graph& ga = a.graph();
    const Graph& gb = m.source->graph();
    std::string unknown;
    for (VertexId v = 0; v < gb.num_vertices(); ++v) {
        VertexId u = m.vertex_map[v];
        const Group& au = *a.vertex_group(u);
        const Subgroup& bv = m.vertex_image(v);
        for (EdgeId e : ga.star(u)) {
            std::vector<EdgeId> over;
            for (EdgeId f : gb.star(v))
                if (m.edge_map[f] == e) over.push_back(f);
            if (over.empty())
                return {Tri::No, "vertex " + gb.vertex_name(v) + " has no edge over " + ga.edge_name(e)};
            const Subgroup ae = a.alpha(e).image();
            auto reps = au.double_coset_reps(bv, ae);
            if (!reps) {
                if (unknown.empty())
                    unknown = "double cosets at vertex " + gb.vertex_name(v) + " over " + ga.edge_name(e) +
                              " cannot be enumerated";
                continue;
            }
            for (const Element& rep : *reps) {
                bool hit = false;
                for (EdgeId f : over)
                    if (au.double_coset_rep(bv, m.twist_alpha(f), ae) == rep) hit = true;
                if (!hit)
                    return {Tri::No, "vertex " + gb.vertex_name(v) + ": double coset of " + au.format(rep) + " over " +
                                         ga.edge_name(e) + " is not hit"};
            }
        }
    }
    if (!unknown.empty()) return {Tri::Unknown, unknown};
    return {Tri::Yes, "every double coset is hit"};
}

APath push_apath(const GoGMorphism& m, const APath& p) {
    const GraphOfGroups& a = *m.target;
    const Graph& gb = m.source->graph();
    APath out;
    out.start = m.vertex_map[p.start];
    VertexId v = p.start;
    for (std::size_t i = 0; i <= p.edges.size(); ++i) {
        const Group& au = *a.vertex_group(m.vertex_map[v]);
        Element x = m.mu_vertex[v].apply(p.elems[i]);
        if (i > 0) x = au.multiply(au.invert(m.twist_omega(p.edges[i - 1])), x);
        if (i < p.edges.size()) {
            EdgeId f = p.edges[i];
            x = au.multiply(x, m.twist_alpha(f));
            out.edges.push_back(m.edge_map[f]);
            v = gb.target(f);
        }
        out.elems.push_back(std::move(x));
    }
    return out;
}

namespace {

// Working object of the folding realizer. Edge data is per pair, oriented by the
// positive half; vertex and edge groups are subgroups of the target's groups.
class Realizer {
public:
    Realizer(GogPtr a, VertexId u0) : a_(std::move(a)) {
        vs_.push_back({u0, a_->vertex_group(u0)->trivial_subgroup(), true});
    }

    void add_generator(const APath& p) {
        const Graph& g = a_->graph();
        if (p.length() == 0) {
            add_to_vertex(0, p.elems[0]);
            return;
        }
        VertexId prev = 0;
        for (std::size_t i = 0; i < p.length(); ++i) {
            EdgeId e = p.edges[i];
            VertexId next = 0;
            if (i + 1 < p.length()) {
                next = static_cast<VertexId>(vs_.size());
                vs_.push_back({g.target(e), a_->vertex_group(g.target(e))->trivial_subgroup(), true});
            }
            const Group& gt = *a_->vertex_group(g.target(e));
            Element tw = i + 1 < p.length() ? gt.identity() : gt.invert(p.elems.back());
            es_.push_back({prev, next, e, p.elems[i], tw, a_->edge_group(e)->trivial_subgroup(), true});
            prev = next;
        }
    }

    // One fold or one growth step; false when both immersion conditions hold.
    bool step() { return fold_once() || grow_once(); }

    bool all_trivial() const {
        for (const V& v : vs_)
            if (v.alive && !v.s.generators().empty() &&
                !a_->vertex_group(v.image)->same_subgroup(v.s, a_->vertex_group(v.image)->trivial_subgroup()))
                return false;
        for (const E& e : es_)
            if (e.alive && !a_->edge_group(e.image)->same_subgroup(e.t, a_->edge_group(e.image)->trivial_subgroup()))
                return false;
        return true;
    }

    GoGMorphism export_morphism() const {
        std::vector<VertexId> order = bfs_order();
        std::vector<VertexId> index(vs_.size(), 0);
        auto b = std::make_shared<GraphOfGroups>();
        GoGMorphism m;
        m.target = a_;
        std::vector<std::shared_ptr<const SubgroupGroup>> vgroups;
        for (std::size_t i = 0; i < order.size(); ++i) {
            const V& v = vs_[order[i]];
            index[order[i]] = static_cast<VertexId>(i);
            auto grp = make_subgroup_group(a_->vertex_group(v.image), v.s);
            b->add_vertex("v" + std::to_string(i), grp);
            vgroups.push_back(grp);
            m.vertex_map.push_back(v.image);
            m.mu_vertex.push_back(grp->inclusion(grp));
        }
        std::size_t count = 0;
        for (const E& e : es_) {
            if (!e.alive) continue;
            auto grp = make_subgroup_group(a_->edge_group(e.image), e.t);
            const Group& go = *a_->vertex_group(vs_[e.from].image);
            const Group& gt = *a_->vertex_group(vs_[e.to].image);
            std::vector<Element> ai, oi;
            for (const Element& x : grp->generators()) {
                ai.push_back(go.multiply(go.multiply(e.ta, a_->alpha(e.image).apply(x)), go.invert(e.ta)));
                oi.push_back(gt.multiply(gt.multiply(e.tw, a_->omega(e.image).apply(x)), gt.invert(e.tw)));
            }
            b->add_edge(index[e.from], index[e.to], "f" + std::to_string(count++), grp, ai, oi);
            m.edge_map.push_back(e.image);
            m.edge_map.push_back(inverse(e.image));
            m.mu_edge.push_back(grp->inclusion(grp));
            m.twist_alpha_pos.push_back(e.ta);
            m.twist_omega_pos.push_back(e.tw);
        }
        b->basepoint = 0;
        m.source = b;
        return m;
    }

private:
    struct V {
        VertexId image;
        Subgroup s;
        bool alive;
    };
    struct E {
        VertexId from, to;
        EdgeId image;  // target half of the positive orientation
        Element ta, tw;
        Subgroup t;  // inside the target edge group
        bool alive;
    };

    E& edge(EdgeId h) { return es_[pair_of(h)]; }
    const E& edge(EdgeId h) const { return es_[pair_of(h)]; }
    VertexId org(EdgeId h) const { return is_positive(h) ? edge(h).from : edge(h).to; }
    VertexId tgt(EdgeId h) const { return org(inverse(h)); }
    EdgeId img(EdgeId h) const { return is_positive(h) ? edge(h).image : inverse(edge(h).image); }
    Element& tw_alpha(EdgeId h) { return is_positive(h) ? edge(h).ta : edge(h).tw; }
    const Element& tw_alpha(EdgeId h) const { return is_positive(h) ? edge(h).ta : edge(h).tw; }
    Element& tw_omega(EdgeId h) { return tw_alpha(inverse(h)); }
    const Group& vgroup(VertexId v) const { return *a_->vertex_group(vs_[v].image); }
    const Group& egroup(EdgeId h) const { return *a_->edge_group(img(h)); }

    bool add_to_vertex(VertexId v, const Element& x) {
        const Group& g = vgroup(v);
        if (g.contains(vs_[v].s, x)) return false;
        std::vector<Element> gens = vs_[v].s.generators();
        gens.push_back(x);
        vs_[v].s = g.subgroup(gens);
        return true;
    }

    std::vector<EdgeId> star(VertexId v) const {
        std::vector<EdgeId> out;
        for (EdgeId h = 0; h < 2 * es_.size(); ++h)
            if (edge(h).alive && org(h) == v) out.push_back(h);
        return out;
    }

    std::vector<VertexId> bfs_order() const {
        std::vector<bool> seen(vs_.size(), false);
        std::vector<VertexId> order{0};
        seen[0] = true;
        for (std::size_t i = 0; i < order.size(); ++i)
            for (EdgeId h : star(order[i]))
                if (!seen[tgt(h)]) {
                    seen[tgt(h)] = true;
                    order.push_back(tgt(h));
                }
        return order;
    }

    // Makes α_[h](T) conjugated by h_α lie in the group at o(h).
    bool ensure_contained(EdgeId h) {
        const Group& g = vgroup(org(h));
        bool changed = false;
        for (const Element& t : edge(h).t.generators()) {
            Element x = g.multiply(g.multiply(tw_alpha(h), a_->alpha(img(h)).apply(t)), g.invert(tw_alpha(h)));
            changed |= add_to_vertex(org(h), x);
        }
        return changed;
    }

    // Condition (2) for every half: T = α_e⁻¹(S^(h_α) ∩ α_e(A_e)).
    bool grow_once() {
        for (VertexId v : bfs_order())
            for (EdgeId h : star(v)) {
                const Group& g = vgroup(v);
                const Homomorphism& ae = a_->alpha(img(h));
                Subgroup x = g.intersect(g.conjugate(vs_[v].s, tw_alpha(h)), ae.image());
                const Group& eg = egroup(h);
                std::vector<Element> gens = edge(h).t.generators();
                bool grew = false;
                for (const Element& y : x.generators()) {
                    Element c = ae.preimage(y).value();
                    if (!eg.contains(edge(h).t, c)) {
                        gens.push_back(c);
                        grew = true;
                    }
                }
                if (!grew) continue;
                edge(h).t = eg.subgroup(gens);
                ensure_contained(h);
                ensure_contained(inverse(h));
                return true;
            }
        return false;
    }

    // Conjugates the group at w by d and left-multiplies the α-twists of its star.
    void gauge(VertexId w, const Element& d) {
        const Group& g = vgroup(w);
        for (EdgeId h : star(w)) tw_alpha(h) = g.multiply(d, tw_alpha(h));
        vs_[w].s = g.conjugate(vs_[w].s, g.invert(d));
    }

    void merge_vertices(VertexId keep, VertexId drop) {
        for (const Element& x : vs_[drop].s.generators()) add_to_vertex(keep, x);
        for (E& e : es_) {
            if (!e.alive) continue;
            if (e.from == drop) e.from = keep;
            if (e.to == drop) e.to = keep;
        }
        vs_[drop].alive = false;
    }

    // Condition (1): identify the least pair of halves at one vertex with equal image
    // and equal double coset.
    bool fold_once() {
        for (VertexId v : bfs_order()) {
            const Group& g = vgroup(v);
            std::vector<EdgeId> st = star(v);
            std::vector<Element> wit;
            for (EdgeId h : st) wit.push_back(g.double_coset_rep(vs_[v].s, tw_alpha(h), a_->alpha(img(h)).image()));
            for (std::size_t i = 0; i < st.size(); ++i)
                for (std::size_t j = i + 1; j < st.size(); ++j)
                    if (img(st[i]) == img(st[j]) && wit[i] == wit[j]) {
                        fold(v, st[i], st[j]);
                        return true;
                    }
        }
        return false;
    }

    void fold(VertexId v, EdgeId h, EdgeId h2) {
        const Group& g = vgroup(v);
        const Homomorphism& ae = a_->alpha(img(h2));
        const Homomorphism& oe = a_->omega(img(h2));
        auto fac = g.double_coset_factor(vs_[v].s, tw_alpha(h), ae.image(), tw_alpha(h2)).value();
        // h2_α = s·h_α·α(c): retwist h2 by c, then absorb s into the vertex group.
        Element c = ae.preimage(fac.second).value();
        const Group& eg = egroup(h2);
        const Group& gt2 = vgroup(tgt(h2));
        tw_omega(h2) = gt2.multiply(tw_omega(h2), gt2.invert(oe.apply(c)));
        edge(h2).t = eg.conjugate(edge(h2).t, eg.invert(c));
        tw_alpha(h2) = tw_alpha(h);

        VertexId w = tgt(h), w2 = tgt(h2);
        if (w == w2) {
            const Group& gw = vgroup(w);
            add_to_vertex(w, gw.multiply(tw_omega(h), gw.invert(tw_omega(h2))));
        } else {
            const Group& gw = vgroup(w);
            if (w2 != 0 && w2 != v) {
                gauge(w2, gw.multiply(tw_omega(h), gw.invert(tw_omega(h2))));
            } else if (w != 0 && w != v) {
                gauge(w, gw.multiply(tw_omega(h2), gw.invert(tw_omega(h))));
            } else if (w == v) {
                gauge(v, gw.multiply(tw_omega(h2), gw.invert(tw_omega(h))));
            } else {
                gauge(v, gw.multiply(tw_omega(h), gw.invert(tw_omega(h2))));
            }
            VertexId keep = w2 == 0 ? w2 : w;
            merge_vertices(keep, keep == w ? w2 : w);
        }
        for (const Element& t : edge(h2).t.generators()) {
            if (eg.contains(edge(h).t, t)) continue;
            std::vector<Element> gens = edge(h).t.generators();
            gens.push_back(t);
            edge(h).t = eg.subgroup(gens);
        }
        edge(h2).alive = false;
        ensure_contained(h);
        ensure_contained(inverse(h));
    }

    GogPtr a_;
    std::vector<V> vs_;
    std::vector<E> es_;
};

}  // namespace

RealizeResult realize_subgroup(const GogPtr& a, VertexId u0, const std::vector<APath>& generators,
                               std::size_t budget) {
    if (u0 >= a->graph().num_vertices()) throw ContractError("realize: unknown basepoint");
    Realizer r(a, u0);
    for (const APath& p0 : generators) {
        std::string why = check_apath(*a, p0);
        if (!why.empty()) throw ContractError("realize: " + why);
        if (p0.start != u0 || apath_end(*a, p0) != u0) throw ContractError("realize: generator is not closed at the basepoint");
        r.add_generator(reduce(*a, p0));
    }
    RealizeResult out;
    while (out.steps < budget) {
        if (!r.step()) {
            out.complete = true;
            break;
        }
        ++out.steps;
    }
    out.morphism = r.export_morphism();
    out.basepoint = 0;
    if (!out.complete)
        out.note = "step budget exhausted; partial object";
    else if (r.all_trivial())
        out.note = "folded; canonical for trivial vertex and edge groups";
    else
        out.note = "folded; canonical form not guaranteed for nontrivial vertex groups";
    return out;
}

}  // namespace bst
