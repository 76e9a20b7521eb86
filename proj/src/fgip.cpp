#include "bst/fgip.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>

#include "bst/abelian_group.hpp"

namespace bst {

namespace {

bool virtually_z(const Group& g) {
    IsoType t = g.iso_type();
    return t.tag == IsoType::Tag::Abelian && t.rank == 1;
}

bool infinite_cyclic(const Group& g) { return g.iso_type() == IsoType::abelian(1, {}); }

std::string idx_str(const DecoratedGraph& d, EdgeId h) { return d.index[h].str(); }

std::string pair_text(const DecoratedGraph& d, PairId p) {
    const Graph& g = d.graph;
    EdgeId h = positive_half(p);
    std::string kind = g.is_loop(h) ? "loop " : "edge ";
    std::string name = g.pair_name(p).empty() ? "#" + std::to_string(p) : g.pair_name(p);
    return kind + name + " (" + idx_str(d, h) + "," + idx_str(d, inverse(h)) + ")";
}

DecoratedGraph restrict_decorated(const DecoratedGraph& d, const std::vector<bool>& keep_vertex) {
    const Graph& g = d.graph;
    std::vector<bool> keep_pair(g.num_pairs());
    for (PairId p = 0; p < g.num_pairs(); ++p) keep_pair[p] = keep_vertex[g.origin(positive_half(p))];
    Subgraph s = induced_subgraph(g, keep_vertex, keep_pair);
    DecoratedGraph out;
    out.graph = std::move(s.graph);
    for (PairId p = 0; p < out.graph.num_pairs(); ++p) {
        EdgeId old = positive_half(s.pair_origin[p]);
        out.index.push_back(d.index[old]);
        out.index.push_back(d.index[inverse(old)]);
    }
    return out;
}

// Removes o(h) into t(h) for a non-loop half h of index 1.
DecoratedGraph collapse(const DecoratedGraph& d, EdgeId h) {
    const Graph& g = d.graph;
    const VertexId u = g.origin(h), v = g.target(h);
    const Index far = d.index[inverse(h)];
    std::vector<VertexId> vmap(g.num_vertices());
    DecoratedGraph out;
    for (VertexId x = 0; x < g.num_vertices(); ++x)
        if (x != u) vmap[x] = out.graph.add_vertex(g.vertex_name(x));
    vmap[u] = vmap[v];
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        if (p == pair_of(h)) continue;
        EdgeId e = positive_half(p);
        out.graph.add_edge(vmap[g.origin(e)], vmap[g.target(e)], g.pair_name(p));
        for (EdgeId half : {e, inverse(e)})
            out.index.push_back(g.origin(half) == u ? d.index[half] * far : d.index[half]);
    }
    return out;
}

FgipVerdict yes_form(int form, std::string cert) {
    FgipVerdict v;
    v.answer = FgipAnswer::Yes;
    v.form = form;
    v.certificate = "form " + std::to_string(form) + ": " + cert;
    return v;
}

FgipVerdict no_config(const DecoratedGraph& d, Configuration c, std::vector<PairId> pairs) {
    FgipVerdict v;
    v.answer = FgipAnswer::No;
    v.configuration = c;
    v.witness_pairs = std::move(pairs);
    v.certificate = to_string(c) + ":";
    for (PairId p : v.witness_pairs) v.certificate += " " + pair_text(d, p);
    v.certificate += "; contains F2 x Z";
    return v;
}

bool is_two_two(const DecoratedGraph& d, PairId p) {
    EdgeId h = positive_half(p);
    return !d.graph.is_loop(h) && d.index[h] == Index::finite(2) && d.index[inverse(h)] == Index::finite(2);
}

bool is_iso_loop(const DecoratedGraph& d, PairId p) {
    EdgeId h = positive_half(p);
    return d.graph.is_loop(h) && (d.iso(h) || d.iso(inverse(h)));
}

}  // namespace

std::vector<std::string> validate_decorated(const DecoratedGraph& d) {
    std::vector<std::string> out;
    if (d.index.size() != d.graph.num_halves()) {
        out.push_back("expected " + std::to_string(d.graph.num_halves()) + " half indices, got " +
                      std::to_string(d.index.size()));
        return out;
    }
    for (EdgeId h = 0; h < d.index.size(); ++h) {
        if (!d.index[h].is_finite())
            out.push_back("half " + d.graph.edge_name(h) + ": infinite index (edge group not virtually Z)");
        else if (d.index[h].value() == 0)
            out.push_back("half " + d.graph.edge_name(h) + ": index 0");
    }
    return out;
}

DecoratedGraph extract_decoration(const GraphOfGroups& a) {
    const Graph& g = a.graph();
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (!virtually_z(*a.vertex_group(v)))
            throw ContractError("index not computable: vertex " + g.vertex_name(v) + " group " +
                                a.vertex_group(v)->describe() + " is not virtually Z");
    DecoratedGraph d;
    d.graph = g;
    for (EdgeId h = 0; h < g.num_halves(); ++h) {
        if (!virtually_z(*a.edge_group(h)))
            throw ContractError("index not computable: edge " + g.edge_name(h) + " group is not virtually Z");
        const Group& vg = *a.vertex_group(g.origin(h));
        d.index.push_back(vg.relative_index(a.alpha(h).image(), vg.whole()));
    }
    return d;
}

bool is_reduced(const DecoratedGraph& d) {
    for (EdgeId h = 0; h < d.graph.num_halves(); ++h)
        if (!d.graph.is_loop(h) && d.iso(h)) return false;
    return true;
}

DecoratedGraph reduce_decorated(const DecoratedGraph& d) {
    DecoratedGraph cur = d;
    while (true) {
        EdgeId found = kNoEdge;
        for (EdgeId h = 0; h < cur.graph.num_halves() && found == kNoEdge; ++h)
            if (!cur.graph.is_loop(h) && cur.iso(h)) found = h;
        if (found == kNoEdge) return cur;
        cur = collapse(cur, found);
    }
}

std::string to_string(Configuration c) {
    switch (c) {
        case Configuration::None: return "none";
        case Configuration::LoopBothProper: return "loop with both halves proper";
        case Configuration::EdgeNotTwoTwo: return "edge with proper halves other than (2,2)";
        case Configuration::TwoIsoLoops: return "two loops with an index-1 half at one vertex";
        case Configuration::TwoTwoEdgeWithIsoLoop: return "(2,2) edge meeting a loop with an index-1 half";
        case Configuration::ParallelTwoTwoEdges: return "two parallel (2,2) edges";
        case Configuration::TwoTwoEdgesAtVertex: return "two (2,2) edges at one vertex";
    }
    return "none";
}

std::string to_string(FgipAnswer a) {
    switch (a) {
        case FgipAnswer::Yes: return "yes";
        case FgipAnswer::No: return "no";
        case FgipAnswer::Unknown: return "unknown";
    }
    return "unknown";
}

FgipVerdict decide_fgip_vz(const DecoratedGraph& d) {
    auto bad = validate_decorated(d);
    if (!bad.empty()) throw ContractError("decide_fgip_vz: " + bad.front());
    const Graph& g = d.graph;
    std::vector<std::size_t> comp;
    if (g.components(comp) != 1) throw ContractError("decide_fgip_vz: graph is not connected");
    if (!is_reduced(d)) throw ContractError("decide_fgip_vz: graph is not reduced");

    FgipVerdict v;
    if (g.num_pairs() == 0) {
        v = yes_form(1, "single vertex");
    } else {
        for (PairId p = 0; p < g.num_pairs() && v.answer == FgipAnswer::Unknown; ++p)
            if (g.is_loop(positive_half(p)) && !is_iso_loop(d, p)) v = no_config(d, Configuration::LoopBothProper, {p});
        for (PairId p = 0; p < g.num_pairs() && v.answer == FgipAnswer::Unknown; ++p)
            if (!g.is_loop(positive_half(p)) && !is_two_two(d, p)) v = no_config(d, Configuration::EdgeNotTwoTwo, {p});
        if (v.answer == FgipAnswer::Unknown && g.num_pairs() == 1) {
            EdgeId h = positive_half(0);
            if (g.is_loop(h)) {
                EdgeId other = d.iso(h) ? inverse(h) : h;
                v = yes_form(3, "loop (1," + idx_str(d, other) + ")");
            } else {
                v = yes_form(2, "edge (2,2)");
            }
        }
        // At least two edges, each a (2,2) edge or a loop with an index-1 half.
        for (int pass = 0; pass < 4 && v.answer == FgipAnswer::Unknown; ++pass)
            for (VertexId x = 0; x < g.num_vertices() && v.answer == FgipAnswer::Unknown; ++x) {
                std::vector<PairId> loops, edges;
                for (EdgeId h : g.star(x)) {
                    PairId p = pair_of(h);
                    if (g.is_loop(h)) {
                        if (is_positive(h)) loops.push_back(p);
                    } else {
                        edges.push_back(p);
                    }
                }
                if (pass == 0 && loops.size() >= 2) v = no_config(d, Configuration::TwoIsoLoops, {loops[0], loops[1]});
                if (pass == 1 && !loops.empty() && !edges.empty())
                    v = no_config(d, Configuration::TwoTwoEdgeWithIsoLoop, {edges[0], loops[0]});
                if (pass == 2)
                    for (std::size_t i = 0; i < edges.size() && v.answer == FgipAnswer::Unknown; ++i)
                        for (std::size_t j = i + 1; j < edges.size() && v.answer == FgipAnswer::Unknown; ++j) {
                            EdgeId a = positive_half(edges[i]), b = positive_half(edges[j]);
                            auto ends = [&](EdgeId e) { return std::make_pair(std::min(g.origin(e), g.target(e)), std::max(g.origin(e), g.target(e))); };
                            if (ends(a) == ends(b))
                                v = no_config(d, Configuration::ParallelTwoTwoEdges, {edges[i], edges[j]});
                        }
                if (pass == 3 && edges.size() >= 2)
                    v = no_config(d, Configuration::TwoTwoEdgesAtVertex, {edges[0], edges[1]});
            }
        if (v.answer == FgipAnswer::Unknown) throw std::logic_error("decide_fgip_vz: scan found no configuration");
    }
    v.route = "virtually-Z three-form test";
    return v;
}

bool configuration_present(const DecoratedGraph& d, const FgipVerdict& v) {
    const Graph& g = d.graph;
    const auto& w = v.witness_pairs;
    for (PairId p : w)
        if (p >= g.num_pairs()) return false;
    auto loop = [&](PairId p) { return g.is_loop(positive_half(p)); };
    auto proper = [&](EdgeId h) { return !d.iso(h); };
    auto ends = [&](PairId p) {
        EdgeId e = positive_half(p);
        return std::make_pair(std::min(g.origin(e), g.target(e)), std::max(g.origin(e), g.target(e)));
    };
    switch (v.configuration) {
        case Configuration::None: return false;
        case Configuration::LoopBothProper:
            return w.size() == 1 && loop(w[0]) && proper(positive_half(w[0])) && proper(inverse(positive_half(w[0])));
        case Configuration::EdgeNotTwoTwo:
            return w.size() == 1 && !loop(w[0]) && proper(positive_half(w[0])) &&
                   proper(inverse(positive_half(w[0]))) && !is_two_two(d, w[0]);
        case Configuration::TwoIsoLoops:
            return w.size() == 2 && w[0] != w[1] && is_iso_loop(d, w[0]) && is_iso_loop(d, w[1]) &&
                   ends(w[0]) == ends(w[1]);
        case Configuration::TwoTwoEdgeWithIsoLoop: {
            if (w.size() != 2 || !is_two_two(d, w[0]) || !is_iso_loop(d, w[1])) return false;
            VertexId at = ends(w[1]).first;
            return ends(w[0]).first == at || ends(w[0]).second == at;
        }
        case Configuration::ParallelTwoTwoEdges:
            return w.size() == 2 && w[0] != w[1] && is_two_two(d, w[0]) && is_two_two(d, w[1]) &&
                   ends(w[0]) == ends(w[1]);
        case Configuration::TwoTwoEdgesAtVertex: {
            if (w.size() != 2 || w[0] == w[1] || !is_two_two(d, w[0]) || !is_two_two(d, w[1])) return false;
            auto a = ends(w[0]), b = ends(w[1]);
            int shared = (a.first == b.first) + (a.first == b.second) + (a.second == b.first) + (a.second == b.second);
            return shared == 1;
        }
    }
    return false;
}

FgipVerdict decide_fgip_decorated(const DecoratedGraph& d) {
    auto bad = validate_decorated(d);
    if (!bad.empty()) throw ContractError("decide_fgip: " + bad.front());
    std::vector<std::size_t> comp;
    const std::size_t n = d.graph.components(comp);
    FgipVerdict out;
    out.route = "virtually-Z three-form test";
    if (n == 0) {
        out.answer = FgipAnswer::Yes;
        out.certificate = "empty graph";
        return out;
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<bool> keep(d.graph.num_vertices());
        for (VertexId x = 0; x < keep.size(); ++x) keep[x] = comp[x] == c;
        out.components.push_back(decide_fgip_vz(reduce_decorated(restrict_decorated(d, keep))));
    }
    if (n == 1) return out.components.front();
    out.answer = FgipAnswer::Yes;
    for (std::size_t c = 0; c < n; ++c) {
        if (out.components[c].answer == FgipAnswer::No) out.answer = FgipAnswer::No;
        if (c) out.certificate += "; ";
        out.certificate += "component " + std::to_string(c) + ": " + out.components[c].certificate;
    }
    return out;
}

FgipVerdict decide_fgip_gbs(const GraphOfGroups& a) { return decide_fgip_decorated(extract_decoration(a)); }

WConstruction w_construction(const GraphOfGroups& a) {
    const Graph& g = a.graph();
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        if (a.vertex_group(v)->kind() != GroupKind::Free)
            throw ContractError("w_construction: vertex " + g.vertex_name(v) + " group is not free");
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        const Group& eg = *a.edge_group(positive_half(p));
        if (!infinite_cyclic(eg) || eg.generators().size() != 1)
            throw ContractError("w_construction: edge " + g.pair_name(p) + " group is not infinite cyclic");
    }
    WConstruction w;
    w.class_of.assign(g.num_halves(), 0);
    w.conjugator.assign(g.num_halves(), {});
    w.exponent.assign(g.num_halves(), 0);
    for (VertexId u = 0; u < g.num_vertices(); ++u) {
        const auto& fg = static_cast<const FreeGroup&>(*a.vertex_group(u));
        std::vector<VertexId> here;  // classes at u
        for (EdgeId h : g.star(u)) {
            Word img = as_word(a.alpha(h).images().front());
            words::Root rt = words::primitive_root(img);
            bool placed = false;
            for (VertexId c : here) {
                auto x = words::cyclic_conjugate(w.classes[c].root, rt.root);
                if (!x) continue;
                w.class_of[h] = c;
                w.conjugator[h] = x->x;
                w.exponent[h] = x->inverted ? -rt.power : rt.power;
                placed = true;
                break;
            }
            if (!placed) {
                w.class_of[h] = static_cast<VertexId>(w.classes.size());
                here.push_back(w.class_of[h]);
                w.classes.push_back({u, h, rt.root});
                w.exponent[h] = rt.power;
            }
            const Word& x = w.conjugator[h];
            Element lhs = fg.multiply(fg.multiply(as_element(x), as_element(img)), fg.invert(as_element(x)));
            if (lhs != fg.power(as_element(w.classes[w.class_of[h]].root), w.exponent[h]))
                throw std::logic_error("w_construction: conjugator does not align the commensurators");
        }
    }
    auto z = std::make_shared<AbelianGroup>(1, std::vector<Int>{});
    for (const auto& c : w.classes)
        w.gog.add_vertex(g.vertex_name(c.vertex) + "[" + words::format(c.root) + "]", z);
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId h = positive_half(p);
        w.gog.add_edge(w.class_of[h], w.class_of[inverse(h)], g.pair_name(p), z,
                       std::vector<Element>{Element{{w.exponent[h]}}},
                       std::vector<Element>{Element{{w.exponent[inverse(h)]}}});
    }
    return w;
}

FgipVerdict decide_fgip_free_cyclic(const GraphOfGroups& a) {
    WConstruction w = w_construction(a);
    FgipVerdict v = decide_fgip_decorated(extract_decoration(w.gog));
    v.route = "commensurator graph, then virtually-Z three-form test";
    if (w.classes.empty()) v.certificate = "no edges: free vertex groups";
    return v;
}

FgipVerdict fgip_certify(const GraphOfGroups& a, const std::vector<bool>& vertex_fgip) {
    const Graph& g = a.graph();
    bool finite_edges = true, flagged = true, all_vz = true, free_cyclic = true;
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
        const Group& vg = *a.vertex_group(v);
        flagged = flagged && v < vertex_fgip.size() && vertex_fgip[v];
        all_vz = all_vz && virtually_z(vg);
        free_cyclic = free_cyclic && vg.kind() == GroupKind::Free;
    }
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        const Group& eg = *a.edge_group(positive_half(p));
        finite_edges = finite_edges && eg.is_finite(eg.whole());
        all_vz = all_vz && virtually_z(eg);
        free_cyclic = free_cyclic && infinite_cyclic(eg);
    }
    if (finite_edges && flagged) {
        FgipVerdict v;
        v.answer = FgipAnswer::Yes;
        v.route = "finite edge groups";
        v.certificate = "every vertex group has the FGIP and every edge group is finite";
        return v;
    }
    if (all_vz) return decide_fgip_gbs(a);
    if (free_cyclic) return decide_fgip_free_cyclic(a);
    FgipVerdict v;
    v.route = "none";
    v.certificate = "no decision route applies";
    return v;
}

}  // namespace bst
