#include <deque>
#include <random>
#include <set>

#include "bst/abelian_group.hpp"
#include "bst/builders.hpp"
#include "bst/gog.hpp"
#include "doctest.h"
#include "support/sampling.hpp"

using namespace bst;
using namespace bst::sampling;

namespace {

Element z(Int x) { return Element{{x}}; }

GroupPtr zgroup() { return std::make_shared<const AbelianGroup>(1, std::vector<Int>{}); }

Graph random_graph(std::mt19937_64& rng, std::size_t max_vertices, std::size_t max_pairs) {
    std::uniform_int_distribution<std::size_t> nv(1, max_vertices), np(0, max_pairs);
    Graph g;
    std::size_t n = nv(rng);
    for (std::size_t i = 0; i < n; ++i) g.add_vertex("v" + std::to_string(i));
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    for (std::size_t i = np(rng); i > 0; --i) g.add_edge(pick(rng), pick(rng));
    return g;
}

// Non-backtracking successor relation on halves; a circuit through e that is cyclically
// reduced is exactly a non-trivial cycle visiting e in this relation.
std::vector<std::vector<EdgeId>> non_backtracking(const Graph& g) {
    std::vector<std::vector<EdgeId>> next(g.num_halves());
    for (EdgeId e = 0; e < g.num_halves(); ++e)
        for (EdgeId f : g.star(g.target(e)))
            if (f != inverse(e)) next[e].push_back(f);
    return next;
}

std::vector<bool> reachable(const std::vector<std::vector<EdgeId>>& next, const std::vector<EdgeId>& from) {
    std::vector<bool> seen(next.size(), false);
    std::deque<EdgeId> q;
    for (EdgeId e : from) {
        if (!seen[e]) q.push_back(e);
        seen[e] = true;
    }
    while (!q.empty()) {
        EdgeId e = q.front();
        q.pop_front();
        for (EdgeId f : next[e])
            if (!seen[f]) {
                seen[f] = true;
                q.push_back(f);
            }
    }
    return seen;
}

// Pairs lying on some cyclically reduced circuit.
std::set<PairId> oracle_core(const Graph& g) {
    auto next = non_backtracking(g);
    std::set<PairId> out;
    for (EdgeId e = 0; e < g.num_halves(); ++e)
        if (reachable(next, next[e])[e]) out.insert(pair_of(e));
    return out;
}

// Pairs lying on some reduced closed path at u.
std::set<PairId> oracle_core_at(const Graph& g, VertexId u) {
    auto next = non_backtracking(g);
    std::vector<bool> from_u = reachable(next, g.star(u));
    std::set<PairId> out;
    for (EdgeId e = 0; e < g.num_halves(); ++e) {
        if (!from_u[e]) continue;
        std::vector<bool> ahead = reachable(next, {e});
        for (EdgeId h = 0; h < g.num_halves(); ++h)
            if (ahead[h] && g.target(h) == u) {
                out.insert(pair_of(e));
                break;
            }
    }
    return out;
}

std::set<PairId> pairs_of(const Subgraph& s) { return {s.pair_origin.begin(), s.pair_origin.end()}; }

// u -e-> v -f-> w over Z with α = ×1 on both edges (both collapse), ω = ×2 and ×3,
// and a BS(1,2) loop t at w.
std::shared_ptr<GraphOfGroups> collapsible_chain() {
    auto zg = zgroup();
    auto a = std::make_shared<GraphOfGroups>();
    a->add_vertex("u", zg);
    a->add_vertex("v", zg);
    a->add_vertex("w", zg);
    a->add_edge(0, 1, "e", zg, {z(1)}, {z(2)});
    a->add_edge(1, 2, "f", zg, {z(1)}, {z(3)});
    a->add_edge(2, 2, "t", zg, {z(1)}, {z(2)});
    a->basepoint = 0;
    return a;
}

}  // namespace

TEST_CASE("graph validation catches a self-inverse edge") {
    RawGraph ok{2, {0, 1}, {1, 0}, {1, 0}};
    CHECK(validate_graph(ok).empty());
    RawGraph fixed{1, {0}, {0}, {0}};
    auto v = validate_graph(fixed);
    REQUIRE(v.size() == 1);
    CHECK(v[0].reason == "inverse(e) = e");
    RawGraph tri{3, {0, 1, 1, 2, 2, 0}, {1, 0, 2, 1, 0, 2}, {1, 0, 3, 2, 5, 4}};
    CHECK(validate_graph(tri).empty());
    CHECK(graph_from_raw(tri).num_pairs() == 3);
}

TEST_CASE("cores of trees, lollipops and wedges") {
    Graph tree;
    for (int i = 0; i < 4; ++i) tree.add_vertex();
    tree.add_edge(0, 1);
    tree.add_edge(1, 2);
    tree.add_edge(1, 3);
    CHECK(core(tree).graph.num_vertices() == 0);
    CHECK(core_at(tree, 2).graph.num_vertices() == 1);
    CHECK(core_at(tree, 2).graph.num_pairs() == 0);

    Graph lollipop;
    for (int i = 0; i < 4; ++i) lollipop.add_vertex();
    lollipop.add_edge(0, 1);
    lollipop.add_edge(1, 2);
    lollipop.add_edge(2, 0);
    lollipop.add_edge(2, 3);  // pendant segment
    CHECK(pairs_of(core(lollipop)) == std::set<PairId>{0, 1, 2});
    CHECK(pairs_of(core_at(lollipop, 0)) == std::set<PairId>{0, 1, 2});
    CHECK(pairs_of(core_at(lollipop, 3)) == std::set<PairId>{0, 1, 2, 3});

    Graph wedge;
    wedge.add_vertex();
    wedge.add_edge(0, 0);
    wedge.add_edge(0, 0);
    CHECK(core(wedge).graph.num_pairs() == 2);
    CHECK_THROWS_AS(core_at(wedge, 5), std::out_of_range);
}

TEST_CASE("cores match exhaustive circuit search and are idempotent") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 300; ++trial) {
        Graph g = random_graph(rng, 7, 12);
        Subgraph c = core(g);
        CHECK(pairs_of(c) == oracle_core(g));
        Subgraph cc = core(c.graph);
        CHECK(cc.graph.num_vertices() == c.graph.num_vertices());
        CHECK(cc.graph.num_pairs() == c.graph.num_pairs());
        VertexId u = 0;
        Subgraph ca = core_at(g, u);
        CHECK(pairs_of(ca) == oracle_core_at(g, u));
        // u survives as vertex 0 of the restriction since it has the least id.
        REQUIRE(!ca.vertex_origin.empty());
        CHECK(ca.vertex_origin[0] == u);
        Subgraph caa = core_at(ca.graph, 0);
        CHECK(caa.graph.num_pairs() == ca.graph.num_pairs());
    }
}

TEST_CASE("fiber products of covers and roses") {
    Graph circle;
    circle.add_vertex();
    circle.add_edge(0, 0);
    Graph c2;
    c2.add_vertex();
    c2.add_vertex();
    c2.add_edge(0, 1);
    c2.add_edge(1, 0);
    GraphMorphism cover{{0, 0}, {0, 1, 0, 1}};
    REQUIRE(is_graph_morphism(c2, circle, cover));
    FiberProduct fp = fiber_product(c2, c2, cover, cover);
    CHECK(fp.graph.num_vertices() == 4);
    CHECK(fp.graph.num_pairs() == 4);
    std::vector<std::size_t> comp;
    CHECK(fp.graph.components(comp) == 2);
    CHECK(is_graph_morphism(fp.graph, c2, fp.proj1));
    CHECK(is_graph_morphism(fp.graph, c2, fp.proj2));

    Graph rose2;
    rose2.add_vertex();
    rose2.add_edge(0, 0);
    rose2.add_edge(0, 0);
    GraphMorphism fold{{0}, {0, 1, 0, 1}};
    FiberProduct fr = fiber_product(rose2, rose2, fold, fold);
    CHECK(fr.graph.num_vertices() == 1);
    CHECK(fr.graph.num_pairs() == 4);

    GraphMorphism id{{0}, {0, 1, 2, 3}};
    FiberProduct diag = fiber_product(rose2, rose2, id, id);
    CHECK(diag.graph.num_pairs() == 2);
}

TEST_CASE("random fiber products project by graph morphisms") {
    std::mt19937_64 rng(5);
    Graph target;
    target.add_vertex();
    target.add_vertex();
    target.add_edge(0, 1);
    target.add_edge(1, 1);
    // Random graphs over the target: each source edge picks a target half from its
    // origin's image, and its target is forced into that half's end.
    auto over = [&](std::size_t nv, std::size_t ne, Graph& g, GraphMorphism& m) {
        std::bernoulli_distribution side(0.5);
        for (std::size_t i = 0; i < nv; ++i) {
            g.add_vertex();
            m.vertex_map.push_back(side(rng) ? 1 : 0);
        }
        std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(nv - 1));
        for (std::size_t k = 0; k < 8 * ne && g.num_pairs() < ne; ++k) {
            VertexId o = pick(rng), t = pick(rng);
            const auto& star = target.star(m.vertex_map[o]);
            EdgeId h = star[std::uniform_int_distribution<std::size_t>(0, star.size() - 1)(rng)];
            if (target.target(h) != m.vertex_map[t]) continue;
            g.add_edge(o, t);
            m.edge_map.push_back(h);
            m.edge_map.push_back(inverse(h));
        }
    };
    for (int trial = 0; trial < 100; ++trial) {
        Graph g1, g2;
        GraphMorphism m1, m2;
        over(4, 6, g1, m1);
        over(4, 6, g2, m2);
        REQUIRE(is_graph_morphism(g1, target, m1));
        REQUIRE(is_graph_morphism(g2, target, m2));
        FiberProduct fp = fiber_product(g1, g2, m1, m2);
        CHECK(is_graph_morphism(fp.graph, g1, fp.proj1));
        CHECK(is_graph_morphism(fp.graph, g2, fp.proj2));
        std::size_t expect_v = 0, expect_h = 0;
        for (VertexId v = 0; v < g1.num_vertices(); ++v)
            for (VertexId w = 0; w < g2.num_vertices(); ++w) expect_v += m1.vertex_map[v] == m2.vertex_map[w];
        for (EdgeId e = 0; e < g1.num_halves(); ++e)
            for (EdgeId f = 0; f < g2.num_halves(); ++f) expect_h += m1.edge_map[e] == m2.edge_map[f];
        CHECK(fp.graph.num_vertices() == expect_v);
        CHECK(fp.graph.num_halves() == expect_h);
    }
}

TEST_CASE("graph of groups validation flags non-injective edge maps") {
    CHECK(validate_gog(*baumslag_solitar(1, 2)).empty());
    auto zg = zgroup();
    GraphOfGroups bad;
    bad.add_vertex("u", zg);
    bad.add_edge(0, 0, "e", zg, {z(1)}, {z(0)});
    auto v = validate_gog(bad);
    REQUIRE(v.size() == 1);
    CHECK(v[0].where.find("e") != std::string::npos);
}

TEST_CASE("A-path concatenation, inversion and Britton reduction") {
    auto a = baumslag_solitar(1, 2);
    APath p{0, {z(3), z(1)}, {0}};
    CHECK(apaths_equal(*a, concat(*a, p, trivial_apath(*a, 0)), p));
    APath pp = reduce(*a, concat(*a, p, inverse(*a, p)));
    CHECK(pp.length() == 0);
    CHECK(pp.elems[0] == z(0));

    // (1, e, a², e⁻¹, 1) → (a); (1, e, a, e⁻¹, 1) is already reduced.
    APath pinch{0, {z(0), z(2), z(0)}, {0, 1}};
    APath r = reduce(*a, pinch);
    CHECK(r.length() == 0);
    CHECK(r.elems[0] == z(1));
    CHECK(apaths_equal(*a, pinch, element_apath(0, z(1))));
    APath stuck{0, {z(0), z(1), z(0)}, {0, 1}};
    CHECK(is_reduced(*a, stuck));
    CHECK(reduce(*a, stuck).length() == 2);
    CHECK_FALSE(apaths_equal(*a, element_apath(0, z(1)), element_apath(0, z(2))));
    auto seg = z_amalgam(2, 2);
    CHECK_THROWS_AS(apaths_equal(*seg, APath{0, {z(0), z(0)}, {0}}, element_apath(0, z(0))), ContractError);
}

TEST_CASE("cyclic reduction splits off the conjugator") {
    auto a = baumslag_solitar(1, 2);
    APath c{0, {z(1), z(0)}, {0}};  // (a, e, 1) is cyclically reduced
    CyclicReduction cr = cyclically_reduce(*a, c);
    CHECK(cr.conjugator.length() == 0);
    CHECK(apaths_equal(*a, cr.core, c));

    APath q{0, {z(1), z(1)}, {1}};  // (a, e⁻¹, a)
    APath conj = concat(*a, concat(*a, q, c), inverse(*a, q));
    CyclicReduction cq = cyclically_reduce(*a, conj);
    CHECK(is_cyclically_reduced(*a, cq.core));
    CHECK(apaths_equal(*a, concat(*a, concat(*a, cq.conjugator, cq.core), inverse(*a, cq.conjugator)), conj));
    CHECK(cq.core.length() == 1);

    APath back = concat(*a, q, inverse(*a, q));
    CHECK(cyclically_reduce(*a, back).core.length() == 0);
    auto seg = z_amalgam(2, 2);
    CHECK_THROWS_AS(cyclically_reduce(*seg, APath{0, {z(0), z(0)}, {0}}), ContractError);
}

TEST_CASE("cores of graphs of groups follow the turn rule") {
    auto bs = baumslag_solitar(1, 2);
    CHECK(gog_core(*bs).gog.graph().num_pairs() == 1);

    // u -(2,2)- v -(1,k)- w: the pendant w survives at u iff ω is not onto.
    for (Int k : {1, 2}) {
        auto zg = zgroup();
        GraphOfGroups a;
        a.add_vertex("u", zg);
        a.add_vertex("v", zg);
        a.add_vertex("w", zg);
        a.add_edge(0, 1, "e", zg, {z(2)}, {z(2)});
        a.add_edge(1, 2, "p", zg, {z(1)}, {z(k)});
        SubGog c = gog_core_at(a, 0);
        CHECK(c.gog.graph().num_vertices() == (k == 1 ? 2u : 3u));
    }

    auto zg = zgroup();
    GraphOfGroups tree;
    tree.add_vertex("u", zg);
    tree.add_vertex("v", zg);
    tree.add_vertex("w", zg);
    tree.add_edge(0, 1, "e", zg, {z(1)}, {z(1)});
    tree.add_edge(1, 2, "f", zg, {z(1)}, {z(1)});
    CHECK(gog_core(tree).gog.graph().num_vertices() == 0);
    SubGog cb = gog_core(*collapsible_chain());
    SubGog cbb = gog_core(cb.gog);
    CHECK(cbb.gog.graph().num_pairs() == cb.gog.graph().num_pairs());
}

TEST_CASE("edge collapses compose the carried maps") {
    auto seg = z_amalgam(1, 2);
    ReducedGog r = reduce_gog(*seg, 0);
    CHECK(r.gog.graph().num_vertices() == 1);
    CHECK(r.gog.graph().num_pairs() == 0);
    CHECK(r.steps.size() == 1);

    auto bs = baumslag_solitar(2, 3);
    CHECK(reduce_gog(*bs, 0).steps.empty());

    auto chain = collapsible_chain();
    ReducedGog rc = reduce_gog(*chain, 0);
    REQUIRE(rc.gog.graph().num_vertices() == 1);
    CHECK(rc.gog.graph().num_pairs() == 1);
    APath moved = rc.transport(element_apath(0, z(1)));
    CHECK(moved.start == rc.basepoint);
    CHECK(moved.elems[0] == z(6));
}

TEST_CASE("collapses preserve equality of circuits at the basepoint") {
    auto a = collapsible_chain();
    ReducedGog r = reduce_gog(*a, 0);
    std::mt19937_64 rng(17);
    std::size_t equal = 0;
    for (int trial = 0; trial < 400; ++trial) {
        APath p = random_apath(*a, rng, 0, 6);
        APath q = random_apath(*a, rng, 0, 6);
        auto close = [&](APath x) {
            APath back = reduce(*a, x);
            // Return to u along the chain pulled back to the last vertex.
            VertexId end = apath_end(*a, back);
            const Graph& g = a->graph();
            while (end != 0) {
                EdgeId h = end == 2 ? 3 : 1;  // f⁻¹ then e⁻¹
                back.edges.push_back(h);
                back.elems.push_back(z(0));
                end = g.target(h);
            }
            return back;
        };
        p = close(p);
        q = close(q);
        // Force some equal pairs: q = p with a detour.
        if (trial % 3 == 0) q = insert_backtrack(*a, p, rng);
        bool before = apaths_equal(*a, p, q);
        bool after = apaths_equal(r.gog, r.transport(p), r.transport(q));
        CHECK(before == after);
        equal += before;
    }
    CHECK(equal > 100);
}

TEST_CASE("Britton reduction is confluent under random backtrack insertion") {
    std::mt19937_64 rng(3);
    for (auto a : {baumslag_solitar(1, 2), z_amalgam(2, 2)}) {
        for (int trial = 0; trial < 500; ++trial) {
            APath p = reduce(*a, random_apath(*a, rng, 0, 6));
            APath noisy = p;
            for (int k = std::uniform_int_distribution<int>(1, 4)(rng); k > 0; --k) noisy = insert_backtrack(*a, noisy, rng);
            APath back = reduce(*a, noisy);
            CHECK(is_reduced(*a, back));
            CHECK(back.edges == p.edges);
            CHECK(apaths_equal(*a, back, p));
            CHECK(back.length() <= noisy.length());
        }
    }
}

TEST_CASE("A-path equality is a congruence") {
    auto a = baumslag_solitar(1, 2);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        APath p = random_apath(*a, rng, 0, 4);
        APath p2 = insert_backtrack(*a, p, rng);
        APath p3 = insert_backtrack(*a, p2, rng);
        APath s = random_apath(*a, rng, 0, 3);
        CHECK(apaths_equal(*a, p, p));
        CHECK(apaths_equal(*a, p2, p) == apaths_equal(*a, p, p2));
        CHECK(apaths_equal(*a, p, p3));
        CHECK(apaths_equal(*a, concat(*a, p2, s), concat(*a, p, s)));
        APath t = inverse(*a, s);
        CHECK(apaths_equal(*a, concat(*a, t, p3), concat(*a, t, p)));
    }
}
