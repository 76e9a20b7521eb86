#include <random>
#include <tuple>

#include "bst/abelian_group.hpp"
#include "bst/builders.hpp"
#include "bst/fgip.hpp"
#include "bst/finite_group.hpp"
#include "doctest.h"

using namespace bst;

namespace {

using EdgeSpec = std::tuple<VertexId, VertexId, std::uint64_t, std::uint64_t>;

DecoratedGraph decorated(std::size_t nv, const std::vector<EdgeSpec>& edges) {
    DecoratedGraph d;
    for (std::size_t i = 0; i < nv; ++i) d.graph.add_vertex("v" + std::to_string(i));
    for (const auto& [a, b, m, n] : edges) {
        d.graph.add_edge(a, b, "e" + std::to_string(d.graph.num_pairs()));
        d.index.push_back(Index::finite(m));
        d.index.push_back(Index::finite(n));
    }
    return d;
}

Word word(const std::string& s) { return *words::parse(s, 2); }

DecoratedGraph random_decorated(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv(1, 3), np(0, 3), idx(1, 3);
    std::size_t n = static_cast<std::size_t>(nv(rng));
    std::uniform_int_distribution<VertexId> vx(0, static_cast<VertexId>(n - 1));
    std::vector<EdgeSpec> edges;
    for (int p = np(rng); p > 0; --p)
        edges.emplace_back(vx(rng), vx(rng), static_cast<std::uint64_t>(idx(rng)), static_cast<std::uint64_t>(idx(rng)));
    return decorated(n, edges);
}

// GBS over Z as either a rank-1 abelian or a rank-1 free backend.
std::shared_ptr<GraphOfGroups> gbs(std::size_t nv, const std::vector<std::tuple<VertexId, VertexId, Int, Int>>& edges,
                                   bool free_backend) {
    auto a = std::make_shared<GraphOfGroups>();
    GroupPtr z = std::make_shared<AbelianGroup>(1, std::vector<Int>{});
    GroupPtr f1 = std::make_shared<FreeGroup>(1);
    auto img = [&](Int m) { return free_backend ? as_element(words::power({1}, m)) : Element{{m}}; };
    for (std::size_t i = 0; i < nv; ++i) a->add_vertex("u" + std::to_string(i), free_backend ? f1 : z);
    for (const auto& [x, y, m, n] : edges)
        a->add_edge(x, y, "e" + std::to_string(a->graph().num_pairs()), z, std::vector<Element>{img(m)},
                    std::vector<Element>{img(n)});
    return a;
}

}  // namespace

TEST_CASE("reduction collapses index-1 halves") {
    DecoratedGraph seg = reduce_decorated(decorated(2, {{0, 1, 1, 5}}));
    CHECK(seg.graph.num_vertices() == 1);
    CHECK(seg.graph.num_pairs() == 0);
    DecoratedGraph path = reduce_decorated(decorated(3, {{0, 1, 1, 2}, {1, 2, 1, 3}}));
    CHECK(path.graph.num_vertices() == 1);
    DecoratedGraph bs = reduce_decorated(decorated(1, {{0, 0, 2, 3}}));
    CHECK(bs.graph.num_pairs() == 1);
    // A loop at the removed vertex picks up the far-side index on both halves.
    DecoratedGraph carried = reduce_decorated(decorated(2, {{0, 1, 1, 2}, {0, 0, 1, 3}}));
    REQUIRE(carried.graph.num_pairs() == 1);
    CHECK(carried.index[0] == Index::finite(2));
    CHECK(carried.index[1] == Index::finite(6));
}

TEST_CASE("virtually-Z three-form test") {
    auto check_yes = [](const DecoratedGraph& d, int form, const std::string& cert) {
        FgipVerdict v = decide_fgip_decorated(d);
        CHECK(v.answer == FgipAnswer::Yes);
        CHECK(v.form == form);
        CHECK(v.certificate == cert);
    };
    auto check_no = [](const DecoratedGraph& d, Configuration c) {
        DecoratedGraph r = reduce_decorated(d);
        FgipVerdict v = decide_fgip_vz(r);
        CHECK(v.answer == FgipAnswer::No);
        CHECK(v.configuration == c);
        CHECK(configuration_present(r, v));
    };
    check_yes(decorated(1, {}), 1, "form 1: single vertex");
    check_yes(decorated(2, {{0, 1, 2, 2}}), 2, "form 2: edge (2,2)");
    check_yes(decorated(1, {{0, 0, 1, 2}}), 3, "form 3: loop (1,2)");
    check_yes(decorated(1, {{0, 0, 3, 1}}), 3, "form 3: loop (1,3)");
    check_yes(decorated(1, {{0, 0, 1, 1}}), 3, "form 3: loop (1,1)");
    check_no(decorated(1, {{0, 0, 2, 3}}), Configuration::LoopBothProper);
    check_no(decorated(1, {{0, 0, 2, 2}}), Configuration::LoopBothProper);
    check_no(decorated(2, {{0, 1, 2, 3}}), Configuration::EdgeNotTwoTwo);
    check_no(decorated(1, {{0, 0, 1, 1}, {0, 0, 1, 1}}), Configuration::TwoIsoLoops);
    check_no(decorated(2, {{0, 1, 2, 2}, {1, 1, 1, 2}}), Configuration::TwoTwoEdgeWithIsoLoop);
    check_no(decorated(2, {{0, 1, 2, 2}, {1, 0, 2, 2}}), Configuration::ParallelTwoTwoEdges);
    check_no(decorated(3, {{0, 1, 2, 2}, {1, 2, 2, 2}}), Configuration::TwoTwoEdgesAtVertex);
    // Loop checks run before edge checks.
    check_no(decorated(2, {{0, 1, 2, 3}, {1, 1, 2, 2}}), Configuration::LoopBothProper);
    CHECK_THROWS_AS(decide_fgip_vz(decorated(2, {{0, 1, 1, 2}})), ContractError);
    CHECK_THROWS_AS(decide_fgip_vz(decorated(2, {})), ContractError);
}

TEST_CASE("disconnected decorated graphs are decided per component") {
    FgipVerdict v = decide_fgip_decorated(decorated(3, {{0, 0, 1, 2}, {1, 2, 2, 3}}));
    CHECK(v.answer == FgipAnswer::No);
    REQUIRE(v.components.size() == 2);
    CHECK(v.components[0].answer == FgipAnswer::Yes);
    CHECK(v.components[1].configuration == Configuration::EdgeNotTwoTwo);
}

TEST_CASE("decorated verdicts survive subdivision and name genuine configurations") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 300; ++trial) {
        DecoratedGraph d = random_decorated(rng);
        FgipVerdict v = decide_fgip_decorated(d);
        for (const FgipVerdict& c : v.components.empty() ? std::vector<FgipVerdict>{v} : v.components)
            CHECK((c.answer == FgipAnswer::Yes) == (c.configuration == Configuration::None));
        if (d.graph.num_pairs() == 0) continue;
        std::uniform_int_distribution<PairId> pick(0, static_cast<PairId>(d.graph.num_pairs() - 1));
        PairId p = pick(rng);
        DecoratedGraph s;
        for (VertexId x = 0; x < d.graph.num_vertices(); ++x) s.graph.add_vertex(d.graph.vertex_name(x));
        VertexId mid = s.graph.add_vertex("mid");
        for (PairId q = 0; q < d.graph.num_pairs(); ++q) {
            EdgeId h = positive_half(q);
            if (q == p) {
                s.graph.add_edge(d.graph.origin(h), mid);
                s.index.push_back(d.index[h]);
                s.index.push_back(Index::finite(1));
                s.graph.add_edge(mid, d.graph.target(h));
                s.index.push_back(Index::finite(1));
                s.index.push_back(d.index[inverse(h)]);
            } else {
                s.graph.add_edge(d.graph.origin(h), d.graph.target(h));
                s.index.push_back(d.index[h]);
                s.index.push_back(d.index[inverse(h)]);
            }
        }
        FgipVerdict vs = decide_fgip_decorated(s);
        CHECK(vs.answer == v.answer);
        std::vector<std::size_t> comp;
        if (d.graph.components(comp) == 1) {
            DecoratedGraph r = reduce_decorated(d);
            FgipVerdict vr = decide_fgip_vz(r);
            if (vr.answer == FgipAnswer::No) CHECK(configuration_present(r, vr));
        }
    }
}

TEST_CASE("GBS truth table") {
    CHECK(decide_fgip_gbs(*gbs(1, {}, false)).answer == FgipAnswer::Yes);
    for (auto [m, n, expect] : std::vector<std::tuple<Int, Int, FgipAnswer>>{
             {1, 1, FgipAnswer::Yes},
             {1, -1, FgipAnswer::Yes},
             {1, 2, FgipAnswer::Yes},
             {1, 3, FgipAnswer::Yes},
             {1, 5, FgipAnswer::Yes},
             {2, 3, FgipAnswer::No},
             {2, 2, FgipAnswer::No},
             {3, 3, FgipAnswer::No}}) {
        FgipVerdict v = decide_fgip_gbs(*baumslag_solitar(m, n));
        CHECK(v.answer == expect);
    }
    CHECK(decide_fgip_gbs(*baumslag_solitar(1, 2)).certificate == "form 3: loop (1,2)");
    CHECK(decide_fgip_gbs(*baumslag_solitar(2, 3)).configuration == Configuration::LoopBothProper);
    CHECK(decide_fgip_gbs(*z_amalgam(2, 2)).form == 2);
    CHECK(decide_fgip_gbs(*z_amalgam(2, 3)).configuration == Configuration::EdgeNotTwoTwo);
}

TEST_CASE("commensurator graph construction") {
    WConstruction w = w_construction(*free_double(word("aa"), word("aaa")));
    REQUIRE(w.gog.graph().num_vertices() == 2);
    DecoratedGraph d = extract_decoration(w.gog);
    CHECK(d.index[0] == Index::finite(2));
    CHECK(d.index[1] == Index::finite(3));
    CHECK(validate_gog(w.gog).empty());

    DecoratedGraph prim = extract_decoration(w_construction(*free_double(word("ab"), word("aB"))).gog);
    CHECK(prim.index[0] == Index::finite(1));
    CHECK(prim.index[1] == Index::finite(1));

    // Two edges at one vertex with images a² and b³; and a third conjugate to a.
    auto f2 = std::make_shared<FreeGroup>(2);
    auto z = std::make_shared<AbelianGroup>(1, std::vector<Int>{});
    GraphOfGroups a;
    a.add_vertex("u", f2);
    a.add_vertex("x", f2);
    a.add_edge(0, 1, "e", z, std::vector<Element>{as_element(word("aa"))}, std::vector<Element>{as_element(word("a"))});
    a.add_edge(0, 1, "f", z, std::vector<Element>{as_element(word("bbb"))}, std::vector<Element>{as_element(word("b"))});
    a.add_edge(0, 1, "g", z, std::vector<Element>{as_element(word("baB"))}, std::vector<Element>{as_element(word("ab"))});
    WConstruction wc = w_construction(a);
    CHECK(wc.class_of[positive_half(0)] != wc.class_of[positive_half(1)]);
    CHECK(wc.class_of[positive_half(0)] == wc.class_of[positive_half(2)]);
    CHECK(std::abs(wc.exponent[positive_half(2)]) == 1);
    CHECK(validate_gog(wc.gog).empty());
    CHECK_THROWS_AS(w_construction(*baumslag_solitar(1, 2)), ContractError);
}

TEST_CASE("FGIP of doubles of F2 along cyclic words") {
    CHECK(decide_fgip_free_cyclic(*free_double(word("ab"), word("ab"))).answer == FgipAnswer::Yes);
    CHECK(decide_fgip_free_cyclic(*free_double(word("aa"), word("aa"))).answer == FgipAnswer::Yes);
    CHECK(decide_fgip_free_cyclic(*free_double(word("abab"), word("BaBa"))).answer == FgipAnswer::Yes);
    FgipVerdict cube = decide_fgip_free_cyclic(*free_double(word("aaa"), word("aaa")));
    CHECK(cube.answer == FgipAnswer::No);
    CHECK(cube.configuration == Configuration::EdgeNotTwoTwo);
    CHECK(decide_fgip_free_cyclic(*free_double(word("aa"), word("aaa"))).answer == FgipAnswer::No);
}

TEST_CASE("GBS deciders agree across backends") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> nv(1, 3), np(0, 3);
    std::uniform_int_distribution<Int> mult(-3, 3);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = static_cast<std::size_t>(nv(rng));
        std::uniform_int_distribution<VertexId> vx(0, static_cast<VertexId>(n - 1));
        std::vector<std::tuple<VertexId, VertexId, Int, Int>> edges;
        for (int p = np(rng); p > 0; --p) {
            Int m = 0, k = 0;
            while (m == 0) m = mult(rng);
            while (k == 0) k = mult(rng);
            edges.emplace_back(vx(rng), vx(rng), m, k);
        }
        FgipAnswer viaz = decide_fgip_gbs(*gbs(n, edges, false)).answer;
        CHECK(decide_fgip_gbs(*gbs(n, edges, true)).answer == viaz);
        CHECK(decide_fgip_free_cyclic(*gbs(n, edges, true)).answer == viaz);
    }
}

TEST_CASE("certificate routing") {
    auto c2 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(2));
    auto c3 = std::make_shared<FiniteGroup>(FiniteGroup::cyclic(3));
    FgipVerdict v = fgip_certify(*finite_free_product(c2, c3), {true, true});
    CHECK(v.answer == FgipAnswer::Yes);
    CHECK(v.route == "finite edge groups");
    CHECK(fgip_certify(*finite_free_product(c2, c3), {true, false}).answer == FgipAnswer::Unknown);
    CHECK(fgip_certify(*baumslag_solitar(1, 2), {}).answer == FgipAnswer::Yes);
    CHECK(fgip_certify(*free_double(word("aaa"), word("aaa")), {}).answer == FgipAnswer::No);
    GraphOfGroups mixed;
    mixed.add_vertex("f", std::make_shared<FreeGroup>(2));
    mixed.add_vertex("z2", std::make_shared<AbelianGroup>(2, std::vector<Int>{}));
    auto z = std::make_shared<AbelianGroup>(1, std::vector<Int>{});
    mixed.add_edge(0, 1, "e", z, std::vector<Element>{as_element(word("a"))}, std::vector<Element>{Element{{1, 0}}});
    CHECK(fgip_certify(mixed, {false, false}).answer == FgipAnswer::Unknown);
}
