#include "bst/builders.hpp"

#include "bst/abelian_group.hpp"

namespace bst {

namespace {

Element z(Int x) { return Element{{x}}; }

}  // namespace

std::shared_ptr<GraphOfGroups> rose(std::size_t n) {
    auto g = std::make_shared<GraphOfGroups>();
    auto triv = std::make_shared<const FreeGroup>(0);
    g->add_vertex("u", triv);
    for (std::size_t i = 0; i < n; ++i) g->add_edge(0, 0, std::string(1, static_cast<char>('a' + i)), triv, std::vector<Element>{}, std::vector<Element>{});
    g->basepoint = 0;
    return g;
}

std::shared_ptr<GraphOfGroups> baumslag_solitar(Int m, Int n) {
    auto g = std::make_shared<GraphOfGroups>();
    auto zg = std::make_shared<const AbelianGroup>(1, std::vector<Int>{});
    g->add_vertex("u", zg);
    g->add_edge(0, 0, "e", zg, {z(m)}, {z(n)});
    g->basepoint = 0;
    return g;
}

std::shared_ptr<GraphOfGroups> z_amalgam(Int m, Int n) {
    auto g = std::make_shared<GraphOfGroups>();
    auto zg = std::make_shared<const AbelianGroup>(1, std::vector<Int>{});
    g->add_vertex("u", zg);
    g->add_vertex("v", zg);
    g->add_edge(0, 1, "e", zg, {z(m)}, {z(n)});
    g->basepoint = 0;
    return g;
}

std::shared_ptr<GraphOfGroups> z2_doubling_hnn() {
    auto g = std::make_shared<GraphOfGroups>();
    auto z2 = std::make_shared<const AbelianGroup>(2, std::vector<Int>{});
    g->add_vertex("u", z2);
    g->add_edge(0, 0, "e", z2, {Element{{1, 0}}, Element{{0, 1}}}, {Element{{2, 0}}, Element{{0, 2}}});
    g->basepoint = 0;
    return g;
}

std::shared_ptr<GraphOfGroups> free_double(const Word& wa, const Word& wc) {
    auto g = std::make_shared<GraphOfGroups>();
    auto f2 = std::make_shared<const FreeGroup>(2);
    auto zg = std::make_shared<const FreeGroup>(1);
    g->add_vertex("u", f2);
    g->add_vertex("v", f2);
    g->add_edge(0, 1, "e", zg, {as_element(wa)}, {as_element(wc)});
    g->basepoint = 0;
    return g;
}

std::shared_ptr<GraphOfGroups> finite_free_product(GroupPtr g1, GroupPtr g2) {
    auto g = std::make_shared<GraphOfGroups>();
    auto triv = std::make_shared<const FreeGroup>(0);
    g->add_vertex("u", std::move(g1));
    g->add_vertex("v", std::move(g2));
    g->add_edge(0, 1, "e", triv, std::vector<Element>{}, std::vector<Element>{});
    g->basepoint = 0;
    return g;
}

APath rose_path(const GraphOfGroups& r, const Word& w) {
    APath p{0, {r.vertex_group(0)->identity()}, {}};
    for (Int x : w) {
        EdgeId e = positive_half(static_cast<PairId>(std::llabs(x) - 1));
        p.edges.push_back(x > 0 ? e : inverse(e));
        p.elems.push_back(r.vertex_group(0)->identity());
    }
    return p;
}

Word rose_word(const APath& p) {
    Word w;
    for (EdgeId e : p.edges) {
        Int g = static_cast<Int>(pair_of(e)) + 1;
        w.push_back(is_positive(e) ? g : -g);
    }
    return w;
}

}  // namespace bst
