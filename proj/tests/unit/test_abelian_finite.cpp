#include <random>
#include <set>

#include "bst/abelian_group.hpp"
#include "bst/finite_group.hpp"
#include "bst/subgroup_group.hpp"
#include "doctest.h"

using namespace bst;

namespace {

Element v(std::vector<Int> x) { return Element{std::move(x)}; }

Subgroup random_subgroup(const AbelianGroup& g, std::mt19937_64& rng, int ngens, Int bound) {
    std::uniform_int_distribution<Int> d(-bound, bound);
    std::vector<Element> gens;
    for (int i = 0; i < ngens; ++i) {
        std::vector<Int> x(g.dim());
        for (Int& c : x) c = d(rng);
        gens.push_back(g.normalize(x));
    }
    return g.subgroup(gens);
}

// Members of a subgroup of Z^2 inside the box [-b, b]^2, by brute force over
// coefficient combinations of the generators.
std::set<Element> box_members(const AbelianGroup& g, const Subgroup& h, Int b) {
    std::set<Element> out;
    for (Int x = -b; x <= b; ++x)
        for (Int y = -b; y <= b; ++y)
            if (g.contains(h, v({x, y}))) out.insert(v({x, y}));
    return out;
}

}  // namespace

TEST_CASE("abelian sums, intersections and indices in Z") {
    AbelianGroup z(1, {});
    Subgroup two = z.subgroup({v({2})}), three = z.subgroup({v({3})}), six = z.subgroup({v({6})});
    CHECK(z.same_subgroup(z.intersect(two, three), six));
    CHECK(z.same_subgroup(z.join(two, three), z.whole()));
    CHECK(z.relative_index(six, two) == Index::finite(3));
    CHECK(z.index(six) == Index::finite(6));
    CHECK(z.index(z.trivial_subgroup()) == Index::infinite());
}

TEST_CASE("abelian coordinate axes meet trivially") {
    AbelianGroup z2(2, {});
    Subgroup x = z2.subgroup({v({1, 0})}), y = z2.subgroup({v({0, 1})});
    CHECK(z2.same_subgroup(z2.intersect(x, y), z2.trivial_subgroup()));
    CHECK(z2.iso_type(x) == IsoType::abelian(1, {}));
}

TEST_CASE("abelian lattice laws on random subgroups") {
    AbelianGroup g(2, {});
    std::mt19937_64 rng(7);
    for (int t = 0; t < 40; ++t) {
        Subgroup a = random_subgroup(g, rng, 2, 6), b = random_subgroup(g, rng, 2, 6), c = random_subgroup(g, rng, 1, 6);
        CHECK(g.same_subgroup(g.intersect(a, b), g.intersect(b, a)));
        CHECK(g.same_subgroup(g.join(a, b), g.join(b, a)));
        CHECK(g.same_subgroup(g.intersect(a, a), a));
        CHECK(g.same_subgroup(g.intersect(g.intersect(a, b), c), g.intersect(a, g.intersect(b, c))));
        CHECK(g.same_subgroup(g.join(g.join(a, b), c), g.join(a, g.join(b, c))));
        // Intersection membership agrees with brute force on a box.
        std::set<Element> ma = box_members(g, a, 8), mb = box_members(g, b, 8);
        for (const Element& x : box_members(g, g.intersect(a, b), 8)) CHECK((ma.count(x) && mb.count(x)));
        for (const Element& x : ma)
            if (mb.count(x)) CHECK(g.contains(g.intersect(a, b), x));
        // Index multiplicativity on a chain ab ∩ ... ≤ a ≤ a + b.
        Subgroup lo = g.intersect(a, b), hi = g.join(a, b);
        if (g.index(lo).is_finite()) CHECK(g.index(lo) == g.index(hi) * g.relative_index(lo, hi));
    }
}

TEST_CASE("abelian torsion arithmetic and canonical cosets") {
    AbelianGroup g(1, {2, 4});
    CHECK(g.multiply(v({1, 1, 3}), v({0, 1, 3})) == v({1, 0, 2}));
    CHECK(g.iso_type() == IsoType::abelian(1, {2, 4}));
    Subgroup h = g.subgroup({v({2, 1, 0})});
    CHECK(g.iso_type(h) == IsoType::abelian(1, {}));
    CHECK(g.index(h) == Index::finite(16));
    Subgroup t = g.subgroup({v({0, 0, 1})});
    CHECK(g.iso_type(t) == IsoType::finite(4));
    CHECK(g.is_finite(t));
    Element r1 = g.double_coset_rep(h, v({3, 1, 2}), t);
    Element r2 = g.double_coset_rep(h, g.multiply(v({3, 1, 2}), v({2, 1, 3})), t);
    CHECK(r1 == r2);
    auto reps = g.double_coset_reps(h, t);
    REQUIRE(reps.has_value());
    CHECK(reps->size() == 4);
    CHECK_THROWS_AS(AbelianGroup(0, {4, 2}), ContractError);
    CHECK_THROWS_AS(AbelianGroup(0, {1}), ContractError);
}

TEST_CASE("abelian factorization and slices") {
    AbelianGroup g(2, {});
    Subgroup h = g.subgroup({v({2, 0})}), k = g.subgroup({v({0, 3})});
    auto f = g.double_coset_factor(h, v({1, 1}), k, v({5, -2}));
    REQUIRE(f.has_value());
    CHECK(g.multiply(g.multiply(f->first, v({1, 1})), f->second) == v({5, -2}));
    CHECK_FALSE(g.double_coset_factor(h, v({1, 1}), k, v({2, 1})).has_value());
    // E = Z×0: e ∈ E ∩ (y + 2Z×3Z) for y = (1, 3): e = (odd, 0); modulo (2Z×0) one class.
    Slice s = g.slice(h, v({1, 3}), k, g.subgroup({v({1, 0})}));
    REQUIRE(s.reps.size() == 1);
    CHECK(s.reps[0] == v({1, 0}));
    // P = Q = trivial: exactly one solution e = y when y ∈ E.
    Slice t = g.slice(g.trivial_subgroup(), v({4, 0}), g.trivial_subgroup(), g.subgroup({v({2, 0})}));
    REQUIRE(t.reps.size() == 1);
    // P = 0 × Z, Q = 0, E = Z × 0: solutions (x, 0) with x = y_1; one class.
    Slice u = g.slice(g.subgroup({v({0, 1})}), v({3, 7}), g.trivial_subgroup(), g.subgroup({v({1, 0})}));
    REQUIRE(u.reps.size() == 1);
    CHECK(u.reps[0] == v({3, 0}));
    // P = Q = E = diagonal, y = 0: one class. P = Q = 0, E=Z×0, y=0 contains only 0.
    Slice w = g.slice(g.trivial_subgroup(), v({0, 0}), g.subgroup({v({0, 1})}), g.subgroup({v({1, 0})}));
    CHECK(w.reps.size() == 1);
    // Infinite: P = 0×Z, Q = 0×Z, E = Z² contains Z×0 modulo nothing.
    Slice x = g.slice(g.subgroup({v({0, 1})}), v({0, 0}), g.subgroup({v({0, 1})}), g.whole());
    CHECK(x.status == Slice::Status::Ok);
    Slice y = g.slice(g.trivial_subgroup(), v({0, 0}), g.trivial_subgroup(), g.whole());
    CHECK(y.reps.size() == 1);
}

TEST_CASE("abelian monomorphism checks") {
    auto z = std::make_shared<AbelianGroup>(1, std::vector<Int>{});
    auto z2 = std::make_shared<AbelianGroup>(2, std::vector<Int>{});
    CHECK(Homomorphism(z, z, {v({2})}).check_monomorphism().empty());
    CHECK_FALSE(Homomorphism(z, z, {v({0})}).check_monomorphism().empty());
    CHECK(Homomorphism(z2, z2, {v({1, 1}), v({0, 1})}).check_monomorphism().empty());
    CHECK_FALSE(Homomorphism(z2, z2, {v({1, 1}), v({2, 2})}).check_monomorphism().empty());
    auto c4 = std::make_shared<AbelianGroup>(0, std::vector<Int>{4});
    auto c2 = std::make_shared<AbelianGroup>(0, std::vector<Int>{2});
    CHECK_FALSE(Homomorphism(c4, z, {v({1})}).check_monomorphism().empty());  // not a homomorphism
    CHECK(Homomorphism(c2, c4, {v({2})}).check_monomorphism().empty());
}

TEST_CASE("finite group tables") {
    FiniteGroup c6 = FiniteGroup::cyclic(6);
    CHECK(c6.order() == 6);
    Subgroup two = c6.subgroup({Element{{2}}}), three = c6.subgroup({Element{{3}}});
    CHECK(c6.index(two) == Index::finite(2));
    CHECK(c6.same_subgroup(c6.intersect(two, three), c6.trivial_subgroup()));
    CHECK(c6.double_coset_reps(two, three)->size() == 1);
    CHECK(c6.double_coset_reps(two, c6.trivial_subgroup())->size() == 2);
    // S3 as permutations of {0,1,2}, indexed in lexicographic order.
    std::vector<std::vector<int>> perms = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    std::vector<std::vector<std::size_t>> table(6, std::vector<std::size_t>(6));
    for (std::size_t a = 0; a < 6; ++a)
        for (std::size_t b = 0; b < 6; ++b) {
            std::vector<int> c(3);
            for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
            table[a][b] = static_cast<std::size_t>(std::find(perms.begin(), perms.end(), c) - perms.begin());
        }
    FiniteGroup s3(table);
    CHECK(s3.iso_type() == IsoType::finite(6));
    Subgroup t = s3.subgroup({Element{{1}}});
    CHECK(s3.double_coset_reps(t, t)->size() == 2);
    for (std::size_t g = 0; g < 6; ++g) {
        Element rep = s3.double_coset_rep(t, Element{{static_cast<Int>(g)}}, t);
        auto f = s3.double_coset_factor(t, Element{{static_cast<Int>(g)}}, t, rep);
        REQUIRE(f.has_value());
    }
    // Decomposition words evaluate back to the element.
    for (std::size_t g = 0; g < 6; ++g)
        CHECK(s3.power_product(s3.generators(), s3.decompose(Element{{static_cast<Int>(g)}})) ==
              Element{{static_cast<Int>(g)}});
    auto bad = table;
    std::swap(bad[1][0], bad[1][1]);
    CHECK_THROWS_AS(FiniteGroup{bad}, ContractError);
}

TEST_CASE("subgroups viewed as groups") {
    auto z2 = std::make_shared<AbelianGroup>(2, std::vector<Int>{});
    Subgroup s = z2->subgroup({v({2, 0}), v({0, 1}), v({2, 1})});
    auto w = make_subgroup_group(z2, s);
    CHECK(w->iso_type() == IsoType::abelian(2, {}));
    CHECK(w->index(z2->subgroup({v({4, 0}), v({0, 1})})) == Index::finite(2));
    CHECK(w->double_coset_reps(z2->subgroup({v({4, 0})}), z2->subgroup({v({0, 1})}))->size() == 2);
    Homomorphism inc = w->inclusion(w);
    CHECK(inc.check_monomorphism().empty());
    // Relations among the non-independent generators are checked.
    CHECK(Homomorphism(w, z2, {v({2, 0}), v({0, 1}), v({2, 1})}).check_monomorphism().empty());
    CHECK_FALSE(Homomorphism(w, z2, {v({2, 0}), v({0, 1}), v({2, 2})}).check_monomorphism().empty());
}
