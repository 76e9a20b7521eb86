#pragma once

// Random inputs shared by the unit tests and the acceptance run.

#include <random>
#include <vector>

#include "bst/free_group.hpp"
#include "bst/gog.hpp"

namespace bst::sampling {

// Product of up to four random generators or their inverses.
inline Element random_element(const Group& g, std::mt19937_64& rng) {
    std::vector<Element> gens = g.generators();
    Element x = g.identity();
    if (gens.empty()) return x;
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> len(0, 4);
    std::bernoulli_distribution inv(0.5);
    for (int i = len(rng); i > 0; --i) {
        const Element& s = gens[pick(rng)];
        x = g.multiply(x, inv(rng) ? g.invert(s) : s);
    }
    return x;
}

// Random walk of at most max_len edges with random vertex elements; not reduced.
inline APath random_apath(const GraphOfGroups& a, std::mt19937_64& rng, VertexId start, std::size_t max_len) {
    const Graph& g = a.graph();
    APath p{start, {random_element(*a.vertex_group(start), rng)}, {}};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    VertexId v = start;
    for (std::size_t n = len(rng); n > 0 && g.valence(v) > 0; --n) {
        std::uniform_int_distribution<std::size_t> pick(0, g.valence(v) - 1);
        EdgeId e = g.star(v)[pick(rng)];
        v = g.target(e);
        p.edges.push_back(e);
        p.elems.push_back(random_element(*a.vertex_group(v), rng));
    }
    return p;
}

// Replaces a_i by (a_i·c, f, ω_f(x), f⁻¹, α_f(x)⁻¹·c⁻¹), an =𝔸-trivial detour.
inline APath insert_backtrack(const GraphOfGroups& a, const APath& p, std::mt19937_64& rng) {
    const Graph& g = a.graph();
    std::uniform_int_distribution<std::size_t> pos(0, p.edges.size());
    std::size_t i = pos(rng);
    VertexId v = i == 0 ? p.start : g.target(p.edges[i - 1]);
    if (g.valence(v) == 0) return p;
    std::uniform_int_distribution<std::size_t> pick(0, g.valence(v) - 1);
    EdgeId f = g.star(v)[pick(rng)];
    const Group& av = *a.vertex_group(v);
    Element c = random_element(av, rng);
    Element x = random_element(*a.edge_group(f), rng);
    APath out{p.start, {}, {}};
    for (std::size_t k = 0; k < i; ++k) {
        out.elems.push_back(p.elems[k]);
        out.edges.push_back(p.edges[k]);
    }
    out.elems.push_back(av.multiply(p.elems[i], c));
    out.edges.push_back(f);
    out.elems.push_back(a.omega(f).apply(x));
    out.edges.push_back(inverse(f));
    out.elems.push_back(av.multiply(av.invert(a.alpha(f).apply(x)), av.invert(c)));
    for (std::size_t k = i; k < p.edges.size(); ++k) {
        out.edges.push_back(p.edges[k]);
        out.elems.push_back(p.elems[k + 1]);
    }
    return out;
}

// Non-empty reduced word of length at most max_len.
inline Word random_word(std::mt19937_64& rng, std::size_t rank, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len(1, max_len);
    std::uniform_int_distribution<Int> letter(1, static_cast<Int>(rank));
    std::bernoulli_distribution sign(0.5);
    Word w;
    for (std::size_t n = len(rng); w.size() < n;) {
        Int x = letter(rng) * (sign(rng) ? 1 : -1);
        w = words::reduce(words::multiply(w, {x}));
        if (w.empty()) w.push_back(x);
    }
    return w;
}

// Every reduced word of length at most max_len, by length.
inline std::vector<Word> all_words(std::size_t rank, std::size_t max_len) {
    std::vector<Word> out{{}};
    std::vector<Word> layer{{}};
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (Int g = 1; g <= static_cast<Int>(rank); ++g)
                for (Int x : {g, -g}) {
                    if (!w.empty() && w.back() == -x) continue;
                    Word u = w;
                    u.push_back(x);
                    next.push_back(u);
                }
        out.insert(out.end(), next.begin(), next.end());
        layer = std::move(next);
    }
    return out;
}

}  // namespace bst::sampling
