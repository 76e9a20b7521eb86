#include "bst/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <set>

namespace bst {

FiniteGroup::FiniteGroup(std::vector<std::vector<std::size_t>> table, std::optional<std::vector<std::size_t>> gens)
    : table_(std::move(table)) {
    const std::size_t n = table_.size();
    if (n == 0) throw ContractError("finite group: empty table");
    for (const auto& row : table_) {
        if (row.size() != n) throw ContractError("finite group: table is not square");
        std::vector<bool> seen(n, false);
        for (std::size_t x : row) {
            if (x >= n) throw ContractError("finite group: table entry out of range");
            if (seen[x]) throw ContractError("finite group: a table row is not a permutation");
            seen[x] = true;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        std::vector<bool> seen(n, false);
        for (std::size_t r = 0; r < n; ++r) {
            if (seen[table_[r][c]]) throw ContractError("finite group: a table column is not a permutation");
            seen[table_[r][c]] = true;
        }
    }
    identity_ = kNone;
    for (std::size_t e = 0; e < n && identity_ == kNone; ++e) {
        bool ok = true;
        for (std::size_t x = 0; x < n && ok; ++x) ok = table_[e][x] == x && table_[x][e] == x;
        if (ok) identity_ = e;
    }
    if (identity_ == kNone) throw ContractError("finite group: no identity element");
    auto assoc = [&](std::size_t a, std::size_t b, std::size_t c) {
        return table_[table_[a][b]][c] == table_[a][table_[b][c]];
    };
    if (n <= 64) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (!assoc(a, b, c)) throw ContractError("finite group: multiplication is not associative");
    } else {
        std::mt19937_64 rng(n);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int i = 0; i < 20000; ++i)
            if (!assoc(pick(rng), pick(rng), pick(rng)))
                throw ContractError("finite group: multiplication is not associative");
    }
    inverse_.assign(n, 0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (table_[a][b] == identity_) inverse_[a] = b;
    if (gens) {
        for (std::size_t g : *gens) {
            if (g >= n) throw ContractError("finite group: generator out of range");
            gens_.push_back(el(g));
        }
        if (subgroup(gens_).data<FiniteSubgroupData>().elements.size() != n)
            throw ContractError("finite group: declared generators do not generate the group");
    } else {
        gens_ = generating_set(std::vector<bool>(n, true));
    }
    whole_ = subgroup(gens_);
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
    std::vector<std::vector<std::size_t>> t(n, std::vector<std::size_t>(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) t[a][b] = (a + b) % n;
    std::vector<std::size_t> gens;
    if (n > 1) gens.push_back(1);
    return FiniteGroup(t, gens);
}

Element FiniteGroup::multiply(const Element& a, const Element& b) const { return el(table_[at(a)][at(b)]); }
Element FiniteGroup::invert(const Element& a) const { return el(inverse_[at(a)]); }

bool FiniteGroup::is_valid(const Element& a) const {
    return a.v.size() == 1 && a.v[0] >= 0 && static_cast<std::size_t>(a.v[0]) < order();
}

std::vector<Element> FiniteGroup::generators() const { return gens_; }

GenWord FiniteGroup::decompose(const Element& a) const {
    auto w = express(whole_, a);
    return *w;
}

std::string FiniteGroup::format(const Element& a) const { return std::to_string(a.v.at(0)); }
nlohmann::json FiniteGroup::to_json(const Element& a) const { return a.v.at(0); }

Element FiniteGroup::parse(const nlohmann::json& j) const {
    if (!j.is_number_integer()) throw ContractError("finite group element must be a table index");
    Int i = j.get<Int>();
    if (i < 0 || static_cast<std::size_t>(i) >= order())
        throw ContractError("finite group element " + std::to_string(i) + " out of range");
    return el(static_cast<std::size_t>(i));
}

Subgroup FiniteGroup::subgroup(const std::vector<Element>& gens) const {
    const std::size_t n = order();
    auto d = std::make_shared<FiniteSubgroupData>();
    d->member.assign(n, false);
    d->parent.assign(n, kNone);
    d->step.assign(n, Syllable{0, 0});
    d->member[identity_] = true;
    std::deque<std::size_t> q{identity_};
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop_front();
        for (std::size_t i = 0; i < gens.size(); ++i)
            for (Int e : {1, -1}) {
                std::size_t g = at(gens[i]);
                std::size_t y = table_[x][e > 0 ? g : inverse_[g]];
                if (d->member[y]) continue;
                d->member[y] = true;
                d->parent[y] = x;
                d->step[y] = {i, e};
                q.push_back(y);
            }
    }
    for (std::size_t x = 0; x < n; ++x)
        if (d->member[x]) d->elements.push_back(x);
    return Subgroup(gens, d);
}

bool FiniteGroup::contains(const Subgroup& h, const Element& a) const { return data(h).member[at(a)]; }

std::optional<GenWord> FiniteGroup::express(const Subgroup& h, const Element& a) const {
    const FiniteSubgroupData& d = data(h);
    std::size_t x = at(a);
    if (!d.member[x]) return std::nullopt;
    GenWord w;
    while (x != identity_) {
        w.push_back(d.step[x]);
        x = d.parent[x];
    }
    std::reverse(w.begin(), w.end());
    return w;
}

std::vector<Element> FiniteGroup::generating_set(const std::vector<bool>& member) const {
    std::vector<Element> gens;
    std::vector<bool> have(order(), false);
    have[identity_] = true;
    for (std::size_t x = 0; x < order(); ++x) {
        if (!member[x] || have[x]) continue;
        gens.push_back(el(x));
        have = data(subgroup(gens)).member;
    }
    return gens;
}

Subgroup FiniteGroup::intersect(const Subgroup& h, const Subgroup& k) const {
    std::vector<bool> m(order());
    for (std::size_t x = 0; x < order(); ++x) m[x] = data(h).member[x] && data(k).member[x];
    return subgroup(generating_set(m));
}

Index FiniteGroup::index(const Subgroup& h) const { return Index::finite(order() / data(h).elements.size()); }

Index FiniteGroup::relative_index(const Subgroup& h, const Subgroup& k) const {
    if (!is_subgroup_of(h, k)) throw ContractError("relative_index: subgroup is not contained");
    return Index::finite(data(k).elements.size() / data(h).elements.size());
}

IsoType FiniteGroup::iso_type(const Subgroup& h) const { return IsoType::finite(data(h).elements.size()); }

std::vector<std::size_t> FiniteGroup::double_coset(const Subgroup& h, std::size_t g, const Subgroup& k) const {
    std::vector<bool> in(order(), false);
    for (std::size_t x : data(h).elements) {
        std::size_t xg = table_[x][g];
        for (std::size_t y : data(k).elements) in[table_[xg][y]] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t z = 0; z < order(); ++z)
        if (in[z]) out.push_back(z);
    return out;
}

Element FiniteGroup::double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const {
    return el(double_coset(h, at(g), k).front());
}

std::optional<std::pair<Element, Element>> FiniteGroup::double_coset_factor(const Subgroup& h, const Element& g,
                                                                            const Subgroup& k,
                                                                            const Element& target) const {
    const std::size_t gi = inverse_[at(g)];
    for (std::size_t x : data(h).elements) {
        std::size_t y = table_[table_[gi][inverse_[x]]][at(target)];
        if (data(k).member[y]) return std::make_pair(el(x), el(y));
    }
    return std::nullopt;
}

std::optional<std::vector<Element>> FiniteGroup::double_coset_reps(const Subgroup& h, const Subgroup& k) const {
    std::vector<bool> done(order(), false);
    std::vector<Element> out;
    for (std::size_t g = 0; g < order(); ++g) {
        if (done[g]) continue;
        for (std::size_t z : double_coset(h, g, k)) done[z] = true;
        out.push_back(el(g));
    }
    return out;
}

Slice FiniteGroup::slice(const Subgroup& p, const Element& y, const Subgroup& q, const Subgroup& e) const {
    Slice out;
    std::vector<std::size_t> pyq = double_coset(p, at(y), q);
    std::vector<bool> in(order(), false);
    for (std::size_t z : pyq) in[z] = true;
    Subgroup pe = intersect(p, e), qe = intersect(q, e);
    std::vector<bool> done(order(), false);
    for (std::size_t x : data(e).elements) {
        if (!in[x] || done[x]) continue;
        for (std::size_t z : double_coset(pe, x, qe)) done[z] = true;
        out.reps.push_back(el(x));
    }
    return out;
}

std::string FiniteGroup::check_relations(const std::vector<Element>& images, const Group& codomain) const {
    std::vector<Element> phi(order());
    for (std::size_t x = 0; x < order(); ++x) phi[x] = codomain.power_product(images, decompose(el(x)));
    for (std::size_t a = 0; a < order(); ++a)
        for (std::size_t b = 0; b < order(); ++b)
            if (phi[table_[a][b]] != codomain.multiply(phi[a], phi[b]))
                return "images do not respect the product " + std::to_string(a) + "*" + std::to_string(b);
    return {};
}

}  // namespace bst
