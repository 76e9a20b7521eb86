#include "bst/abelian_group.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace bst {

using lattice::Hnf;
using lattice::Mat;
using lattice::Vec;

AbelianGroup::AbelianGroup(std::size_t rank, std::vector<Int> torsion) : rank_(rank), torsion_(std::move(torsion)) {
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
        if (torsion_[i] < 2) throw ContractError("abelian group: torsion factors must be >= 2");
        if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
            throw ContractError("abelian group: torsion factors must divide each other in order");
    }
    relations_ = lattice::hnf(relation_rows(), dim());
}

Mat AbelianGroup::relation_rows() const {
    Mat rows;
    for (std::size_t i = 0; i < torsion_.size(); ++i) {
        Vec r(dim(), 0);
        r[rank_ + i] = torsion_[i];
        rows.push_back(r);
    }
    return rows;
}

std::string AbelianGroup::describe() const {
    std::ostringstream out;
    out << "Z^" << rank_;
    for (Int d : torsion_) out << " x Z/" << d;
    return out.str();
}

Element AbelianGroup::normalize(Vec x) const {
    for (std::size_t i = 0; i < torsion_.size(); ++i) x[rank_ + i] = lattice::mod(x[rank_ + i], torsion_[i]);
    return Element{std::move(x)};
}

Element AbelianGroup::multiply(const Element& a, const Element& b) const {
    Vec x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = lattice::add(a.v[i], b.v[i]);
    return normalize(std::move(x));
}

Element AbelianGroup::invert(const Element& a) const {
    Vec x(dim());
    for (std::size_t i = 0; i < dim(); ++i) x[i] = -a.v[i];
    return normalize(std::move(x));
}

bool AbelianGroup::is_valid(const Element& a) const {
    if (a.v.size() != dim()) return false;
    for (std::size_t i = 0; i < torsion_.size(); ++i)
        if (a.v[rank_ + i] < 0 || a.v[rank_ + i] >= torsion_[i]) return false;
    return true;
}

std::vector<Element> AbelianGroup::generators() const {
    std::vector<Element> g;
    for (std::size_t i = 0; i < dim(); ++i) {
        Vec x(dim(), 0);
        x[i] = 1;
        g.push_back(Element{x});
    }
    return g;
}

GenWord AbelianGroup::decompose(const Element& a) const {
    GenWord w;
    for (std::size_t i = 0; i < dim(); ++i)
        if (a.v[i] != 0) w.push_back({i, a.v[i]});
    return w;
}

std::string AbelianGroup::format(const Element& a) const {
    if (dim() == 1) return std::to_string(a.v[0]);
    std::string s = "(";
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(a.v[i]);
    }
    return s + ")";
}

nlohmann::json AbelianGroup::to_json(const Element& a) const {
    if (dim() == 1) return a.v[0];
    return a.v;
}

Element AbelianGroup::parse(const nlohmann::json& j) const {
    Vec x;
    if (j.is_number_integer() && dim() == 1) {
        x.push_back(j.get<Int>());
    } else if (j.is_array()) {
        for (const auto& c : j) {
            if (!c.is_number_integer()) throw ContractError("abelian element entries must be integers");
            x.push_back(c.get<Int>());
        }
    } else {
        throw ContractError("abelian element must be an integer tuple for " + describe());
    }
    if (x.size() != dim())
        throw ContractError("abelian element has " + std::to_string(x.size()) + " coordinates, expected " +
                            std::to_string(dim()));
    return normalize(std::move(x));
}

Subgroup AbelianGroup::subgroup(const std::vector<Element>& gens) const {
    Mat rows = relation_rows();
    for (const Element& g : gens) rows.push_back(g.v);
    auto data = std::make_shared<AbelianSubgroupData>();
    data->lattice = lattice::hnf(rows, dim());
    return Subgroup(gens, data);
}

Subgroup AbelianGroup::from_lattice(const Hnf& l) const {
    std::vector<Element> gens;
    for (const Vec& r : lattice::sum(l, relations_).rows) {
        Element e = normalize(r);
        if (!is_identity(e)) gens.push_back(e);
    }
    return subgroup(gens);
}

bool AbelianGroup::contains(const Subgroup& h, const Element& a) const {
    return lattice::contains(lattice_of(h), a.v);
}

std::optional<GenWord> AbelianGroup::express(const Subgroup& h, const Element& a) const {
    Mat rows;
    for (const Element& g : h.generators()) rows.push_back(g.v);
    Mat rel = relation_rows();
    rows.insert(rows.end(), rel.begin(), rel.end());
    auto c = lattice::solve(lattice::hnf_with_transform(rows, dim()), a.v);
    if (!c) return std::nullopt;
    GenWord w;
    for (std::size_t i = 0; i < h.generators().size(); ++i)
        if ((*c)[i] != 0) w.push_back({i, (*c)[i]});
    return w;
}

Subgroup AbelianGroup::intersect(const Subgroup& h, const Subgroup& k) const {
    return from_lattice(lattice::intersect(lattice_of(h), lattice_of(k)));
}

Index AbelianGroup::index(const Subgroup& h) const {
    const Hnf& l = lattice_of(h);
    if (!l.full_rank()) return Index::infinite();
    Int idx = 1;
    for (std::size_t i = 0; i < l.rows.size(); ++i) idx = lattice::mul(idx, l.rows[i][l.pivot_cols[i]]);
    return Index::finite(static_cast<std::uint64_t>(idx));
}

Index AbelianGroup::relative_index(const Subgroup& h, const Subgroup& k) const {
    if (!lattice::subset(lattice_of(h), lattice_of(k)))
        throw ContractError("relative_index: subgroup is not contained");
    auto r = lattice::relative_index(lattice_of(h), lattice_of(k));
    return r ? Index::finite(static_cast<std::uint64_t>(*r)) : Index::infinite();
}

IsoType AbelianGroup::iso_type(const Subgroup& h) const {
    lattice::QuotientInvariants q = lattice::quotient_invariants(relations_, lattice_of(h));
    return IsoType::abelian(q.free_rank, q.torsion);
}

Element AbelianGroup::double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const {
    return normalize(lattice::reduce(lattice::sum(lattice_of(h), lattice_of(k)), g.v));
}

std::optional<std::pair<Element, Element>> AbelianGroup::double_coset_factor(const Subgroup& h, const Element& g,
                                                                             const Subgroup& k,
                                                                             const Element& target) const {
    Mat rows;
    for (const Element& x : h.generators()) rows.push_back(x.v);
    for (const Element& x : k.generators()) rows.push_back(x.v);
    Mat rel = relation_rows();
    rows.insert(rows.end(), rel.begin(), rel.end());
    Vec diff(dim());
    for (std::size_t i = 0; i < dim(); ++i) diff[i] = lattice::add(target.v[i], -g.v[i]);
    auto c = lattice::solve(lattice::hnf_with_transform(rows, dim()), diff);
    if (!c) return std::nullopt;
    const std::size_t nh = h.generators().size();
    Vec x(dim(), 0), y(dim(), 0);
    for (std::size_t i = 0; i < rows.size() - rel.size(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) {
            Int t = lattice::mul((*c)[i], rows[i][j]);
            if (i < nh) x[j] = lattice::add(x[j], t);
            else y[j] = lattice::add(y[j], t);
        }
    return std::make_pair(normalize(x), normalize(y));
}

std::optional<std::vector<Element>> AbelianGroup::coset_reps(const Subgroup& h, std::size_t limit) const {
    Mat unit;
    for (const Element& g : generators()) unit.push_back(g.v);
    auto reps = lattice::coset_reps(lattice_of(h), lattice::hnf(unit, dim()), limit);
    if (!reps) return std::nullopt;
    std::vector<Element> out;
    for (Vec& r : *reps) out.push_back(normalize(lattice::reduce(lattice_of(h), std::move(r))));
    return out;
}

std::optional<std::vector<Element>> AbelianGroup::double_coset_reps(const Subgroup& h, const Subgroup& k) const {
    auto reps = coset_reps(from_lattice(lattice::sum(lattice_of(h), lattice_of(k))), kEnumerationLimit);
    if (!reps) return std::nullopt;
    std::sort(reps->begin(), reps->end());
    return reps;
}

Slice AbelianGroup::slice(const Subgroup& p, const Element& y, const Subgroup& q, const Subgroup& e) const {
    // e ∈ E with e − y ∈ P + Q; solutions form e0 + (E ∩ (P+Q)), taken modulo (P∩E) + (Q∩E).
    Slice out;
    const Hnf& le = lattice_of(e);
    Hnf m = lattice::sum(lattice_of(p), lattice_of(q));
    Mat rows = le.rows;
    rows.insert(rows.end(), m.rows.begin(), m.rows.end());
    auto c = lattice::solve(lattice::hnf_with_transform(rows, dim()), y.v);
    if (!c) return out;
    Vec e0(dim(), 0);
    for (std::size_t i = 0; i < le.rows.size(); ++i)
        for (std::size_t j = 0; j < dim(); ++j) e0[j] = lattice::add(e0[j], lattice::mul((*c)[i], le.rows[i][j]));
    Hnf sol = lattice::intersect(le, m);
    Hnf mod = lattice::sum(lattice::intersect(lattice_of(p), le), lattice::intersect(lattice_of(q), le));
    auto reps = lattice::coset_reps(mod, sol, kEnumerationLimit);
    if (!reps) {
        out.status = Slice::Status::Infinite;
        out.note = "infinitely many edge double cosets";
        return out;
    }
    std::set<Element> seen;
    for (const Vec& r : *reps) {
        Vec x(dim());
        for (std::size_t j = 0; j < dim(); ++j) x[j] = lattice::add(e0[j], r[j]);
        Element rep = normalize(lattice::reduce(mod, x));
        if (seen.insert(rep).second) out.reps.push_back(rep);
    }
    return out;
}

std::string AbelianGroup::check_relations(const std::vector<Element>& images, const Group& codomain) const {
    for (std::size_t i = 0; i < images.size(); ++i)
        for (std::size_t j = i + 1; j < images.size(); ++j)
            if (codomain.multiply(images[i], images[j]) != codomain.multiply(images[j], images[i]))
                return "images of generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                       " do not commute";
    for (std::size_t i = 0; i < torsion_.size(); ++i)
        if (!codomain.is_identity(codomain.power(images[rank_ + i], torsion_[i])))
            return "image of generator " + std::to_string(rank_ + i + 1) + " does not have order dividing " +
                   std::to_string(torsion_[i]);
    return {};
}

}  // namespace bst
