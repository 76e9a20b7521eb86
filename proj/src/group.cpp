#include "bst/group.hpp"

#include <numeric>
#include <sstream>

namespace bst {

Index Index::operator*(const Index& o) const {
    if (!is_finite() || !o.is_finite()) return infinite();
    return finite(value() * o.value());
}

std::string Index::str() const { return is_finite() ? std::to_string(value()) : "inf"; }

IsoType IsoType::finite(std::uint64_t n) {
    IsoType t;
    t.tag = Tag::Finite;
    t.order = n;
    return t;
}

IsoType IsoType::free(std::size_t r) {
    if (r == 0) return finite(1);
    if (r == 1) return abelian(1, {});
    IsoType t;
    t.tag = Tag::Free;
    t.rank = r;
    return t;
}

IsoType IsoType::abelian(std::size_t r, std::vector<Int> torsion) {
    if (r == 0) {
        std::uint64_t n = 1;
        for (Int d : torsion) n *= static_cast<std::uint64_t>(d);
        return finite(n);
    }
    IsoType t;
    t.tag = Tag::Abelian;
    t.rank = r;
    t.torsion = std::move(torsion);
    return t;
}

std::string IsoType::str() const {
    std::ostringstream out;
    switch (tag) {
        case Tag::Finite: out << "finite of order " << order; break;
        case Tag::Free: out << "free of rank " << rank; break;
        case Tag::Abelian:
            out << "Z^" << rank;
            for (Int d : torsion) out << " x Z/" << d;
            break;
    }
    return out.str();
}

std::string Group::check_relations(const std::vector<Element>&, const Group&) const { return {}; }

Element Group::power(const Element& a, Int n) const {
    Element base = n < 0 ? invert(a) : a;
    std::uint64_t m = n < 0 ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    Element acc = identity();
    while (m > 0) {
        if (m & 1) acc = multiply(acc, base);
        m >>= 1;
        if (m > 0) base = multiply(base, base);
    }
    return acc;
}

Element Group::power_product(const std::vector<Element>& base, const GenWord& w) const {
    Element acc = identity();
    for (const Syllable& s : w) acc = multiply(acc, power(base.at(s.gen), s.exp));
    return acc;
}

Element Group::conjugate(const Element& a, const Element& g) const {
    return multiply(multiply(invert(g), a), g);
}

Subgroup Group::conjugate(const Subgroup& h, const Element& g) const {
    std::vector<Element> gens;
    gens.reserve(h.generators().size());
    for (const Element& x : h.generators()) gens.push_back(conjugate(x, g));
    return subgroup(gens);
}

Subgroup Group::join(const Subgroup& h, const Subgroup& k) const {
    std::vector<Element> gens = h.generators();
    gens.insert(gens.end(), k.generators().begin(), k.generators().end());
    return subgroup(gens);
}

bool Group::is_subgroup_of(const Subgroup& h, const Subgroup& k) const {
    for (const Element& x : h.generators())
        if (!contains(k, x)) return false;
    return true;
}

bool Group::same_subgroup(const Subgroup& h, const Subgroup& k) const {
    return is_subgroup_of(h, k) && is_subgroup_of(k, h);
}

Element Group::coset_rep(const Subgroup& h, const Element& g) const {
    return double_coset_rep(trivial_subgroup(), g, h);
}

std::string Group::format_subgroup(const Subgroup& h) const {
    std::string s = "<";
    for (std::size_t i = 0; i < h.generators().size(); ++i) {
        if (i) s += ", ";
        s += format(h.generators()[i]);
    }
    return s + ">";
}

Homomorphism::Homomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), images_(std::move(images)) {
    if (images_.size() != domain_->generators().size())
        throw ContractError("homomorphism: expected " + std::to_string(domain_->generators().size()) +
                            " generator images, got " + std::to_string(images_.size()));
    for (const Element& x : images_)
        if (!codomain_->is_valid(x)) throw ContractError("homomorphism: image is not a codomain element");
    image_ = codomain_->subgroup(images_);
}

Element Homomorphism::apply(const Element& a) const {
    return codomain_->power_product(images_, domain_->decompose(a));
}

Subgroup Homomorphism::apply(const Subgroup& h) const {
    std::vector<Element> gens;
    for (const Element& x : h.generators()) gens.push_back(apply(x));
    return codomain_->subgroup(gens);
}

std::optional<Element> Homomorphism::preimage(const Element& y) const {
    auto w = codomain_->express(image_, y);
    if (!w) return std::nullopt;
    return domain_->power_product(domain_->generators(), *w);
}

bool Homomorphism::is_surjective() const {
    Index i = codomain_->index(image_);
    return i.is_finite() && i.value() == 1;
}

std::string Homomorphism::check_monomorphism() const {
    std::string rel = domain_->check_relations(images_, *codomain_);
    if (!rel.empty()) return "not a homomorphism: " + rel;
    IsoType d = domain_->iso_type();
    IsoType im = codomain_->iso_type(image_);
    if (!(d == im)) return "not injective: domain is " + d.str() + " but image is " + im.str();
    return {};
}

Homomorphism compose(const Homomorphism& g, const Homomorphism& f) {
    std::vector<Element> imgs;
    for (const Element& x : f.images()) imgs.push_back(g.apply(x));
    return Homomorphism(f.domain(), g.codomain(), imgs);
}

Homomorphism conjugation_map(const GroupPtr& g, const Element& by) {
    std::vector<Element> imgs;
    for (const Element& x : g->generators()) imgs.push_back(g->conjugate(x, by));
    return Homomorphism(g, g, imgs);
}

}  // namespace bst
