#include "bst/subgroup_group.hpp"

#include <algorithm>
#include <set>

#include "bst/abelian_group.hpp"
#include "bst/finite_group.hpp"
#include "bst/free_group.hpp"

namespace bst {

namespace {

Subgroup normalized(const GroupPtr& ambient, const Subgroup& s) {
    if (auto f = std::dynamic_pointer_cast<const FreeGroup>(ambient)) {
        const StallingsGraph& g = f->graph(s);
        bool basis = !g.relation_found() && g.rank() == s.generators().size();
        if (!basis) {
            std::vector<Element> gens;
            for (Word& w : g.tree_basis()) gens.push_back(as_element(std::move(w)));
            return f->subgroup(gens);
        }
    }
    return s;
}

}  // namespace

SubgroupGroup::SubgroupGroup(GroupPtr ambient, const Subgroup& s)
    : ambient_(std::move(ambient)), s_(normalized(ambient_, s)) {}

std::shared_ptr<const SubgroupGroup> make_subgroup_group(GroupPtr ambient, const Subgroup& s) {
    return std::make_shared<const SubgroupGroup>(std::move(ambient), s);
}

Homomorphism SubgroupGroup::inclusion(const std::shared_ptr<const SubgroupGroup>& self) const {
    return Homomorphism(self, ambient_, s_.generators());
}

std::string SubgroupGroup::describe() const {
    return "subgroup " + ambient_->format_subgroup(s_) + " of " + ambient_->describe();
}

bool SubgroupGroup::is_valid(const Element& a) const { return ambient_->is_valid(a) && ambient_->contains(s_, a); }

GenWord SubgroupGroup::decompose(const Element& a) const {
    auto w = ambient_->express(s_, a);
    if (!w) throw ContractError("element " + ambient_->format(a) + " is not in " + describe());
    return *w;
}

Element SubgroupGroup::parse(const nlohmann::json& j) const {
    Element a = ambient_->parse(j);
    if (!ambient_->contains(s_, a)) throw ContractError("element " + ambient_->format(a) + " is not in " + describe());
    return a;
}

std::optional<std::vector<Element>> SubgroupGroup::double_coset_reps(const Subgroup& h, const Subgroup& k) const {
    if (auto f = std::dynamic_pointer_cast<const FiniteGroup>(ambient_)) {
        std::set<Element> reps;
        for (std::size_t x : f->data(s_).elements)
            reps.insert(f->double_coset_rep(h, Element{{static_cast<Int>(x)}}, k));
        return std::vector<Element>(reps.begin(), reps.end());
    }
    if (auto a = std::dynamic_pointer_cast<const AbelianGroup>(ambient_)) {
        lattice::Hnf hk = lattice::sum(a->lattice_of(h), a->lattice_of(k));
        auto reps = lattice::coset_reps(hk, a->lattice_of(s_), AbelianGroup::kEnumerationLimit);
        if (!reps) return std::nullopt;
        std::set<Element> out;
        for (lattice::Vec& r : *reps) out.insert(a->normalize(lattice::reduce(hk, r)));
        return std::vector<Element>(out.begin(), out.end());
    }
    return std::nullopt;
}

std::string SubgroupGroup::check_relations(const std::vector<Element>& images, const Group& codomain) const {
    if (auto f = std::dynamic_pointer_cast<const FiniteGroup>(ambient_)) {
        const auto& elems = f->data(s_).elements;
        std::vector<Element> phi(f->order());
        for (std::size_t x : elems) {
            Element e{{static_cast<Int>(x)}};
            phi[x] = codomain.power_product(images, decompose(e));
        }
        for (std::size_t a : elems)
            for (std::size_t b : elems)
                if (phi[f->mul(a, b)] != codomain.multiply(phi[a], phi[b]))
                    return "images do not respect the product " + std::to_string(a) + "*" + std::to_string(b);
        return {};
    }
    if (auto a = std::dynamic_pointer_cast<const AbelianGroup>(ambient_)) {
        for (std::size_t i = 0; i < images.size(); ++i)
            for (std::size_t j = i + 1; j < images.size(); ++j)
                if (codomain.multiply(images[i], images[j]) != codomain.multiply(images[j], images[i]))
                    return "images of generators " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                           " do not commute";
        // Every integer relation among the generators must map to the identity.
        lattice::Mat m;
        for (const Element& g : s_.generators()) m.push_back(g.v);
        lattice::Mat rel;
        for (std::size_t i = 0; i < a->torsion().size(); ++i) {
            lattice::Vec r(a->dim(), 0);
            r[a->free_rank() + i] = a->torsion()[i];
            rel.push_back(r);
        }
        lattice::Hnf kernel = lattice::kernel_mod(m, a->dim(), lattice::hnf(rel, a->dim()));
        for (const lattice::Vec& r : kernel.rows) {
            GenWord w;
            for (std::size_t i = 0; i < r.size(); ++i)
                if (r[i] != 0) w.push_back({i, r[i]});
            if (!codomain.is_identity(codomain.power_product(images, w)))
                return "images do not satisfy a relation among the subgroup generators";
        }
        return {};
    }
    return {};  // free subgroups are given by a free basis
}

}  // namespace bst
