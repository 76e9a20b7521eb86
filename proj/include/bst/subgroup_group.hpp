#pragma once

#include "bst/group.hpp"

namespace bst {

// A subgroup S of an ambient backend viewed as a group in its own right. Elements are
// ambient elements lying in S; every query is answered by the ambient backend, so the
// inclusion into the ambient group is the identity on elements.
class SubgroupGroup : public Group {
public:
    // For free ambients a non-basis generating set is replaced by a free basis, so the
    // standard generators never satisfy relations.
    SubgroupGroup(GroupPtr ambient, const Subgroup& s);

    const GroupPtr& ambient() const { return ambient_; }
    const Subgroup& subgroup_handle() const { return s_; }
    // The inclusion S → ambient.
    Homomorphism inclusion(const std::shared_ptr<const SubgroupGroup>& self) const;

    GroupKind kind() const override { return ambient_->kind(); }
    std::string describe() const override;
    Element identity() const override { return ambient_->identity(); }
    Element multiply(const Element& a, const Element& b) const override { return ambient_->multiply(a, b); }
    Element invert(const Element& a) const override { return ambient_->invert(a); }
    bool is_valid(const Element& a) const override;
    std::vector<Element> generators() const override { return s_.generators(); }
    GenWord decompose(const Element& a) const override;
    std::string format(const Element& a) const override { return ambient_->format(a); }
    nlohmann::json to_json(const Element& a) const override { return ambient_->to_json(a); }
    Element parse(const nlohmann::json& j) const override;

    Subgroup subgroup(const std::vector<Element>& gens) const override { return ambient_->subgroup(gens); }
    bool contains(const Subgroup& h, const Element& a) const override { return ambient_->contains(h, a); }
    std::optional<GenWord> express(const Subgroup& h, const Element& a) const override {
        return ambient_->express(h, a);
    }
    Subgroup intersect(const Subgroup& h, const Subgroup& k) const override { return ambient_->intersect(h, k); }
    Index index(const Subgroup& h) const override { return ambient_->relative_index(h, s_); }
    Index relative_index(const Subgroup& h, const Subgroup& k) const override {
        return ambient_->relative_index(h, k);
    }
    IsoType iso_type(const Subgroup& h) const override { return ambient_->iso_type(h); }
    IsoType iso_type() const override { return ambient_->iso_type(s_); }
    Element double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const override {
        return ambient_->double_coset_rep(h, g, k);
    }
    std::optional<std::pair<Element, Element>> double_coset_factor(
        const Subgroup& h, const Element& g, const Subgroup& k, const Element& target) const override {
        return ambient_->double_coset_factor(h, g, k, target);
    }
    // Decided for finite and abelian ambients; nullopt for free ambients.
    std::optional<std::vector<Element>> double_coset_reps(const Subgroup& h,
                                                          const Subgroup& k) const override;
    Slice slice(const Subgroup& p, const Element& y, const Subgroup& q, const Subgroup& e) const override {
        return ambient_->slice(p, y, q, e);
    }
    std::string check_relations(const std::vector<Element>& images, const Group& codomain) const override;

private:
    GroupPtr ambient_;
    Subgroup s_;
};

std::shared_ptr<const SubgroupGroup> make_subgroup_group(GroupPtr ambient, const Subgroup& s);

}  // namespace bst
