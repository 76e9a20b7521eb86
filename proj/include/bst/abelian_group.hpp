#pragma once

#include <vector>

#include "bst/group.hpp"
#include "bst/lattice.hpp"

namespace bst {

// A subgroup of Z^r × ⊕ Z/d_i, stored as its full preimage lattice in Z^(r+t). The
// lattice always contains the torsion relations d_i·e_(r+i), so its Hermite normal
// form is a canonical handle.
struct AbelianSubgroupData : SubgroupData {
    lattice::Hnf lattice;
};

class AbelianGroup : public Group {
public:
    // torsion factors must satisfy d_i >= 2 and d_i | d_(i+1).
    AbelianGroup(std::size_t rank, std::vector<Int> torsion);

    std::size_t free_rank() const { return rank_; }
    const std::vector<Int>& torsion() const { return torsion_; }
    std::size_t dim() const { return rank_ + torsion_.size(); }

    GroupKind kind() const override { return GroupKind::Abelian; }
    std::string describe() const override;
    Element identity() const override { return Element{std::vector<Int>(dim(), 0)}; }
    Element multiply(const Element& a, const Element& b) const override;
    Element invert(const Element& a) const override;
    bool is_valid(const Element& a) const override;
    std::vector<Element> generators() const override;
    GenWord decompose(const Element& a) const override;
    std::string format(const Element& a) const override;
    nlohmann::json to_json(const Element& a) const override;
    Element parse(const nlohmann::json& j) const override;

    Subgroup subgroup(const std::vector<Element>& gens) const override;
    bool contains(const Subgroup& h, const Element& a) const override;
    std::optional<GenWord> express(const Subgroup& h, const Element& a) const override;
    Subgroup intersect(const Subgroup& h, const Subgroup& k) const override;
    Index index(const Subgroup& h) const override;
    Index relative_index(const Subgroup& h, const Subgroup& k) const override;
    IsoType iso_type(const Subgroup& h) const override;
    IsoType iso_type() const override { return IsoType::abelian(rank_, torsion_); }
    Element double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const override;
    std::optional<std::pair<Element, Element>> double_coset_factor(
        const Subgroup& h, const Element& g, const Subgroup& k, const Element& target) const override;
    std::optional<std::vector<Element>> double_coset_reps(const Subgroup& h,
                                                          const Subgroup& k) const override;
    Slice slice(const Subgroup& p, const Element& y, const Subgroup& q,
                const Subgroup& e) const override;
    std::string check_relations(const std::vector<Element>& images, const Group& codomain) const override;

    const lattice::Hnf& lattice_of(const Subgroup& h) const { return h.data<AbelianSubgroupData>().lattice; }
    // Subgroup whose preimage lattice is l + relations.
    Subgroup from_lattice(const lattice::Hnf& l) const;
    // Coset representatives of G / h when finite and at most `limit`.
    std::optional<std::vector<Element>> coset_reps(const Subgroup& h, std::size_t limit) const;
    Element normalize(lattice::Vec x) const;

    static constexpr std::size_t kEnumerationLimit = 100000;

private:
    lattice::Mat relation_rows() const;
    std::size_t rank_;
    std::vector<Int> torsion_;
    lattice::Hnf relations_;
};

}  // namespace bst
