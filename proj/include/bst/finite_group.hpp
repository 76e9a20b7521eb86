#pragma once

#include <vector>

#include "bst/group.hpp"

namespace bst {

// Element set of a subgroup plus a breadth-first spanning tree over its generators,
// which expresses every member as a word in them.
struct FiniteSubgroupData : SubgroupData {
    std::vector<bool> member;
    std::vector<std::size_t> elements;  // sorted
    std::vector<std::size_t> parent;    // kNone for the identity and non-members
    std::vector<Syllable> step;         // parent · gen^exp = element
};

class FiniteGroup : public Group {
public:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    // Validates the table: rows and columns are permutations, an identity exists and
    // associativity holds (exhaustively up to order 64, on a deterministic sample beyond).
    // Without explicit generators a greedy generating set is chosen.
    explicit FiniteGroup(std::vector<std::vector<std::size_t>> table,
                         std::optional<std::vector<std::size_t>> gens = std::nullopt);
    static FiniteGroup cyclic(std::size_t n);

    std::size_t order() const { return table_.size(); }
    std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
    std::size_t inv(std::size_t a) const { return inverse_[a]; }
    std::size_t identity_index() const { return identity_; }

    GroupKind kind() const override { return GroupKind::Finite; }
    std::string describe() const override { return "finite group of order " + std::to_string(order()); }
    Element identity() const override { return Element{{static_cast<Int>(identity_)}}; }
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
    IsoType iso_type() const override { return IsoType::finite(order()); }
    Element double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const override;
    std::optional<std::pair<Element, Element>> double_coset_factor(
        const Subgroup& h, const Element& g, const Subgroup& k, const Element& target) const override;
    std::optional<std::vector<Element>> double_coset_reps(const Subgroup& h,
                                                          const Subgroup& k) const override;
    Slice slice(const Subgroup& p, const Element& y, const Subgroup& q,
                const Subgroup& e) const override;
    std::string check_relations(const std::vector<Element>& images, const Group& codomain) const override;

    const FiniteSubgroupData& data(const Subgroup& h) const { return h.data<FiniteSubgroupData>(); }
    // Greedy generating set of a subset closed under multiplication.
    std::vector<Element> generating_set(const std::vector<bool>& member) const;

private:
    static std::size_t at(const Element& a) { return static_cast<std::size_t>(a.v.at(0)); }
    static Element el(std::size_t i) { return Element{{static_cast<Int>(i)}}; }
    std::vector<std::size_t> double_coset(const Subgroup& h, std::size_t g, const Subgroup& k) const;

    std::vector<std::vector<std::size_t>> table_;
    std::vector<std::size_t> inverse_;
    std::size_t identity_ = 0;
    std::vector<Element> gens_;
    Subgroup whole_;
};

}  // namespace bst
