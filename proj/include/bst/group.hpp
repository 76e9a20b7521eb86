#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace bst {

using Int = std::int64_t;

// Backend-native element data: free words (signed letters), abelian coordinates,
// or a single finite-table index.
struct Element {
    std::vector<Int> v;
    friend auto operator<=>(const Element&, const Element&) = default;
};

// A natural number or infinity.
class Index {
public:
    static Index finite(std::uint64_t n) { return Index(n); }
    static Index infinite() { return Index(); }
    bool is_finite() const { return value_.has_value(); }
    std::uint64_t value() const { return value_.value(); }
    bool operator==(const Index&) const = default;
    Index operator*(const Index& o) const;
    std::string str() const;

private:
    Index() = default;
    explicit Index(std::uint64_t n) : value_(n) {}
    std::optional<std::uint64_t> value_;
};

// Product of generator powers: gen index (0-based) and exponent per syllable.
struct Syllable {
    std::size_t gen;
    Int exp;
    bool operator==(const Syllable&) const = default;
};
using GenWord = std::vector<Syllable>;

// Isomorphism type used by the Hopfian injectivity test.
struct IsoType {
    enum class Tag { Finite, Free, Abelian } tag = Tag::Finite;
    std::uint64_t order = 1;
    std::size_t rank = 0;
    std::vector<Int> torsion;
    bool operator==(const IsoType&) const = default;
    std::string str() const;
    static IsoType finite(std::uint64_t n);
    static IsoType free(std::size_t r);
    static IsoType abelian(std::size_t r, std::vector<Int> torsion);
};

enum class GroupKind { Free, Abelian, Finite };

class ContractError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Backend-private data cached on a subgroup handle.
struct SubgroupData {
    virtual ~SubgroupData() = default;
};

class Subgroup {
public:
    Subgroup() = default;
    Subgroup(std::vector<Element> gens, std::shared_ptr<const SubgroupData> data)
        : gens_(std::move(gens)), data_(std::move(data)) {}
    const std::vector<Element>& generators() const { return gens_; }
    template <class T>
    const T& data() const {
        return static_cast<const T&>(*data_);
    }

private:
    std::vector<Element> gens_;
    std::shared_ptr<const SubgroupData> data_;
};

// Solutions e ∈ E ∩ P·y·Q, one per (P∩E, Q∩E)-double coset of E.
struct Slice {
    enum class Status { Ok, Infinite, Unsupported } status = Status::Ok;
    std::vector<Element> reps;
    std::string note;
};

class Group {
public:
    virtual ~Group() = default;

    virtual GroupKind kind() const = 0;
    virtual std::string describe() const = 0;

    virtual Element identity() const = 0;
    virtual Element multiply(const Element& a, const Element& b) const = 0;
    virtual Element invert(const Element& a) const = 0;
    virtual bool is_valid(const Element& a) const = 0;

    // Standard generators and expression of any element over them.
    virtual std::vector<Element> generators() const = 0;
    virtual GenWord decompose(const Element& a) const = 0;

    virtual std::string format(const Element& a) const = 0;
    virtual nlohmann::json to_json(const Element& a) const = 0;
    virtual Element parse(const nlohmann::json& j) const = 0;

    virtual Subgroup subgroup(const std::vector<Element>& gens) const = 0;
    virtual bool contains(const Subgroup& h, const Element& a) const = 0;
    // Expression of a over the generators of h, or nullopt when a ∉ h.
    virtual std::optional<GenWord> express(const Subgroup& h, const Element& a) const = 0;
    virtual Subgroup intersect(const Subgroup& h, const Subgroup& k) const = 0;
    // [G : h].
    virtual Index index(const Subgroup& h) const = 0;
    // [k : h] for h ≤ k.
    virtual Index relative_index(const Subgroup& h, const Subgroup& k) const = 0;
    virtual IsoType iso_type(const Subgroup& h) const = 0;
    virtual IsoType iso_type() const = 0;

    // Canonical witness of h·g·k.
    virtual Element double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const = 0;
    // (x, y) with target = x·g·y, x ∈ h, y ∈ k.
    virtual std::optional<std::pair<Element, Element>> double_coset_factor(
        const Subgroup& h, const Element& g, const Subgroup& k, const Element& target) const = 0;
    // Canonical witnesses of all of h\G/k, or nullopt when not finite or not decidable.
    virtual std::optional<std::vector<Element>> double_coset_reps(const Subgroup& h,
                                                                  const Subgroup& k) const = 0;
    virtual Slice slice(const Subgroup& p, const Element& y, const Subgroup& q,
                        const Subgroup& e) const = 0;

    // Empty when the generator images satisfy this group's defining relations.
    virtual std::string check_relations(const std::vector<Element>& images,
                                        const Group& codomain) const;

    // Derived operations.
    bool is_identity(const Element& a) const { return a == identity(); }
    bool equal(const Element& a, const Element& b) const { return a == b; }
    Element power(const Element& a, Int n) const;
    Element power_product(const std::vector<Element>& base, const GenWord& w) const;
    Element conjugate(const Element& a, const Element& g) const;  // g⁻¹ a g
    Subgroup conjugate(const Subgroup& h, const Element& g) const;  // g⁻¹ h g
    Subgroup trivial_subgroup() const { return subgroup({}); }
    Subgroup whole() const { return subgroup(generators()); }
    Subgroup join(const Subgroup& h, const Subgroup& k) const;
    bool is_subgroup_of(const Subgroup& h, const Subgroup& k) const;
    bool same_subgroup(const Subgroup& h, const Subgroup& k) const;
    bool is_finite(const Subgroup& h) const { return iso_type(h).tag == IsoType::Tag::Finite; }
    Element coset_rep(const Subgroup& h, const Element& g) const;  // left coset g·h
    bool double_coset_equal(const Subgroup& h, const Element& g, const Subgroup& k,
                            const Element& g2) const {
        return double_coset_rep(h, g, k) == double_coset_rep(h, g2, k);
    }
    std::string format_subgroup(const Subgroup& h) const;
};

using GroupPtr = std::shared_ptr<const Group>;

// Homomorphism given by images of the domain's standard generators.
class Homomorphism {
public:
    Homomorphism() = default;
    Homomorphism(GroupPtr domain, GroupPtr codomain, std::vector<Element> images);

    const GroupPtr& domain() const { return domain_; }
    const GroupPtr& codomain() const { return codomain_; }
    const std::vector<Element>& images() const { return images_; }
    const Subgroup& image() const { return image_; }

    Element apply(const Element& a) const;
    Subgroup apply(const Subgroup& h) const;
    // x with apply(x) = y, when y lies in the image.
    std::optional<Element> preimage(const Element& y) const;
    bool is_surjective() const;

    // Empty string when the map is a well-defined injective homomorphism.
    std::string check_monomorphism() const;

private:
    GroupPtr domain_, codomain_;
    std::vector<Element> images_;
    Subgroup image_;
};

// g ∘ f.
Homomorphism compose(const Homomorphism& g, const Homomorphism& f);
// x ↦ by⁻¹·x·by on g.
Homomorphism conjugation_map(const GroupPtr& g, const Element& by);

}  // namespace bst
