#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "bst/abelian_group.hpp"
#include "bst/free_group.hpp"

namespace bst {

// q^A_{f,g}: A/((A∩B)+(A∩C)) → G/(B+C), a ↦ f + a − g, for G abelian (conjugation is
// trivial, so B^f = B).
class QMapAbelian {
public:
    QMapAbelian(std::shared_ptr<const AbelianGroup> g, Subgroup a, Subgroup b, Subgroup c, Element f, Element gg);

    const AbelianGroup& group() const { return *g_; }
    const Subgroup& domain_relations() const { return dom_rel_; }   // (A∩B)+(A∩C)
    const Subgroup& codomain_relations() const { return cod_rel_; }  // B+C

    // Canonical representatives.
    Element domain_class(const Element& a) const;
    Element evaluate(const Element& a) const;

    Index domain_size() const;    // [A : (A∩B)+(A∩C)]
    Index codomain_size() const;  // [G : B+C]
    // Kernel and image of q_{0,0}, whose sizes decide FCIP.
    Index kernel_size() const;  // [A∩(B+C) : (A∩B)+(A∩C)]
    Index image_size() const;   // [A+B+C : B+C]
    // One representative per domain class when the domain is finite and small enough.
    std::optional<std::vector<Element>> domain_classes(std::size_t limit = 100000) const;

private:
    std::shared_ptr<const AbelianGroup> g_;
    Subgroup a_, b_, c_;
    Element f_, gg_;
    Subgroup dom_rel_, cod_rel_;
};

enum class FcipVerdict { True, False, Evidence };
std::string to_string(FcipVerdict v);

struct FcipReport {
    FcipVerdict verdict = FcipVerdict::Evidence;
    int clause = 0;  // failure clause (1)–(4), or the satisfied branch (1 or 2) on success
    std::string detail;
    Index kernel = Index::finite(1), image = Index::finite(1);
    // Sampler data: (B,C)-class → number of preimages over all (f, g).
    std::map<Element, std::size_t> collisions;
    std::size_t excess = 0;          // Σ max(0, count − 1)
    std::size_t domain_classes = 0;  // distinct domain classes seen
};

// FCIP of (B, C) relative to the single subgroup A in an abelian group.
FcipReport fcip_abelian(const std::shared_ptr<const AbelianGroup>& g, const Subgroup& b, const Subgroup& c,
                        const Subgroup& a);

// 0-FCIP relative to a collection holds iff every member is finite.
bool fcip_zero_check(const std::vector<std::pair<GroupPtr, Subgroup>>& collection);

// Collision counting for q^A_{f,g}, f ∈ fs, g ∈ gs, over the given elements of A.
FcipReport count_collisions(const Group& g, const Subgroup& a, const Subgroup& b, const Subgroup& c,
                            const std::vector<Element>& fs, const std::vector<Element>& gs,
                            const std::vector<Element>& samples);

// Counting over all elements of A of length at most L; evidence only.
FcipReport fcip_bruteforce_sample(const FreeGroup& g, const Subgroup& a, const Subgroup& b, const Subgroup& c,
                                  const std::vector<Element>& fs, const std::vector<Element>& gs, std::size_t max_len);

// Elements of h with reduced length at most max_len, in shortlex order.
std::vector<Element> ball_in_subgroup(const FreeGroup& g, const Subgroup& h, std::size_t max_len);

struct IndexHarnessReport {
    std::size_t samples = 0;
    std::size_t max_multiplicity = 0;
    std::size_t violations = 0;
    std::size_t k = 0;
};

// For A' ≤ A of index k: maps the classes (A'∩B^f) a' (A'∩C^g) of the sampled a'
// to (A∩B^f) a' (A∩C^g) and records the largest fibre. Multiplicities above k are
// violations.
IndexHarnessReport k_fcip_index_harness(const Group& g, const Subgroup& a, const Subgroup& a_sub,
                                        const Subgroup& b, const Subgroup& c, const Element& f,
                                        const Element& gg, const std::vector<Element>& samples);

}  // namespace bst
