#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bst/gog.hpp"

namespace bst {

using GogPtr = std::shared_ptr<const GraphOfGroups>;

// μ: B → A with twisting elements. Per-pair data is stored for the positive half f;
// for f⁻¹ the twists swap, and μ_(f⁻¹) = μ_f.
struct GoGMorphism {
    GogPtr source, target;
    std::vector<VertexId> vertex_map;  // per source vertex
    std::vector<EdgeId> edge_map;      // per source half
    std::vector<Homomorphism> mu_vertex;  // B_v → A_[v]
    std::vector<Homomorphism> mu_edge;    // per source pair: B_f → A_[f]
    std::vector<Element> twist_alpha_pos, twist_omega_pos;  // per source pair

    const Element& twist_alpha(EdgeId f) const {
        return is_positive(f) ? twist_alpha_pos[pair_of(f)] : twist_omega_pos[pair_of(f)];
    }
    const Element& twist_omega(EdgeId f) const {
        return is_positive(f) ? twist_omega_pos[pair_of(f)] : twist_alpha_pos[pair_of(f)];
    }
    // μ_v(B_v) ≤ A_[v].
    const Subgroup& vertex_image(VertexId v) const { return mu_vertex[v].image(); }
    // (α_[f] ∘ μ_f)(B_f) ≤ A_[o(f)].
    Subgroup edge_image_alpha(EdgeId f) const;
    // α_e(A_e) ≤ A_o(e) for e = [f].
    Subgroup alpha_image(EdgeId f) const;
};

// Identity morphism of a graph of groups.
GoGMorphism identity_morphism(const GogPtr& a);

// Empty when the graph map respects incidence and involution, the μ maps have the
// right domains/codomains and are injective, and both twisted commutation equations
// α_[f]∘μ_f = inn(f_α)∘μ_o(f)∘α_f hold on edge-group generators, inn(g)(x) = g⁻¹xg.
std::vector<std::string> validate_morphism(const GoGMorphism& m);

struct ImmersionBlock {
    VertexId vertex;
    EdgeId target_edge;
    std::vector<std::pair<EdgeId, Element>> witnesses;  // source half, canonical witness
};

struct ImmersionResult {
    bool ok = false;
    std::string failure;
    std::vector<ImmersionBlock> blocks;       // condition (1)
    std::vector<EdgeId> verified_edges;       // condition (2), per source half
};

// Condition (1): μ_v(B_v)·f_α·α_e(A_e) are pairwise distinct for distinct f with the
// same origin and image. Condition (2): (α_e∘μ_f)(B_f) = μ_v(B_v)^(f_α) ∩ α_e(A_e).
ImmersionResult is_immersion(const GoGMorphism& m);

enum class Tri { Yes, No, Unknown };
std::string to_string(Tri t);

struct CoveringResult {
    Tri verdict = Tri::Unknown;
    std::string detail;
};
// Condition (3) on top of an immersion; Unknown when some double-coset set cannot be
// enumerated.
CoveringResult is_covering(const GoGMorphism& m);

// (μ(b0)·f1_α, [f1], f1_ω⁻¹·μ(b1)·f2_α, ..., [fk], fk_ω⁻¹·μ(bk)).
APath push_apath(const GoGMorphism& m, const APath& p);

struct RealizeResult {
    GoGMorphism morphism;
    VertexId basepoint = 0;
    bool complete = false;  // false when the step budget ran out
    std::size_t steps = 0;
    std::string note;
};

// Builds a pointed immersion whose π₁-image contains the given closed A-paths at u0:
// wedge the generator paths, then fold and grow vertex and edge groups in a
// deterministic breadth-first order until both immersion conditions hold.
RealizeResult realize_subgroup(const GogPtr& a, VertexId u0, const std::vector<APath>& generators,
                               std::size_t budget = 10000);

}  // namespace bst
