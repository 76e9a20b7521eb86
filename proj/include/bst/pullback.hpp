#pragma once

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "bst/morphism.hpp"

namespace bst {

// A vertex of the product: source vertices v of 𝔹 and w of ℂ over a common vertex u,
// and the canonical witness of the double coset μ(B_v)·x̃·μ(C_w) in A_u.
struct ProductVertex {
    VertexId v = 0, w = 0;
    Element witness;
};

// A product edge over the positive half f of 𝔹 and a half g of ℂ with [f] = [g] = e,
// witnessed by ã ∈ A_e. The factorizations
//   x̃_from = b0·(f_α·α_e(ã)·g_α⁻¹)·c0,   x̃_to = b1·(f_ω·ω_e(ã)·g_ω⁻¹)·c1
// (b_i in the 𝔹 vertex images, c_i in the ℂ vertex images) fix the twisting elements
// of the projections.
struct ProductEdge {
    EdgeId f = 0, g = 0;
    Element witness;
    std::size_t from = 0, to = 0;
    Element b0, c0, b1, c1;
};

struct RayCertificate {
    bool fired = false;
    std::size_t period = 0, repeats = 0;
    std::string detail;
};

// The explored part of the A-product: breadth-first from the seeds, every explored
// vertex fully expanded.
class AProductFragment {
public:
    std::vector<ProductVertex> vertices;
    std::vector<bool> explored;
    std::vector<std::string> unexpandable;  // per vertex; empty when fine
    std::vector<ProductEdge> edges;
    std::vector<Subgroup> vertex_groups;    // D_x = μ(B_v)^x̃ ∩ μ(C_w) in A_u
    std::vector<Subgroup> edge_groups;      // D_h = μ(B_f)^ã ∩ μ(C_g) in A_e
    std::vector<std::size_t> parent_edge;   // BFS tree edge per vertex, or kRoot
    std::vector<std::size_t> component;     // seed index the vertex was reached from
    bool complete = false;
    std::size_t budget = 0;

    static constexpr std::size_t kRoot = static_cast<std::size_t>(-1);

    const GoGMorphism& mb() const { return mb_; }
    const GoGMorphism& mc() const { return mc_; }
    std::size_t num_explored() const;
    std::size_t num_frontier() const;
    // Graph of groups on all fragment vertices and edges, with the projections.
    const GraphOfGroups& gog() const { return *d_; }
    const GoGMorphism& rho_a() const { return rho_a_; }
    const GoGMorphism& rho_b() const { return rho_b_; }
    const GoGMorphism& rho_c() const { return rho_c_; }

    // 𝒞(x) as the closed A-path μ^B(p_v)·x̃·μ^C(q_w)⁻¹ at the basepoint, with p_v, q_w
    // the breadth-first tree paths of 𝔹 and ℂ.
    APath component_label(std::size_t x) const;
    // (β, γ) with β ∈ B, γ ∈ C images of closed paths and label(from) =𝔸 β·label(to)·γ.
    std::pair<APath, APath> label_link(std::size_t edge) const;

    // Double coset witness x̃ = b·1·c at the base vertex: the c factor.
    const Element& base_shift() const { return base_c_; }

    friend AProductFragment build_product(const GoGMorphism&, VertexId, const GoGMorphism&, VertexId,
                                          std::size_t, bool);

private:
    GoGMorphism mb_, mc_;
    VertexId v0_ = 0, w0_ = 0;
    std::vector<std::optional<GraphPath>> tree_b_, tree_c_;
    std::shared_ptr<GraphOfGroups> d_;
    GoGMorphism rho_a_, rho_b_, rho_c_;
    Element base_c_;
    void finish();
};

// Budget: number of vertices to expand. With all_pairs, every (v, w) over a common
// vertex additionally seeds its identity double coset, so components other than the
// base one are explored too.
AProductFragment build_product(const GoGMorphism& mb, VertexId v0, const GoGMorphism& mc, VertexId w0,
                               std::size_t budget, bool all_pairs = false);

struct IntersectionGenerators {
    std::vector<APath> generators;  // closed reduced A-paths at the basepoint
    bool exact = false;             // false: lower bound only
};

// Spanning-tree circuits and conjugated vertex-group generators of the explored base
// component, pushed to 𝔸 and conjugated back so they generate a subgroup of B ∩ C.
IntersectionGenerators intersection_generators(const AProductFragment& frag);

// Fires when the fragment ends in a bare ray whose edge signature is periodic with at
// least three repeats, every ray edge mapping onto the group behind it and with finite
// index > 1 into the group ahead: the groups along the ray then form a strictly
// ascending chain, repeating for as long as the pattern does.
RayCertificate certify_ray(const AProductFragment& frag, std::size_t min_repeats = 3);

std::string format_vertex(const AProductFragment& frag, std::size_t x);

}  // namespace bst
