#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bst/graph.hpp"
#include "bst/group.hpp"

namespace bst {

// Graph of groups. Edge data is stored once per pair, on the positive half; for a
// negative half alpha and omega swap.
class GraphOfGroups {
public:
    VertexId add_vertex(std::string name, GroupPtr group);
    // alpha: group → A_from, omega: group → A_to. Returns the positive half.
    EdgeId add_edge(VertexId from, VertexId to, std::string name, GroupPtr group, Homomorphism alpha,
                    Homomorphism omega);
    EdgeId add_edge(VertexId from, VertexId to, std::string name, GroupPtr group,
                    const std::vector<Element>& alpha_images, const std::vector<Element>& omega_images);

    const Graph& graph() const { return graph_; }
    const GroupPtr& vertex_group(VertexId v) const { return vertex_groups_[v]; }
    const GroupPtr& edge_group(EdgeId e) const { return edges_[pair_of(e)].group; }
    const Homomorphism& alpha(EdgeId e) const;
    const Homomorphism& omega(EdgeId e) const;

    std::optional<VertexId> basepoint;

private:
    struct EdgeData {
        GroupPtr group;
        Homomorphism alpha, omega;
    };
    Graph graph_;
    std::vector<GroupPtr> vertex_groups_;
    std::vector<EdgeData> edges_;
};

struct GogViolation {
    std::string where;
    std::string reason;
};

// Domains and codomains of the edge maps match the incident groups and every edge map
// is an injective homomorphism.
std::vector<GogViolation> validate_gog(const GraphOfGroups& a);

// (a_0, e_1, a_1, ..., e_k, a_k) with a_i ∈ A_t(e_i) and a_0 ∈ A_start.
struct APath {
    VertexId start = 0;
    std::vector<Element> elems;
    std::vector<EdgeId> edges;
    std::size_t length() const { return edges.size(); }
};

APath trivial_apath(const GraphOfGroups& a, VertexId v);
APath element_apath(VertexId v, Element x);
VertexId apath_end(const GraphOfGroups& a, const APath& p);
// Empty when p is a well-formed A-path.
std::string check_apath(const GraphOfGroups& a, const APath& p);
// Throws ContractError when t(p) ≠ o(q).
APath concat(const GraphOfGroups& a, const APath& p, const APath& q);
APath inverse(const GraphOfGroups& a, const APath& p);
// Britton reduction: a pinch (e, ω_e(x), e⁻¹) becomes α_e(x). The result is reduced
// and =𝔸-equal to p.
APath reduce(const GraphOfGroups& a, const APath& p);
bool is_reduced(const GraphOfGroups& a, const APath& p);
// Throws ContractError when p and q are not coterminal.
bool apaths_equal(const GraphOfGroups& a, const APath& p, const APath& q);

struct CyclicReduction {
    APath conjugator;
    APath core;  // cyclically reduced, or of length 0
};
// p =𝔸 conjugator · core · conjugator⁻¹; throws ContractError when p is not closed.
CyclicReduction cyclically_reduce(const GraphOfGroups& a, const APath& p);
bool is_cyclically_reduced(const GraphOfGroups& a, const APath& p);

std::string format_apath(const GraphOfGroups& a, const APath& p);

struct SubGog {
    GraphOfGroups gog;
    std::vector<VertexId> vertex_origin;
    std::vector<PairId> pair_origin;
};

// Restriction to the given vertices and pairs (pairs must have both ends kept).
SubGog restrict_gog(const GraphOfGroups& a, const std::vector<bool>& keep_vertex, const std::vector<bool>& keep_pair);
// Union of reduced closed A-paths at u (u itself always kept). A turn (e, e⁻¹) is
// admissible iff ω_e is not surjective.
SubGog gog_core_at(const GraphOfGroups& a, VertexId u);
// Union of cyclically reduced closed A-paths.
SubGog gog_core(const GraphOfGroups& a);

// One collapse of a non-loop edge e0 whose α is an isomorphism: the vertex o(e0)
// and the pair of e0 disappear, A_o(e0) is carried into A_t(e0) by ω_e0 ∘ α_e0⁻¹.
struct Collapse {
    VertexId removed = 0, into = 0;  // ids before the step
    EdgeId edge = 0;                 // the collapsed half e0, before the step
    Homomorphism carry;              // A_removed → A_into
    std::vector<VertexId> vertex_map;  // old → new (removed maps to into)
    std::vector<EdgeId> half_map;      // old → new; kNoEdge for e0's pair
    std::vector<VertexId> old_target;  // per old half
};

inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

struct ReducedGog {
    GraphOfGroups gog;
    VertexId basepoint = 0;
    std::vector<Collapse> steps;
    // Image of an A-path of the input under the collapses.
    APath transport(const APath& p) const;
};

// Collapses non-reduced edges (smallest half id first) until none remain.
ReducedGog reduce_gog(const GraphOfGroups& a, VertexId basepoint);
// Non-loop half with α surjective, if any.
std::optional<EdgeId> find_collapsible(const GraphOfGroups& a);

}  // namespace bst
