#pragma once

#include <string>
#include <vector>

#include "bst/free_group.hpp"
#include "bst/gog.hpp"

namespace bst {

// Underlying graph of a graph of virtually-Z groups together with, per half h, the
// index [A_o(h) : α_h(A_e)]. Index 1 means α_h is an isomorphism.
struct DecoratedGraph {
    Graph graph;
    std::vector<Index> index;  // per half

    bool iso(EdgeId h) const { return index[h] == Index::finite(1); }
};

// Empty when well formed: one finite positive index per half.
std::vector<std::string> validate_decorated(const DecoratedGraph& d);

// Requires every vertex and edge group to be virtually Z (free rank 1 abelian, or
// free of rank 1). Throws ContractError otherwise.
DecoratedGraph extract_decoration(const GraphOfGroups& a);

// Collapses non-loop edges with an index-1 half (smallest half first). Indices of
// the other halves at the removed vertex are multiplied by the far-side index.
DecoratedGraph reduce_decorated(const DecoratedGraph& d);
bool is_reduced(const DecoratedGraph& d);

// Sub-configurations whose fundamental group contains F2 x Z.
enum class Configuration {
    None,
    LoopBothProper,          // loop with neither half of index 1
    EdgeNotTwoTwo,           // non-loop edge other than (2,2)
    TwoIsoLoops,             // two loops at one vertex, each with an index-1 half
    TwoTwoEdgeWithIsoLoop,   // (2,2) edge and a loop with an index-1 half sharing a vertex
    ParallelTwoTwoEdges,     // two (2,2) edges joining the same two vertices
    TwoTwoEdgesAtVertex,     // two (2,2) edges meeting at one vertex, other ends distinct
};
std::string to_string(Configuration c);

enum class FgipAnswer { Yes, No, Unknown };
std::string to_string(FgipAnswer a);

struct FgipVerdict {
    FgipAnswer answer = FgipAnswer::Unknown;
    std::string route;        // which decision procedure produced the answer
    std::string certificate;  // "form 3: loop (1,2)", configuration text, or the criterion
    int form = 0;             // 1 single vertex, 2 edge (2,2), 3 loop (1,k); yes only
    Configuration configuration = Configuration::None;
    std::vector<PairId> witness_pairs;  // pairs of the reduced graph forming the configuration
    std::vector<FgipVerdict> components;
};

// Three-form test on a connected reduced decorated graph. The scan for a forbidden
// configuration checks single loops, then single edges, then pairs at a vertex.
FgipVerdict decide_fgip_vz(const DecoratedGraph& d);
// Re-checks a no-verdict's witness against d without rerunning the scan.
bool configuration_present(const DecoratedGraph& d, const FgipVerdict& v);

// Splits into components, reduces and decides each, and conjoins.
FgipVerdict decide_fgip_decorated(const DecoratedGraph& d);
FgipVerdict decide_fgip_gbs(const GraphOfGroups& a);

// Commensurator graph of a graph of free groups with infinite cyclic edge groups.
struct WConstruction {
    struct ClassVertex {
        VertexId vertex;         // original vertex
        EdgeId representative;   // least half of the class
        Word root;               // generator of the common commensurator
    };
    GraphOfGroups gog;  // Z vertex and edge groups
    std::vector<ClassVertex> classes;
    std::vector<VertexId> class_of;  // per original half
    std::vector<Word> conjugator;    // per half: x with x·α_h(g)·x⁻¹ = root^exponent
    std::vector<Int> exponent;       // per half
};

// Throws ContractError unless every vertex group is free and every edge group Z.
WConstruction w_construction(const GraphOfGroups& a);
FgipVerdict decide_fgip_free_cyclic(const GraphOfGroups& a);

// Routes to finite edge groups (with every vertex flagged FGIP), then the virtually-Z
// decider, then the commensurator graph; unknown otherwise.
FgipVerdict fgip_certify(const GraphOfGroups& a, const std::vector<bool>& vertex_fgip);

}  // namespace bst
