#pragma once

#include "bst/free_group.hpp"
#include "bst/gog.hpp"

namespace bst {

// Standard graphs of groups used by tests, examples and the acceptance run.

// One vertex with the trivial group and n loops with trivial edge groups.
std::shared_ptr<GraphOfGroups> rose(std::size_t n);
// Loop at a Z vertex with α = ×m, ω = ×n.
std::shared_ptr<GraphOfGroups> baumslag_solitar(Int m, Int n);
// Z <-(×m)- Z -(×n)-> Z.
std::shared_ptr<GraphOfGroups> z_amalgam(Int m, Int n);
// Z² vertex ⟨a1, a2⟩, Z² edge ⟨b1, b2⟩ with α(b_i) = a_i and ω(b_i) = 2a_i.
std::shared_ptr<GraphOfGroups> z2_doubling_hnn();
// F2 = ⟨a, b⟩ and F2 = ⟨c, d⟩ amalgamated along Z with α ↦ wa, ω ↦ wc.
std::shared_ptr<GraphOfGroups> free_double(const Word& wa, const Word& wc);
// Two finite groups joined by a trivial edge group.
std::shared_ptr<GraphOfGroups> finite_free_product(GroupPtr g1, GroupPtr g2);

// A-path over a rose spelling the word (letter ±i is the i-th loop or its inverse).
APath rose_path(const GraphOfGroups& r, const Word& w);
// Word spelled by an A-path over a rose.
Word rose_word(const APath& p);

}  // namespace bst
