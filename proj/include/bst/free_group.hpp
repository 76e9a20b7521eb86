#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bst/group.hpp"

namespace bst {

// Words over signed letters: +i is the i-th generator (1-based), -i its inverse.
using Word = std::vector<Int>;

namespace words {

Word reduce(Word w);
Word multiply(const Word& a, const Word& b);
Word invert(const Word& w);
Word power(const Word& w, Int n);
// Shortlex order with letters ranked a < A < b < B < ...
bool shortlex_less(const Word& a, const Word& b);
std::size_t letter_rank(Int x);

// Strings over a..z, A..Z (uppercase = inverse); "" and "1" are the empty word.
std::optional<Word> parse(const std::string& s, std::size_t rank);
std::string format(const Word& w);

// w = prefix · core · prefix⁻¹ with core cyclically reduced (w reduced).
struct CyclicSplit {
    Word prefix, core;
};
CyclicSplit cyclic_split(const Word& w);

struct Root {
    Word root;
    Int power;
};
// Throws ContractError on the empty word.
Root primitive_root(const Word& w);

// Shortest-then-shortlex x with x⁻¹·r·x = r2 or x⁻¹·r·x = r2⁻¹, found by matching
// cyclic rotations.
struct Conjugator {
    Word x;
    bool inverted;  // true when x⁻¹ r x = r2⁻¹
};
std::optional<Conjugator> cyclic_conjugate(const Word& r, const Word& r2);

}  // namespace words

// Folded, cored, pointed graph labeled by letters. Each directed slot also carries a
// tag: a word over the generating set it was built from, so closed paths at the base
// spell their own expression in those generators.
class StallingsGraph {
public:
    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

    // Folds the wedge of generator petals at the base and cores it.
    static StallingsGraph build(std::size_t rank, const std::vector<Word>& gens);

    std::size_t rank_of_ambient() const { return rank_; }
    std::size_t num_vertices() const { return next_.size(); }
    std::size_t num_edges() const;  // undirected
    std::size_t rank() const { return num_edges() + 1 - num_vertices(); }
    std::size_t base() const { return 0; }
    std::size_t next(std::size_t v, Int letter) const { return next_[v][slot(letter)]; }
    const Word& tag(std::size_t v, Int letter) const { return tag_[v][slot(letter)]; }
    // True when folding identified two distinct generator expressions, i.e. the
    // generating set is not a free basis.
    bool relation_found() const { return relation_found_; }

    // End vertex and accumulated tag of reading w from `from`.
    std::optional<std::pair<std::size_t, Word>> read(const Word& w, std::size_t from = 0) const;
    bool accepts(const Word& w) const;
    bool is_complete() const;
    // Free basis from a BFS spanning tree.
    std::vector<Word> tree_basis() const;

    static std::size_t slot(Int letter) {
        return letter > 0 ? 2 * static_cast<std::size_t>(letter - 1)
                          : 2 * static_cast<std::size_t>(-letter - 1) + 1;
    }
    static Int letter_of(std::size_t slot) {
        Int g = static_cast<Int>(slot / 2) + 1;
        return slot % 2 == 0 ? g : -g;
    }

    // Untagged pointed graph from explicit tables; used for products.
    static StallingsGraph from_tables(std::size_t rank, std::vector<std::vector<std::size_t>> next);
    // Removes non-base vertices of valence <= 1 repeatedly.
    void core();

private:
    std::size_t rank_ = 0;
    std::vector<std::vector<std::size_t>> next_;
    std::vector<std::vector<Word>> tag_;
    bool relation_found_ = false;
};

// Rational-set automaton for H·g·K: the Stallings graph of H, a g-path and the
// Stallings graph of K, traversed in that order only, saturated with ε-moves across
// every path that spells a freely trivial word. A freely reduced word lies in HgK iff
// the automaton accepts it.
class DoubleCosetAutomaton {
public:
    using StateSet = std::vector<std::size_t>;  // sorted, ε-closed

    DoubleCosetAutomaton(const StallingsGraph& h, const Word& g, const StallingsGraph& k);
    DoubleCosetAutomaton(std::size_t rank, const std::vector<Word>& h, const Word& g,
                         const std::vector<Word>& k);

    bool accepts(const Word& w) const;  // w is reduced first
    // Shortest, then shortlex least, reduced word of HgK.
    Word shortlex_witness() const;
    std::size_t num_states() const { return next_.size(); }

    StateSet initial() const { return closure_[start_]; }
    StateSet read(const StateSet& from, const Word& w) const;
    bool accepting(const StateSet& s) const;

private:
    void add_state();
    void saturate();
    std::size_t rank_;
    std::vector<std::vector<std::vector<std::size_t>>> next_;  // [state][slot] → states
    std::vector<StateSet> closure_;
    std::size_t start_ = 0, accept_ = 0;
};

struct FreeSubgroupData : SubgroupData {
    StallingsGraph graph;
};

class FreeGroup : public Group {
public:
    explicit FreeGroup(std::size_t rank) : rank_(rank) {}
    std::size_t rank() const { return rank_; }

    GroupKind kind() const override { return GroupKind::Free; }
    std::string describe() const override { return "F" + std::to_string(rank_); }
    Element identity() const override { return {}; }
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
    IsoType iso_type() const override { return IsoType::free(rank_); }
    Element double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const override;
    std::optional<std::pair<Element, Element>> double_coset_factor(
        const Subgroup& h, const Element& g, const Subgroup& k, const Element& target) const override;
    std::optional<std::vector<Element>> double_coset_reps(const Subgroup& h,
                                                          const Subgroup& k) const override;
    Slice slice(const Subgroup& p, const Element& y, const Subgroup& q,
                const Subgroup& e) const override;

    static constexpr std::size_t kSliceTraceLimit = 100000;

    const StallingsGraph& graph(const Subgroup& h) const { return h.data<FreeSubgroupData>().graph; }
    DoubleCosetAutomaton double_coset(const Subgroup& h, const Element& g, const Subgroup& k) const;

private:
    std::size_t rank_;
};

// Smallest d >= 1 with c^d ∈ H, or nullopt when no positive power lies in H.
std::optional<Int> cyclic_intersect(const StallingsGraph& h, const Word& c);

inline Word as_word(const Element& e) { return e.v; }
inline Element as_element(Word w) { return Element{std::move(w)}; }

}  // namespace bst
