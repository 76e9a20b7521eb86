#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Integer row lattices in Z^n. All arithmetic is overflow-checked and throws
// std::overflow_error rather than wrapping.
namespace bst::lattice {

using Int = std::int64_t;
using Vec = std::vector<Int>;
using Mat = std::vector<Vec>;

Int add(Int a, Int b);
Int mul(Int a, Int b);
// Floor division / non-negative remainder for b > 0.
Int floor_div(Int a, Int b);
Int mod(Int a, Int b);
Int gcd(Int a, Int b);
Int lcm(Int a, Int b);

// Row-style Hermite normal form of the lattice spanned by the rows: upper echelon,
// positive pivots, entries above each pivot reduced into [0, pivot). Zero rows dropped.
// Unique per lattice.
struct Hnf {
    std::size_t dim = 0;
    Mat rows;
    std::vector<std::size_t> pivot_cols;

    std::size_t rank() const { return rows.size(); }
    bool full_rank() const { return rows.size() == dim; }
};

Hnf hnf(const Mat& rows, std::size_t dim);

// HNF together with a row transform: hnf.rows[i] = sum_j transform[i][j] * input[j].
struct HnfTransform {
    Hnf hnf;
    Mat transform;
};

HnfTransform hnf_with_transform(const Mat& rows, std::size_t dim);

// Canonical representative of x modulo the lattice.
Vec reduce(const Hnf& h, Vec x);
bool contains(const Hnf& h, const Vec& x);
// Coefficients c with sum c_i * h.rows[i] = x, if x lies in the lattice.
std::optional<Vec> coordinates(const Hnf& h, const Vec& x);
// Coefficients over the original input rows of a transform.
std::optional<Vec> solve(const HnfTransform& t, const Vec& x);

Hnf sum(const Hnf& a, const Hnf& b);
Hnf intersect(const Hnf& a, const Hnf& b);
bool equal(const Hnf& a, const Hnf& b);
bool subset(const Hnf& a, const Hnf& b);

// [b : a] for a ⊆ b; nullopt when infinite.
std::optional<Int> relative_index(const Hnf& a, const Hnf& b);

// Kernel of x ↦ x·m modulo the lattice `mod_rows` (rows of m have length cols).
Hnf kernel_mod(const Mat& m, std::size_t cols, const Hnf& mod_rows);

// Diagonal of the Smith normal form (nonzero entries only, increasing divisibility).
std::vector<Int> smith_diagonal(Mat m, std::size_t cols);

// Invariant factors of b / a for a ⊆ b: torsion factors (> 1) and free rank.
struct QuotientInvariants {
    std::vector<Int> torsion;
    std::size_t free_rank = 0;
};
QuotientInvariants quotient_invariants(const Hnf& a, const Hnf& b);

// Enumerates coset representatives of b / a for a ⊆ b of finite index, up to
// `limit` representatives; nullopt when infinite or over the limit.
std::optional<std::vector<Vec>> coset_reps(const Hnf& a, const Hnf& b, std::size_t limit);

}  // namespace bst::lattice
