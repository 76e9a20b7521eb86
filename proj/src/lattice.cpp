#include "bst/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

namespace bst::lattice {

Int add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("lattice: integer overflow");
    return r;
}

Int mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("lattice: integer overflow");
    return r;
}

Int floor_div(Int a, Int b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

Int mod(Int a, Int b) { return add(a, -mul(floor_div(a, b), b)); }

Int gcd(Int a, Int b) {
    a = std::llabs(a);
    b = std::llabs(b);
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int lcm(Int a, Int b) {
    if (a == 0 || b == 0) return 0;
    return std::llabs(mul(a / gcd(a, b), b));
}

namespace {

// row_i -= q * row_j (also on the transform when present).
void axpy(Vec& dst, const Vec& src, Int q) {
    if (q == 0) return;
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = add(dst[k], -mul(q, src[k]));
}

HnfTransform hnf_impl(const Mat& input, std::size_t dim, bool track) {
    Mat a = input;
    for (const Vec& r : a)
        if (r.size() != dim) throw std::invalid_argument("hnf: row length mismatch");
    const std::size_t m = a.size();
    Mat t;
    if (track) {
        t.assign(m, Vec(m, 0));
        for (std::size_t i = 0; i < m; ++i) t[i][i] = 1;
    }
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t c = 0; c < dim && r < m; ++c) {
        while (true) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (a[i][c] != 0 && (best == m || std::llabs(a[i][c]) < std::llabs(a[best][c])))
                    best = i;
            if (best == m) break;
            std::swap(a[r], a[best]);
            if (track) std::swap(t[r], t[best]);
            bool clean = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (a[i][c] == 0) continue;
                Int q = floor_div(a[i][c], a[r][c]);
                axpy(a[i], a[r], q);
                if (track) axpy(t[i], t[r], q);
                if (a[i][c] != 0) clean = false;
            }
            if (clean) break;
        }
        if (a[r][c] == 0) continue;
        if (a[r][c] < 0) {
            for (Int& x : a[r]) x = -x;
            if (track)
                for (Int& x : t[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            Int q = floor_div(a[i][c], a[r][c]);
            axpy(a[i], a[r], q);
            if (track) axpy(t[i], t[r], q);
        }
        pivots.push_back(c);
        ++r;
    }
    HnfTransform out;
    out.hnf.dim = dim;
    out.hnf.rows.assign(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(r));
    out.hnf.pivot_cols = pivots;
    if (track) out.transform.assign(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(r));
    return out;
}

}  // namespace

Hnf hnf(const Mat& rows, std::size_t dim) { return hnf_impl(rows, dim, false).hnf; }

HnfTransform hnf_with_transform(const Mat& rows, std::size_t dim) {
    return hnf_impl(rows, dim, true);
}

Vec reduce(const Hnf& h, Vec x) {
    for (std::size_t i = 0; i < h.rows.size(); ++i) {
        std::size_t c = h.pivot_cols[i];
        axpy(x, h.rows[i], floor_div(x[c], h.rows[i][c]));
    }
    return x;
}

std::optional<Vec> coordinates(const Hnf& h, const Vec& x0) {
    Vec x = x0;
    Vec coef(h.rows.size(), 0);
    for (std::size_t i = 0; i < h.rows.size(); ++i) {
        std::size_t c = h.pivot_cols[i];
        Int p = h.rows[i][c];
        if (x[c] % p != 0) return std::nullopt;
        coef[i] = x[c] / p;
        axpy(x, h.rows[i], coef[i]);
    }
    for (Int v : x)
        if (v != 0) return std::nullopt;
    return coef;
}

bool contains(const Hnf& h, const Vec& x) { return coordinates(h, x).has_value(); }

std::optional<Vec> solve(const HnfTransform& t, const Vec& x) {
    auto c = coordinates(t.hnf, x);
    if (!c) return std::nullopt;
    std::size_t m = t.transform.empty() ? 0 : t.transform[0].size();
    Vec out(m, 0);
    for (std::size_t i = 0; i < c->size(); ++i)
        for (std::size_t j = 0; j < m; ++j) out[j] = add(out[j], mul((*c)[i], t.transform[i][j]));
    return out;
}

Hnf sum(const Hnf& a, const Hnf& b) {
    Mat rows = a.rows;
    rows.insert(rows.end(), b.rows.begin(), b.rows.end());
    return hnf(rows, a.dim);
}

Hnf intersect(const Hnf& a, const Hnf& b) {
    const std::size_t n = a.dim;
    Mat rows;
    for (const Vec& r : a.rows) {
        Vec x(2 * n, 0);
        std::copy(r.begin(), r.end(), x.begin());
        std::copy(r.begin(), r.end(), x.begin() + static_cast<std::ptrdiff_t>(n));
        rows.push_back(x);
    }
    for (const Vec& r : b.rows) {
        Vec x(2 * n, 0);
        std::copy(r.begin(), r.end(), x.begin());
        rows.push_back(x);
    }
    Hnf h = hnf(rows, 2 * n);
    Mat out;
    for (std::size_t i = 0; i < h.rows.size(); ++i)
        if (h.pivot_cols[i] >= n)
            out.emplace_back(h.rows[i].begin() + static_cast<std::ptrdiff_t>(n), h.rows[i].end());
    return hnf(out, n);
}

bool equal(const Hnf& a, const Hnf& b) { return a.rows == b.rows; }

bool subset(const Hnf& a, const Hnf& b) {
    for (const Vec& r : a.rows)
        if (!contains(b, r)) return false;
    return true;
}

namespace {

Mat coordinate_matrix(const Hnf& a, const Hnf& b) {
    Mat m;
    for (const Vec& r : a.rows) {
        auto c = coordinates(b, r);
        if (!c) throw std::invalid_argument("lattice: sublattice not contained");
        m.push_back(*c);
    }
    return m;
}

}  // namespace

std::optional<Int> relative_index(const Hnf& a, const Hnf& b) {
    if (a.rank() < b.rank()) return std::nullopt;
    Hnf h = hnf(coordinate_matrix(a, b), b.rank());
    Int idx = 1;
    for (std::size_t i = 0; i < h.rows.size(); ++i) idx = mul(idx, h.rows[i][h.pivot_cols[i]]);
    return idx;
}

Hnf kernel_mod(const Mat& m, std::size_t cols, const Hnf& mod_rows) {
    const std::size_t k = m.size();
    Mat rows;
    for (std::size_t i = 0; i < k; ++i) {
        Vec x(cols + k, 0);
        std::copy(m[i].begin(), m[i].end(), x.begin());
        x[cols + i] = 1;
        rows.push_back(x);
    }
    for (const Vec& r : mod_rows.rows) {
        Vec x(cols + k, 0);
        std::copy(r.begin(), r.end(), x.begin());
        rows.push_back(x);
    }
    Hnf h = hnf(rows, cols + k);
    Mat out;
    for (std::size_t i = 0; i < h.rows.size(); ++i)
        if (h.pivot_cols[i] >= cols)
            out.emplace_back(h.rows[i].begin() + static_cast<std::ptrdiff_t>(cols), h.rows[i].end());
    return hnf(out, k);
}

std::vector<Int> smith_diagonal(Mat a, std::size_t cols) {
    const std::size_t m = a.size();
    std::vector<Int> diag;
    std::size_t t = 0;
    while (t < m && t < cols) {
        // Smallest nonzero entry of the trailing block.
        std::size_t bi = m, bj = cols;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < cols; ++j)
                if (a[i][j] != 0 && (bi == m || std::llabs(a[i][j]) < std::llabs(a[bi][bj]))) {
                    bi = i;
                    bj = j;
                }
        if (bi == m) break;
        std::swap(a[t], a[bi]);
        for (auto& row : a) std::swap(row[t], row[bj]);
        bool done = true;
        for (std::size_t i = t + 1; i < m; ++i) {
            Int q = floor_div(a[i][t], a[t][t]);
            axpy(a[i], a[t], q);
            if (a[i][t] != 0) done = false;
        }
        for (std::size_t j = t + 1; j < cols; ++j) {
            Int q = floor_div(a[t][j], a[t][t]);
            if (q != 0)
                for (std::size_t i = 0; i < m; ++i) a[i][j] = add(a[i][j], -mul(q, a[i][t]));
            if (a[t][j] != 0) done = false;
        }
        if (!done) continue;
        // Divisibility: fold any row whose entries are not multiples of the pivot.
        bool divides = true;
        for (std::size_t i = t + 1; i < m && divides; ++i)
            for (std::size_t j = t + 1; j < cols; ++j)
                if (a[i][j] % a[t][t] != 0) {
                    for (std::size_t k = 0; k < cols; ++k) a[t][k] = add(a[t][k], a[i][k]);
                    divides = false;
                    break;
                }
        if (!divides) continue;
        diag.push_back(std::llabs(a[t][t]));
        ++t;
    }
    return diag;
}

QuotientInvariants quotient_invariants(const Hnf& a, const Hnf& b) {
    QuotientInvariants q;
    std::vector<Int> d = smith_diagonal(coordinate_matrix(a, b), b.rank());
    for (Int x : d)
        if (x > 1) q.torsion.push_back(x);
    q.free_rank = b.rank() - d.size();
    return q;
}

std::optional<std::vector<Vec>> coset_reps(const Hnf& a, const Hnf& b, std::size_t limit) {
    const std::size_t k = b.rank();
    if (a.rank() < k) return std::nullopt;
    Hnf h = hnf(coordinate_matrix(a, b), k);
    std::vector<Int> bounds(k);
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) {
        bounds[i] = h.rows[i][h.pivot_cols[i]];
        if (static_cast<std::size_t>(bounds[i]) > limit || total > limit / static_cast<std::size_t>(bounds[i]))
            return std::nullopt;
        total *= static_cast<std::size_t>(bounds[i]);
    }
    std::vector<Vec> out;
    out.reserve(total);
    Vec idx(k, 0);
    while (true) {
        Vec x(b.dim, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < b.dim; ++j) x[j] = add(x[j], mul(idx[i], b.rows[i][j]));
        out.push_back(x);
        std::size_t pos = 0;
        while (pos < k && ++idx[pos] == bounds[pos]) idx[pos++] = 0;
        if (pos == k) break;
    }
    return out;
}

}  // namespace bst::lattice
