#include "bst/free_group.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "bst/lattice.hpp"

namespace bst {

namespace words {

Word reduce(Word w) {
    Word out;
    out.reserve(w.size());
    for (Int x : w) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
    }
    return out;
}

Word multiply(const Word& a, const Word& b) {
    Word out = a;
    for (Int x : b) {
        if (!out.empty() && out.back() == -x) out.pop_back();
        else out.push_back(x);
    }
    return out;
}

Word invert(const Word& w) {
    Word out(w.rbegin(), w.rend());
    for (Int& x : out) x = -x;
    return out;
}

Word power(const Word& w, Int n) {
    Word base = n < 0 ? invert(w) : w;
    Word out;
    for (Int i = 0; i < (n < 0 ? -n : n); ++i) out = multiply(out, base);
    return out;
}

std::size_t letter_rank(Int x) { return StallingsGraph::slot(x); }

bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
    return false;
}

std::optional<Word> parse(const std::string& s, std::size_t rank) {
    Word w;
    if (s == "1") return w;
    for (char ch : s) {
        Int x;
        if (ch >= 'a' && ch <= 'z') x = ch - 'a' + 1;
        else if (ch >= 'A' && ch <= 'Z') x = -(ch - 'A' + 1);
        else return std::nullopt;
        if (static_cast<std::size_t>(x < 0 ? -x : x) > rank) return std::nullopt;
        w.push_back(x);
    }
    return reduce(w);
}

std::string format(const Word& w) {
    if (w.empty()) return "1";
    std::string s;
    for (Int x : w) {
        if (x > 26 || x < -26) return "<rank>26>";
        s.push_back(x > 0 ? static_cast<char>('a' + x - 1) : static_cast<char>('A' - x - 1));
    }
    return s;
}

CyclicSplit cyclic_split(const Word& w0) {
    Word w = reduce(w0);
    std::size_t i = 0, j = w.size();
    while (j - i >= 2 && w[i] == -w[j - 1]) {
        ++i;
        --j;
    }
    CyclicSplit out;
    out.prefix.assign(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(i));
    out.core.assign(w.begin() + static_cast<std::ptrdiff_t>(i), w.begin() + static_cast<std::ptrdiff_t>(j));
    return out;
}

Root primitive_root(const Word& w0) {
    Word w = reduce(w0);
    if (w.empty()) throw ContractError("primitive_root: empty word");
    CyclicSplit sp = cyclic_split(w);
    const std::size_t n = sp.core.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d != 0) continue;
        bool periodic = true;
        for (std::size_t i = d; i < n && periodic; ++i) periodic = sp.core[i] == sp.core[i - d];
        if (!periodic) continue;
        Word r = sp.prefix;
        r.insert(r.end(), sp.core.begin(), sp.core.begin() + static_cast<std::ptrdiff_t>(d));
        Word pi = invert(sp.prefix);
        r.insert(r.end(), pi.begin(), pi.end());
        return {reduce(r), static_cast<Int>(n / d)};
    }
    return {w, 1};
}

std::optional<Conjugator> cyclic_conjugate(const Word& r0, const Word& r20) {
    CyclicSplit a = cyclic_split(r0), b = cyclic_split(r20);
    if (a.core.size() != b.core.size() || a.core.empty()) return std::nullopt;
    const std::size_t n = a.core.size();
    std::optional<Conjugator> best;
    for (int inv = 0; inv < 2; ++inv) {
        Word target = inv ? invert(b.core) : b.core;
        for (std::size_t i = 0; i < n; ++i) {
            // core = u v with |u| = i; rotation v u.
            Word u(a.core.begin(), a.core.begin() + static_cast<std::ptrdiff_t>(i));
            Word v(a.core.begin() + static_cast<std::ptrdiff_t>(i), a.core.end());
            Word rot = v;
            rot.insert(rot.end(), u.begin(), u.end());
            if (rot != target) continue;
            for (const Word& mid : {u, invert(v)}) {
                Word x = multiply(multiply(a.prefix, mid), invert(b.prefix));
                if (!best || shortlex_less(x, best->x)) best = Conjugator{x, inv == 1};
            }
        }
    }
    return best;
}

}  // namespace words

namespace {

constexpr std::size_t kNone = StallingsGraph::kNone;

// Stallings folding with optional tags. Tags record expressions over the generating
// set; gauge moves at unfixed vertices keep tags of closed paths at fixed vertices.
class Folder {
public:
    explicit Folder(std::size_t rank) : rank_(rank) {}

    std::size_t add_vertex() {
        parent_.push_back(parent_.size());
        adj_.emplace_back(2 * rank_);
        return parent_.size() - 1;
    }

    void add_edge(std::size_t from, std::size_t to, Int letter, Word tag) {
        if (letter < 0) {
            std::swap(from, to);
            letter = -letter;
            tag = words::invert(tag);
        }
        edges_.push_back({from, to, letter, std::move(tag), true});
        std::size_t id = edges_.size() - 1;
        adj_[from][StallingsGraph::slot(letter)].push_back(id);
        adj_[to][StallingsGraph::slot(-letter)].push_back(id);
    }

    void add_path(std::size_t from, std::size_t to, const Word& label, const Word& tag) {
        std::size_t at = from;
        for (std::size_t i = 0; i < label.size(); ++i) {
            std::size_t nxt = (i + 1 == label.size()) ? to : add_vertex();
            add_edge(at, nxt, label[i], i == 0 ? tag : Word{});
            at = nxt;
        }
    }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }

    void fold(const std::vector<std::size_t>& fixed) {
        fixed_.assign(parent_.size(), false);
        for (std::size_t f : fixed) fixed_[find(f)] = true;
        std::deque<std::size_t> work;
        for (std::size_t v = 0; v < parent_.size(); ++v) work.push_back(v);
        while (!work.empty()) {
            std::size_t v = work.front();
            work.pop_front();
            if (find(v) != v) continue;
            for (std::size_t s = 0; s < 2 * rank_; ++s) {
                std::vector<std::size_t>& list = adj_[v][s];
                compact(list);
                if (list.size() < 2) continue;
                std::size_t keep = fold_pair(v, StallingsGraph::letter_of(s), list[0], list[1]);
                work.push_front(keep);
                if (find(v) == v) work.push_front(v);
                break;
            }
        }
    }

    bool relation_found() const { return relation_found_; }

    // Dense tables over surviving vertices; `order` lists old roots by new id.
    void export_tables(std::size_t base, std::vector<std::vector<std::size_t>>& next,
                       std::vector<std::vector<Word>>* tags, std::vector<std::size_t>& newid) {
        newid.assign(parent_.size(), kNone);
        std::vector<std::size_t> order;
        auto visit = [&](std::size_t r) {
            if (newid[r] == kNone) {
                newid[r] = order.size();
                order.push_back(r);
            }
        };
        visit(find(base));
        for (std::size_t v = 0; v < parent_.size(); ++v)
            if (find(v) == v) visit(v);
        next.assign(order.size(), std::vector<std::size_t>(2 * rank_, kNone));
        if (tags) tags->assign(order.size(), std::vector<Word>(2 * rank_));
        for (const Edge& e : edges_) {
            if (!e.alive) continue;
            std::size_t a = newid[e.from], b = newid[e.to];
            next[a][StallingsGraph::slot(e.letter)] = b;
            next[b][StallingsGraph::slot(-e.letter)] = a;
            if (tags) {
                (*tags)[a][StallingsGraph::slot(e.letter)] = e.tag;
                (*tags)[b][StallingsGraph::slot(-e.letter)] = words::invert(e.tag);
            }
        }
        for (std::size_t v = 0; v < parent_.size(); ++v) newid[v] = newid[find(v)];
    }

private:
    struct Edge {
        std::size_t from, to;
        Int letter;
        Word tag;
        bool alive;
    };

    void compact(std::vector<std::size_t>& list) {
        std::vector<std::size_t> out;
        for (std::size_t id : list)
            if (edges_[id].alive && std::find(out.begin(), out.end(), id) == out.end()) out.push_back(id);
        list.swap(out);
    }

    bool forward(std::size_t id, std::size_t v, Int x) const {
        return edges_[id].from == v && edges_[id].letter == x;
    }
    std::size_t far(std::size_t id, std::size_t v, Int x) const {
        return forward(id, v, x) ? edges_[id].to : edges_[id].from;
    }
    Word read_tag(std::size_t id, std::size_t v, Int x) const {
        return forward(id, v, x) ? edges_[id].tag : words::invert(edges_[id].tag);
    }

    void gauge(std::size_t z, const Word& c) {
        if (c.empty()) return;
        Word ci = words::invert(c);
        std::set<std::size_t> seen;
        for (auto& list : adj_[z])
            for (std::size_t id : list) {
                Edge& e = edges_[id];
                if (!e.alive || !seen.insert(id).second) continue;
                if (e.from == z) e.tag = words::multiply(ci, e.tag);
                if (e.to == z) e.tag = words::multiply(e.tag, c);
            }
    }

    // Folds e2 onto e1 (both read with letter x from v). Returns the surviving
    // endpoint vertex.
    std::size_t fold_pair(std::size_t v, Int x, std::size_t e1, std::size_t e2) {
        std::size_t w1 = far(e1, v, x), w2 = far(e2, v, x);
        if (w1 != w2) {
            Word t1 = read_tag(e1, v, x), t2 = read_tag(e2, v, x);
            if (t1 != t2) {
                if (!fixed_[w2] && w2 != v) gauge(w2, words::multiply(words::invert(t2), t1));
                else if (!fixed_[w1] && w1 != v) gauge(w1, words::multiply(words::invert(t1), t2));
                else if (!fixed_[v] && w2 == v) gauge(v, words::multiply(words::invert(t2), t1));
                else if (!fixed_[v] && w1 == v) gauge(v, words::multiply(words::invert(t1), t2));
                else throw std::logic_error("fold: no gauge vertex available");
            }
            edges_[e2].alive = false;
            std::size_t keep = fixed_[w2] && !fixed_[w1] ? w2 : w1;
            std::size_t gone = keep == w1 ? w2 : w1;
            merge(keep, gone);
            return keep;
        }
        if (read_tag(e1, v, x) != read_tag(e2, v, x)) relation_found_ = true;
        edges_[e2].alive = false;
        return w1;
    }

    void merge(std::size_t keep, std::size_t gone) {
        parent_[gone] = keep;
        fixed_[keep] = fixed_[keep] || fixed_[gone];
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            for (std::size_t id : adj_[gone][s]) {
                Edge& e = edges_[id];
                if (e.from == gone) e.from = keep;
                if (e.to == gone) e.to = keep;
                adj_[keep][s].push_back(id);
            }
            adj_[gone][s].clear();
        }
    }

    std::size_t rank_;
    std::vector<std::size_t> parent_;
    std::vector<std::vector<std::vector<std::size_t>>> adj_;
    std::vector<Edge> edges_;
    std::vector<bool> fixed_;
    bool relation_found_ = false;
};

}  // namespace

StallingsGraph StallingsGraph::build(std::size_t rank, const std::vector<Word>& gens) {
    Folder f(rank);
    std::size_t base = f.add_vertex();
    for (std::size_t i = 0; i < gens.size(); ++i) {
        Word w = words::reduce(gens[i]);
        if (w.empty()) continue;
        f.add_path(base, base, w, Word{static_cast<Int>(i + 1)});
    }
    f.fold({base});
    StallingsGraph g;
    g.rank_ = rank;
    std::vector<std::size_t> ids;
    f.export_tables(base, g.next_, &g.tag_, ids);
    g.relation_found_ = f.relation_found();
    g.core();
    return g;
}

StallingsGraph StallingsGraph::from_tables(std::size_t rank, std::vector<std::vector<std::size_t>> next) {
    StallingsGraph g;
    g.rank_ = rank;
    g.next_ = std::move(next);
    g.tag_.assign(g.next_.size(), std::vector<Word>(2 * rank));
    return g;
}

void StallingsGraph::core() {
    const std::size_t n = next_.size();
    std::vector<bool> alive(n, true);
    auto valence = [&](std::size_t v) {
        std::size_t c = 0;
        for (std::size_t s = 0; s < 2 * rank_; ++s)
            if (next_[v][s] != kNone) ++c;
        return c;
    };
    std::deque<std::size_t> work;
    for (std::size_t v = 1; v < n; ++v)
        if (valence(v) <= 1) work.push_back(v);
    // Unreachable vertices are dropped as well.
    std::vector<bool> reach(n, false);
    std::deque<std::size_t> bfs{0};
    reach[0] = true;
    while (!bfs.empty()) {
        std::size_t v = bfs.front();
        bfs.pop_front();
        for (std::size_t w : next_[v])
            if (w != kNone && !reach[w]) {
                reach[w] = true;
                bfs.push_back(w);
            }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!reach[v]) alive[v] = false;
    while (!work.empty()) {
        std::size_t v = work.front();
        work.pop_front();
        if (!alive[v] || valence(v) > 1) continue;
        alive[v] = false;
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            std::size_t w = next_[v][s];
            if (w == kNone) continue;
            next_[v][s] = kNone;
            next_[w][slot(-letter_of(s))] = kNone;
            if (w != 0 && alive[w] && valence(w) <= 1) work.push_back(w);
        }
    }
    std::vector<std::size_t> renum(n, kNone);
    std::size_t m = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (alive[v]) renum[v] = m++;
    std::vector<std::vector<std::size_t>> nx(m, std::vector<std::size_t>(2 * rank_, kNone));
    std::vector<std::vector<Word>> tg(m, std::vector<Word>(2 * rank_));
    for (std::size_t v = 0; v < n; ++v) {
        if (!alive[v]) continue;
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            std::size_t w = next_[v][s];
            if (w == kNone || !alive[w]) continue;
            nx[renum[v]][s] = renum[w];
            tg[renum[v]][s] = tag_[v][s];
        }
    }
    next_ = std::move(nx);
    tag_ = std::move(tg);
}

std::size_t StallingsGraph::num_edges() const {
    std::size_t c = 0;
    for (const auto& row : next_)
        for (std::size_t s = 0; s < row.size(); s += 2)
            if (row[s] != kNone) ++c;
    return c;
}

std::optional<std::pair<std::size_t, Word>> StallingsGraph::read(const Word& w, std::size_t from) const {
    std::size_t v = from;
    Word acc;
    for (Int x : w) {
        std::size_t s = slot(x);
        if (s >= 2 * rank_ || next_[v][s] == kNone) return std::nullopt;
        acc = words::multiply(acc, tag_[v][s]);
        v = next_[v][s];
    }
    return std::make_pair(v, acc);
}

bool StallingsGraph::accepts(const Word& w) const {
    auto r = read(words::reduce(w));
    return r && r->first == 0;
}

bool StallingsGraph::is_complete() const {
    for (const auto& row : next_)
        for (std::size_t w : row)
            if (w == kNone) return false;
    return true;
}

std::vector<Word> StallingsGraph::tree_basis() const {
    const std::size_t n = next_.size();
    std::vector<Word> path(n);
    std::vector<bool> seen(n, false);
    std::vector<std::vector<bool>> tree(n, std::vector<bool>(2 * rank_, false));
    std::deque<std::size_t> q{0};
    seen[0] = true;
    while (!q.empty()) {
        std::size_t v = q.front();
        q.pop_front();
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            std::size_t w = next_[v][s];
            if (w == kNone || seen[w]) continue;
            seen[w] = true;
            path[w] = path[v];
            path[w].push_back(letter_of(s));
            tree[v][s] = true;
            tree[w][slot(-letter_of(s))] = true;
            q.push_back(w);
        }
    }
    std::vector<Word> basis;
    for (std::size_t v = 0; v < n; ++v)
        for (std::size_t s = 0; s < 2 * rank_; s += 2) {
            std::size_t w = next_[v][s];
            if (w == kNone || tree[v][s]) continue;
            Word x = path[v];
            x.push_back(letter_of(s));
            basis.push_back(words::multiply(x, words::invert(path[w])));
        }
    return basis;
}

void DoubleCosetAutomaton::add_state() {
    next_.emplace_back(2 * rank_);
    closure_.push_back({next_.size() - 1});
}

DoubleCosetAutomaton::DoubleCosetAutomaton(const StallingsGraph& h, const Word& g0, const StallingsGraph& k)
    : rank_(h.rank_of_ambient()) {
    auto copy = [&](const StallingsGraph& x) {
        std::size_t off = next_.size();
        for (std::size_t v = 0; v < x.num_vertices(); ++v) add_state();
        for (std::size_t v = 0; v < x.num_vertices(); ++v)
            for (std::size_t s = 0; s < 2 * rank_; ++s) {
                std::size_t w = x.next(v, StallingsGraph::letter_of(s));
                if (w != kNone) next_[off + v][s].push_back(off + w);
            }
        return off;
    };
    start_ = copy(h);
    Word g = words::reduce(g0);
    std::size_t at = start_;
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        add_state();
        next_[at][StallingsGraph::slot(g[i])].push_back(next_.size() - 1);
        at = next_.size() - 1;
    }
    accept_ = copy(k);
    if (g.empty()) closure_[at].push_back(accept_);
    else next_[at][StallingsGraph::slot(g.back())].push_back(accept_);
    saturate();
}

DoubleCosetAutomaton::DoubleCosetAutomaton(std::size_t rank, const std::vector<Word>& h, const Word& g,
                                           const std::vector<Word>& k)
    : DoubleCosetAutomaton(StallingsGraph::build(rank, h), g, StallingsGraph::build(rank, k)) {}

void DoubleCosetAutomaton::saturate() {
    // ε-closure as a reachability matrix; add p ⇒ q whenever p reads x then x⁻¹ into q.
    const std::size_t n = next_.size();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t q : closure_[p]) reach[p][q] = true;
    auto close = [&]() {
        for (std::size_t m = 0; m < n; ++m)
            for (std::size_t p = 0; p < n; ++p)
                if (reach[p][m])
                    for (std::size_t q = 0; q < n; ++q)
                        if (reach[m][q]) reach[p][q] = true;
    };
    close();
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t p1 = 0; p1 < n; ++p1) {
                if (!reach[p][p1]) continue;
                for (std::size_t s = 0; s < 2 * rank_; ++s) {
                    std::size_t si = StallingsGraph::slot(-StallingsGraph::letter_of(s));
                    for (std::size_t r : next_[p1][s])
                        for (std::size_t r1 = 0; r1 < n; ++r1) {
                            if (!reach[r][r1]) continue;
                            for (std::size_t q : next_[r1][si])
                                if (!reach[p][q]) {
                                    reach[p][q] = true;
                                    changed = true;
                                }
                        }
                }
            }
        if (changed) close();
    }
    for (std::size_t p = 0; p < n; ++p) {
        closure_[p].clear();
        for (std::size_t q = 0; q < n; ++q)
            if (reach[p][q]) closure_[p].push_back(q);
    }
}

DoubleCosetAutomaton::StateSet DoubleCosetAutomaton::read(const StateSet& from, const Word& w) const {
    StateSet cur = from;
    for (Int x : w) {
        std::size_t s = StallingsGraph::slot(x);
        std::vector<bool> in(next_.size(), false);
        for (std::size_t p : cur)
            if (s < 2 * rank_)
                for (std::size_t q : next_[p][s])
                    for (std::size_t q1 : closure_[q]) in[q1] = true;
        cur.clear();
        for (std::size_t q = 0; q < in.size(); ++q)
            if (in[q]) cur.push_back(q);
        if (cur.empty()) break;
    }
    return cur;
}

bool DoubleCosetAutomaton::accepting(const StateSet& s) const {
    return std::binary_search(s.begin(), s.end(), accept_);
}

bool DoubleCosetAutomaton::accepts(const Word& w) const { return accepting(read(initial(), words::reduce(w))); }

Word DoubleCosetAutomaton::shortlex_witness() const {
    // Configurations (state, slot of the last letter or 2r for none); a move reads a
    // letter that does not cancel the last one, then follows ε-moves.
    const std::size_t n = next_.size(), none = 2 * rank_, width = 2 * rank_ + 1;
    const std::size_t inf = static_cast<std::size_t>(-1);
    auto cancels = [&](std::size_t last, std::size_t s) {
        return last != none && StallingsGraph::slot(-StallingsGraph::letter_of(last)) == s;
    };
    // succ[p][s]: states reached from p (already ε-closed) by slot s, closed again.
    std::vector<std::vector<StateSet>> succ(n, std::vector<StateSet>(2 * rank_));
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t s = 0; s < 2 * rank_; ++s) succ[p][s] = read(closure_[p], {StallingsGraph::letter_of(s)});
    std::vector<std::vector<std::size_t>> pred(n * width);
    for (std::size_t p = 0; p < n; ++p)
        for (std::size_t last = 0; last < width; ++last)
            for (std::size_t s = 0; s < 2 * rank_; ++s) {
                if (cancels(last, s)) continue;
                for (std::size_t q : succ[p][s]) pred[q * width + s].push_back(p * width + last);
            }
    std::vector<std::size_t> dist(n * width, inf);
    std::deque<std::size_t> queue;
    for (std::size_t p = 0; p < n; ++p)
        if (std::binary_search(closure_[p].begin(), closure_[p].end(), accept_))
            for (std::size_t last = 0; last < width; ++last) {
                dist[p * width + last] = 0;
                queue.push_back(p * width + last);
            }
    while (!queue.empty()) {
        std::size_t c = queue.front();
        queue.pop_front();
        for (std::size_t b : pred[c])
            if (dist[b] == inf) {
                dist[b] = dist[c] + 1;
                queue.push_back(b);
            }
    }
    std::vector<std::size_t> cur;
    std::size_t best = inf;
    for (std::size_t p : initial()) best = std::min(best, dist[p * width + none]);
    if (best == inf) throw std::logic_error("double coset automaton: empty language");
    for (std::size_t p : initial())
        if (dist[p * width + none] == best) cur.push_back(p * width + none);
    Word out;
    for (std::size_t d = best; d > 0; --d) {
        std::vector<std::size_t> nxt;
        for (std::size_t s = 0; s < 2 * rank_ && nxt.empty(); ++s) {
            std::set<std::size_t> found;
            for (std::size_t c : cur) {
                if (cancels(c % width, s)) continue;
                for (std::size_t q : succ[c / width][s])
                    if (dist[q * width + s] == d - 1) found.insert(q * width + s);
            }
            if (!found.empty()) {
                out.push_back(StallingsGraph::letter_of(s));
                nxt.assign(found.begin(), found.end());
            }
        }
        if (nxt.empty()) throw std::logic_error("double coset automaton: inconsistent distances");
        cur = std::move(nxt);
    }
    return out;
}

std::optional<Int> cyclic_intersect(const StallingsGraph& h, const Word& c0) {
    Word c = words::reduce(c0);
    if (c.empty()) throw ContractError("cyclic_intersect: empty word");
    words::CyclicSplit sp = words::cyclic_split(c);
    auto start = h.read(sp.prefix);
    if (!start) return std::nullopt;
    std::size_t q0 = start->first, q = q0;
    for (Int d = 1; d <= static_cast<Int>(h.num_vertices()) + 1; ++d) {
        auto r = h.read(sp.core, q);
        if (!r) return std::nullopt;
        q = r->first;
        if (q == q0) return d;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------

Element FreeGroup::multiply(const Element& a, const Element& b) const {
    return as_element(words::multiply(a.v, b.v));
}

Element FreeGroup::invert(const Element& a) const { return as_element(words::invert(a.v)); }

bool FreeGroup::is_valid(const Element& a) const {
    for (std::size_t i = 0; i < a.v.size(); ++i) {
        Int x = a.v[i];
        if (x == 0 || static_cast<std::size_t>(x < 0 ? -x : x) > rank_) return false;
        if (i > 0 && a.v[i - 1] == -x) return false;
    }
    return true;
}

std::vector<Element> FreeGroup::generators() const {
    std::vector<Element> g;
    for (std::size_t i = 1; i <= rank_; ++i) g.push_back(as_element({static_cast<Int>(i)}));
    return g;
}

GenWord FreeGroup::decompose(const Element& a) const {
    GenWord w;
    for (Int x : a.v) {
        std::size_t g = static_cast<std::size_t>((x < 0 ? -x : x) - 1);
        Int e = x < 0 ? -1 : 1;
        if (!w.empty() && w.back().gen == g) w.back().exp += e;
        else w.push_back({g, e});
    }
    return w;
}

std::string FreeGroup::format(const Element& a) const { return words::format(a.v); }

nlohmann::json FreeGroup::to_json(const Element& a) const {
    return a.v.empty() ? std::string() : words::format(a.v);
}

Element FreeGroup::parse(const nlohmann::json& j) const {
    if (!j.is_string()) throw ContractError("free group element must be a string over a..z/A..Z");
    auto w = words::parse(j.get<std::string>(), rank_);
    if (!w) throw ContractError("invalid word '" + j.get<std::string>() + "' for " + describe());
    return as_element(*w);
}

Subgroup FreeGroup::subgroup(const std::vector<Element>& gens) const {
    auto data = std::make_shared<FreeSubgroupData>();
    std::vector<Word> ws;
    for (const Element& e : gens) ws.push_back(e.v);
    data->graph = StallingsGraph::build(rank_, ws);
    return Subgroup(gens, data);
}

bool FreeGroup::contains(const Subgroup& h, const Element& a) const { return graph(h).accepts(a.v); }

std::optional<GenWord> FreeGroup::express(const Subgroup& h, const Element& a) const {
    auto r = graph(h).read(a.v);
    if (!r || r->first != 0) return std::nullopt;
    GenWord w;
    for (Int x : words::reduce(r->second)) {
        std::size_t g = static_cast<std::size_t>((x < 0 ? -x : x) - 1);
        Int e = x < 0 ? -1 : 1;
        if (!w.empty() && w.back().gen == g) w.back().exp += e;
        else w.push_back({g, e});
    }
    return w;
}

Subgroup FreeGroup::intersect(const Subgroup& h, const Subgroup& k) const {
    const StallingsGraph &a = graph(h), &b = graph(k);
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> id;
    std::vector<std::pair<std::size_t, std::size_t>> states{{0, 0}};
    id[{0, 0}] = 0;
    std::vector<std::vector<std::size_t>> next;
    for (std::size_t i = 0; i < states.size(); ++i) {
        next.emplace_back(2 * rank_, kNone);
        auto [p, q] = states[i];
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            Int x = StallingsGraph::letter_of(s);
            std::size_t p2 = a.next(p, x), q2 = b.next(q, x);
            if (p2 == kNone || q2 == kNone) continue;
            auto [it, fresh] = id.emplace(std::make_pair(p2, q2), states.size());
            if (fresh) states.emplace_back(p2, q2);
            next[i][s] = it->second;
        }
    }
    StallingsGraph prod = StallingsGraph::from_tables(rank_, next);
    prod.core();
    std::vector<Element> gens;
    for (Word& w : prod.tree_basis()) gens.push_back(as_element(std::move(w)));
    return subgroup(gens);
}

Index FreeGroup::index(const Subgroup& h) const {
    const StallingsGraph& g = graph(h);
    return g.is_complete() ? Index::finite(g.num_vertices()) : Index::infinite();
}

Index FreeGroup::relative_index(const Subgroup& h, const Subgroup& k) const {
    std::vector<Word> basis = graph(k).tree_basis();
    StallingsGraph kb = StallingsGraph::build(rank_, basis);
    std::vector<Word> coords;
    for (const Element& x : h.generators()) {
        auto r = kb.read(x.v);
        if (!r || r->first != 0) throw ContractError("relative_index: subgroup is not contained");
        coords.push_back(words::reduce(r->second));
    }
    FreeGroup inner(basis.size());
    std::vector<Element> gens;
    for (Word& w : coords) gens.push_back(as_element(std::move(w)));
    return inner.index(inner.subgroup(gens));
}

IsoType FreeGroup::iso_type(const Subgroup& h) const { return IsoType::free(graph(h).rank()); }

DoubleCosetAutomaton FreeGroup::double_coset(const Subgroup& h, const Element& g, const Subgroup& k) const {
    return DoubleCosetAutomaton(graph(h), g.v, graph(k));
}

Element FreeGroup::double_coset_rep(const Subgroup& h, const Element& g, const Subgroup& k) const {
    return as_element(double_coset(h, g, k).shortlex_witness());
}

std::optional<std::pair<Element, Element>> FreeGroup::double_coset_factor(const Subgroup& h, const Element& g,
                                                                          const Subgroup& k,
                                                                          const Element& target) const {
    // target = x g y  <=>  x ∈ H ∩ (target g⁻¹)(g K g⁻¹).
    Word gi = words::invert(g.v);
    Word shift = words::multiply(target.v, gi);
    std::vector<Word> kc;
    for (const Element& e : k.generators()) kc.push_back(words::multiply(words::multiply(g.v, e.v), gi));
    // Paths p → b in the folded graph of a shift-path p → b and gKg⁻¹-petals at b
    // spell exactly the coset shift·(gKg⁻¹).
    Folder f(rank_);
    std::size_t b = f.add_vertex(), pv = shift.empty() ? b : f.add_vertex();
    f.add_path(pv, b, shift, {});
    for (const Word& w : kc)
        if (!words::reduce(w).empty()) f.add_path(b, b, words::reduce(w), {});
    f.fold({});
    std::vector<std::vector<std::size_t>> coset;
    std::vector<std::size_t> ids;
    f.export_tables(b, coset, nullptr, ids);
    const StallingsGraph& hg = graph(h);
    using State = std::pair<std::size_t, std::size_t>;
    std::map<State, std::pair<State, Int>> parent;
    State start{0, ids[pv]}, goal{0, ids[b]};
    std::deque<State> q{start};
    parent[start] = {start, 0};
    bool found = start == goal;
    while (!q.empty() && !found) {
        State st = q.front();
        q.pop_front();
        for (std::size_t s = 0; s < 2 * rank_; ++s) {
            Int x = StallingsGraph::letter_of(s);
            std::size_t a = hg.next(st.first, x), c = coset[st.second][s];
            if (a == kNone || c == kNone) continue;
            State nx{a, c};
            if (parent.count(nx)) continue;
            parent[nx] = {st, x};
            if (nx == goal) {
                found = true;
                break;
            }
            q.push_back(nx);
        }
    }
    if (!found) return std::nullopt;
    Word x;
    for (State st = goal; st != start; st = parent[st].first) x.push_back(parent[st].second);
    std::reverse(x.begin(), x.end());
    x = words::reduce(x);
    Word y = words::multiply(words::multiply(gi, words::invert(x)), target.v);
    if (!contains(k, as_element(y))) throw std::logic_error("double_coset_factor: inconsistent factor");
    return std::make_pair(as_element(x), as_element(y));
}

std::optional<std::vector<Element>> FreeGroup::double_coset_reps(const Subgroup& h, const Subgroup& k) const {
    // With [F:H] finite, vertices of the Stallings graph of H are the cosets Hy and
    // HgK corresponds to the orbit of Hg under right multiplication by K.
    auto orbit_reps = [&](const Subgroup& a, const Subgroup& b) -> std::vector<Word> {
        const StallingsGraph& g = graph(a);
        const std::size_t n = g.num_vertices();
        std::vector<std::size_t> uf(n);
        std::iota(uf.begin(), uf.end(), 0);
        std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
            return uf[x] == x ? x : uf[x] = find(uf[x]);
        };
        for (std::size_t v = 0; v < n; ++v)
            for (const Element& gen : b.generators()) {
                auto r = g.read(gen.v, v);
                uf[find(v)] = find(r->first);
            }
        // BFS words to each vertex.
        std::vector<Word> path(n);
        std::vector<bool> seen(n, false);
        std::deque<std::size_t> q{0};
        seen[0] = true;
        while (!q.empty()) {
            std::size_t v = q.front();
            q.pop_front();
            for (std::size_t s = 0; s < 2 * rank_; ++s) {
                std::size_t w = g.next(v, StallingsGraph::letter_of(s));
                if (w == kNone || seen[w]) continue;
                seen[w] = true;
                path[w] = path[v];
                path[w].push_back(StallingsGraph::letter_of(s));
                q.push_back(w);
            }
        }
        std::vector<Word> reps;
        std::set<std::size_t> roots;
        for (std::size_t v = 0; v < n; ++v)
            if (roots.insert(find(v)).second) reps.push_back(path[v]);
        return reps;
    };
    std::vector<Element> out;
    if (index(h).is_finite()) {
        for (const Word& y : orbit_reps(h, k)) out.push_back(double_coset_rep(h, as_element(y), k));
    } else if (index(k).is_finite()) {
        for (const Word& z : orbit_reps(k, h))
            out.push_back(double_coset_rep(h, as_element(words::invert(z)), k));
    } else {
        return std::nullopt;
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Slice FreeGroup::slice(const Subgroup& p, const Element& y, const Subgroup& q, const Subgroup& e) const {
    Slice out;
    DoubleCosetAutomaton dc = double_coset(p, y, q);
    const StallingsGraph& eg = graph(e);
    if (eg.rank() == 0) {
        if (dc.accepts({})) out.reps.push_back(identity());
        return out;
    }
    if (eg.rank() != 1) {
        out.status = Slice::Status::Unsupported;
        out.note = "edge-group image of rank " + std::to_string(eg.rank()) + " in a free vertex group";
        return out;
    }
    Word c = eg.tree_basis().at(0);
    // The solution set {n : cⁿ ∈ P·y·Q} is invariant under shifts by the exponents of
    // P ∩ ⟨c⟩ and Q ∩ ⟨c⟩, hence by their gcd.
    Int modulus = lattice::gcd(cyclic_intersect(graph(p), c).value_or(0), cyclic_intersect(graph(q), c).value_or(0));
    if (modulus > 0) {
        for (Int n = 0; n < modulus; ++n)
            if (dc.accepts(words::power(c, n))) out.reps.push_back(as_element(words::power(c, n)));
        return out;
    }
    // Distinct exponents are distinct classes. cⁿ = u·rⁿ·u⁻¹ is reduced as written, so
    // trace the state sets after u·rⁿ until they repeat.
    words::CyclicSplit sp = words::cyclic_split(c);
    Word ui = words::invert(sp.prefix);
    std::vector<Int> sols;
    if (dc.accepts({})) sols.push_back(0);
    const DoubleCosetAutomaton::StateSet s0 = dc.read(dc.initial(), sp.prefix);
    for (Int dir : {1, -1}) {
        Word step = dir > 0 ? sp.core : words::invert(sp.core);
        std::map<DoubleCosetAutomaton::StateSet, Int> seen;
        DoubleCosetAutomaton::StateSet cur = s0;
        for (Int n = 1; !cur.empty(); ++n) {
            cur = dc.read(cur, step);
            if (cur.empty()) break;
            auto it = seen.find(cur);
            if (it != seen.end()) {
                for (Int m = it->second; m < n; ++m) {
                    DoubleCosetAutomaton::StateSet probe = s0;
                    for (Int i = 0; i < m; ++i) probe = dc.read(probe, step);
                    if (dc.accepting(dc.read(probe, ui))) {
                        out.status = Slice::Status::Infinite;
                        out.note = "infinitely many edge double cosets";
                        return out;
                    }
                }
                break;
            }
            seen.emplace(cur, n);
            if (dc.accepting(dc.read(cur, ui))) sols.push_back(dir * n);
            if (seen.size() > kSliceTraceLimit) {
                out.status = Slice::Status::Unsupported;
                out.note = "power trace exceeded its state limit";
                return out;
            }
        }
    }
    std::sort(sols.begin(), sols.end(), [](Int a, Int b) {
        return std::llabs(a) != std::llabs(b) ? std::llabs(a) < std::llabs(b) : a > b;
    });
    for (Int n : sols) out.reps.push_back(as_element(words::power(c, n)));
    return out;
}

}  // namespace bst
