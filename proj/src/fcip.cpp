#include "bst/fcip.hpp"

#include <set>

namespace bst {

QMapAbelian::QMapAbelian(std::shared_ptr<const AbelianGroup> g, Subgroup a, Subgroup b, Subgroup c, Element f,
                         Element gg)
    : g_(std::move(g)), a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), f_(std::move(f)), gg_(std::move(gg)) {
    dom_rel_ = g_->join(g_->intersect(a_, b_), g_->intersect(a_, c_));
    cod_rel_ = g_->join(b_, c_);
}

Element QMapAbelian::domain_class(const Element& a) const { return g_->coset_rep(dom_rel_, a); }

Element QMapAbelian::evaluate(const Element& a) const {
    return g_->coset_rep(cod_rel_, g_->multiply(g_->multiply(f_, a), g_->invert(gg_)));
}

Index QMapAbelian::domain_size() const { return g_->relative_index(dom_rel_, a_); }
Index QMapAbelian::codomain_size() const { return g_->index(cod_rel_); }
Index QMapAbelian::kernel_size() const { return g_->relative_index(dom_rel_, g_->intersect(a_, cod_rel_)); }
Index QMapAbelian::image_size() const { return g_->relative_index(cod_rel_, g_->join(a_, cod_rel_)); }

std::optional<std::vector<Element>> QMapAbelian::domain_classes(std::size_t limit) const {
    auto reps = lattice::coset_reps(g_->lattice_of(dom_rel_), g_->lattice_of(a_), limit);
    if (!reps) return std::nullopt;
    std::set<Element> out;
    for (lattice::Vec& v : *reps) out.insert(domain_class(g_->normalize(std::move(v))));
    return std::vector<Element>(out.begin(), out.end());
}

std::string to_string(FcipVerdict v) {
    switch (v) {
        case FcipVerdict::True: return "true";
        case FcipVerdict::False: return "false";
        case FcipVerdict::Evidence: return "sampled-evidence";
    }
    return "sampled-evidence";
}

FcipReport fcip_abelian(const std::shared_ptr<const AbelianGroup>& g, const Subgroup& b, const Subgroup& c,
                        const Subgroup& a) {
    QMapAbelian q(g, a, b, c, g->identity(), g->identity());
    FcipReport r;
    r.kernel = q.kernel_size();
    r.image = q.image_size();
    const bool kernel_trivial = r.kernel.is_finite() && r.kernel.value() == 1;
    const bool ba_all = g->index(g->join(b, a)) == Index::finite(1);
    const bool ca_all = g->index(g->join(c, a)) == Index::finite(1);
    auto fail = [&](int clause, std::string why) {
        r.verdict = FcipVerdict::False;
        r.clause = clause;
        r.detail = "clause (" + std::to_string(clause) + "): " + why;
        return r;
    };
    if (!r.kernel.is_finite()) return fail(1, "the kernel of q_{0,0} is infinite");
    if (!r.image.is_finite()) {
        if (!kernel_trivial) return fail(2, "the image of q_{0,0} is infinite and its kernel is non-trivial");
        if (!ba_all && !ca_all)
            return fail(3, "the image of q_{0,0} is infinite and B+A, C+A are proper; a group cannot be equal to the "
                           "union of two proper subgroups");
        if (ba_all != ca_all)
            return fail(4, std::string("the image of q_{0,0} is infinite and ") +
                               (ba_all ? "B+A = G but C+A != G" : "C+A = G but B+A != G"));
        r.verdict = FcipVerdict::True;
        r.clause = 2;
        r.detail = "B+A = C+A = G and the kernel of q_{0,0} is trivial";
        return r;
    }
    r.verdict = FcipVerdict::True;
    r.clause = 1;
    r.detail = "the image (order " + r.image.str() + ") and kernel (order " + r.kernel.str() + ") of q_{0,0} are finite";
    return r;
}

bool fcip_zero_check(const std::vector<std::pair<GroupPtr, Subgroup>>& collection) {
    for (const auto& [g, h] : collection)
        if (!g->is_finite(h)) return false;
    return true;
}

FcipReport count_collisions(const Group& g, const Subgroup& a, const Subgroup& b, const Subgroup& c,
                            const std::vector<Element>& fs, const std::vector<Element>& gs,
                            const std::vector<Element>& samples) {
    FcipReport r;
    r.verdict = FcipVerdict::Evidence;
    for (const Element& f : fs)
        for (const Element& gg : gs) {
            Subgroup left = g.intersect(a, g.conjugate(b, f));
            Subgroup right = g.intersect(a, g.conjugate(c, gg));
            std::set<Element> seen;
            for (const Element& x : samples) {
                Element cls = g.double_coset_rep(left, x, right);
                if (!seen.insert(cls).second) continue;
                Element img = g.double_coset_rep(b, g.multiply(g.multiply(f, x), g.invert(gg)), c);
                ++r.collisions[img];
            }
            r.domain_classes += seen.size();
        }
    for (const auto& [img, n] : r.collisions) r.excess += n - 1;
    r.detail = std::to_string(r.domain_classes) + " domain classes, " + std::to_string(r.collisions.size()) +
               " (B,C)-classes hit, excess " + std::to_string(r.excess);
    return r;
}

std::vector<Element> ball_in_subgroup(const FreeGroup& g, const Subgroup& h, std::size_t max_len) {
    std::vector<Element> out;
    std::vector<Word> layer{{}};
    out.push_back(g.identity());
    const Int rank = static_cast<Int>(g.rank());
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<Word> next;
        for (const Word& w : layer)
            for (Int i = 1; i <= rank; ++i)
                for (Int x : {i, -i}) {
                    if (!w.empty() && w.back() == -x) continue;
                    Word u = w;
                    u.push_back(x);
                    next.push_back(std::move(u));
                }
        std::sort(next.begin(), next.end(), words::shortlex_less);
        for (const Word& w : next)
            if (g.contains(h, as_element(w))) out.push_back(as_element(w));
        layer = std::move(next);
    }
    return out;
}

FcipReport fcip_bruteforce_sample(const FreeGroup& g, const Subgroup& a, const Subgroup& b, const Subgroup& c,
                                  const std::vector<Element>& fs, const std::vector<Element>& gs, std::size_t max_len) {
    FcipReport r = count_collisions(g, a, b, c, fs, gs, ball_in_subgroup(g, a, max_len));
    r.detail = "length <= " + std::to_string(max_len) + ": " + r.detail;
    return r;
}

IndexHarnessReport k_fcip_index_harness(const Group& g, const Subgroup& a, const Subgroup& a_sub,
                                        const Subgroup& b, const Subgroup& c, const Element& f,
                                        const Element& gg, const std::vector<Element>& samples) {
    IndexHarnessReport r;
    Index k = g.relative_index(a_sub, a);
    if (!k.is_finite()) throw ContractError("index harness: A' must have finite index in A");
    r.k = k.value();
    Subgroup bf = g.conjugate(b, f), cg = g.conjugate(c, gg);
    Subgroup h = g.intersect(a, bf), kk = g.intersect(a, cg);
    Subgroup h2 = g.intersect(a_sub, bf), k2 = g.intersect(a_sub, cg);
    std::map<Element, std::set<Element>> fibres;
    for (const Element& x : samples) {
        if (!g.contains(a_sub, x)) throw ContractError("index harness: sample outside A'");
        fibres[g.double_coset_rep(h, x, kk)].insert(g.double_coset_rep(h2, x, k2));
        ++r.samples;
    }
    for (const auto& [cls, sub] : fibres) {
        r.max_multiplicity = std::max(r.max_multiplicity, sub.size());
        if (sub.size() > r.k) ++r.violations;
    }
    return r;
}

}  // namespace bst
