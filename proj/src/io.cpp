#include "bst/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "bst/abelian_group.hpp"
#include "bst/finite_group.hpp"
#include "bst/subgroup_group.hpp"

namespace bst {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& msg) {
    throw InputError((where.empty() ? std::string("input") : where) + ": " + msg);
}

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

const Json& need(const Json& j, const std::string& key, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing \"" + key + "\"");
    return *it;
}

std::string need_string(const Json& j, const std::string& where) {
    if (!j.is_string()) fail(where, "expected a string");
    return j.get<std::string>();
}

Int need_int(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<Int>();
}

const Json& need_array(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array");
    return j;
}

nlohmann::json plain(const Json& j) { return nlohmann::json::parse(j.dump()); }
Json ordered(const nlohmann::json& j) { return Json::parse(j.dump()); }

// Runs f, turning backend contract errors into input errors at `where`.
template <class F>
auto guarded(const std::string& where, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const ContractError& e) {
        fail(where, e.what());
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

std::vector<Element> elements(const Group& g, const Json& j, const std::string& where) {
    std::vector<Element> out;
    need_array(j, where);
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element_from_json(g, j[i], at(where, i)));
    return out;
}

Json element_list(const Group& g, const std::vector<Element>& xs) {
    Json out = Json::array();
    for (const Element& x : xs) out.push_back(element_to_json(g, x));
    return out;
}

// Names used on output: the stored name when non-empty and unique, else a positional one.
std::vector<std::string> vertex_labels(const Graph& g) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    bool ok = true;
    for (VertexId v = 0; v < g.num_vertices(); ++v) ok = ok && !g.vertex_name(v).empty() && seen.insert(g.vertex_name(v)).second;
    for (VertexId v = 0; v < g.num_vertices(); ++v) out.push_back(ok ? g.vertex_name(v) : "v" + std::to_string(v));
    return out;
}

std::vector<std::string> pair_labels(const Graph& g) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    bool ok = true;
    for (PairId p = 0; p < g.num_pairs(); ++p) ok = ok && !g.pair_name(p).empty() && seen.insert(g.pair_name(p)).second;
    for (PairId p = 0; p < g.num_pairs(); ++p) out.push_back(ok ? g.pair_name(p) : "e" + std::to_string(p));
    return out;
}

std::string half_label(const std::vector<std::string>& pairs, EdgeId h) {
    return is_positive(h) ? pairs[pair_of(h)] : pairs[pair_of(h)] + "^-1";
}

VertexId find_vertex(const Graph& g, const Json& j, const std::string& where) {
    std::string name = need_string(j, where);
    auto v = g.find_vertex(name);
    if (!v) fail(where, "unknown vertex \"" + name + "\"");
    return *v;
}

EdgeId find_half(const Graph& g, const Json& j, const std::string& where) {
    std::string name = need_string(j, where);
    auto e = g.find_edge(name);
    if (!e) fail(where, "unknown edge \"" + name + "\"");
    return *e;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& source) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::string msg = e.what();
        auto pos = msg.find("syntax error");
        throw InputError(source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                         (pos == std::string::npos ? msg : msg.substr(pos)));
    }
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError(path + ": cannot open file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json_text(buf.str(), path);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError(path + ": cannot write file");
    out << text;
}

GroupPtr group_from_spec(const Json& spec, const std::string& where) {
    if (!spec.is_object() || spec.size() != 1) fail(where, "group spec must be an object with one key");
    const std::string kind = spec.begin().key();
    const Json& body = spec.begin().value();
    const std::string here = at(where, kind);
    return guarded(here, [&]() -> GroupPtr {
        if (kind == "free") {
            Int r = need_int(body, here);
            if (r < 0) fail(here, "rank must be non-negative");
            return std::make_shared<FreeGroup>(static_cast<std::size_t>(r));
        }
        if (kind == "Z") {
            if (body != true) fail(here, "expected true");
            return std::make_shared<AbelianGroup>(1, std::vector<Int>{});
        }
        if (kind == "abelian") {
            Int r = need_int(need(body, "rank", here), at(here, "rank"));
            if (r < 0) fail(at(here, "rank"), "rank must be non-negative");
            std::vector<Int> torsion;
            if (body.contains("torsion")) {
                const Json& t = need_array(body["torsion"], at(here, "torsion"));
                for (std::size_t i = 0; i < t.size(); ++i) torsion.push_back(need_int(t[i], at(at(here, "torsion"), i)));
            }
            return std::make_shared<AbelianGroup>(static_cast<std::size_t>(r), torsion);
        }
        if (kind == "cyclic") {
            Int n = need_int(body, here);
            if (n < 1) fail(here, "order must be positive");
            return std::make_shared<FiniteGroup>(FiniteGroup::cyclic(static_cast<std::size_t>(n)));
        }
        if (kind == "finite") {
            const Json& t = need_array(need(body, "table", here), at(here, "table"));
            std::vector<std::vector<std::size_t>> table;
            for (std::size_t i = 0; i < t.size(); ++i) {
                std::vector<std::size_t> row;
                const Json& r = need_array(t[i], at(at(here, "table"), i));
                for (std::size_t k = 0; k < r.size(); ++k) {
                    Int x = need_int(r[k], at(at(at(here, "table"), i), k));
                    if (x < 0) fail(at(at(at(here, "table"), i), k), "entries must be non-negative");
                    row.push_back(static_cast<std::size_t>(x));
                }
                table.push_back(std::move(row));
            }
            std::optional<std::vector<std::size_t>> gens;
            if (body.contains("generators")) {
                gens.emplace();
                const Json& gj = need_array(body["generators"], at(here, "generators"));
                for (std::size_t i = 0; i < gj.size(); ++i)
                    gens->push_back(static_cast<std::size_t>(need_int(gj[i], at(at(here, "generators"), i))));
            }
            return std::make_shared<FiniteGroup>(std::move(table), gens);
        }
        if (kind == "subgroup") {
            GroupPtr amb = group_from_spec(need(body, "of", here), at(here, "of"));
            std::vector<Element> gens = elements(*amb, need(body, "generators", here), at(here, "generators"));
            return std::make_shared<SubgroupGroup>(amb, amb->subgroup(gens));
        }
        fail(where, "unknown group kind \"" + kind + "\"");
    });
}

Json group_to_spec(const Group& g) {
    if (auto f = dynamic_cast<const FreeGroup*>(&g)) return Json{{"free", f->rank()}};
    if (auto a = dynamic_cast<const AbelianGroup*>(&g)) {
        if (a->free_rank() == 1 && a->torsion().empty()) return Json{{"Z", true}};
        return Json{{"abelian", Json{{"rank", a->free_rank()}, {"torsion", a->torsion()}}}};
    }
    if (auto f = dynamic_cast<const FiniteGroup*>(&g)) {
        Json table = Json::array();
        for (std::size_t i = 0; i < f->order(); ++i) {
            Json row = Json::array();
            for (std::size_t k = 0; k < f->order(); ++k) row.push_back(f->mul(i, k));
            table.push_back(row);
        }
        Json gens = Json::array();
        for (const Element& x : f->generators()) gens.push_back(x.v.at(0));
        return Json{{"finite", Json{{"table", table}, {"generators", gens}}}};
    }
    if (auto s = dynamic_cast<const SubgroupGroup*>(&g))
        return Json{{"subgroup", Json{{"of", group_to_spec(*s->ambient())},
                                      {"generators", element_list(*s->ambient(), s->generators())}}}};
    throw ContractError("group_to_spec: unsupported backend " + g.describe());
}

Element element_from_json(const Group& g, const Json& j, const std::string& where) {
    return guarded(where, [&] { return g.parse(plain(j)); });
}

Json element_to_json(const Group& g, const Element& x) { return ordered(g.to_json(x)); }

std::shared_ptr<GraphOfGroups> gog_from_json(const Json& j, const std::string& where) {
    auto a = std::make_shared<GraphOfGroups>();
    const Json& vs = need(j, "vertices", where);
    const std::string vw = at(where, "vertices");
    std::set<std::string> names;
    auto add_vertex = [&](const std::string& name, const Json& spec, const std::string& here) {
        if (name.empty() || !names.insert(name).second) fail(here, "vertex names must be non-empty and unique");
        a->add_vertex(name, group_from_spec(spec, here));
    };
    if (vs.is_object()) {
        for (auto it = vs.begin(); it != vs.end(); ++it) add_vertex(it.key(), it.value(), at(vw, it.key()));
    } else if (vs.is_array()) {
        for (std::size_t i = 0; i < vs.size(); ++i) {
            const std::string here = at(vw, i);
            add_vertex(need_string(need(vs[i], "name", here), at(here, "name")), need(vs[i], "group", here),
                       at(here, "group"));
        }
    } else {
        fail(vw, "expected an object or an array");
    }
    names.clear();
    if (j.contains("edges")) {
        const Json& es = need_array(j["edges"], at(where, "edges"));
        for (std::size_t i = 0; i < es.size(); ++i) {
            const std::string here = at(at(where, "edges"), i);
            const Json& e = es[i];
            std::string name = e.contains("name") ? need_string(e["name"], at(here, "name")) : "e" + std::to_string(i);
            if (!names.insert(name).second) fail(at(here, "name"), "duplicate edge name \"" + name + "\"");
            VertexId from = find_vertex(a->graph(), need(e, "from", here), at(here, "from"));
            VertexId to = find_vertex(a->graph(), need(e, "to", here), at(here, "to"));
            GroupPtr eg = group_from_spec(need(e, "group", here), at(here, "group"));
            auto al = elements(*a->vertex_group(from), need(e, "alpha", here), at(here, "alpha"));
            auto om = elements(*a->vertex_group(to), need(e, "omega", here), at(here, "omega"));
            guarded(here, [&] {
                a->add_edge(from, to, name, eg, al, om);
                return 0;
            });
        }
    }
    if (j.contains("basepoint")) a->basepoint = find_vertex(a->graph(), j["basepoint"], at(where, "basepoint"));
    auto bad = validate_gog(*a);
    if (!bad.empty()) {
        std::string msg = "invalid graph of groups:";
        for (const auto& v : bad) msg += "\n  " + v.where + ": " + v.reason;
        fail(where, msg);
    }
    return a;
}

Json gog_to_json(const GraphOfGroups& a) {
    const Graph& g = a.graph();
    auto vn = vertex_labels(g);
    auto pn = pair_labels(g);
    Json out;
    out["vertices"] = Json::array();
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        out["vertices"].push_back(Json{{"name", vn[v]}, {"group", group_to_spec(*a.vertex_group(v))}});
    out["edges"] = Json::array();
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        out["edges"].push_back(Json{{"name", pn[p]},
                                    {"from", vn[g.origin(e)]},
                                    {"to", vn[g.target(e)]},
                                    {"group", group_to_spec(*a.edge_group(e))},
                                    {"alpha", element_list(*a.vertex_group(g.origin(e)), a.alpha(e).images())},
                                    {"omega", element_list(*a.vertex_group(g.target(e)), a.omega(e).images())}});
    }
    if (a.basepoint) out["basepoint"] = vn[*a.basepoint];
    return out;
}

APath apath_from_json(const GraphOfGroups& a, const Json& j, const std::string& where) {
    const Graph& g = a.graph();
    APath p;
    p.start = find_vertex(g, need(j, "start", where), at(where, "start"));
    const std::string pw = at(where, "path");
    const Json& steps = need_array(need(j, "path", where), pw);
    if (steps.size() % 2 == 0) fail(pw, "expected [a0, e1, a1, ..., ek, ak]");
    VertexId cur = p.start;
    p.elems.push_back(element_from_json(*a.vertex_group(cur), steps[0], at(pw, std::size_t{0})));
    for (std::size_t i = 1; i < steps.size(); i += 2) {
        EdgeId e = find_half(g, steps[i], at(pw, i));
        if (g.origin(e) != cur) fail(at(pw, i), "edge does not start where the path is");
        cur = g.target(e);
        p.edges.push_back(e);
        p.elems.push_back(element_from_json(*a.vertex_group(cur), steps[i + 1], at(pw, i + 1)));
    }
    return p;
}

Json apath_to_json(const GraphOfGroups& a, const APath& p) {
    const Graph& g = a.graph();
    auto vn = vertex_labels(g);
    auto pn = pair_labels(g);
    Json steps = Json::array();
    VertexId cur = p.start;
    steps.push_back(element_to_json(*a.vertex_group(cur), p.elems[0]));
    for (std::size_t i = 0; i < p.edges.size(); ++i) {
        steps.push_back(half_label(pn, p.edges[i]));
        cur = g.target(p.edges[i]);
        steps.push_back(element_to_json(*a.vertex_group(cur), p.elems[i + 1]));
    }
    return Json{{"start", vn[p.start]}, {"path", steps}};
}

ImmersionInput immersion_from_json(const GogPtr& target, const Json& j, std::size_t budget, const std::string& where) {
    const GraphOfGroups& a = *target;
    ImmersionInput out;
    if (j.contains("generators")) {
        VertexId u0 = j.contains("basepoint") ? find_vertex(a.graph(), j["basepoint"], at(where, "basepoint"))
                                              : a.basepoint.value_or(0);
        std::vector<APath> gens;
        const Json& gj = need_array(j["generators"], at(where, "generators"));
        for (std::size_t i = 0; i < gj.size(); ++i) {
            APath p = apath_from_json(a, gj[i], at(at(where, "generators"), i));
            if (apath_end(a, p) != u0 || p.start != u0)
                fail(at(at(where, "generators"), i), "generator must be a closed path at the basepoint");
            gens.push_back(std::move(p));
        }
        RealizeResult r = guarded(where, [&] { return realize_subgroup(target, u0, gens, budget); });
        if (!r.complete) fail(where, "folding did not finish within " + std::to_string(budget) + " steps");
        out.morphism = std::move(r.morphism);
        out.basepoint = r.basepoint;
        out.realized = true;
        out.note = r.note;
        return out;
    }
    auto src = gog_from_json(need(j, "source", where), at(where, "source"));
    const Graph& sg = src->graph();
    const Graph& tg = a.graph();
    GoGMorphism& m = out.morphism;
    m.source = src;
    m.target = target;
    const std::string gm = at(where, "graph_map");
    const Json& gmap = need(j, "graph_map", where);
    const Json& vmap = need(gmap, "vertices", gm);
    for (VertexId v = 0; v < sg.num_vertices(); ++v)
        m.vertex_map.push_back(
            find_vertex(tg, need(vmap, sg.vertex_name(v), at(gm, "vertices")), at(at(gm, "vertices"), sg.vertex_name(v))));
    const Json empty = Json::object();
    const Json& emap = gmap.contains("edges") ? gmap["edges"] : empty;
    for (PairId p = 0; p < sg.num_pairs(); ++p) {
        EdgeId h = find_half(tg, need(emap, sg.pair_name(p), at(gm, "edges")), at(at(gm, "edges"), sg.pair_name(p)));
        m.edge_map.push_back(h);
        m.edge_map.push_back(inverse(h));
    }
    const Json& mu = j.contains("mu") ? j["mu"] : empty;
    const Json& muv = mu.contains("vertices") ? mu["vertices"] : empty;
    const Json& mue = mu.contains("edges") ? mu["edges"] : empty;
    const std::string mw = at(where, "mu");
    for (VertexId v = 0; v < sg.num_vertices(); ++v) {
        const std::string here = at(at(mw, "vertices"), sg.vertex_name(v));
        GroupPtr dom = src->vertex_group(v), cod = a.vertex_group(m.vertex_map[v]);
        std::vector<Element> imgs;
        if (muv.contains(sg.vertex_name(v))) imgs = elements(*cod, muv[sg.vertex_name(v)], here);
        else if (!dom->generators().empty()) fail(here, "missing generator images");
        m.mu_vertex.push_back(guarded(here, [&] { return Homomorphism(dom, cod, imgs); }));
    }
    const Json& tw = j.contains("twists") ? j["twists"] : empty;
    for (PairId p = 0; p < sg.num_pairs(); ++p) {
        const std::string& name = sg.pair_name(p);
        const std::string here = at(at(mw, "edges"), name);
        EdgeId h = m.edge_map[positive_half(p)];
        GroupPtr dom = src->edge_group(positive_half(p)), cod = a.edge_group(h);
        std::vector<Element> imgs;
        if (mue.contains(name)) imgs = elements(*cod, mue[name], here);
        else if (!dom->generators().empty()) fail(here, "missing generator images");
        m.mu_edge.push_back(guarded(here, [&] { return Homomorphism(dom, cod, imgs); }));
        const Group& go = *a.vertex_group(tg.origin(h));
        const Group& gt = *a.vertex_group(tg.target(h));
        Element ta = go.identity(), tom = gt.identity();
        if (tw.contains(name)) {
            const std::string tw_at = at(at(where, "twists"), name);
            const Json& t = tw[name];
            if (t.contains("alpha")) ta = element_from_json(go, t["alpha"], at(tw_at, "alpha"));
            if (t.contains("omega")) tom = element_from_json(gt, t["omega"], at(tw_at, "omega"));
        }
        m.twist_alpha_pos.push_back(ta);
        m.twist_omega_pos.push_back(tom);
    }
    auto known = [&](const Json& obj, bool vertices, const std::string& here) {
        if (!obj.is_object()) fail(here, "expected an object");
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            bool ok = vertices ? sg.find_vertex(it.key()).has_value()
                               : sg.find_edge(it.key()).has_value() && is_positive(*sg.find_edge(it.key()));
            if (!ok) fail(at(here, it.key()), std::string("no such source ") + (vertices ? "vertex" : "edge"));
        }
    };
    known(vmap, true, at(gm, "vertices"));
    known(emap, false, at(gm, "edges"));
    known(muv, true, at(mw, "vertices"));
    known(mue, false, at(mw, "edges"));
    known(tw, false, at(where, "twists"));
    out.basepoint = j.contains("basepoint") ? find_vertex(sg, j["basepoint"], at(where, "basepoint"))
                                            : src->basepoint.value_or(0);
    auto bad = validate_morphism(m);
    if (!bad.empty()) {
        std::string msg = "invalid morphism:";
        for (const auto& s : bad) msg += "\n  " + s;
        fail(where, msg);
    }
    return out;
}

Json morphism_to_json(const GoGMorphism& m, VertexId basepoint) {
    const Graph& sg = m.source->graph();
    const Graph& tg = m.target->graph();
    auto svn = vertex_labels(sg), spn = pair_labels(sg);
    auto tvn = vertex_labels(tg), tpn = pair_labels(tg);
    Json out;
    Json src = gog_to_json(*m.source);
    src.erase("basepoint");
    out["source"] = src;
    out["basepoint"] = svn[basepoint];
    Json vmap = Json::object(), emap = Json::object(), muv = Json::object(), mue = Json::object(),
         tw = Json::object();
    for (VertexId v = 0; v < sg.num_vertices(); ++v) {
        vmap[svn[v]] = tvn[m.vertex_map[v]];
        muv[svn[v]] = element_list(*m.target->vertex_group(m.vertex_map[v]), m.mu_vertex[v].images());
    }
    for (PairId p = 0; p < sg.num_pairs(); ++p) {
        EdgeId h = m.edge_map[positive_half(p)];
        emap[spn[p]] = half_label(tpn, h);
        mue[spn[p]] = element_list(*m.target->edge_group(h), m.mu_edge[p].images());
        tw[spn[p]] = Json{{"alpha", element_to_json(*m.target->vertex_group(tg.origin(h)), m.twist_alpha_pos[p])},
                          {"omega", element_to_json(*m.target->vertex_group(tg.target(h)), m.twist_omega_pos[p])}};
    }
    out["graph_map"] = Json{{"vertices", vmap}, {"edges", emap}};
    out["mu"] = Json{{"vertices", muv}, {"edges", mue}};
    out["twists"] = tw;
    return out;
}

bool is_decorated_json(const Json& j) {
    return j.is_object() && j.contains("format") && j["format"] == "decorated";
}

DecoratedGraph decorated_from_json(const Json& j, const std::string& where) {
    DecoratedGraph d;
    const Json& vs = need_array(need(j, "vertices", where), at(where, "vertices"));
    std::set<std::string> names;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::string name = need_string(vs[i], at(at(where, "vertices"), i));
        if (name.empty() || !names.insert(name).second)
            fail(at(at(where, "vertices"), i), "vertex names must be non-empty and unique");
        d.graph.add_vertex(name);
    }
    if (j.contains("edges")) {
        const Json& es = need_array(j["edges"], at(where, "edges"));
        for (std::size_t i = 0; i < es.size(); ++i) {
            const std::string here = at(at(where, "edges"), i);
            std::string name = es[i].contains("name") ? need_string(es[i]["name"], at(here, "name")) : "e" + std::to_string(i);
            VertexId from = find_vertex(d.graph, need(es[i], "from", here), at(here, "from"));
            VertexId to = find_vertex(d.graph, need(es[i], "to", here), at(here, "to"));
            const Json& idx = need_array(need(es[i], "index", here), at(here, "index"));
            if (idx.size() != 2) fail(at(here, "index"), "expected [alpha index, omega index]");
            d.graph.add_edge(from, to, name);
            for (std::size_t k = 0; k < 2; ++k) {
                const std::string iw = at(at(here, "index"), k);
                if (idx[k] == "inf") {
                    d.index.push_back(Index::infinite());
                } else {
                    Int n = need_int(idx[k], iw);
                    if (n < 1) fail(iw, "index must be positive");
                    d.index.push_back(Index::finite(static_cast<std::uint64_t>(n)));
                }
            }
        }
    }
    return d;
}

Json decorated_to_json(const DecoratedGraph& d) {
    const Graph& g = d.graph;
    auto vn = vertex_labels(g), pn = pair_labels(g);
    Json out;
    out["format"] = "decorated";
    out["vertices"] = vn;
    out["edges"] = Json::array();
    auto ix = [&](EdgeId h) { return d.index[h].is_finite() ? Json(d.index[h].value()) : Json("inf"); };
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        out["edges"].push_back(Json{{"name", pn[p]},
                                    {"from", vn[g.origin(e)]},
                                    {"to", vn[g.target(e)]},
                                    {"index", Json::array({ix(e), ix(inverse(e))})}});
    }
    return out;
}

std::string gog_to_dot(const GraphOfGroups& a, const std::string& title) {
    const Graph& g = a.graph();
    auto vn = vertex_labels(g), pn = pair_labels(g);
    std::ostringstream out;
    out << "digraph \"" << dot_escape(title) << "\" {\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v)
        out << "  n" << v << " [label=\"" << dot_escape(vn[v] + "\n" + a.vertex_group(v)->describe()) << "\""
            << (a.basepoint == v ? ", peripheries=2" : "") << "];\n";
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        std::string label = pn[p] + ": " + a.alpha(e).domain()->describe() + "\n" +
                            a.vertex_group(g.origin(e))->format_subgroup(a.alpha(e).image()) + " / " +
                            a.vertex_group(g.target(e))->format_subgroup(a.omega(e).image());
        out << "  n" << g.origin(e) << " -> n" << g.target(e) << " [label=\"" << dot_escape(label) << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string decorated_to_dot(const DecoratedGraph& d, const std::string& title) {
    const Graph& g = d.graph;
    auto vn = vertex_labels(g), pn = pair_labels(g);
    std::ostringstream out;
    out << "digraph \"" << dot_escape(title) << "\" {\n";
    for (VertexId v = 0; v < g.num_vertices(); ++v) out << "  n" << v << " [label=\"" << dot_escape(vn[v]) << "\"];\n";
    for (PairId p = 0; p < g.num_pairs(); ++p) {
        EdgeId e = positive_half(p);
        out << "  n" << g.origin(e) << " -> n" << g.target(e) << " [label=\"" << dot_escape(pn[p])
            << "\", taillabel=\"" << d.index[e].str() << "\", headlabel=\"" << d.index[inverse(e)].str() << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string fragment_to_dot(const AProductFragment& frag, const std::string& title) {
    const GraphOfGroups& d = frag.gog();
    std::ostringstream out;
    out << "digraph \"" << dot_escape(title) << "\" {\n";
    for (std::size_t x = 0; x < frag.vertices.size(); ++x) {
        std::string label = format_vertex(frag, x) + "\n" +
                            d.vertex_group(static_cast<VertexId>(x))->format_subgroup(
                                d.vertex_group(static_cast<VertexId>(x))->whole());
        out << "  n" << x << " [label=\"" << dot_escape(label) << "\"" << (frag.explored[x] ? "" : ", style=dashed")
            << "];\n";
    }
    for (std::size_t i = 0; i < frag.edges.size(); ++i) {
        const ProductEdge& h = frag.edges[i];
        out << "  n" << h.from << " -> n" << h.to << " [label=\""
            << dot_escape(frag.mb().source->graph().edge_name(h.f) + "," + frag.mc().source->graph().edge_name(h.g))
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

Json fragment_to_json(const AProductFragment& frag) {
    const GraphOfGroups& a = *frag.mb().target;
    const Graph& bg = frag.mb().source->graph();
    const Graph& cg = frag.mc().source->graph();
    Json out = gog_to_json(frag.gog());
    for (std::size_t x = 0; x < frag.vertices.size(); ++x) {
        const ProductVertex& pv = frag.vertices[x];
        Json& v = out["vertices"][x];
        v["over"] = Json::array({bg.vertex_name(pv.v), cg.vertex_name(pv.w)});
        v["witness"] = element_to_json(*a.vertex_group(frag.mb().vertex_map[pv.v]), pv.witness);
        v["explored"] = static_cast<bool>(frag.explored[x]);
        if (!frag.unexpandable[x].empty()) v["note"] = frag.unexpandable[x];
    }
    for (std::size_t i = 0; i < frag.edges.size(); ++i) {
        const ProductEdge& h = frag.edges[i];
        Json& e = out["edges"][i];
        e["over"] = Json::array({bg.edge_name(h.f), cg.edge_name(h.g)});
        e["witness"] = element_to_json(*a.edge_group(frag.mb().edge_map[h.f]), h.witness);
    }
    out["complete"] = frag.complete;
    out["budget"] = frag.budget;
    return out;
}

}  // namespace bst
