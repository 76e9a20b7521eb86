// Command-line front end. Every report is a sequence of "key: value" lines ending in a
// VERDICT line; exit codes are 0 yes/success, 1 no, 2 unknown, 3 input error.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bst/fcip.hpp"
#include "bst/fgip.hpp"
#include "bst/io.hpp"
#include "bst/pullback.hpp"

using namespace bst;

namespace {

constexpr int kYes = 0, kNo = 1, kUnknown = 2, kInputError = 3;

struct Options {
    std::vector<std::string> files;
    std::size_t budget = 256;
    std::size_t realize_budget = 10000;
    std::string dot, output, format = "text";
    std::uint64_t seed = 1;
    bool verbose = false;
};

class Report {
public:
    void add(const std::string& key, Json value) { fields_.emplace_back(key, std::move(value)); }
    void set_dump(Json dump) { dump_ = std::move(dump); }
    void set_dump_text(std::string text) { dump_text_ = std::move(text); }
    // Text reports whose lines already carry the dump keep it out of stdout.
    void dump_only_to_file() { inline_dump_ = false; }

    // Dumps go to -o when given, otherwise to stdout ahead of the report.
    int emit(const Options& opt, const std::string& verdict, int code) {
        std::string dump = dump_text_;
        if (dump.empty() && !dump_.is_null()) dump = dump_.dump(2) + "\n";
        if (!opt.output.empty() && !dump.empty()) {
            write_text_file(opt.output, dump);
            add("output", opt.output);
        }
        if (opt.format == "json") {
            Json out = Json::object();
            for (auto& [k, v] : fields_) out[k] = v;
            if (opt.output.empty() && !dump.empty()) {
                if (!dump_.is_null()) out["dump"] = dump_;
                else out["dump"] = dump_text_;
            }
            out["verdict"] = verdict;
            std::cout << out.dump(2) << "\n";
        } else {
            if (opt.output.empty() && !dump.empty() && inline_dump_) std::cout << dump << "\n";
            for (auto& [k, v] : fields_) std::cout << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
            std::cout << "VERDICT: " << verdict << "\n";
        }
        return code;
    }

private:
    std::vector<std::pair<std::string, Json>> fields_;
    Json dump_;
    std::string dump_text_;
    bool inline_dump_ = true;
};

void need_files(const Options& opt, std::size_t n, const std::string& usage) {
    if (opt.files.size() != n) throw InputError("expected " + usage);
}

void write_dot(const Options& opt, Report& r, const std::string& dot) {
    if (opt.dot.empty()) return;
    write_text_file(opt.dot, dot);
    r.add("dot", opt.dot);
}

// Semantic errors carry a JSON path; this prefixes the file they belong to.
template <class F>
auto within(const std::string& path, F&& f) {
    try {
        return f();
    } catch (const InputError& e) {
        throw InputError(path + ": " + e.what());
    }
}

VertexId basepoint_of(const GraphOfGroups& a) { return a.basepoint.value_or(0); }

std::shared_ptr<GraphOfGroups> load_gog(const std::string& path) {
    Json j = read_json_file(path);
    return within(path, [&] { return gog_from_json(j); });
}

ImmersionInput load_immersion(const GogPtr& target, const std::string& path, const Options& opt) {
    Json j = read_json_file(path);
    return within(path, [&] { return immersion_from_json(target, j, opt.realize_budget); });
}

struct Loaded {
    std::shared_ptr<GraphOfGroups> target;
    ImmersionInput b, c;
};

Loaded load_pair(const Options& opt) {
    need_files(opt, 3, "<gog> <B immersion> <C immersion>");
    Loaded l;
    l.target = load_gog(opt.files[0]);
    l.b = load_immersion(l.target, opt.files[1], opt);
    l.c = load_immersion(l.target, opt.files[2], opt);
    return l;
}

void describe_gog(Report& r, const GraphOfGroups& a) {
    r.add("vertices", a.graph().num_vertices());
    r.add("edges", a.graph().num_pairs());
    for (VertexId v = 0; v < a.graph().num_vertices(); ++v)
        r.add("vertex " + a.graph().vertex_name(v), a.vertex_group(v)->describe());
}

void describe_decorated(Report& r, const DecoratedGraph& d) {
    r.add("vertices", d.graph.num_vertices());
    r.add("edges", d.graph.num_pairs());
}

std::string answer_verdict(FgipAnswer a) { return a == FgipAnswer::Yes ? "yes" : a == FgipAnswer::No ? "no" : "unknown"; }
int answer_code(FgipAnswer a) { return a == FgipAnswer::Yes ? kYes : a == FgipAnswer::No ? kNo : kUnknown; }

int cmd_validate(const Options& opt) {
    Report r;
    if (opt.files.size() == 2) {
        auto target = load_gog(opt.files[0]);
        ImmersionInput in = load_immersion(target, opt.files[1], opt);
        r.add("kind", "morphism");
        r.add("source vertices", in.morphism.source->graph().num_vertices());
        r.add("source edges", in.morphism.source->graph().num_pairs());
        r.add("realized", in.realized);
        return r.emit(opt, "valid", kYes);
    }
    need_files(opt, 1, "<file> or <gog> <immersion>");
    Json j = read_json_file(opt.files[0]);
    if (is_decorated_json(j)) {
        DecoratedGraph d = within(opt.files[0], [&] { return decorated_from_json(j); });
        r.add("kind", "decorated");
        describe_decorated(r, d);
        write_dot(opt, r, decorated_to_dot(d));
    } else {
        auto a = within(opt.files[0], [&] { return gog_from_json(j); });
        r.add("kind", "graph of groups");
        describe_gog(r, *a);
        write_dot(opt, r, gog_to_dot(*a));
    }
    return r.emit(opt, "valid", kYes);
}

int cmd_reduce(const Options& opt) {
    need_files(opt, 1, "<file>");
    Report r;
    Json j = read_json_file(opt.files[0]);
    if (is_decorated_json(j)) {
        DecoratedGraph d = within(opt.files[0], [&] { return decorated_from_json(j); });
        DecoratedGraph red = reduce_decorated(d);
        r.add("collapses", d.graph.num_pairs() - red.graph.num_pairs());
        describe_decorated(r, red);
        r.set_dump(decorated_to_json(red));
        write_dot(opt, r, decorated_to_dot(red));
        return r.emit(opt, "reduced", kYes);
    }
    auto a = within(opt.files[0], [&] { return gog_from_json(j); });
    ReducedGog red = reduce_gog(*a, basepoint_of(*a));
    r.add("collapses", red.steps.size());
    for (std::size_t i = 0; i < red.steps.size(); ++i)
        r.add("collapse " + std::to_string(i), red.steps[i].edge);
    describe_gog(r, red.gog);
    red.gog.basepoint = red.basepoint;
    r.set_dump(gog_to_json(red.gog));
    write_dot(opt, r, gog_to_dot(red.gog));
    return r.emit(opt, "reduced", kYes);
}

int cmd_core(const Options& opt) {
    need_files(opt, 1, "<gog>");
    Report r;
    auto a = load_gog(opt.files[0]);
    SubGog core = a->basepoint ? gog_core_at(*a, *a->basepoint) : gog_core(*a);
    r.add("mode", a->basepoint ? "at basepoint " + a->graph().vertex_name(*a->basepoint) : "cyclic");
    describe_gog(r, core.gog);
    r.set_dump(gog_to_json(core.gog));
    write_dot(opt, r, gog_to_dot(core.gog, "core"));
    return r.emit(opt, "core", kYes);
}

int cmd_immersion_check(const Options& opt) {
    need_files(opt, 2, "<gog> <immersion>");
    Report r;
    auto target = load_gog(opt.files[0]);
    ImmersionInput in = load_immersion(target, opt.files[1], opt);
    ImmersionResult im = is_immersion(in.morphism);
    r.add("realized", in.realized);
    if (!in.note.empty()) r.add("note", in.note);
    r.add("locally injective blocks", im.blocks.size());
    r.add("verified edges", im.verified_edges.size());
    if (!im.ok) {
        r.add("failure", im.failure);
        return r.emit(opt, "not an immersion", kNo);
    }
    CoveringResult cov = is_covering(in.morphism);
    r.add("covering", to_string(cov.verdict));
    if (!cov.detail.empty()) r.add("covering detail", cov.detail);
    r.set_dump(morphism_to_json(in.morphism, in.basepoint));
    return r.emit(opt, "immersion", kYes);
}

int cmd_pullback(const Options& opt, bool generators_only) {
    Loaded l = load_pair(opt);
    AProductFragment fr = build_product(l.b.morphism, l.b.basepoint, l.c.morphism, l.c.basepoint, opt.budget);
    Report r;
    r.dump_only_to_file();
    r.add("budget", opt.budget);
    r.add("vertices", fr.vertices.size());
    r.add("explored", fr.num_explored());
    r.add("frontier", fr.num_frontier());
    r.add("edges", fr.edges.size());
    r.add("complete", fr.complete);
    for (std::size_t x = 0; x < fr.vertices.size(); ++x)
        if (!fr.unexpandable[x].empty()) r.add("unexpandable " + std::to_string(x), fr.unexpandable[x]);
    RayCertificate ray = certify_ray(fr);
    if (ray.fired) r.add("ray certificate", ray.detail);
    write_dot(opt, r, fragment_to_dot(fr));

    IntersectionGenerators ig = intersection_generators(fr);
    r.add("bound", ig.exact ? "exact" : "lower bound");
    if (generators_only || opt.verbose) {
        r.add("generators", ig.generators.size());
        for (std::size_t i = 0; i < ig.generators.size(); ++i)
            r.add("generator " + std::to_string(i), format_apath(*l.target, ig.generators[i]));
    }
    if (!generators_only) {
        for (std::size_t x = 0; x < fr.vertices.size() && opt.verbose; ++x)
            r.add("vertex " + std::to_string(x), format_vertex(fr, x));
        r.set_dump(fragment_to_json(fr));
    } else {
        Json gens = Json::array();
        for (const APath& p : ig.generators) gens.push_back(apath_to_json(*l.target, p));
        r.set_dump(Json{{"exact", ig.exact}, {"generators", gens}});
    }
    if (fr.complete) return r.emit(opt, generators_only ? "finitely generated" : "complete", kYes);
    if (ray.fired) return r.emit(opt, "not finitely generated", kNo);
    return r.emit(opt, "unknown", kUnknown);
}

std::vector<Element> elements(const Group& g, const Json& list, const std::string& where) {
    if (!list.is_array()) throw InputError(where + ": expected an array");
    std::vector<Element> out;
    for (std::size_t i = 0; i < list.size(); ++i)
        out.push_back(element_from_json(g, list[i], where + "/" + std::to_string(i)));
    return out;
}

Json index_json(const Index& i) { return i.is_finite() ? Json(i.value()) : Json("inf"); }

int fcip_report(const Options& opt, const Json& j) {
    for (const char* key : {"group", "A", "B", "C"})
        if (!j.contains(key)) throw InputError("missing \"" + std::string(key) + "\"");
    GroupPtr g = group_from_spec(j["group"], "/group");
    Subgroup a = g->subgroup(elements(*g, j["A"], "/A"));
    Subgroup b = g->subgroup(elements(*g, j["B"], "/B"));
    Subgroup c = g->subgroup(elements(*g, j["C"], "/C"));
    Report r;
    r.add("group", g->describe());

    if (auto ab = std::dynamic_pointer_cast<const AbelianGroup>(g)) {
        FcipReport rep = fcip_abelian(ab, b, c, a);
        r.add("kernel", index_json(rep.kernel));
        r.add("image", index_json(rep.image));
        r.add(rep.verdict == FcipVerdict::True ? "satisfied branch" : "failure clause", rep.clause);
        r.add("detail", rep.detail);
        if (j.contains("f") && j.contains("g")) {
            Element f = element_from_json(*g, j["f"], "/f"), gg = element_from_json(*g, j["g"], "/g");
            QMapAbelian q(ab, a, b, c, f, gg);
            r.add("domain size", index_json(q.domain_size()));
            r.add("codomain size", index_json(q.codomain_size()));
            if (auto classes = q.domain_classes()) {
                std::set<Element> images;
                for (const Element& x : *classes) {
                    Element y = q.evaluate(x);
                    images.insert(y);
                    r.add("q(" + g->format(x) + ")", g->format(y));
                }
                bool bijective = images.size() == classes->size() && q.codomain_size() == Index::finite(classes->size());
                r.add("bijection", bijective);
            }
        }
        return r.emit(opt, to_string(rep.verdict), rep.verdict == FcipVerdict::True ? kYes : kNo);
    }

    auto fg = std::dynamic_pointer_cast<const FreeGroup>(g);
    if (!fg) throw InputError("/group: the collision sampler needs a free or abelian group");
    std::size_t len = j.value("length", 6);
    std::vector<Element> fs, gs;
    if (j.contains("F") && j.contains("G")) {
        fs = elements(*g, j["F"], "/F");
        gs = elements(*g, j["G"], "/G");
    } else {
        // Random families: the identity plus three reduced words of length at most 3.
        std::mt19937_64 rng(opt.seed);
        auto random_family = [&] {
            std::vector<Element> out{g->identity()};
            std::uniform_int_distribution<Int> letter(1, static_cast<Int>(fg->rank()));
            std::uniform_int_distribution<int> size(1, 3);
            std::bernoulli_distribution sign(0.5);
            while (out.size() < 4) {
                Word w;
                for (int n = size(rng); static_cast<int>(w.size()) < n;)
                    w = words::reduce(words::multiply(w, {letter(rng) * (sign(rng) ? 1 : -1)}));
                out.push_back(as_element(w));
            }
            return out;
        };
        fs = random_family();
        gs = random_family();
        r.add("seed", opt.seed);
    }
    auto list = [&](const std::vector<Element>& xs) {
        Json out = Json::array();
        for (const Element& x : xs) out.push_back(g->format(x));
        return out;
    };
    r.add("F", list(fs));
    r.add("G", list(gs));
    r.add("length", len);
    FcipReport rep = fcip_bruteforce_sample(*fg, a, b, c, fs, gs, len);
    r.add("domain classes", rep.domain_classes);
    r.add("target classes", rep.collisions.size());
    r.add("excess", rep.excess);
    if (!rep.detail.empty()) r.add("detail", rep.detail);
    return r.emit(opt, to_string(rep.verdict), kUnknown);
}

int cmd_fcip(const Options& opt) {
    need_files(opt, 1, "<fcip file>");
    Json j = read_json_file(opt.files[0]);
    return within(opt.files[0], [&] { return fcip_report(opt, j); });
}

std::vector<bool> fgip_flags(const GraphOfGroups& a, const Json& j) {
    std::vector<bool> flags(a.graph().num_vertices(), false);
    if (!j.contains("fgip")) return flags;
    if (!j["fgip"].is_array()) throw InputError("/fgip: expected an array of vertex names");
    for (std::size_t i = 0; i < j["fgip"].size(); ++i) {
        const Json& n = j["fgip"][i];
        auto v = n.is_string() ? a.graph().find_vertex(n.get<std::string>()) : std::nullopt;
        if (!v) throw InputError("/fgip/" + std::to_string(i) + ": unknown vertex");
        flags[*v] = true;
    }
    return flags;
}

void describe_verdict(Report& r, const FgipVerdict& v) {
    r.add("route", v.route);
    r.add("certificate", v.certificate);
    if (v.answer == FgipAnswer::No) r.add("configuration", to_string(v.configuration));
    if (v.components.size() > 1) {
        r.add("components", v.components.size());
        for (std::size_t i = 0; i < v.components.size(); ++i)
            r.add("component " + std::to_string(i), to_string(v.components[i].answer) + ", " + v.components[i].certificate);
    }
}

int cmd_decide_fgip(const Options& opt) {
    need_files(opt, 1, "<gog or decorated file>");
    Report r;
    Json j = read_json_file(opt.files[0]);
    FgipVerdict v;
    if (is_decorated_json(j)) {
        DecoratedGraph d = within(opt.files[0], [&] { return decorated_from_json(j); });
        v = decide_fgip_decorated(d);
        v.route = "virtually-Z three-form test";
    } else {
        auto a = within(opt.files[0], [&] { return gog_from_json(j); });
        v = fgip_certify(*a, within(opt.files[0], [&] { return fgip_flags(*a, j); }));
    }
    describe_verdict(r, v);
    return r.emit(opt, answer_verdict(v.answer), answer_code(v.answer));
}

int cmd_w_construct(const Options& opt) {
    need_files(opt, 1, "<gog>");
    Report r;
    auto a = load_gog(opt.files[0]);
    WConstruction w = w_construction(*a);
    for (std::size_t i = 0; i < w.classes.size(); ++i) {
        const auto& cl = w.classes[i];
        r.add(w.gog.graph().vertex_name(static_cast<VertexId>(i)),
              "vertex " + a->graph().vertex_name(cl.vertex) + ", class of " + a->graph().edge_name(cl.representative) +
                  ", root " + words::format(cl.root));
    }
    for (EdgeId h = 0; h < a->graph().num_halves(); ++h)
        r.add("half " + a->graph().edge_name(h),
              "conjugator " + words::format(w.conjugator[h]) + ", exponent " + std::to_string(w.exponent[h]));
    FgipVerdict v = decide_fgip_free_cyclic(*a);
    describe_verdict(r, v);
    r.set_dump(gog_to_json(w.gog));
    write_dot(opt, r, gog_to_dot(w.gog, "W"));
    return r.emit(opt, answer_verdict(v.answer), answer_code(v.answer));
}

int cmd_export_dot(const Options& opt) {
    Report r;
    std::string dot;
    if (opt.files.size() == 3) {
        Loaded l = load_pair(opt);
        AProductFragment fr = build_product(l.b.morphism, l.b.basepoint, l.c.morphism, l.c.basepoint, opt.budget);
        dot = fragment_to_dot(fr);
        r.add("kind", "product fragment");
    } else {
        need_files(opt, 1, "<gog or decorated file> or <gog> <B> <C>");
        Json j = read_json_file(opt.files[0]);
        if (is_decorated_json(j)) {
            dot = decorated_to_dot(within(opt.files[0], [&] { return decorated_from_json(j); }));
            r.add("kind", "decorated");
        } else {
            dot = gog_to_dot(*within(opt.files[0], [&] { return gog_from_json(j); }));
            r.add("kind", "graph of groups");
        }
    }
    if (!opt.dot.empty()) {
        write_text_file(opt.dot, dot);
        r.add("dot", opt.dot);
    } else {
        r.set_dump_text(dot);
    }
    return r.emit(opt, "exported", kYes);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Graphs of groups: reduction, pullbacks, FCIP reports and FGIP decisions"};
    app.require_subcommand(1);
    Options opt;

    struct Command {
        const char* name;
        const char* help;
        std::function<int()> run;
    };
    std::vector<Command> commands{
        {"validate", "check a graph of groups, decorated graph, or <gog> <immersion>", [&] { return cmd_validate(opt); }},
        {"reduce", "collapse non-reduced edges", [&] { return cmd_reduce(opt); }},
        {"core", "core at the basepoint (or the cyclic core without one)", [&] { return cmd_core(opt); }},
        {"immersion-check", "<gog> <immersion>: immersion and covering conditions", [&] { return cmd_immersion_check(opt); }},
        {"pullback", "<gog> <B> <C>: budgeted product fragment", [&] { return cmd_pullback(opt, false); }},
        {"intersect", "<gog> <B> <C>: generators of the intersection", [&] { return cmd_pullback(opt, true); }},
        {"fcip", "FCIP report for an abelian group or collision sampling in a free group", [&] { return cmd_fcip(opt); }},
        {"decide-fgip", "FGIP verdict with certificate", [&] { return cmd_decide_fgip(opt); }},
        {"w-construct", "commensurator graph of a graph of free groups with cyclic edges", [&] { return cmd_w_construct(opt); }},
        {"export-dot", "DOT rendering of a graph, decorated graph or product fragment", [&] { return cmd_export_dot(opt); }},
    };
    std::function<int()> chosen;
    for (const Command& c : commands) {
        CLI::App* sub = app.add_subcommand(c.name, c.help);
        sub->add_option("files", opt.files, "input files")->required()->check(CLI::ExistingFile);
        sub->add_option("--budget", opt.budget, "product vertices to expand")->check(CLI::PositiveNumber);
        sub->add_option("--realize-budget", opt.realize_budget, "folding steps for generator-form immersions")
            ->check(CLI::PositiveNumber);
        sub->add_option("--dot", opt.dot, "also write a DOT rendering to this path");
        sub->add_option("-o,--output", opt.output, "write the dump to this path");
        sub->add_option("--format", opt.format, "report format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--seed", opt.seed, "seed for sampled families");
        sub->add_flag("-v,--verbose", opt.verbose, "list vertices and generators");
        sub->callback([&chosen, run = c.run] { chosen = run; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kInputError;
    }
    try {
        return chosen();
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const ContractError& e) {
        std::cerr << "error: " << e.what() << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
    }
    std::cout << "VERDICT: input error\n";
    return kInputError;
}
