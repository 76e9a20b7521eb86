#pragma once

#include <stdexcept>
#include <string>

#include "bst/fgip.hpp"
#include "bst/pullback.hpp"
#include "json.hpp"

namespace bst {

using Json = nlohmann::ordered_json;

// Malformed input: syntax errors carry "source:line:col", semantic errors a JSON path.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Group specs: {"free": r} | {"Z": true} | {"abelian": {"rank": r, "torsion": [..]}} |
// {"finite": {"table": [[..]], "generators": [..]}} | {"cyclic": n} |
// {"subgroup": {"of": spec, "generators": [..]}}.
GroupPtr group_from_spec(const Json& spec, const std::string& where);
Json group_to_spec(const Group& g);

Element element_from_json(const Group& g, const Json& j, const std::string& where);
Json element_to_json(const Group& g, const Element& x);

// {"vertices": {name: spec, ...} or [{"name", "group"}...], "edges": [{"name", "from",
// "to", "group", "alpha": [..], "omega": [..]}], "basepoint": name}. Vertex and edge ids
// follow file order. Violations of validate_gog are rejected.
std::shared_ptr<GraphOfGroups> gog_from_json(const Json& j, const std::string& where = "");
Json gog_to_json(const GraphOfGroups& a);

// {"start": vertex, "path": [a0, "e1", a1, ..., "ek", ak]}; halves by name or "name^-1".
APath apath_from_json(const GraphOfGroups& a, const Json& j, const std::string& where);
Json apath_to_json(const GraphOfGroups& a, const APath& p);

struct ImmersionInput {
    GoGMorphism morphism;
    VertexId basepoint = 0;     // in the source
    bool realized = false;      // built from generators by folding
    std::string note;
};

// Either an explicit morphism {"source": gog, "basepoint", "graph_map": {"vertices",
// "edges"}, "mu": {"vertices", "edges"}, "twists": {pair: {"alpha", "omega"}}} or
// {"basepoint": target vertex, "generators": [A-paths]} realized by folding.
ImmersionInput immersion_from_json(const GogPtr& target, const Json& j, std::size_t budget,
                                   const std::string& where = "");
Json morphism_to_json(const GoGMorphism& m, VertexId basepoint);

bool is_decorated_json(const Json& j);
// {"format": "decorated", "vertices": [names], "edges": [{"name", "from", "to",
// "index": [m, n]}]}; an index may be "inf".
DecoratedGraph decorated_from_json(const Json& j, const std::string& where = "");
Json decorated_to_json(const DecoratedGraph& d);

std::string gog_to_dot(const GraphOfGroups& a, const std::string& title = "A");
std::string decorated_to_dot(const DecoratedGraph& d, const std::string& title = "D");
std::string fragment_to_dot(const AProductFragment& frag, const std::string& title = "D");
// The fragment as a graph-of-groups dump extended with witness fields.
Json fragment_to_json(const AProductFragment& frag);

}  // namespace bst
