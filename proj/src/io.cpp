#include "kstab/io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace kstab {

namespace {

using nlohmann::ordered_json;

void require_keys(const ordered_json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.count(key)) throw SchemaError(path + "/" + key, "unknown field");
}

const ordered_json& require_field(const ordered_json& obj, const std::string& path,
                                  const std::string& key) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(path + "/" + key, "missing field");
    return *it;
}

Rat parse_rat(const ordered_json& node, const std::string& path) {
    if (!node.is_string())
        throw SchemaError(path, "rational values are strings like \"p/q\"");
    std::optional<Rat> r = rat_from_string(node.get<std::string>());
    if (!r)
        throw SchemaError(path,
                          "not a reduced rational with positive denominator: " +
                              node.get<std::string>());
    return *r;
}

RatVec parse_rat_vector(const ordered_json& node, const std::string& path, int dim) {
    if (!node.is_array() || static_cast<int>(node.size()) != dim)
        throw SchemaError(path, "expected an array of " + std::to_string(dim) +
                                    " rational strings");
    RatVec out;
    for (std::size_t i = 0; i < node.size(); ++i)
        out.push_back(parse_rat(node[i], path + "/" + std::to_string(i)));
    return out;
}

std::int64_t parse_int(const ordered_json& node, const std::string& path) {
    if (!node.is_number_integer()) throw SchemaError(path, "expected an integer");
    return node.get<std::int64_t>();
}

}  // namespace

Config ConfigDocument::to_config() const {
    try {
        Polytope p = Polytope::from_halfspaces(dim, halfspaces);
        if (kind == "toric_pl") return ToricConfig(std::move(p), PLConcave(affines), rounding);
        if (kind == "normal_cone") return NormalConeConfig(std::move(p), vertex, c);
        std::vector<MonomialIdeal> flag;
        for (const std::vector<Exponent>& gens : flag_generators)
            flag.emplace_back(gens);
        FlagIdealConfig cfg(std::move(flag), c, degree);
        // The declared polytope must be the moment simplex of O(degree).
        if (cfg.polytope().vertices() != p.vertices())
            throw std::invalid_argument(
                "polytope does not match the moment simplex of the declared degree");
        return cfg;
    } catch (const std::invalid_argument& e) {
        throw SchemaError("", e.what());
    }
}

ConfigDocument parse_config(const std::string& text) {
    ordered_json root;
    try {
        root = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw SchemaError("", "document must be a JSON object");

    ConfigDocument doc;
    doc.schema_version =
        static_cast<int>(parse_int(require_field(root, "", "schema_version"),
                                   "/schema_version"));
    if (doc.schema_version != 1)
        throw SchemaError("/schema_version", "unsupported schema version");

    const ordered_json& kind_node = require_field(root, "", "kind");
    if (!kind_node.is_string()) throw SchemaError("/kind", "expected a string");
    doc.kind = kind_node.get<std::string>();
    if (doc.kind != "toric_pl" && doc.kind != "normal_cone" && doc.kind != "flag_ideal")
        throw SchemaError("/kind", "kind must be toric_pl, normal_cone or flag_ideal");

    // Polytope block (required for every kind).
    const ordered_json& poly = require_field(root, "", "polytope");
    if (!poly.is_object()) throw SchemaError("/polytope", "expected an object");
    require_keys(poly, "/polytope", {"dim", "halfspaces"});
    doc.dim = static_cast<int>(parse_int(require_field(poly, "/polytope", "dim"),
                                         "/polytope/dim"));
    if (doc.dim < 1) throw SchemaError("/polytope/dim", "dimension must be >= 1");
    const ordered_json& hs = require_field(poly, "/polytope", "halfspaces");
    if (!hs.is_array() || hs.empty())
        throw SchemaError("/polytope/halfspaces", "expected a nonempty array");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const std::string hp = "/polytope/halfspaces/" + std::to_string(i);
        if (!hs[i].is_object()) throw SchemaError(hp, "expected an object");
        require_keys(hs[i], hp, {"normal", "offset"});
        Halfspace h;
        h.normal = parse_rat_vector(require_field(hs[i], hp, "normal"), hp + "/normal",
                                    doc.dim);
        h.offset = parse_rat(require_field(hs[i], hp, "offset"), hp + "/offset");
        doc.halfspaces.push_back(std::move(h));
    }

    std::set<std::string> allowed = {"schema_version", "kind", "polytope"};
    if (doc.kind == "toric_pl") {
        allowed.insert("g");
        allowed.insert("rounding");
        require_keys(root, "", allowed);
        const ordered_json& g = require_field(root, "", "g");
        if (!g.is_object()) throw SchemaError("/g", "expected an object");
        require_keys(g, "/g", {"affines"});
        const ordered_json& affines = require_field(g, "/g", "affines");
        if (!affines.is_array() || affines.empty())
            throw SchemaError("/g/affines", "expected a nonempty array");
        for (std::size_t i = 0; i < affines.size(); ++i) {
            const std::string ap = "/g/affines/" + std::to_string(i);
            if (!affines[i].is_object()) throw SchemaError(ap, "expected an object");
            require_keys(affines[i], ap, {"gradient", "constant"});
            AffinePiece piece;
            piece.gradient = parse_rat_vector(require_field(affines[i], ap, "gradient"),
                                              ap + "/gradient", doc.dim);
            piece.constant =
                parse_rat(require_field(affines[i], ap, "constant"), ap + "/constant");
            doc.affines.push_back(std::move(piece));
        }
        if (root.contains("rounding")) {
            const ordered_json& r = root["rounding"];
            if (!r.is_string() ||
                (r.get<std::string>() != "ceil" && r.get<std::string>() != "floor"))
                throw SchemaError("/rounding", "rounding must be \"ceil\" or \"floor\"");
            doc.rounding =
                r.get<std::string>() == "ceil" ? Rounding::Ceil : Rounding::Floor;
            doc.rounding_given = true;
        }
    } else if (doc.kind == "normal_cone") {
        allowed.insert("vertex");
        allowed.insert("c");
        require_keys(root, "", allowed);
        doc.vertex = static_cast<int>(parse_int(require_field(root, "", "vertex"),
                                                "/vertex"));
        doc.c = parse_rat(require_field(root, "", "c"), "/c");
    } else {
        allowed.insert("flag");
        allowed.insert("c");
        allowed.insert("degree");
        require_keys(root, "", allowed);
        const ordered_json& flag = require_field(root, "", "flag");
        if (!flag.is_array() || flag.empty())
            throw SchemaError("/flag", "expected a nonempty array of ideals");
        for (std::size_t i = 0; i < flag.size(); ++i) {
            const std::string ip = "/flag/" + std::to_string(i);
            if (!flag[i].is_array() || flag[i].empty())
                throw SchemaError(ip, "expected a nonempty array of generators");
            std::vector<Exponent> gens;
            for (std::size_t j = 0; j < flag[i].size(); ++j) {
                const std::string gp = ip + "/" + std::to_string(j);
                const ordered_json& gen = flag[i][j];
                if (!gen.is_array() || static_cast<int>(gen.size()) != doc.dim)
                    throw SchemaError(gp, "expected an array of " +
                                              std::to_string(doc.dim) + " integers");
                Exponent e;
                for (std::size_t c = 0; c < gen.size(); ++c) {
                    const std::int64_t v =
                        parse_int(gen[c], gp + "/" + std::to_string(c));
                    if (v < 0)
                        throw SchemaError(gp + "/" + std::to_string(c),
                                          "exponents must be nonnegative");
                    e.push_back(v);
                }
                gens.push_back(std::move(e));
            }
            doc.flag_generators.push_back(std::move(gens));
        }
        doc.c = parse_rat(require_field(root, "", "c"), "/c");
        doc.degree = parse_int(require_field(root, "", "degree"), "/degree");
    }
    return doc;
}

ConfigDocument parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("", "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string emit_config(const ConfigDocument& doc) {
    ordered_json root;
    root["schema_version"] = doc.schema_version;
    root["kind"] = doc.kind;
    ordered_json poly;
    poly["dim"] = doc.dim;
    ordered_json hs = ordered_json::array();
    for (const Halfspace& h : doc.halfspaces) {
        ordered_json one;
        ordered_json normal = ordered_json::array();
        for (const Rat& x : h.normal) normal.push_back(rat_to_string(x));
        one["normal"] = std::move(normal);
        one["offset"] = rat_to_string(h.offset);
        hs.push_back(std::move(one));
    }
    poly["halfspaces"] = std::move(hs);
    root["polytope"] = std::move(poly);

    if (doc.kind == "toric_pl") {
        ordered_json affines = ordered_json::array();
        for (const AffinePiece& a : doc.affines) {
            ordered_json one;
            ordered_json grad = ordered_json::array();
            for (const Rat& x : a.gradient) grad.push_back(rat_to_string(x));
            one["gradient"] = std::move(grad);
            one["constant"] = rat_to_string(a.constant);
            affines.push_back(std::move(one));
        }
        root["g"] = ordered_json{{"affines", std::move(affines)}};
        if (doc.rounding_given)
            root["rounding"] = doc.rounding == Rounding::Ceil ? "ceil" : "floor";
    } else if (doc.kind == "normal_cone") {
        root["vertex"] = doc.vertex;
        root["c"] = rat_to_string(doc.c);
    } else {
        ordered_json flag = ordered_json::array();
        for (const std::vector<Exponent>& gens : doc.flag_generators) {
            ordered_json ideal = ordered_json::array();
            for (const Exponent& g : gens) ideal.push_back(g);
            flag.push_back(std::move(ideal));
        }
        root["flag"] = std::move(flag);
        root["c"] = rat_to_string(doc.c);
        root["degree"] = doc.degree;
    }
    return root.dump(2) + "\n";
}

std::string RunManifest::header() const {
    std::ostringstream os;
    os << "# tool: " << kToolVersion << "\n";
    os << "# command: " << command << "\n";
    for (const std::string& in : inputs) os << "# input: " << in << "\n";
    for (const auto& [k, v] : parameters) os << "# parameter: " << k << "=" << v << "\n";
    os << "# columns: ";
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ",";
        os << columns[i].first << ":" << columns[i].second;
    }
    os << "\n";
    return os.str();
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

void write_csv(std::ostream& os, const RunManifest& manifest,
               const std::vector<std::vector<std::string>>& rows) {
    os << manifest.header();
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            os << row[i];
        }
        os << "\n";
    }
}

}  // namespace kstab
