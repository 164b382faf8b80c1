#include "rft/serialization.hpp"

#include <fstream>
#include <sstream>

#include "rft/error.hpp"

namespace rft {

using nlohmann::json;

namespace {

std::string_view kind_name(NodeKind k) {
    switch (k) {
        case NodeKind::leaf: return "leaf";
        case NodeKind::numeric_split: return "numeric";
        case NodeKind::categorical_split: return "categorical";
    }
    return "leaf";
}

json counts_json(const LabelDistribution& d) { return json{{"counts", d.counts()}}; }

json node_json(const Tree& tree, NodeId id) {
    const Node& n = tree.node(id);
    json j{{"kind", kind_name(n.kind)}};
    if (n.is_leaf()) {
        j["leaf_counts"] = n.distribution.counts();
        return j;
    }
    j["feature"] = n.feature;
    if (n.kind == NodeKind::numeric_split) {
        j["threshold"] = n.threshold;
        j["retained_left"] = counts_json(n.retained_left);
        j["retained_right"] = counts_json(n.retained_right);
    }
    json children = json::array();
    for (auto c : n.children) children.push_back(node_json(tree, c));
    j["children"] = std::move(children);
    return j;
}

// Structural reader that reports the JSON path of whatever is wrong.
class Reader {
public:
    explicit Reader(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& what) const { throw DataError("model " + path_ + ": " + what); }

    const json& field(const json& j, const char* key) const {
        if (!j.is_object()) fail("expected an object");
        auto it = j.find(key);
        if (it == j.end()) fail(std::string("missing field '") + key + "'");
        return *it;
    }

    Reader at(const char* key) const { return Reader(path_ + "." + key); }
    Reader at(std::size_t index) const { return Reader(path_ + "[" + std::to_string(index) + "]"); }

    template <typename T>
    T get(const json& j, const char* key) const {
        const json& v = field(j, key);
        try {
            return v.get<T>();
        } catch (const json::exception&) {
            at(key).fail("wrong type");
        }
    }

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

LabelDistribution read_counts(const json& j, const Reader& r) {
    if (!j.is_array()) r.fail("expected an array of counts");
    std::vector<std::uint64_t> counts;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_unsigned()) r.at(i).fail("count must be a non-negative integer");
        counts.push_back(j[i].get<std::uint64_t>());
    }
    return LabelDistribution::from_counts(std::move(counts));
}

NodeId read_node(Tree& tree, const json& j, const Reader& r) {
    const auto kind = r.get<std::string>(j, "kind");
    Node n;
    if (kind == "leaf") {
        n.distribution = read_counts(r.field(j, "leaf_counts"), r.at("leaf_counts"));
        return tree.add(std::move(n));
    }
    if (kind == "numeric") {
        n.kind = NodeKind::numeric_split;
        n.threshold = r.get<double>(j, "threshold");
        n.retained_left = read_counts(r.at("retained_left").field(r.field(j, "retained_left"), "counts"),
                                      r.at("retained_left"));
        n.retained_right = read_counts(r.at("retained_right").field(r.field(j, "retained_right"), "counts"),
                                       r.at("retained_right"));
    } else if (kind == "categorical") {
        n.kind = NodeKind::categorical_split;
    } else {
        r.at("kind").fail("unknown node kind '" + kind + "'");
    }
    n.feature = r.get<int>(j, "feature");
    const json& children = r.field(j, "children");
    if (!children.is_array()) r.at("children").fail("expected an array");
    const NodeId id = tree.add(std::move(n));
    std::vector<NodeId> ids;
    for (std::size_t i = 0; i < children.size(); ++i) ids.push_back(read_node(tree, children[i], r.at("children").at(i)));
    tree.node(id).children = std::move(ids);
    return id;
}

}  // namespace

json schema_to_json(const Schema& schema) {
    json features = json::array();
    for (const auto& f : schema.features) {
        json jf{{"name", f.name}, {"type", f.kind == FeatureKind::numeric ? "numeric" : "categorical"}};
        if (f.kind == FeatureKind::categorical) jf["values"] = f.categories;
        features.push_back(std::move(jf));
    }
    return json{{"features", std::move(features)}, {"classes", schema.classes}, {"label", schema.label_name}};
}

namespace {

Schema read_schema(const json& j, const Reader& r) {
    Schema s;
    const json& features = r.field(j, "features");
    if (!features.is_array()) r.at("features").fail("expected an array");
    for (std::size_t i = 0; i < features.size(); ++i) {
        const Reader fr = r.at("features").at(i);
        FeatureSpec f;
        f.name = fr.get<std::string>(features[i], "name");
        const auto type = fr.get<std::string>(features[i], "type");
        if (type == "numeric") {
            f.kind = FeatureKind::numeric;
        } else if (type == "categorical") {
            f.kind = FeatureKind::categorical;
            f.categories = fr.get<std::vector<std::string>>(features[i], "values");
        } else {
            fr.at("type").fail("unknown feature type '" + type + "'");
        }
        s.features.push_back(std::move(f));
    }
    s.classes = r.get<std::vector<std::string>>(j, "classes");
    if (j.contains("label")) s.label_name = r.get<std::string>(j, "label");
    return s;
}

}  // namespace

Schema schema_from_json(const json& j) { return read_schema(j, Reader("schema")); }

json to_json(const Forest& forest) {
    json trees = json::array();
    for (const auto& t : forest.trees) trees.push_back(node_json(t, 0));
    return json{{"version", model_format_version},
                {"provenance", forest.provenance},
                {"schema", schema_to_json(forest.schema)},
                {"weights", forest.weights},
                {"trees", std::move(trees)}};
}

Forest forest_from_json(const json& j) {
    const Reader root("$");
    const json& version = root.field(j, "version");
    if (!version.is_number_integer() || version.get<long long>() != model_format_version)
        throw DataError("unsupported model version " + version.dump() + " (expected " +
                        std::to_string(model_format_version) + ")");
    Forest f;
    f.provenance = root.get<std::string>(j, "provenance");
    f.schema = read_schema(root.field(j, "schema"), root.at("schema"));
    f.weights = root.get<std::vector<double>>(j, "weights");
    const json& trees = root.field(j, "trees");
    if (!trees.is_array()) root.at("trees").fail("expected an array");
    for (std::size_t i = 0; i < trees.size(); ++i) {
        Tree t;
        read_node(t, trees[i], root.at("trees").at(i));
        f.trees.push_back(std::move(t));
    }
    validate(f);
    return f;
}

std::string serialize(const Forest& forest) { return to_json(forest).dump(); }

Forest deserialize(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw DataError("malformed model at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return forest_from_json(j);
}

void save_forest(const Forest& forest, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << serialize(forest) << '\n';
    if (!out) throw DataError("failed writing " + path.string());
}

Forest load_forest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize(buf.str());
}

}  // namespace rft
