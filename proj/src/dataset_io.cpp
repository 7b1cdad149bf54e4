#include <fstream>
#include <stdexcept>

#include "json.hpp"
#include "relnet/scene.hpp"

namespace relnet {

namespace {

using nlohmann::json;

json graph_to_json(const RelationGraph& g) {
    json a = json::array();
    for (std::uint8_t v : g.adj) {
        a.push_back(static_cast<int>(v));
    }
    return a;
}

RelationGraph graph_from_json(const json& a) {
    if (!a.is_array() || a.size() != kTypeCount * kTypeCount) {
        throw std::runtime_error("adjacency array must have 16 entries");
    }
    RelationGraph g;
    for (std::size_t i = 0; i < g.adj.size(); ++i) {
        g.adj[i] = static_cast<std::uint8_t>(a[i].get<int>());
    }
    return g;
}

}  // namespace

void dataset_write(const Dataset& ds, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("dataset_write: cannot open " + path);
    }
    json header;
    header["version"] = 1;
    header["target_mode"] = to_string(ds.target_mode);
    header["relation"] = to_string(ds.relation);
    header["feature_layout"] = {"x", "y", "r", "g", "b", "size",
                                "type0", "type1", "type2", "type3"};
    header["generator_params"] = {{"d0", ds.gen_params.d0},
                                  {"sigma_d", ds.gen_params.sigma_d},
                                  {"sigma_c", ds.gen_params.sigma_c}};
    header["seed"] = ds.seed;
    json classes = json::array();
    for (const auto& c : ds.classes) {
        classes.push_back({{"class_id", c.class_id},
                           {"position_adj", graph_to_json(c.position_graph)},
                           {"color_adj", graph_to_json(c.color_graph)}});
    }
    header["classes"] = classes;
    out << header.dump() << "\n";

    for (const auto& [ci, scene] : ds.samples) {
        json line;
        line["class_index"] = ci;
        line["D"] = scene.values();
        out << line.dump() << "\n";
    }
    if (!out) {
        throw std::runtime_error("dataset_write: write failed for " + path);
    }
}

Dataset dataset_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("dataset_read: cannot open " + path);
    }
    std::string line;
    std::size_t line_no = 0;
    Dataset ds;
    try {
        if (!std::getline(in, line)) {
            throw std::runtime_error("missing header line");
        }
        ++line_no;
        const json header = json::parse(line);
        if (header.at("version").get<int>() != 1) {
            throw std::runtime_error("unsupported version");
        }
        ds.target_mode = target_mode_from_string(header.at("target_mode").get<std::string>());
        ds.relation = relation_mode_from_string(header.at("relation").get<std::string>());
        const json& gp = header.at("generator_params");
        ds.gen_params.d0 = gp.at("d0").get<double>();
        ds.gen_params.sigma_d = gp.at("sigma_d").get<double>();
        ds.gen_params.sigma_c = gp.at("sigma_c").get<double>();
        ds.seed = header.at("seed").get<std::uint64_t>();
        for (const json& c : header.at("classes")) {
            SceneClass cls;
            cls.class_id = c.at("class_id").get<std::size_t>();
            cls.position_graph = graph_from_json(c.at("position_adj"));
            cls.color_graph = graph_from_json(c.at("color_adj"));
            ds.classes.push_back(std::move(cls));
        }
        while (std::getline(in, line)) {
            ++line_no;
            if (line.empty()) {
                continue;
            }
            const json rec = json::parse(line);
            const std::size_t ci = rec.at("class_index").get<std::size_t>();
            if (ci >= ds.classes.size()) {
                throw std::runtime_error("class_index out of range in record " +
                                         std::to_string(line_no - 1));
            }
            std::vector<double> values = rec.at("D").get<std::vector<double>>();
            if (values.size() != kFlatSize) {
                throw std::runtime_error("record " + std::to_string(line_no - 1) +
                                         " has " + std::to_string(values.size()) +
                                         " values, expected " + std::to_string(kFlatSize));
            }
            ds.samples.emplace_back(ci, Matrix(kObjectCount, kFeatureCount, std::move(values)));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("dataset_read: parse error at line " +
                                 std::to_string(line_no) + " of " + path + ": " + e.what());
    } catch (const std::runtime_error& e) {
        throw std::runtime_error("dataset_read: parse error at line " +
                                 std::to_string(line_no) + " of " + path + ": " + e.what());
    }
    return ds;
}

}  // namespace relnet
