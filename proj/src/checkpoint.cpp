#include "relnet/checkpoint.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace relnet {

void checkpoint_write(const Checkpoint& ck, const std::string& path) {
    nlohmann::json j;
    j["model"] = ck.model;
    j["meta"] = ck.meta;
    nlohmann::json params = nlohmann::json::array();
    for (const auto& e : ck.params) {
        params.push_back({{"name", e.name},
                          {"rows", e.tensor.rows()},
                          {"cols", e.tensor.cols()},
                          {"values", e.tensor.values()}});
    }
    j["params"] = params;
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("checkpoint_write: cannot open " + path);
    }
    out << j.dump() << "\n";
}

Checkpoint checkpoint_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("checkpoint_read: cannot open " + path);
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("checkpoint_read: parse error in " + path + ": " + e.what());
    }
    Checkpoint ck;
    ck.model = j.at("model").get<std::string>();
    ck.meta = j.at("meta").get<std::map<std::string, std::string>>();
    for (const auto& p : j.at("params")) {
        ck.params.add(p.at("name").get<std::string>(),
                      Matrix(p.at("rows").get<std::size_t>(), p.at("cols").get<std::size_t>(),
                             p.at("values").get<std::vector<double>>()));
    }
    return ck;
}

}  // namespace relnet
