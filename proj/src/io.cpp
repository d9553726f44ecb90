#include "cribmac/io.hpp"

#include <fstream>

namespace cribmac {

namespace {

using nlohmann::json;

std::vector<double> number_row(const json& j, const char* what) {
    if (!j.is_array()) throw Error(std::string(what) + ": expected an array of numbers");
    std::vector<double> v;
    v.reserve(j.size());
    for (const auto& x : j) {
        if (!x.is_number()) throw Error(std::string(what) + ": non-numeric entry");
        v.push_back(x.get<double>());
    }
    return v;
}

Kernel kernel_from(const json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows)
        throw Error(std::string(what) + ": expected " + std::to_string(rows) + " rows");
    std::vector<ProbVector> out;
    out.reserve(rows);
    for (const auto& row : j) {
        std::vector<double> v = number_row(row, what);
        if (v.size() != cols)
            throw Error(std::string(what) + ": row length != " + std::to_string(cols));
        out.emplace_back(std::move(v));
    }
    return Kernel(std::move(out));
}

std::size_t size_field(const json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_unsigned())
        throw Error(std::string("channel/law JSON: missing or invalid ") + key);
    return j[key].get<std::size_t>();
}

}  // namespace

bool is_wiretap_json(const nlohmann::json& j) { return j.contains("wyz") || j.contains("y_size"); }

MacChannel mac_channel_from_json(const nlohmann::json& j) {
    std::size_t x1 = size_field(j, "x1_size");
    std::size_t x2 = size_field(j, "x2_size");
    std::size_t z = size_field(j, "z_size");
    if (!j.contains("w")) throw Error("channel JSON: missing w");
    return MacChannel(x1, x2, z, kernel_from(j["w"], x1 * x2, z, "w"));
}

WiretapMac wiretap_mac_from_json(const nlohmann::json& j) {
    std::size_t x1 = size_field(j, "x1_size");
    std::size_t x2 = size_field(j, "x2_size");
    std::size_t y = size_field(j, "y_size");
    std::size_t z = size_field(j, "z_size");
    if (!j.contains("wyz")) throw Error("wiretap JSON: missing wyz");
    return WiretapMac(x1, x2, y, z, kernel_from(j["wyz"], x1 * x2, y * z, "wyz"));
}

nlohmann::json to_json(const MacChannel& mac) {
    json rows = json::array();
    for (std::size_t r = 0; r < mac.w().input_size(); ++r) {
        json row = json::array();
        for (double x : mac.w().row(r)) row.push_back(x);
        rows.push_back(std::move(row));
    }
    return json{{"x1_size", mac.x1_size()},
                {"x2_size", mac.x2_size()},
                {"z_size", mac.z_size()},
                {"w", std::move(rows)}};
}

nlohmann::json to_json(const WiretapMac& wmac) {
    json rows = json::array();
    for (std::size_t r = 0; r < wmac.wyz().input_size(); ++r) {
        json row = json::array();
        for (double x : wmac.wyz().row(r)) row.push_back(x);
        rows.push_back(std::move(row));
    }
    return json{{"x1_size", wmac.x1_size()},
                {"x2_size", wmac.x2_size()},
                {"y_size", wmac.y_size()},
                {"z_size", wmac.z_size()},
                {"wyz", std::move(rows)}};
}

InputLaw law_from_json(const nlohmann::json& j) {
    if (!j.contains("type") || !j["type"].is_string())
        throw Error("law JSON: missing type (joint | with_aux)");
    std::string type = j["type"].get<std::string>();
    if (type == "joint") {
        std::size_t x1 = size_field(j, "x1_size");
        std::size_t x2 = size_field(j, "x2_size");
        if (!j.contains("p") || !j["p"].is_array() || j["p"].size() != x1)
            throw Error("law JSON: p must have x1_size rows");
        std::vector<double> t;
        t.reserve(x1 * x2);
        for (const auto& row : j["p"]) {
            std::vector<double> v = number_row(row, "p");
            if (v.size() != x2) throw Error("law JSON: p row length != x2_size");
            t.insert(t.end(), v.begin(), v.end());
        }
        return InputLaw::joint(JointTable({"X1", "X2"}, {x1, x2}, std::move(t)));
    }
    if (type == "with_aux") {
        if (!j.contains("p_u")) throw Error("law JSON: missing p_u");
        ProbVector pu(number_row(j["p_u"], "p_u"));
        std::size_t u = pu.size();
        if (!j.contains("p_x1_given_u") || !j.contains("p_x2_given_u"))
            throw Error("law JSON: missing conditional kernels");
        const auto& k1 = j["p_x1_given_u"];
        const auto& k2 = j["p_x2_given_u"];
        if (!k1.is_array() || k1.size() != u || !k2.is_array() || k2.size() != u)
            throw Error("law JSON: kernels need one row per u");
        std::size_t x1 = number_row(k1[0], "p_x1_given_u").size();
        std::size_t x2 = number_row(k2[0], "p_x2_given_u").size();
        return InputLaw::with_aux(std::move(pu), kernel_from(k1, u, x1, "p_x1_given_u"),
                                  kernel_from(k2, u, x2, "p_x2_given_u"));
    }
    throw Error("law JSON: unknown type " + type);
}

nlohmann::json to_json(const InputLaw& law) {
    if (!law.has_aux()) {
        const JointTable& t = law.joint_table();
        json rows = json::array();
        for (std::size_t a = 0; a < t.shape()[0]; ++a) {
            json row = json::array();
            for (std::size_t b = 0; b < t.shape()[1]; ++b)
                row.push_back(t.flat(a * t.shape()[1] + b));
            rows.push_back(std::move(row));
        }
        return json{{"type", "joint"},
                    {"x1_size", t.shape()[0]},
                    {"x2_size", t.shape()[1]},
                    {"p", std::move(rows)}};
    }
    json pu = json::array();
    for (double x : law.p_u()) pu.push_back(x);
    auto kernel_rows = [](const Kernel& k) {
        json rows = json::array();
        for (std::size_t r = 0; r < k.input_size(); ++r) {
            json row = json::array();
            for (double x : k.row(r)) row.push_back(x);
            rows.push_back(std::move(row));
        }
        return rows;
    };
    return json{{"type", "with_aux"},
                {"p_u", std::move(pu)},
                {"p_x1_given_u", kernel_rows(law.p_x1_given_u())},
                {"p_x2_given_u", kernel_rows(law.p_x2_given_u())}};
}

nlohmann::json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace cribmac
