#include "escop/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "escop/util.hpp"

namespace escop {

nlohmann::json copula_to_json(const OrderedFactorCopula& c) {
    nlohmann::json g = nlohmann::json::array();
    for (int k = 1; k <= c.dim(); ++k) g.push_back(c.g(k).to_json());
    return {{"d", c.dim()}, {"g", g}};
}

OrderedFactorCopula copula_from_json(const nlohmann::json& j, const GridSpec& grid) {
    const int d = j.at("d").get<int>();
    std::vector<DistortionFn> g;
    for (const auto& fj : j.at("g")) g.push_back(DistortionFn::from_json(fj));
    return OrderedFactorCopula::make(d, std::move(g), grid);
}

nlohmann::json hfamily_to_json(const HFamily& h) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& fn : h.H) arr.push_back(fn.to_json());
    return {{"d", h.d}, {"H", arr}};
}

HFamily hfamily_from_json(const nlohmann::json& j) {
    HFamily h;
    h.d = j.at("d").get<int>();
    for (const auto& fj : j.at("H")) h.H.push_back(DistortionFn::from_json(fj));
    if (static_cast<int>(h.H.size()) != h.d) {
        throw std::invalid_argument("H family: expected d entries");
    }
    return h;
}

std::string batch_to_csv(const SampleBatch& b) {
    std::string out;
    out.reserve(b.n * static_cast<std::size_t>(b.d) * 26 + 64);
    for (int k = 1; k <= b.d; ++k) {
        if (k > 1) out.push_back(',');
        out += "u" + std::to_string(k);
    }
    out += "\r\n";
    char buf[40];
    for (std::size_t i = 0; i < b.n; ++i) {
        for (int k = 0; k < b.d; ++k) {
            if (k > 0) out.push_back(',');
            std::snprintf(buf, sizeof(buf), "%.17g", b.at(i, k));
            out += buf;
        }
        out += "\r\n";
    }
    return out;
}

void write_batch_csv(const SampleBatch& b, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    const std::string csv = batch_to_csv(b);
    f.write(csv.data(), static_cast<std::streamsize>(csv.size()));
}

nlohmann::json batch_metadata(const SampleBatch& b) {
    char hash[24];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(fnv1a(b.family)));
    return {{"method", b.method}, {"seed", b.seed},     {"n", b.n},
            {"d", b.d},           {"family", b.family}, {"family_hash", hash}};
}

void write_batch_metadata(const SampleBatch& b, const std::string& path) {
    write_json_file(batch_metadata(b), path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    nlohmann::json j;
    f >> j;
    return j;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f << j.dump(2) << "\n";
}

}  // namespace escop
