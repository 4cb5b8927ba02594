#ifndef ESCOP_SERIALIZE_HPP
#define ESCOP_SERIALIZE_HPP

#include <string>

#include <json.hpp>

#include "escop/batch.hpp"
#include "escop/copula.hpp"

namespace escop {

nlohmann::json copula_to_json(const OrderedFactorCopula& c);
OrderedFactorCopula copula_from_json(const nlohmann::json& j,
                                     const GridSpec& grid = GridSpec{});

nlohmann::json hfamily_to_json(const HFamily& h);
HFamily hfamily_from_json(const nlohmann::json& j);

// RFC 4180 CSV with header u1,...,ud and 17-significant-digit decimals.
std::string batch_to_csv(const SampleBatch& b);
void write_batch_csv(const SampleBatch& b, const std::string& path);

// Provenance sidecar {method, seed, n, d, family, family_hash}.
nlohmann::json batch_metadata(const SampleBatch& b);
void write_batch_metadata(const SampleBatch& b, const std::string& path);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

}  // namespace escop

#endif
