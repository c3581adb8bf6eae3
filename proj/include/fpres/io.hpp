#pragma once

#include "fpres/modular_data.hpp"
#include "fpres/simple_currents.hpp"

#include <json.hpp>

#include <string>

namespace fpres {

using json = nlohmann::json;

json matrix_to_json(const Eigen::MatrixXcd& M);
Eigen::MatrixXcd matrix_from_json(const json& j);
json complex_to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const ModularData& md);
MDPtr modular_data_from_json(const json& j);

// "fp-bundle v1": fields and currents by label, twists as "r/n" turns.
json bundle_to_json(const FixedPointBundle& b, const ModularData& md);
// Accepts labels or integer field ids.
FixedPointBundle bundle_from_json(const json& j, const ModularData& md);

// Field id from a label or a decimal id.
int field_from_ref(const ModularData& md, const std::string& ref);
// "currents v1": every center element with its order, spin and fixed points.
json currents_to_json(const Theory& th);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::string& path);
// Write via a temporary file and rename so readers never see partial files.
void write_file_atomic(const std::string& path, const std::string& content);
// Canonical serialization used for hashing and output files.
std::string dump(const json& j);

}  // namespace fpres
