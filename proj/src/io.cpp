#include "fpres/io.hpp"

#include "fpres/errors.hpp"

#include <openssl/sha.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace fpres {

json complex_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        fail(ErrorKind::Schema, "complex number must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json matrix_to_json(const Eigen::MatrixXcd& M) {
    json rows = json::array();
    for (int a = 0; a < M.rows(); ++a) {
        json row = json::array();
        for (int b = 0; b < M.cols(); ++b) row.push_back(complex_to_json(M(a, b)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_array()) fail(ErrorKind::Schema, "matrix must be an array of rows");
    const auto n = static_cast<int>(j.size());
    Eigen::MatrixXcd M(n, n);
    for (int a = 0; a < n; ++a) {
        if (!j[a].is_array() || static_cast<int>(j[a].size()) != n) fail(ErrorKind::Schema, "matrix must be square");
        for (int b = 0; b < n; ++b) M(a, b) = complex_from_json(j[a][b]);
    }
    return M;
}

json to_json(const ModularData& md) {
    json j;
    j["schema"] = "modular-data v1";
    j["labels"] = md.labels();
    json h = json::array();
    for (const auto& x : md.h()) h.push_back(to_string(x));
    j["h"] = h;
    j["c"] = to_string(md.c());
    j["conjugation"] = md.conjugation();
    if (md.is_product()) {
        json f = json::array();
        for (const auto& part : md.factors()) f.push_back(to_json(*part));
        j["factors"] = f;
    } else {
        j["S"] = matrix_to_json(md.S());
    }
    return j;
}

MDPtr modular_data_from_json(const json& j) {
    try {
        if (j.contains("schema") && j["schema"] != "modular-data v1")
            fail(ErrorKind::Schema, "unsupported schema " + j["schema"].dump());
        if (j.contains("factors")) {
            std::vector<MDPtr> parts;
            for (const auto& f : j["factors"]) parts.push_back(modular_data_from_json(f));
            return ModularData::product(parts);
        }
        std::vector<Rational> h;
        for (const auto& x : j.at("h")) h.push_back(parse_rational(x.get<std::string>()));
        return ModularData::dense(j.at("labels").get<std::vector<std::string>>(), h,
                                  parse_rational(j.at("c").get<std::string>()), matrix_from_json(j.at("S")),
                                  j.at("conjugation").get<std::vector<int>>());
    } catch (const json::exception& e) {
        fail(ErrorKind::Schema, std::string("modular-data: ") + e.what());
    }
}

json bundle_to_json(const FixedPointBundle& b, const ModularData& md) {
    json fixed = json::array(), eta = json::array(), F = json::array();
    for (int a : b.fixed) fixed.push_back(md.labels()[a]);
    for (auto e : b.eta) eta.push_back(complex_to_json(e));
    for (const auto& [key, turns] : b.F)
        F.push_back({{"a", md.labels()[key.first]}, {"K", md.labels()[key.second]}, {"phase", to_string(turns)}});
    return {{"schema", "fp-bundle v1"},
            {"current", md.labels()[b.current]},
            {"fixed_fields", fixed},
            {"S_J", matrix_to_json(b.S)},
            {"eta", eta},
            {"F", F}};
}

namespace {

int field_ref(const json& j, const ModularData& md) {
    int id = -1;
    if (j.is_number_integer()) id = j.get<int>();
    else if (j.is_string()) id = md.find(j.get<std::string>());
    else fail(ErrorKind::Schema, "field reference must be a label or an id");
    if (id < 0 || id >= md.size()) fail(ErrorKind::Schema, "unknown field " + j.dump());
    return id;
}

}  // namespace

FixedPointBundle bundle_from_json(const json& j, const ModularData& md) {
    try {
        if (j.value("schema", "") != "fp-bundle v1") fail(ErrorKind::Schema, "expected schema fp-bundle v1");
        FixedPointBundle b;
        b.current = field_ref(j.at("current"), md);
        for (const auto& f : j.at("fixed_fields")) b.fixed.push_back(field_ref(f, md));
        if (!std::is_sorted(b.fixed.begin(), b.fixed.end()))
            fail(ErrorKind::Schema, "fixed_fields must be in ascending field order");
        b.S = matrix_from_json(j.at("S_J"));
        if (b.S.rows() != static_cast<int>(b.fixed.size())) fail(ErrorKind::Schema, "S_J size differs from fixed_fields");
        for (const auto& e : j.at("eta")) b.eta.push_back(complex_from_json(e));
        if (b.eta.size() != b.fixed.size()) fail(ErrorKind::Schema, "eta size differs from fixed_fields");
        if (j.contains("F"))
            for (const auto& e : j["F"])
                b.F[{field_ref(e.at("a"), md), field_ref(e.at("K"), md)}] =
                    frac(parse_rational(e.at("phase").get<std::string>()));
        return b;
    } catch (const json::exception& e) {
        fail(ErrorKind::Schema, std::string("fp-bundle: ") + e.what());
    }
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), digest);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned char c : digest) {
        out += hex[c >> 4];
        out += hex[c & 15];
    }
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::InvalidInput, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::InvalidInput, "cannot write " + tmp.string());
        out << content;
        if (!out) fail(ErrorKind::ResourceLimit, "write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string dump(const json& j) { return j.dump() + "\n"; }

int field_from_ref(const ModularData& md, const std::string& ref) {
    int id = md.find(ref);
    if (id >= 0) return id;
    try {
        std::size_t used = 0;
        id = std::stoi(ref, &used);
        if (used == ref.size() && id >= 0 && id < md.size()) return id;
    } catch (const std::exception&) {
    }
    fail(ErrorKind::InvalidInput, "unknown field '" + ref + "'");
}

json currents_to_json(const Theory& th) {
    const auto& md = *th.md;
    const auto& C = *th.center;
    json list = json::array();
    for (int e = 0; e < C.size(); ++e) {
        int J = C.current(e);
        list.push_back({{"field", md.labels()[J]},
                        {"id", J},
                        {"order", C.group().element_order(e)},
                        {"spin", to_string(C.spin(e))},
                        {"fixed_points", fixed_fields(C, e, md.size()).size()},
                        {"bundle", th.bundles->has(e)}});
    }
    return {{"schema", "currents v1"}, {"group", C.group().orders()}, {"currents", list}};
}

}  // namespace fpres
