#include "fpres/errors.hpp"
#include "fpres/extension.hpp"
#include "fpres/generators.hpp"
#include "fpres/io.hpp"
#include "fpres/validator.hpp"
#include "fpres/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace fpres;
namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kValidation = 1, kUsage = 2, kResource = 3 };

struct Global {
    std::string cache_dir;
    double tolerance = 1e-8;
    unsigned seed = 0;
    std::string out;
};

GeneratorOptions generator_options(const Global& g) {
    GeneratorOptions opt;
    opt.cache_dir = g.cache_dir.empty() ? cache_dir_from_env() : g.cache_dir;
    return opt;
}

// Collects inputs and outputs so each run leaves a reproducible manifest.
class Manifest {
public:
    Manifest(std::string command, const Global& g, std::vector<std::string> args)
        : j_({{"schema", "run-manifest v1"},
              {"tool", "fpres"},
              {"version", kVersion},
              {"command", std::move(command)},
              {"arguments", std::move(args)},
              {"conventions",
               {{"seed", g.seed},
                {"root", g.seed == 0 ? "principal" : "seeded"},
                {"representatives", g.seed == 0 ? "smallest id" : "seeded"},
                {"tolerance", g.tolerance}}},
              {"inputs", json::object()},
              {"outputs", json::object()}}) {}

    void input(const std::string& spec) {
        if (fs::exists(spec)) j_["inputs"][spec] = sha256_hex(read_file(spec));
        else j_["inputs"][spec] = "generated";
    }
    void output(const std::string& path, const std::string& bytes) { j_["outputs"][path] = sha256_hex(bytes); }
    const json& data() const { return j_; }

private:
    json j_;
};

// Writes to the --out path (file or directory entry) or stdout.
class Sink {
public:
    Sink(const Global& g, Manifest& m) : out_(g.out), m_(m) {}

    void single(const json& j) {
        std::string bytes = dump(j);
        if (out_.empty()) {
            std::cout << bytes;
            return;
        }
        write_file_atomic(out_, bytes);
        m_.output(out_, bytes);
        write_file_atomic(out_ + ".manifest.json", dump(m_.data()));
    }

    void file(const std::string& name, const json& j) {
        std::string path = (fs::path(out_) / name).string();
        std::string bytes = dump(j);
        write_file_atomic(path, bytes);
        m_.output(name, bytes);
    }

    void finish() { write_file_atomic((fs::path(out_) / "manifest.json").string(), dump(m_.data())); }

private:
    std::string out_;
    Manifest& m_;
};

int run_generate(const Global& g, const std::string& family, int N, int k) {
    Manifest m("generate", g, {family, std::to_string(N), std::to_string(k)});
    MDPtr md;
    if (family == "su2") {
        if (k < 1) fail(ErrorKind::InvalidInput, "su2 needs --k");
        md = su2(k);
    } else if (family == "suN") {
        if (N < 2 || k < 1) fail(ErrorKind::InvalidInput, "suN needs --N and --k");
        md = suN(N, k, generator_options(g));
    } else if (family == "ising") {
        md = ising();
    } else {
        fail(ErrorKind::InvalidInput, "unknown family '" + family + "'");
    }
    Sink(g, m).single(to_json(*md));
    return kOk;
}

int run_tensor(const Global& g, const std::vector<std::string>& models) {
    Manifest m("tensor", g, models);
    std::vector<MDPtr> parts;
    for (const auto& s : models) {
        m.input(s);
        parts.push_back(load_model(s, generator_options(g)));
    }
    MDPtr md = parts.size() == 1 ? parts[0] : ModularData::product(parts);
    Sink(g, m).single(to_json(*md));
    return kOk;
}

int run_currents(const Global& g, const std::string& model) {
    Manifest m("currents", g, {model});
    m.input(model);
    Theory th = make_theory(load_model(model, generator_options(g)));
    Sink(g, m).single(currents_to_json(th));
    return kOk;
}

std::map<int, FixedPointBundle> load_bundles(const ModularData& md, const std::vector<std::string>& files, Manifest& m) {
    std::map<int, FixedPointBundle> out;
    for (const auto& f : files) {
        m.input(f);
        auto b = bundle_from_json(json::parse(read_file(f)), md);
        out[b.current] = std::move(b);
    }
    return out;
}

int run_extend(const Global& g, const std::string& model, const std::vector<std::string>& currents,
               const std::vector<std::string>& bundle_files) {
    std::vector<std::string> args = {model};
    args.insert(args.end(), currents.begin(), currents.end());
    args.insert(args.end(), bundle_files.begin(), bundle_files.end());
    Manifest m("extend", g, args);
    m.input(model);
    if (g.out.empty()) fail(ErrorKind::InvalidInput, "extend writes several files; --out DIR is required");
    MDPtr md = load_model(model, generator_options(g));
    Theory th = make_theory(md, load_bundles(*md, bundle_files, m));
    std::vector<int> fields;
    for (const auto& c : currents) fields.push_back(field_from_ref(*md, c));
    Subgroup H = subgroup_of_currents(*th.center, fields);

    Conventions conv;
    conv.seed = g.seed;
    conv.tolerance = g.tolerance;
    conv.strict = false;
    ExtendedTheory ext = extend(th, H, conv);
    auto conditions = check_conditions(ext.as_theory(), g.tolerance);
    auto fusion = check_fusion_integrality(*ext.md);

    json report = ext.report;
    report["conditions"] = conditions.to_json();
    report["fusion"] = fusion.to_json();
    bool ok = report["checks"]["problems"].empty() && report["checks"]["counting_violations"] == 0 &&
              conditions.passes() && fusion.integral;
    report["passes"] = ok;

    Sink sink(g, m);
    sink.file("extended.json", to_json(*ext.md));
    for (const auto& [cls, b] : ext.resolved) {
        std::string name = "bundle_" + std::to_string(cls) + ".json";
        sink.file(name, bundle_to_json(b, *ext.md));
    }
    sink.file("report.json", report);
    sink.finish();
    std::cerr << "extended fields: " << ext.md->size() << ", resolved bundles: " << ext.resolved.size()
              << (ok ? ", all checks pass" : ", CHECKS FAILED") << "\n";
    return ok ? kOk : kValidation;
}

int run_validate(const Global& g, const std::string& model, const std::vector<std::string>& bundle_files) {
    std::vector<std::string> args = {model};
    args.insert(args.end(), bundle_files.begin(), bundle_files.end());
    Manifest m("validate", g, args);
    m.input(model);
    MDPtr md = load_model(model, generator_options(g));
    ConditionReport rep;
    json modular;
    auto mc = check_modular(*md);
    modular = {{"max_deviation", mc.max()}, {"passes", mc.passes(g.tolerance)}};
    if (bundle_files.empty()) {
        rep = check_conditions(make_theory(md), g.tolerance);
    } else {
        try {
            rep = validate_bundles(md, load_bundles(*md, bundle_files, m), g.tolerance);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::MalformedBundle) throw;
            rep.exact("{1}", false, {{"error", e.what()}});
        }
    }
    json j = rep.to_json();
    j["modular"] = modular;
    bool ok = rep.passes() && mc.passes(g.tolerance);
    j["passes"] = ok;
    Sink(g, m).single(j);
    return ok ? kOk : kValidation;
}

int run_fusion(const Global& g, const std::string& model) {
    Manifest m("fusion", g, {model});
    m.input(model);
    MDPtr md = load_model(model, generator_options(g));
    json j = {{"schema", "fusion v1"}, {"labels", md->labels()}};
    if (md->size() <= 400) {
        auto N = verlinde_fusion(*md, 1e-6);
        json table = json::array();
        for (int a = 0; a < N.n; ++a) {
            json rows = json::array();
            for (int b = 0; b < N.n; ++b) {
                json row = json::array();
                for (int c = 0; c < N.n; ++c) row.push_back(N(a, b, c));
                rows.push_back(row);
            }
            table.push_back(rows);
        }
        j["N"] = table;
        j["max_residual"] = N.max_residual;
        j["integral"] = true;
    } else {
        auto r = check_fusion_integrality(*md);
        j["summary"] = r.to_json();
        j["integral"] = r.integral;
    }
    Sink(g, m).single(j);
    return j["integral"] ? kOk : kValidation;
}

int exit_code(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::ResourceLimit:
        return kResource;
    case ErrorKind::FusionIntegrality:
    case ErrorKind::MalformedBundle:
    case ErrorKind::ResolutionInconsistency:
        return kValidation;
    default:
        return kUsage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simple-current extensions with fixed-point resolution"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);
    Global g;
    app.add_option("--cache-dir", g.cache_dir, "Disk cache for generated modular data (default $FPRES_CACHE_DIR)");
    app.add_option("--tolerance", g.tolerance, "Tolerance for matrix identities")->check(CLI::PositiveNumber);
    app.add_option("--seed-conventions", g.seed,
                   "0: canonical orbit representatives and principal roots; otherwise seeded choices");
    app.add_option("--out", g.out, "Output file (extend: directory); stdout when omitted");

    std::string family;
    int N = 0, k = 0;
    auto* gen = app.add_subcommand("generate", "Write modular data for a model family");
    gen->add_option("family", family, "su2, suN or ising")->required();
    gen->add_option("--N", N, "Rank plus one for suN");
    gen->add_option("--k", k, "Level");

    std::vector<std::string> models;
    auto* ten = app.add_subcommand("tensor", "Tensor product of models");
    ten->add_option("models", models, "Model files or specs")->required();

    std::string model;
    auto* cur = app.add_subcommand("currents", "List simple currents");
    cur->add_option("model", model, "Model file or spec (e.g. suN:5:5*suN:5:5)")->required();

    std::vector<std::string> currents, bundles;
    auto* ext = app.add_subcommand("extend", "Extend by a group of integer-spin currents");
    ext->add_option("model", model, "Model file or spec")->required();
    ext->add_option("--currents", currents, "Generators by label or field id")->required();
    ext->add_option("--bundle", bundles, "fp-bundle v1 files for currents with several fixed points");

    auto* val = app.add_subcommand("validate", "Check fixed-point resolution conditions");
    val->add_option("model", model, "Model file or spec")->required();
    val->add_option("bundles", bundles, "fp-bundle v1 files (default: the built-in bundles)");

    auto* fus = app.add_subcommand("fusion", "Verlinde fusion coefficients");
    fus->add_option("model", model, "Model file or spec")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    try {
        if (*gen) return run_generate(g, family, N, k);
        if (*ten) return run_tensor(g, models);
        if (*cur) return run_currents(g, model);
        if (*ext) return run_extend(g, model, currents, bundles);
        if (*val) return run_validate(g, model, bundles);
        if (*fus) return run_fusion(g, model);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return exit_code(e);
    } catch (const json::exception& e) {
        std::cerr << "error (schema): " << e.what() << "\n";
        return kUsage;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
