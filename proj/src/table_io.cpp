#include <json.hpp>

#include "elf/error.hpp"
#include "elf/tuner.hpp"

namespace elf {

using nlohmann::ordered_json;

namespace {

SchemeKind parse_scheme(const std::string& s) {
    if (s == "af") return SchemeKind::AF;
    if (s == "ab") return SchemeKind::AB;
    throw Error(ErrorKind::Io, "unknown scheme in table: " + s);
}

}  // namespace

std::string table_to_json(const LookupTable& t) {
    ordered_json meta = {{"scheme", to_string(t.scheme)},
                         {"objective", to_string(t.objective)},
                         {"method", to_string(t.method)},
                         {"layers", t.layers},
                         {"layer_fidelity", t.noise.layer_fidelity},
                         {"spam_fidelity", t.noise.spam_fidelity},
                         {"restarts", t.restarts},
                         {"seed", t.seed}};
    ordered_json entries = ordered_json::array();
    for (const TableEntry& e : t.entries) {
        ordered_json j = {{"pi", e.pi}};
        j["angles"] = e.valid ? ordered_json(e.angles.values()) : ordered_json::array();
        j["objective"] = e.objective;
        if (!e.valid) j["valid"] = false;
        if (!e.flag.empty()) j["flag"] = e.flag;
        entries.push_back(std::move(j));
    }
    ordered_json doc = {{"version", kTableVersion}, {"metadata", meta}, {"entries", entries}};
    return doc.dump(1) + "\n";
}

LookupTable table_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Io, std::string("table is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("version").get<std::string>() != kTableVersion)
            throw Error(ErrorKind::Io, "unsupported table version " + doc.at("version").get<std::string>());
        const ordered_json& m = doc.at("metadata");
        LookupTable t;
        t.scheme = parse_scheme(m.at("scheme").get<std::string>());
        t.objective = m.at("objective").get<std::string>() == "slope" ? Objective::Slope : Objective::Fisher;
        t.method = m.at("method").get<std::string>() == "grad" ? Method::GradientAscent : Method::CoordinateAscent;
        t.layers = m.at("layers").get<int>();
        t.noise.layer_fidelity = m.at("layer_fidelity").get<double>();
        t.noise.spam_fidelity = m.at("spam_fidelity").get<double>();
        t.restarts = m.at("restarts").get<int>();
        t.seed = m.at("seed").get<std::uint64_t>();
        double prev = -2.0;
        for (const ordered_json& j : doc.at("entries")) {
            TableEntry e;
            e.pi = j.at("pi").get<double>();
            if (!(e.pi > prev) || e.pi < -1.0 || e.pi > 1.0)
                throw Error(ErrorKind::Io, "table grid must be strictly increasing within [-1, 1]");
            prev = e.pi;
            e.valid = j.value("valid", true);
            e.objective = j.at("objective").get<double>();
            e.flag = j.value("flag", std::string());
            if (e.valid) {
                e.angles = AngleVector(j.at("angles").get<std::vector<double>>());
                if (e.angles.layers() != t.layers) throw Error(ErrorKind::Io, "table entry has the wrong angle count");
            }
            t.entries.push_back(std::move(e));
        }
        return t;
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(ErrorKind::Io, std::string("malformed table: ") + e.what());
    }
}

}  // namespace elf
