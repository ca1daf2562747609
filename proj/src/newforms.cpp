#include "ppelim/newforms.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace ppelim {

using nlohmann::json;

std::string kind_name(FormKind k) { return k == FormKind::BIANCHI ? "BIANCHI" : "HILBERT"; }

FormKind parse_kind(const std::string& s) {
    std::string u;
    for (char c : s) u += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    if (u == "BIANCHI") return FormKind::BIANCHI;
    if (u == "HILBERT") return FormKind::HILBERT;
    throw std::invalid_argument("unknown form kind: " + s);
}

bool NewformRecord::operator==(const NewformRecord& o) const {
    return base_field == o.base_field && level_label == o.level_label && level_norm == o.level_norm &&
           kind == o.kind && hecke_field.poly == o.hecke_field.poly && eigenvalues == o.eigenvalues &&
           label == o.label && lmfdb_label == o.lmfdb_label;
}

QuadField field_from_label(const std::string& label) {
    std::vector<std::string> parts;
    std::stringstream ss(label);
    std::string s;
    while (std::getline(ss, s, '.')) parts.push_back(s);
    if (parts.size() != 4 || parts[0] != "2" || (parts[1] != "0" && parts[1] != "2"))
        throw std::invalid_argument("not a quadratic field label: " + label);
    long D;
    try {
        D = std::stol(parts[2]);
    } catch (const std::exception&) {
        throw std::invalid_argument("not a quadratic field label: " + label);
    }
    long m = D % 4 == 0 ? D / 4 : D;
    if (parts[1] == "0") m = -m;
    if (!is_squarefree(m) || m == 1) throw std::invalid_argument("not a quadratic field label: " + label);
    QuadField K = make_field(m);
    if (std::labs(K.disc) != D) throw std::invalid_argument("not a fundamental discriminant: " + label);
    return K;
}

std::vector<PrimeIdeal> level_support(const QuadField& K, long level_norm) {
    std::vector<PrimeIdeal> out;
    for (const Int& r : prime_divisors(Int(level_norm)))
        for (PrimeIdeal& P : split_prime(K, r.get_si(), false)) out.push_back(std::move(P));
    return out;
}

void validate_record(const NewformRecord& r) {
    const std::string where = r.label.empty() ? std::string("form") : r.label;
    HeckeField F;
    try {
        F = make_hecke_field(r.hecke_field.poly);
    } catch (const std::exception& e) {
        throw FixtureError(where + ": " + e.what());
    }
    for (const auto& [lab, a] : r.eigenvalues) {
        PrimeIdeal q;
        try {
            q = prime_by_label(r.base_field, lab);
        } catch (const std::exception& e) {
            throw FixtureError(where + ": unresolvable prime label " + lab);
        }
        if (static_cast<long>(a.size()) != F.degree())
            throw FixtureError(where + ": eigenvalue at " + lab + " has " + std::to_string(a.size()) +
                               " coordinates, expected " + std::to_string(F.degree()));
        if (!hasse_bound_holds(F, a, q.norm()))
            throw FixtureError(where + ": eigenvalue at " + lab + " violates the Hasse bound");
    }
}

namespace {

json parse_strict(const std::string& text, const std::string& source) {
    std::vector<std::set<std::string>> keys;
    std::string dup;
    json::parser_callback_t cb = [&](int, json::parse_event_t ev, json& parsed) {
        if (ev == json::parse_event_t::object_start) {
            keys.emplace_back();
        } else if (ev == json::parse_event_t::object_end) {
            if (!keys.empty()) keys.pop_back();
        } else if (ev == json::parse_event_t::key && !keys.empty()) {
            std::string k = parsed.get<std::string>();
            if (!keys.back().insert(k).second && dup.empty()) dup = k;
        }
        return true;
    };
    json j;
    try {
        j = json::parse(text, cb);
    } catch (const json::parse_error& e) {
        throw FixtureError(source + ": " + e.what());
    }
    if (!dup.empty()) throw FixtureError(source + ": duplicate key \"" + dup + "\"");
    return j;
}

const json& need(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw FixtureError(path + ": missing \"" + key + "\"");
    return j.at(key);
}

Rat json_rational(const json& v, const std::string& path) {
    try {
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rat(to_string(Int(v.dump())));
    } catch (const std::exception&) {
    }
    throw FixtureError(path + ": not a rational number");
}

}  // namespace

FixtureData parse_fixture(const std::string& text, const std::string& source) {
    json j = parse_strict(text, source);
    FixtureData d;
    const json& schema = need(j, "schema", source);
    if (!schema.is_number_integer() || schema.get<int>() != 1)
        throw FixtureError(source + ": unsupported schema " + schema.dump());
    auto text_of = [&](const char* key) {
        const json& v = need(j, key, source);
        if (!v.is_string()) throw FixtureError(source + ": \"" + key + "\" is not a string");
        return v.get<std::string>();
    };
    d.base_field = text_of("base_field");
    d.level = text_of("level");
    const json& ln = need(j, "level_norm", source);
    if (!ln.is_number_integer()) throw FixtureError(source + ": \"level_norm\" is not an integer");
    d.level_norm = ln.get<long>();
    try {
        d.kind = parse_kind(text_of("kind"));
    } catch (const FixtureError&) {
        throw;
    } catch (const std::exception& e) {
        throw FixtureError(source + ": " + e.what());
    }
    if (j.contains("provenance")) d.provenance = text_of("provenance");
    QuadField K;
    try {
        K = field_from_label(d.base_field);
    } catch (const std::exception& e) {
        throw FixtureError(source + ": " + e.what());
    }
    const json& forms = need(j, "forms", source);
    if (!forms.is_array()) throw FixtureError(source + ": forms is not a list");
    for (size_t i = 0; i < forms.size(); ++i) {
        const std::string path = source + ": forms[" + std::to_string(i) + "]";
        const json& f = forms[i];
        NewformRecord r;
        r.base_field = K;
        r.level_label = d.level;
        r.level_norm = d.level_norm;
        r.kind = d.kind;
        const json& lab = need(f, "label", path);
        if (!lab.is_string()) throw FixtureError(path + ".label: not a string");
        r.label = lab.get<std::string>();
        if (f.contains("lmfdb_label")) r.lmfdb_label = f["lmfdb_label"].get<std::string>();
        const json& hp = need(f, "hecke_poly", path);
        if (!hp.is_array() || hp.empty()) throw FixtureError(path + ".hecke_poly: not a coefficient list");
        for (size_t k = 0; k < hp.size(); ++k) {
            if (!hp[k].is_number_integer())
                throw FixtureError(path + ".hecke_poly[" + std::to_string(k) + "]: not an integer");
            r.hecke_field.poly.push_back(Int(hp[k].dump()));
        }
        const json& ev = need(f, "eigenvalues", path);
        if (!ev.is_object()) throw FixtureError(path + ".eigenvalues: not an object");
        for (const auto& [q, coords] : ev.items()) {
            const std::string p2 = path + ".eigenvalues." + q;
            if (!coords.is_array()) throw FixtureError(p2 + ": not a coordinate list");
            HeckeElement a;
            for (const json& c : coords) a.push_back(json_rational(c, p2));
            r.eigenvalues[q] = a;
        }
        validate_record(r);
        r.hecke_field = make_hecke_field(r.hecke_field.poly);
        d.forms.push_back(std::move(r));
    }
    return d;
}

std::string fixture_text(const FixtureData& d) {
    json j;
    j["schema"] = d.schema;
    j["base_field"] = d.base_field;
    j["level"] = d.level;
    j["level_norm"] = d.level_norm;
    j["kind"] = kind_name(d.kind);
    j["provenance"] = d.provenance;
    j["forms"] = json::array();
    for (const NewformRecord& r : d.forms) {
        json f;
        f["label"] = r.label;
        if (r.lmfdb_label) f["lmfdb_label"] = *r.lmfdb_label;
        f["hecke_poly"] = json::array();
        for (const Int& c : r.hecke_field.poly) {
            if (!c.fits_slong_p()) throw FixtureError(r.label + ": Hecke polynomial coefficient out of range");
            f["hecke_poly"].push_back(c.get_si());
        }
        f["eigenvalues"] = json::object();
        for (const auto& [q, a] : r.eigenvalues) {
            json coords = json::array();
            for (const Rat& c : a) coords.push_back(to_string(c));
            f["eigenvalues"][q] = coords;
        }
        j["forms"].push_back(f);
    }
    return j.dump(1) + "\n";
}

FixtureData read_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FixtureError(path + ": cannot open");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_fixture(ss.str(), path);
}

std::vector<NewformRecord> load_fixture(const std::string& path) { return read_fixture(path).forms; }

void save_fixture(const std::string& path, const FixtureData& data) {
    for (const NewformRecord& r : data.forms) validate_record(r);
    namespace fs = std::filesystem;
    static std::mutex writer;
    std::lock_guard<std::mutex> lock(writer);
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    std::ostringstream tmpname;
    tmpname << path << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id());
    {
        std::ofstream out(tmpname.str(), std::ios::binary | std::ios::trunc);
        if (!out) throw FixtureError(path + ": cannot write");
        out << fixture_text(data);
        if (!out) throw FixtureError(path + ": write failed");
    }
    fs::rename(tmpname.str(), target);
}

std::string fixture_path(const std::string& root, const std::string& field_label, FormKind kind,
                         const std::string& level_label) {
    std::string k = kind == FormKind::BIANCHI ? "bianchi" : "hilbert";
    return (std::filesystem::path(root) / field_label / (k + "-" + level_label + ".json")).string();
}

}  // namespace ppelim
