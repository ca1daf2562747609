#include "ppelim/report.hpp"

#include <algorithm>
#include <filesystem>
#include <future>
#include <set>
#include <sstream>

namespace ppelim {

using nlohmann::json;

std::string canonical(const json& j) { return j.dump(1) + "\n"; }

long frey_vj_at_floor(const FieldCase& c, long floor, long* p_used) {
    long p = floor + 1;
    while (!is_prime(p)) ++p;
    if (p_used) *p_used = p;
    long v = valuation(FieldElement(c.K, c.t), c.special);
    return c.t == 2 ? 12 * v - 2 * p : 9 * v - 3 * p;
}

namespace {

std::vector<NewformRecord> forms_for(const FieldCase& c, const LevelSpec& l, const CaseOptions& opt,
                                     std::string& source) {
    if (opt.fetch) {
        FetchResult r = fetch_lmfdb(c.K.label(), l.label, c.kind, *opt.fetch);
        if (r.status == FetchStatus::UNKNOWN_LEVEL) throw FetchError(r.note);
        source = "lmfdb:" + fetch_status_name(r.status);
        return r.forms;
    }
    std::string path = fixture_path((std::filesystem::path(opt.fixture_root) / "newforms").string(), c.K.label(),
                                    c.kind, l.label);
    FixtureData d = read_fixture(path);
    if (d.level != l.label || d.level_norm != l.norm)
        throw FixtureError(path + ": level " + d.level + " does not match " + l.label);
    source = "fixture:" + std::filesystem::path(path).filename().string();
    return d.forms;
}

}  // namespace

CaseReport run_case(const FieldCase& c, const CaseOptions& opt) {
    CaseReport rep;
    rep.fc = c;
    rep.irr = irreducibility_context(c.K, c.sig, c.d);
    rep.aux_primes = auxiliary_primes(c.K, maximal_level_support(c), c.t, opt.norm_bound);
    rep.frey_vj = frey_vj_at_floor(c, opt.floor, &rep.frey_vj_p);
    std::vector<FormVerdict> all;
    std::vector<InertiaResult> inertia;
    std::set<long> torsion;
    const std::string curve_dir = (std::filesystem::path(opt.fixture_root) / "curves").string();
    for (const LevelSpec& l : c.levels) {
        LevelResult lr;
        lr.level = l;
        lr.forms = forms_for(c, l, opt, lr.source);
        std::sort(lr.forms.begin(), lr.forms.end(),
                  [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
        std::vector<std::future<FormVerdict>> jobs;
        for (const NewformRecord& f : lr.forms)
            jobs.push_back(std::async(opt.threads > 1 ? std::launch::async : std::launch::deferred,
                                      [&, f] { return eliminator(f, rep.aux_primes, c.t, opt.floor); }));
        for (auto& j : jobs) lr.verdicts.push_back(j.get());
        for (size_t i = 0; i < lr.forms.size(); ++i) {
            if (lr.verdicts[i].eliminator != 0) continue;
            const NewformRecord& f = lr.forms[i];
            for (const CurveRecord& E : curves_for(curve_dir, c.K, l.label)) {
                try {
                    inertia.push_back(inertia_eliminate(f, lr.verdicts[i], E, rep.frey_vj, c.special));
                    break;
                } catch (const EliminationError&) {
                }
            }
        }
        if (!c.K.real()) {
            lr.torsion_primes =
                abelianization_torsion((std::filesystem::path(opt.fixture_root) / "torsion").string(), c.K, l.label);
            torsion.insert(lr.torsion_primes.begin(), lr.torsion_primes.end());
        }
        all.insert(all.end(), lr.verdicts.begin(), lr.verdicts.end());
        rep.levels.push_back(std::move(lr));
    }
    rep.bound = bound_synthesis(c.K, c.sig, all, inertia, std::vector<long>(torsion.begin(), torsion.end()),
                                opt.floor, c.excluded);
    return rep;
}

json verdict_json(const FormVerdict& v) {
    json j;
    j["form"] = v.form;
    j["rational"] = v.rational;
    j["eliminator"] = to_string(v.eliminator);
    j["floor"] = v.floor;
    j["survivors"] = v.all_survive ? json("ALL") : json(v.survivors);
    j["cleared"] = v.cleared;
    json pp = json::object();
    for (const auto& [q, n] : v.per_prime) pp[q] = to_string(n);
    j["per_prime"] = pp;
    return j;
}

json case_json(const CaseReport& r) {
    const FieldCase& c = r.fc;
    json j;
    j["schema"] = 1;
    j["field"] = {{"label", c.K.label()}, {"m", c.K.m}};
    j["signature"] = signature_name(c.sig);
    j["d"] = c.d;
    j["t"] = c.t;
    j["special_prime"] = c.special.label;
    json aux = json::array();
    for (const PrimeIdeal& q : r.aux_primes) aux.push_back(q.label);
    j["auxiliary_primes"] = aux;
    j["irreducibility"] = {{"ray_class_order", r.irr.theta_order},
                           {"torsion_floor", r.irr.floor.bound},
                           {"citation", r.irr.floor.citation},
                           {"floor", r.bound.floor}};
    json levels = json::array();
    for (const LevelResult& l : r.levels) {
        json lj;
        lj["name"] = l.level.name;
        lj["label"] = l.level.label;
        lj["norm"] = l.level.norm;
        lj["source"] = l.source;
        json forms = json::array();
        for (size_t i = 0; i < l.forms.size(); ++i) {
            json fj = verdict_json(l.verdicts[i]);
            fj["hecke_degree"] = l.forms[i].hecke_field.degree();
            forms.push_back(fj);
        }
        lj["forms"] = forms;
        if (!c.K.real()) lj["torsion_primes"] = l.torsion_primes;
        levels.push_back(lj);
    }
    j["levels"] = levels;
    json inertia = json::array();
    for (const InertiaResult& ir : r.bound.inertia)
        inertia.push_back({{"form", ir.form},
                           {"curve", ir.curve},
                           {"prime", ir.prime},
                           {"curve_vj", ir.curve_vj},
                           {"frey_vj", ir.frey_vj},
                           {"eliminated", ir.eliminated},
                           {"matched_primes", ir.matched_primes.size()}});
    j["inertia"] = inertia;
    j["frey_vj"] = {{"value", r.frey_vj}, {"p", r.frey_vj_p}, {"v_b", 1}};
    j["torsion_primes"] = r.bound.torsion_primes;
    j["excluded"] = r.bound.excluded;
    j["unresolved"] = r.bound.unresolved;
    j["status"] = r.bound.resolved() ? "resolved" : "unresolved";
    j["C_K"] = r.bound.resolved() ? json(r.bound.bound) : json(nullptr);
    return j;
}

std::string case_markdown(const CaseReport& r) {
    std::ostringstream o;
    const FieldCase& c = r.fc;
    o << "## " << c.K.label() << " (m = " << c.K.m << "), " << signature_name(c.sig) << "\n\n";
    o << "| level | norm | form | deg Q_f | C_f | survivors > " << r.bound.floor << " |\n";
    o << "|---|---|---|---|---|---|\n";
    for (const LevelResult& l : r.levels) {
        if (l.forms.empty()) o << "| " << l.level.name << " (" << l.level.label << ") | " << l.level.norm << " | none | | | |\n";
        for (size_t i = 0; i < l.forms.size(); ++i) {
            const FormVerdict& v = l.verdicts[i];
            o << "| " << l.level.name << " (" << l.level.label << ") | " << l.level.norm << " | " << v.form << " | "
              << l.forms[i].hecke_field.degree() << " | " << to_string(v.eliminator) << " | ";
            if (v.all_survive) {
                o << "ALL";
            } else {
                for (size_t k = 0; k < v.survivors.size(); ++k) o << (k ? ", " : "") << v.survivors[k];
                if (!v.cleared.empty()) {
                    o << (v.survivors.empty() ? "" : " ") << "(cleared:";
                    for (long c : v.cleared) o << " " << c;
                    o << ")";
                }
            }
            o << " |\n";
        }
    }
    for (const InertiaResult& ir : r.bound.inertia)
        o << "\nInertia: " << ir.form << " vs " << ir.curve << " at " << ir.prime << ": v(j_curve) = " << ir.curve_vj
          << ", v(j_Frey) = " << ir.frey_vj << " -> " << (ir.eliminated ? "eliminated" : "not eliminated") << "\n";
    o << "\n";
    if (!r.bound.torsion_primes.empty()) {
        o << "Torsion primes:";
        for (long p : r.bound.torsion_primes) o << " " << p;
        o << "\n";
    }
    if (r.bound.resolved()) {
        o << "C_K = " << r.bound.bound;
        if (!r.bound.excluded.empty()) {
            o << ", p !=";
            for (long p : r.bound.excluded) o << " " << p;
        }
        o << "\n";
    } else {
        o << "Unresolved:";
        for (const std::string& s : r.bound.unresolved) o << " " << s;
        o << "\n";
    }
    return o.str();
}

}  // namespace ppelim
