#include "ppelim/catalog.hpp"
#include "ppelim/criteria.hpp"
#include "ppelim/eliminate.hpp"
#include "ppelim/freycurve.hpp"
#include "ppelim/newforms.hpp"
#include "ppelim/report.hpp"
#include "ppelim/sunit.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#ifndef PPELIM_FIXTURE_DIR
#define PPELIM_FIXTURE_DIR "fixtures"
#endif

using namespace ppelim;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kNegative = 2;

struct RunConfig {
    long m = 0;
    std::string signature = "ppq2-effective";
    std::string A = "1", B, C = "1", d;
    std::string a, b, c;
    long p = 0;
    std::string prime;
    long norm_bound = 50;
    long box = 6;
    long floor = 17;
    std::string lmfdb_url = "https://www.lmfdb.org";
    std::string cache_dir;
    std::string fixtures = PPELIM_FIXTURE_DIR;
    bool offline = false;
    bool use_lmfdb = false;
    std::string format = "json";
    int threads = 1;
    std::vector<long> S;
    std::string mode = "square";
    long q = 13, ell = 29;
    std::string level;
    std::string kind;
    std::string field_label;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json elem(const FieldElement& e) { return json::array({to_string(e.x()), to_string(e.y())}); }

json opt_long(const std::optional<long>& v) { return v ? json(*v) : json(nullptr); }

void emit(const RunConfig& cfg, const json& j, const std::string& md = "") {
    if (cfg.format == "md") {
        if (!md.empty()) {
            std::cout << md;
            return;
        }
        std::cout << "| key | value |\n|---|---|\n";
        for (const auto& [k, v] : j.items()) std::cout << "| " << k << " | " << (v.is_string() ? v.get<std::string>() : v.dump()) << " |\n";
        return;
    }
    std::cout << canonical(j);
}

QuadField field_of(const RunConfig& cfg) {
    if (cfg.m == 0) throw UsageError("--field is required");
    if (!is_squarefree(cfg.m) || cfg.m == 1) throw UsageError("--field: m must be squarefree and not 0 or 1");
    return make_field(cfg.m);
}

FieldElement element(const QuadField& K, const std::string& s, const std::string& flag) {
    if (s.empty()) throw UsageError(flag + " is required");
    try {
        return parse_element(K, s);
    } catch (const std::exception& e) {
        throw UsageError(flag + ": " + e.what());
    }
}

SolutionTriple triple_of(const RunConfig& cfg) {
    QuadField K = field_of(cfg);
    Signature sig = parse_signature(cfg.signature);
    FieldElement a = element(K, cfg.a, "--a"), b = element(K, cfg.b, "--b"), c = element(K, cfg.c, "--c");
    if (cfg.p <= 0) throw UsageError("--p is required");
    if (sig == Signature::PPQ2_GENERAL)
        return general_triple(element(K, cfg.A, "--A"), element(K, cfg.B, "--B"), element(K, cfg.C, "--C"), a, b, c,
                              cfg.p);
    FieldElement d = element(K, cfg.d.empty() ? std::to_string(std::labs(cfg.m)) : cfg.d, "--d");
    return sig == Signature::PPQ2_EFFECTIVE ? effective_triple(d, a, b, c, cfg.p) : cubic_triple(d, a, b, c, cfg.p);
}

json prime_json(const PrimeIdeal& P) {
    json j{{"label", P.label}, {"p", P.p}, {"e", P.e}, {"f", P.f}, {"norm", P.norm()}};
    j["generator"] = P.gen ? elem(*P.gen) : json(nullptr);
    return j;
}

int cmd_field_info(const RunConfig& cfg) {
    QuadField K = field_of(cfg);
    json j;
    j["label"] = K.label();
    j["m"] = K.m;
    j["disc"] = K.disc;
    j["omega"] = K.half ? "(1+sqrt(m))/2" : "sqrt(m)";
    ClassNumbers cn = class_numbers(K);
    j["class_number"] = cn.h;
    if (K.real()) {
        FieldElement e = fundamental_unit(K);
        j["fundamental_unit"] = elem(e);
        j["unit_norm"] = to_string(e.norm());
        j["narrow_class_number"] = cn.h_plus;
    }
    json ps = json::array();
    for (long p : {2L, 3L})
        for (const PrimeIdeal& P : split_prime(K, p)) ps.push_back(prime_json(P));
    j["primes_above_2_3"] = ps;
    json small = json::array();
    for (const PrimeIdeal& P : primes_up_to(K, cfg.norm_bound)) small.push_back(P.label);
    j["primes"] = small;
    emit(cfg, j);
    return kOk;
}

int cmd_frey(const RunConfig& cfg) {
    SolutionTriple t = triple_of(cfg);
    WeierstrassModel E = build_frey(t);
    InvariantSet inv = invariants(E);
    json j;
    j["field"] = t.field().label();
    j["signature"] = signature_name(t.sig);
    j["p"] = t.p;
    j["model"] = {{"a1", elem(E.a1)}, {"a2", elem(E.a2)}, {"a3", elem(E.a3)}, {"a4", elem(E.a4)}, {"a6", elem(E.a6)}};
    j["c4"] = elem(inv.c4);
    j["c6"] = elem(inv.c6);
    j["delta"] = elem(inv.delta);
    j["j"] = inv.j ? elem(*inv.j) : json(nullptr);
    j["closed_forms_match"] = check_closed_forms(t);
    j["primitive"] = is_primitive(t);
    emit(cfg, j);
    return j["closed_forms_match"].get<bool>() ? kOk : kNegative;
}

int cmd_local(const RunConfig& cfg) {
    SolutionTriple t = triple_of(cfg);
    WeierstrassModel E = build_frey(t);
    const QuadField& K = t.field();
    std::vector<PrimeIdeal> primes;
    if (!cfg.prime.empty()) {
        primes.push_back(prime_by_label(K, cfg.prime));
    } else {
        Rat n = invariants(E).delta.norm();
        for (const Int& r : prime_divisors(Int(n.get_num()) * n.get_den()))
            for (PrimeIdeal& P : split_prime(K, r.get_si())) primes.push_back(std::move(P));
    }
    json rows = json::array();
    for (const PrimeIdeal& P : primes) {
        LocalReductionData L = local_data(t, E, P);
        json r;
        r["prime"] = P.label;
        r["v_c4"] = opt_long(L.v_c4);
        r["v_c6"] = opt_long(L.v_c6);
        r["v_delta"] = L.v_delta;
        r["v_j"] = opt_long(L.v_j);
        r["reduction"] = reduction_name(L.reduction);
        r["conductor_exponent"] = {L.cond_exp_lo, L.cond_exp_hi};
        r["basis"] = L.basis;
        if (L.v_j && *L.v_j < 0) r["p_divides_inertia"] = inertia_order_p_test(*L.v_j, t.p);
        rows.push_back(r);
    }
    emit(cfg, json{{"field", K.label()}, {"signature", signature_name(t.sig)}, {"p", t.p}, {"primes", rows}});
    return kOk;
}

json solution_json(const SUnitSolution& s, const PrimeIdeal& P) {
    return {{"alpha", elem(s.alpha)},
            {"beta", elem(s.beta)},
            {"gamma", elem(s.gamma)},
            {"v_alpha", valuation(s.alpha, P)},
            {"v_beta", valuation(s.beta, P)}};
}

int cmd_sunit(const RunConfig& cfg) {
    if (cfg.box < 0) throw UsageError("--box must be non-negative");
    if (cfg.mode == "descent") {
        DescentReport r = unit_descent(cfg.q, cfg.ell, cfg.box);
        json j;
        j["q"] = r.q;
        j["ell"] = r.ell;
        j["box"] = r.box;
        j["hypotheses"] = r.hypotheses;
        j["failed"] = r.failed;
        if (r.computed) {
            json sols = json::array();
            for (const auto& [x, y] : r.unit_solutions) sols.push_back(json::array({elem(x), elem(y)}));
            j["unit_solutions"] = sols;
            json al = json::array();
            for (size_t i = 0; i < r.alphas.size(); ++i) al.push_back({{"alpha", elem(r.alphas[i])}, {"v_P", r.v_alpha[i]}});
            j["alphas"] = al;
            j["alphas_expected"] = r.alphas_expected;
            j["criterion_B"] = {{"holds", r.criterionB.holds},
                                {"max_v", r.criterionB.max_v},
                                {"solutions", r.criterionB.solutions},
                                {"scope", r.criterionB.scope}};
        }
        j["holds"] = r.holds();
        emit(cfg, j);
        return r.holds() ? kOk : kNegative;
    }
    QuadField K = field_of(cfg);
    std::vector<PrimeIdeal> S;
    for (long r : cfg.S.empty() ? std::vector<long>{2} : cfg.S)
        for (PrimeIdeal& P : split_prime(K, r)) S.push_back(std::move(P));
    SUnitBasis B = s_unit_basis(K, S);
    const PrimeIdeal& P = S.front();
    json j;
    j["field"] = K.label();
    json sj = json::array();
    for (size_t i = 0; i < B.S.size(); ++i) sj.push_back({{"prime", B.S[i].label}, {"generator", elem(B.gens[i])}});
    j["S"] = sj;
    j["unit"] = B.unit ? elem(*B.unit) : json(nullptr);
    j["torsion_order"] = B.torsion.size();
    j["box"] = cfg.box;
    int rc = kOk;
    if (cfg.mode == "unit") {
        json sols = json::array();
        for (const auto& [x, y] : solve_unit_equation(B, cfg.box)) sols.push_back(json::array({elem(x), elem(y)}));
        j["unit_solutions"] = sols;
    } else if (cfg.mode == "square") {
        std::vector<SUnitSolution> sols = solve_square_equation(B, cfg.box, P);
        json arr = json::array();
        for (const SUnitSolution& s : sols) arr.push_back(solution_json(s, P));
        j["solutions"] = arr;
        j["criterion_A"] = criterion_A(sols, P);
        CriterionB cb = criterion_B(B, P, cfg.box);
        j["criterion_B"] = {{"holds", cb.holds}, {"max_v", cb.max_v}, {"scope", cb.scope}};
        if (!j["criterion_A"].get<bool>() || !cb.holds) rc = kNegative;
    } else {
        throw UsageError("--mode must be square, unit or descent");
    }
    emit(cfg, j);
    return rc;
}

// "2.2.56.1-14.1-a" -> "2.2.56-14.1-a"
std::string short_curve_label(const std::string& label) {
    auto dash = label.find('-');
    std::string field = label.substr(0, dash);
    if (std::count(field.begin(), field.end(), '.') != 3) return label;
    return field.substr(0, field.rfind('.')) + (dash == std::string::npos ? "" : label.substr(dash));
}

CaseOptions case_options(const RunConfig& cfg) {
    CaseOptions o;
    o.fixture_root = cfg.fixtures;
    o.norm_bound = cfg.norm_bound;
    o.floor = cfg.floor;
    o.threads = cfg.threads;
    if (cfg.use_lmfdb) {
        FetchOptions f;
        f.base_url = cfg.lmfdb_url;
        f.cache_dir = cfg.cache_dir;
        f.offline = cfg.offline;
        o.fetch = f;
    }
    return o;
}

int cmd_eliminate(const RunConfig& cfg) {
    FieldCase fc = field_case(field_of(cfg).m, parse_signature(cfg.signature));
    if (!cfg.level.empty()) {
        const LevelSpec keep = level_by_descriptor(fc, cfg.level);
        fc.levels = {keep};
    }
    CaseReport r = run_case(fc, case_options(cfg));
    json j = case_json(r);
    j.erase("C_K");
    json flagged = json::array();
    for (const InertiaResult& ir : r.bound.inertia)
        flagged.push_back({{"form", ir.form}, {"curve", short_curve_label(ir.curve)}, {"eliminated", ir.eliminated}});
    j["inertia_flagged"] = flagged;
    emit(cfg, j, case_markdown(r));
    return r.bound.resolved() ? kOk : kNegative;
}

int cmd_bounds(const RunConfig& cfg) {
    std::vector<std::pair<long, Signature>> cases;
    if (cfg.m == 0) {
        cases = catalog();
    } else {
        cases.emplace_back(field_of(cfg).m, parse_signature(cfg.signature));
    }
    json all = json::array();
    std::string md;
    bool ok = true;
    for (const auto& [m, sig] : cases) {
        CaseReport r = run_case(field_case(m, sig), case_options(cfg));
        all.push_back(case_json(r));
        md += case_markdown(r) + "\n";
        ok = ok && r.bound.resolved();
    }
    if (cases.size() == 1)
        emit(cfg, all[0], md);
    else
        emit(cfg, json{{"schema", 1}, {"cases", all}}, md);
    return ok ? kOk : kNegative;
}

int cmd_criteria(const RunConfig& cfg) {
    QuadField K = field_of(cfg);
    Signature sig = parse_signature(cfg.signature);
    long d = cfg.d.empty() ? std::labs(K.m) : std::stol(cfg.d);
    IrreducibilityContext c = irreducibility_context(K, sig, d);
    json j;
    j["field"] = K.label();
    j["signature"] = signature_name(sig);
    j["special_prime"] = c.P.label;
    j["ray_class_order"] = c.theta_order;
    j["torsion_floor"] = {{"bound", c.floor.bound}, {"citation", c.floor.citation}};
    j["excluded"] = c.excluded;
    bool ok = c.theta_order == 1 || c.theta_order == 2;
    if (c.P.gen && c.P.gen->is_rational() && c.P.f == 2) {
        Int g = c.P.gen->x().get_num();
        Obstruction o = split_case_obstruction(g.get_si());
        j["split_case_obstruction"] = {{"value", to_string(o.value)}, {"primes", o.primes}};
        for (long q : o.primes) ok = ok && q <= cfg.floor;
    }
    if (!K.real() && in_catalog(K.m, Signature::PPQ2_EFFECTIVE)) {
        FieldCase fc = field_case(K.m, Signature::PPQ2_EFFECTIVE);
        json t = json::object();
        for (const LevelSpec& l : fc.levels)
            t[l.label] = abelianization_torsion(cfg.fixtures + "/torsion", K, l.label);
        j["abelianization_torsion"] = t;
    }
    j["holds"] = ok;
    emit(cfg, j);
    return ok ? kOk : kNegative;
}

int cmd_fetch(const RunConfig& cfg) {
    std::string field = cfg.field_label.empty() ? field_of(cfg).label() : cfg.field_label;
    QuadField K = field_from_label(field);
    FormKind kind = cfg.kind.empty() ? (K.real() ? FormKind::HILBERT : FormKind::BIANCHI) : parse_kind(cfg.kind);
    if (cfg.level.empty()) throw UsageError("--level is required");
    FetchOptions f;
    f.base_url = cfg.lmfdb_url;
    f.cache_dir = cfg.cache_dir;
    f.offline = cfg.offline;
    FetchResult r = fetch_lmfdb(field, cfg.level, kind, f);
    json j;
    j["field"] = field;
    j["kind"] = kind_name(kind);
    j["level"] = r.level_label;
    j["status"] = fetch_status_name(r.status);
    j["note"] = r.note;
    json forms = json::array();
    for (const NewformRecord& nf : r.forms) {
        json e = json::object();
        for (const auto& [q, a] : nf.eigenvalues) {
            json c = json::array();
            for (const Rat& x : a) c.push_back(to_string(x));
            e[q] = c;
        }
        forms.push_back({{"label", nf.label}, {"hecke_poly", [&] {
                              json p = json::array();
                              for (const Int& c : nf.hecke_field.poly) p.push_back(to_string(c));
                              return p;
                          }()},
                         {"eigenvalues", e}});
    }
    j["forms"] = forms;
    emit(cfg, j);
    return r.status == FetchStatus::UNKNOWN_LEVEL ? kNegative : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modular-method elimination toolkit for x^p + d y^p = z^2 and z^3 over quadratic fields"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file");
    RunConfig cfg;

    app.add_option("--field", cfg.m, "squarefree m for K = Q(sqrt(m))")->envname("PPELIM_FIELD");
    app.add_option("--signature", cfg.signature, "ppq2-general, ppq2-effective or ppq3")->envname("PPELIM_SIGNATURE");
    app.add_option("--A", cfg.A, "coefficient A (ppq2-general)");
    app.add_option("--B", cfg.B, "coefficient B (ppq2-general)");
    app.add_option("--C", cfg.C, "coefficient C (ppq2-general)");
    app.add_option("--d", cfg.d, "coefficient d");
    app.add_option("--a", cfg.a, "solution coordinate a, e.g. 1+2*w");
    app.add_option("--b", cfg.b, "solution coordinate b");
    app.add_option("--c", cfg.c, "solution coordinate c");
    app.add_option("--p", cfg.p, "prime exponent");
    app.add_option("--prime", cfg.prime, "prime ideal label N.i");
    app.add_option("--norm-bound", cfg.norm_bound, "auxiliary primes have norm below this")
        ->envname("PPELIM_NORM_BOUND")
        ->check(CLI::PositiveNumber);
    app.add_option("--box", cfg.box, "S-unit exponent box")->envname("PPELIM_BOX")->check(CLI::NonNegativeNumber);
    app.add_option("--floor", cfg.floor, "irreducibility floor")->envname("PPELIM_FLOOR")->check(CLI::PositiveNumber);
    app.add_option("--lmfdb-url", cfg.lmfdb_url, "LMFDB base URL")->envname("PPELIM_LMFDB_URL");
    app.add_option("--cache-dir", cfg.cache_dir, "LMFDB cache directory")->envname("PPELIM_CACHE_DIR");
    app.add_option("--fixtures", cfg.fixtures, "fixture root")->envname("PPELIM_FIXTURES");
    app.add_flag("--offline", cfg.offline, "never touch the network")->envname("PPELIM_OFFLINE");
    app.add_flag("--lmfdb", cfg.use_lmfdb, "take newforms from LMFDB (or its cache) instead of the fixtures");
    app.add_option("--format", cfg.format, "json or md")->check(CLI::IsMember({"json", "md"}));
    app.add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--S", cfg.S, "rational primes whose prime ideals form S")->delimiter(',');
    app.add_option("--mode", cfg.mode, "square, unit or descent");
    app.add_option("--q", cfg.q, "q for descent");
    app.add_option("--ell", cfg.ell, "l for descent");
    app.add_option("--level", cfg.level, "level label N.i, norm, or D/PD/LD");
    app.add_option("--kind", cfg.kind, "BIANCHI or HILBERT");
    app.add_option("--field-label", cfg.field_label, "LMFDB field label");

    std::function<int()> run;
    auto sub = [&](const std::string& name, const std::string& help, int (*fn)(const RunConfig&)) {
        CLI::App* s = app.add_subcommand(name, help);
        s->fallthrough();
        s->callback([&run, fn, &cfg] { run = [fn, &cfg] { return fn(cfg); }; });
    };
    sub("field-info", "field arithmetic summary", cmd_field_info);
    sub("frey", "Frey curve model and invariants", cmd_frey);
    sub("local", "local reduction data of the Frey curve", cmd_local);
    sub("sunit", "S-unit equations and criteria", cmd_sunit);
    sub("eliminate", "newform elimination", cmd_eliminate);
    sub("criteria", "irreducibility inputs", cmd_criteria);
    sub("bounds", "bound synthesis C_K", cmd_bounds);
    sub("fetch", "fetch newforms from LMFDB into the cache", cmd_fetch);
    app.fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kError;
    }
    try {
        return run();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    } catch (const PayloadError& e) {
        std::cerr << "error: malformed payload at " << e.what() << "\n";
        return kError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kError;
    }
}
