#include "ppelim/eliminate.hpp"

#include "ppelim/gf.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace ppelim {

using nlohmann::json;

TraceSet trace_set(long norm_q, int t) {
    if (t != 2 && t != 3) throw std::invalid_argument("trace_set: unsupported t = " + std::to_string(t));
    if (norm_q < 2) throw std::invalid_argument("trace_set: norm must be at least 2");
    TraceSet s{norm_q, t, {}};
    long r = Int(sqrt(Int(4 * norm_q))).get_si();
    for (long a = -r; a <= r; ++a)
        if (((norm_q + 1 - a) % t + t) % t == 0) s.values.push_back(a);
    return s;
}

namespace {

bool divides_level(const NewformRecord& f, const PrimeIdeal& q) {
    for (const PrimeIdeal& P : level_support(f.base_field, f.level_norm))
        if (P == q) return true;
    return false;
}

}  // namespace

Bfq b_fq(const NewformRecord& f, const PrimeIdeal& q, int t) {
    if (t != 2 && t != 3) throw std::invalid_argument("b_fq: unsupported t");
    if (q.p == t) throw EliminationError("b_fq: " + q.label + " lies above " + std::to_string(t));
    if (divides_level(f, q)) throw EliminationError("b_fq: " + q.label + " divides the level " + f.level_label);
    auto it = f.eigenvalues.find(q.label);
    if (it == f.eigenvalues.end()) throw EliminationError("b_fq: no eigenvalue of " + f.label + " at " + q.label);
    const HeckeField& F = f.hecke_field;
    const HeckeElement& a = it->second;
    long N = q.norm();
    HeckeElement v = hecke_sub(F, hecke_from(F, Rat((N + 1) * (N + 1))), hecke_mul(F, a, a));
    v = hecke_mul(F, hecke_from(F, Rat(N)), v);
    for (long ai : trace_set(N, t).values) v = hecke_mul(F, v, hecke_sub(F, hecke_from(F, Rat(ai)), a));
    Rat n = hecke_norm(F, v);
    if (n.get_den() != 1) throw std::logic_error("b_fq: non-integral norm");
    return {v, abs(n.get_num())};
}

std::vector<PrimeIdeal> auxiliary_primes(const QuadField& K, const std::vector<PrimeIdeal>& level, int t,
                                         long norm_bound) {
    std::vector<PrimeIdeal> out;
    for (PrimeIdeal& q : primes_up_to(K, norm_bound)) {
        if (q.p == t) continue;
        if (std::any_of(level.begin(), level.end(), [&](const PrimeIdeal& P) { return P == q; })) continue;
        out.push_back(std::move(q));
    }
    return out;
}

FormVerdict eliminator(const NewformRecord& f, const std::vector<PrimeIdeal>& primes, int t, long floor) {
    if (primes.empty()) throw EliminationError("eliminator: empty auxiliary prime list for " + f.label);
    FormVerdict v;
    v.form = f.label;
    v.rational = f.rational();
    v.floor = floor;
    Int g = 0;
    std::vector<HeckeElement> values;
    for (const PrimeIdeal& q : primes) {
        Bfq b = b_fq(f, q, t);
        v.per_prime[q.label] = b.norm;
        if (b.norm != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.norm.get_mpz_t());
        values.push_back(std::move(b.value));
    }
    for (const auto& [q, n] : v.per_prime)
        if (n != 0 && n % g != 0) throw std::logic_error("eliminator does not divide N_fq");
    v.eliminator = g;
    if (g == 0) {
        v.all_survive = true;
    } else {
        for (const Int& r : prime_divisors(g)) {
            if (r <= floor) continue;
            if (!v.rational && r.fits_slong_p() && common_prime_above(f.hecke_field, values, r.get_si()) == false)
                v.cleared.push_back(r.get_si());
            else
                v.survivors.push_back(r.get_si());
        }
    }
    return v;
}

CurveRecord load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw EliminationError(path + ": cannot open");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw EliminationError(path + ": " + e.what());
    }
    CurveRecord c;
    try {
        c.label = j.at("label").get<std::string>();
        c.field = field_from_label(j.at("base_field").get<std::string>());
        c.conductor_label = j.at("conductor_label").get<std::string>();
        if (j.contains("provenance")) c.provenance = j["provenance"].get<std::string>();
        const json& ai = j.at("ainvs");
        if (!ai.is_array() || ai.size() != 5) throw EliminationError(path + ": ainvs must have five entries");
        std::vector<FieldElement> a;
        for (size_t i = 0; i < 5; ++i) {
            const json& e = ai[i];
            if (!e.is_array() || e.size() != 2)
                throw EliminationError(path + ": ainvs[" + std::to_string(i) + "] must be a coordinate pair");
            a.emplace_back(c.field, parse_rational(e[0].get<std::string>()), parse_rational(e[1].get<std::string>()));
        }
        c.model = WeierstrassModel{a[0], a[1], a[2], a[3], a[4]};
    } catch (const EliminationError&) {
        throw;
    } catch (const std::exception& e) {
        throw EliminationError(path + ": " + e.what());
    }
    if (invariants(c.model).delta.is_zero()) throw EliminationError(path + ": singular model");
    return c;
}

std::vector<CurveRecord> curves_for(const std::string& dir, const QuadField& K, const std::string& conductor_label) {
    std::vector<CurveRecord> out;
    if (!std::filesystem::is_directory(dir)) return out;
    std::vector<std::string> paths;
    for (const auto& ent : std::filesystem::directory_iterator(dir))
        if (ent.path().extension() == ".json") paths.push_back(ent.path().string());
    std::sort(paths.begin(), paths.end());
    for (const std::string& p : paths) {
        CurveRecord c = load_curve(p);
        if (c.field == K && c.conductor_label == conductor_label) out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::string> check_curve_matches(const NewformRecord& f, const CurveRecord& E) {
    if (!f.rational()) throw EliminationError(f.label + ": curve matching needs a rational form");
    if (E.field != f.base_field) throw EliminationError(E.label + ": curve over a different field");
    std::vector<std::string> used;
    for (const auto& [lab, a] : f.eigenvalues) {
        PrimeIdeal q = prime_by_label(f.base_field, lab);
        std::optional<long> tr = trace_at(E.model, q);
        if (!tr) continue;
        if (Rat(*tr) != a[0])
            throw EliminationError(E.label + " does not match " + f.label + " at " + lab + ": a = " +
                                   std::to_string(*tr) + " vs " + to_string(a[0]));
        used.push_back(lab);
    }
    if (used.empty()) throw EliminationError(E.label + ": no primes to compare against " + f.label);
    return used;
}

InertiaResult inertia_eliminate(const NewformRecord& f, const FormVerdict& v, const CurveRecord& E, long frey_vj,
                                const PrimeIdeal& P) {
    if (v.eliminator != 0)
        throw EliminationError(f.label + ": eliminator " + to_string(v.eliminator) +
                               " is nonzero; use trace elimination");
    InertiaResult r;
    r.form = f.label;
    r.curve = E.label;
    r.prime = P.label;
    r.frey_vj = frey_vj;
    r.matched_primes = check_curve_matches(f, E);
    r.curve_vj = vj_direct(E.model, P);
    r.eliminated = r.curve_vj >= 0 && frey_vj < 0;
    return r;
}

BoundReport bound_synthesis(const QuadField& K, Signature sig, const std::vector<FormVerdict>& verdicts,
                            const std::vector<InertiaResult>& inertia, const std::vector<long>& torsion_primes,
                            long floor, const std::vector<long>& excluded) {
    BoundReport rep;
    rep.field = K;
    rep.signature = sig;
    rep.verdicts = verdicts;
    rep.inertia = inertia;
    rep.floor = floor;
    rep.torsion_primes = torsion_primes;
    rep.excluded = excluded;
    std::sort(rep.verdicts.begin(), rep.verdicts.end(),
              [](const FormVerdict& a, const FormVerdict& b) { return a.form < b.form; });
    std::sort(rep.torsion_primes.begin(), rep.torsion_primes.end());
    std::sort(rep.excluded.begin(), rep.excluded.end());
    auto is_excluded = [&](long p) { return std::binary_search(rep.excluded.begin(), rep.excluded.end(), p); };
    long bound = floor;
    for (const FormVerdict& v : rep.verdicts) {
        if (v.eliminator == 0) {
            bool done = std::any_of(inertia.begin(), inertia.end(),
                                    [&](const InertiaResult& r) { return r.form == v.form && r.eliminated; });
            if (!done) rep.unresolved.push_back(v.form);
            continue;
        }
        for (long s : v.survivors)
            if (!is_excluded(s)) bound = std::max(bound, s);
    }
    for (long s : rep.torsion_primes)
        if (!is_excluded(s)) bound = std::max(bound, s);
    for (;;) {
        long nxt = bound + 1;
        while (!is_prime(nxt)) ++nxt;
        if (!is_excluded(nxt)) break;
        bound = nxt;
    }
    rep.bound = rep.resolved() ? bound : 0;
    return rep;
}

}  // namespace ppelim
