#include "ppelim/newforms.hpp"

#ifdef PPELIM_HAVE_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>

namespace ppelim {

using nlohmann::json;

std::string fetch_status_name(FetchStatus s) {
    switch (s) {
        case FetchStatus::NETWORK: return "network";
        case FetchStatus::CACHE: return "cache";
        case FetchStatus::CACHE_FALLBACK: return "cache-fallback";
        case FetchStatus::UNKNOWN_LEVEL: return "unknown-level";
    }
    return "?";
}

namespace {

// recursive descent over + - * / ^ with one free variable
class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    QPoly run() {
        QPoly v = expr();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return v;
    }

private:
    const std::string& s_;
    size_t i_ = 0;
    std::string var_;

    [[noreturn]] void fail(const std::string& why) {
        throw std::invalid_argument("cannot parse \"" + s_ + "\" at " + std::to_string(i_) + ": " + why);
    }
    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool eat(char c) {
        skip();
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }
    bool starts_atom() {
        skip();
        return i_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '(' || s_[i_] == '_');
    }

    QPoly expr() {
        QPoly v = term();
        for (;;) {
            if (eat('+'))
                v = poly_add(v, term());
            else if (eat('-'))
                v = poly_sub(v, term());
            else
                return v;
        }
    }
    QPoly term() {
        QPoly v = unary();
        for (;;) {
            if (eat('*')) {
                v = poly_mul(v, unary());
            } else if (eat('/')) {
                QPoly d = unary();
                if (degree(d) != 0) fail("division by a non-constant");
                v = poly_scale(v, 1 / d[0]);
            } else if (starts_atom()) {
                v = poly_mul(v, power());
            } else {
                return v;
            }
        }
    }
    QPoly unary() {
        if (eat('-')) return poly_scale(unary(), -1);
        if (eat('+')) return unary();
        return power();
    }
    QPoly power() {
        QPoly b = atom();
        skip();
        bool pw = false;
        if (eat('^')) {
            pw = true;
        } else if (i_ + 1 < s_.size() && s_[i_] == '*' && s_[i_ + 1] == '*') {
            i_ += 2;
            pw = true;
        }
        if (!pw) return b;
        skip();
        size_t st = i_;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
        if (st == i_) fail("expected an exponent");
        long k = std::stol(s_.substr(st, i_ - st));
        QPoly r{Rat(1)};
        for (long j = 0; j < k; ++j) r = poly_mul(r, b);
        return r;
    }
    QPoly atom() {
        skip();
        if (i_ >= s_.size()) fail("unexpected end");
        if (s_[i_] == '(') {
            ++i_;
            QPoly v = expr();
            if (!eat(')')) fail("expected ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            size_t st = i_;
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
            QPoly v{Rat(Int(s_.substr(st, i_ - st)))};
            trim(v);
            return v;
        }
        if (std::isalpha(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_') {
            size_t st = i_;
            while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
            std::string name = s_.substr(st, i_ - st);
            if (var_.empty()) var_ = name;
            if (name != var_) fail("second variable '" + name + "'");
            return QPoly{Rat(0), Rat(1)};
        }
        fail("unexpected '" + std::string(1, s_[i_]) + "'");
    }
};

std::string with_query(const std::string& path, const std::vector<std::pair<std::string, std::string>>& q) {
    std::string out = path;
    char sep = '?';
    for (const auto& [k, v] : q) {
        out += sep + k + "=" + httplib::detail::encode_query_param(v);
        sep = '&';
    }
    return out;
}

class Api {
public:
    Api(const std::string& base, int timeout) : cli_(base) {
        if (!cli_.is_valid()) throw FetchError("cannot use LMFDB base URL " + base);
        cli_.set_connection_timeout(timeout, 0);
        cli_.set_read_timeout(timeout, 0);
        cli_.set_follow_location(true);
    }

    // every record of a collection query, following "next" links
    json records(const std::string& collection, std::vector<std::pair<std::string, std::string>> q) {
        q.emplace_back("_format", "json");
        std::string target = with_query("/api/" + collection + "/", q);
        json all = json::array();
        for (int page = 0; page < 50 && !target.empty(); ++page) {
            auto res = cli_.Get(target);
            if (!res) throw FetchError("GET " + target + ": " + httplib::to_string(res.error()));
            if (res->status != 200) throw FetchError("GET " + target + ": HTTP " + std::to_string(res->status));
            json j;
            try {
                j = json::parse(res->body);
            } catch (const json::parse_error& e) {
                throw PayloadError("$", std::string("invalid JSON from ") + collection + ": " + e.what());
            }
            if (!j.is_object() || !j.contains("data") || !j["data"].is_array())
                throw PayloadError("$.data", "missing record list in " + collection + " response");
            for (auto& r : j["data"]) all.push_back(r);
            target.clear();
            if (j.contains("next") && j["next"].is_string() && !j["next"].get<std::string>().empty()) {
                std::string nx = j["next"].get<std::string>();
                auto pos = nx.find("/api/");
                target = pos == std::string::npos ? nx : nx.substr(pos);
            }
        }
        return all;
    }

private:
    httplib::Client cli_;
};

const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) throw PayloadError(path + "." + key, "missing");
    return j.at(key);
}

std::string str_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_string()) throw PayloadError(path + "." + key, "expected a string");
    return v.get<std::string>();
}

QPoly parse_at(const std::string& text, const std::string& path) {
    try {
        return parse_univariate(text);
    } catch (const std::invalid_argument& e) {
        throw PayloadError(path, e.what());
    }
}

std::vector<Int> monic_integral(const QPoly& f, const std::string& path) {
    if (f.empty() || f.back() != 1) throw PayloadError(path, "Hecke polynomial is not monic");
    std::vector<Int> c;
    for (const Rat& r : f) {
        if (r.get_den() != 1) throw PayloadError(path, "Hecke polynomial is not integral");
        c.push_back(r.get_num());
    }
    return c;
}

HeckeElement coordinates(const QPoly& e, const HeckeField& F, const std::string& path) {
    QPoly r = poly_divrem(e, to_qpoly(F.poly)).second;
    HeckeElement out(F.degree(), Rat(0));
    if (static_cast<long>(r.size()) > F.degree()) throw PayloadError(path, "coordinate overflow");
    for (size_t i = 0; i < r.size(); ++i) out[i] = r[i];
    return out;
}

HeckeElement eigen_value(const json& v, const HeckeField& F, const std::string& path) {
    if (v.is_number_integer()) return coordinates(QPoly{Rat(Int(v.dump()))}, F, path);
    if (v.is_string()) {
        QPoly e = parse_at(v.get<std::string>(), path);
        trim(e);
        return coordinates(e, F, path);
    }
    throw PayloadError(path, "expected an eigenvalue");
}

bool in_level(const PrimeIdeal& q, const std::vector<PrimeIdeal>& support) {
    return std::any_of(support.begin(), support.end(), [&](const PrimeIdeal& P) { return P == q; });
}

void finish(NewformRecord& r, const std::string& path) {
    try {
        validate_record(r);
    } catch (const FixtureError& e) {
        throw PayloadError(path, e.what());
    }
    r.hecke_field = make_hecke_field(r.hecke_field.poly);
}

// ["[4,2,2]", "[5,5,2*w-1]", ...] -> position -> local prime label (norm < 50)
std::map<size_t, std::string> hilbert_prime_map(const json& primes, const QuadField& K, const std::string& path) {
    std::map<size_t, std::string> out;
    std::vector<PrimeIdeal> local = primes_up_to(K, 50);
    for (size_t i = 0; i < primes.size(); ++i) {
        const std::string pth = path + "[" + std::to_string(i) + "]";
        if (!primes[i].is_string()) throw PayloadError(pth, "expected a string");
        std::string s = primes[i].get<std::string>();
        s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }), s.end());
        auto c1 = s.find(','), c2 = s.find(',', c1 == std::string::npos ? 0 : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos) throw PayloadError(pth, "malformed prime " + s);
        long N, p;
        try {
            N = std::stol(s.substr(0, c1));
            p = std::stol(s.substr(c1 + 1, c2 - c1 - 1));
        } catch (const std::exception&) {
            throw PayloadError(pth, "malformed prime " + s);
        }
        if (N >= 50) continue;
        QPoly g = parse_at(s.substr(c2 + 1), pth);
        g.resize(std::max<size_t>(g.size(), 2), Rat(0));
        if (g.size() > 2) throw PayloadError(pth, "generator is not linear in w");
        FieldElement gen(K, g[0], g[1]);
        std::vector<const PrimeIdeal*> hits;
        for (const PrimeIdeal& P : local)
            if (P.norm() == N && P.p == p && P.contains(gen) && valuation(gen, P) == 1) hits.push_back(&P);
        if (hits.size() != 1)
            throw PayloadError(pth, "cannot reconcile prime " + s + " (" + std::to_string(hits.size()) + " matches)");
        out[i] = hits[0]->label;
    }
    return out;
}

std::vector<NewformRecord> fetch_hilbert(Api& api, const QuadField& K, const std::string& field_label,
                                         const std::string& level_label, long level_norm) {
    json fields = api.records("hmf_fields", {{"label", field_label}});
    if (fields.empty()) throw PayloadError("$.data", "no hmf_fields record for " + field_label);
    auto pmap = hilbert_prime_map(field(fields[0], "primes", "$.data[0]"), K, "$.data[0].primes");
    std::vector<PrimeIdeal> support = level_support(K, level_norm);
    json forms = api.records("hmf_forms", {{"field_label", field_label}, {"level_label", level_label}});
    std::vector<NewformRecord> out;
    for (size_t i = 0; i < forms.size(); ++i) {
        const std::string path = "$.data[" + std::to_string(i) + "]";
        std::string label = str_field(forms[i], "label", path);
        json hecke = api.records("hmf_hecke", {{"label", label}});
        if (hecke.size() != 1) throw PayloadError("$.data", "expected one hmf_hecke record for " + label);
        const json& h = hecke[0];
        NewformRecord r;
        r.base_field = K;
        r.level_label = level_label;
        r.level_norm = level_norm;
        r.kind = FormKind::HILBERT;
        r.label = label;
        r.lmfdb_label = label;
        QPoly hp = parse_at(str_field(h, "hecke_polynomial", "$.data[0]"), "$.data[0].hecke_polynomial");
        trim(hp);
        r.hecke_field.poly = monic_integral(hp, "$.data[0].hecke_polynomial");
        const json& ev = field(h, "hecke_eigenvalues", "$.data[0]");
        if (!ev.is_array()) throw PayloadError("$.data[0].hecke_eigenvalues", "expected a list");
        for (const auto& [idx, lab] : pmap) {
            if (idx >= ev.size()) continue;
            PrimeIdeal q = prime_by_label(K, lab);
            if (in_level(q, support)) continue;
            r.eigenvalues[lab] =
                eigen_value(ev[idx], r.hecke_field, "$.data[0].hecke_eigenvalues[" + std::to_string(idx) + "]");
        }
        finish(r, path);
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace

std::vector<Rat> parse_univariate(const std::string& expr) {
    QPoly f = ExprParser(expr).run();
    trim(f);
    return f;
}

FieldElement parse_element(const QuadField& K, const std::string& expr) {
    QPoly f = parse_univariate(expr);
    QPoly mod{Rat(-K.n()), Rat(-K.T()), Rat(1)};
    QPoly r = f.size() > 2 ? poly_divrem(f, mod).second : f;
    r.resize(2, Rat(0));
    return FieldElement(K, r[0], r[1]);
}

std::vector<NewformRecord> decode_bianchi(const std::string& body, const QuadField& K, const std::string& level_label,
                                          long level_norm) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw PayloadError("$", e.what());
    }
    const json& data = j.is_array() ? j : field(j, "data", "$");
    if (!data.is_array()) throw PayloadError("$.data", "expected a list");
    std::vector<PrimeIdeal> primes = primes_up_to(K, 50);
    std::vector<PrimeIdeal> support = level_support(K, level_norm);
    std::vector<NewformRecord> out;
    for (size_t i = 0; i < data.size(); ++i) {
        const std::string path = "$.data[" + std::to_string(i) + "]";
        const json& rec = data[i];
        NewformRecord r;
        r.base_field = K;
        r.level_label = level_label;
        r.level_norm = level_norm;
        r.kind = FormKind::BIANCHI;
        r.label = str_field(rec, "label", path);
        r.lmfdb_label = r.label;
        r.hecke_field.poly = {Int(0), Int(1)};
        for (const char* key : {"hecke_poly", "hecke_polynomial"}) {
            if (rec.contains(key) && rec[key].is_string()) {
                QPoly hp = parse_at(rec[key].get<std::string>(), path + "." + key);
                trim(hp);
                r.hecke_field.poly = monic_integral(hp, path + "." + key);
            }
        }
        const json& eigs = field(rec, "hecke_eigs", path);
        if (!eigs.is_array()) throw PayloadError(path + ".hecke_eigs", "expected a list");
        for (size_t k = 0; k < eigs.size() && k < primes.size(); ++k) {
            if (in_level(primes[k], support)) continue;
            r.eigenvalues[primes[k].label] =
                eigen_value(eigs[k], r.hecke_field, path + ".hecke_eigs[" + std::to_string(k) + "]");
        }
        finish(r, path);
        out.push_back(std::move(r));
    }
    return out;
}

std::pair<std::string, long> resolve_level(const QuadField& K, const std::string& level) {
    long N, idx = 1;
    try {
        size_t pos = 0;
        auto dot = level.find('.');
        N = std::stol(level.substr(0, dot), &pos);
        if (pos != (dot == std::string::npos ? level.size() : dot)) throw std::invalid_argument(level);
        if (dot != std::string::npos) {
            idx = std::stol(level.substr(dot + 1), &pos);
            if (pos != level.size() - dot - 1) throw std::invalid_argument(level);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed level '" + level + "'");
    }
    if (N < 1 || idx < 1) throw std::invalid_argument("malformed level '" + level + "'");
    std::string label = std::to_string(N) + "." + std::to_string(idx);
    if (idx > ideals_of_norm(K, N)) return {label, -1};
    return {label, N};
}

FetchResult fetch_lmfdb(const std::string& field_label, const std::string& level, FormKind kind,
                        const FetchOptions& opt) {
    QuadField K = field_from_label(field_label);
    if ((kind == FormKind::BIANCHI) == K.real())
        throw std::invalid_argument(kind_name(kind) + " forms are not defined over " + field_label);
    auto [label, N] = resolve_level(K, level);
    FetchResult res;
    res.level_label = label;
    if (N < 0) {
        res.status = FetchStatus::UNKNOWN_LEVEL;
        res.note = "no ideal " + label + " in " + field_label;
        return res;
    }
    std::string cache = opt.cache_dir.empty() ? std::string() : fixture_path(opt.cache_dir, field_label, kind, label);
    auto from_cache = [&](FetchStatus st, const std::string& note) {
        if (cache.empty() || !std::filesystem::exists(cache))
            throw FetchError(note.empty() ? "no cached data for " + field_label + " " + label : note);
        res.status = st;
        res.forms = load_fixture(cache);
        res.note = note;
        return res;
    };
    if (opt.offline) return from_cache(FetchStatus::CACHE, "");

    std::vector<NewformRecord> forms;
    try {
        Api api(opt.base_url, opt.timeout_seconds);
        if (kind == FormKind::BIANCHI) {
            json data = api.records("bmf_forms", {{"field_label", field_label}, {"level_label", label}});
            forms = decode_bianchi(json{{"data", data}}.dump(), K, label, N);
        } else {
            forms = fetch_hilbert(api, K, field_label, label, N);
        }
    } catch (const FetchError& e) {
        return from_cache(FetchStatus::CACHE_FALLBACK, e.what());
    }
    std::sort(forms.begin(), forms.end(), [](const NewformRecord& a, const NewformRecord& b) { return a.label < b.label; });
    res.status = FetchStatus::NETWORK;
    res.forms = forms;
    if (!cache.empty()) {
        FixtureData d;
        d.base_field = field_label;
        d.level = label;
        d.level_norm = N;
        d.kind = kind;
        d.provenance = "LMFDB API " + opt.base_url;
        d.forms = forms;
        save_fixture(cache, d);
    }
    return res;
}

}  // namespace ppelim
