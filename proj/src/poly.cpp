#include "ppelim/poly.hpp"

#include <bitset>

namespace ppelim {

void trim(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

long degree(const QPoly& f) { return static_cast<long>(f.size()) - 1; }

QPoly poly_add(const QPoly& f, const QPoly& g) {
    QPoly r(std::max(f.size(), g.size()), Rat(0));
    for (size_t i = 0; i < f.size(); ++i) r[i] += f[i];
    for (size_t i = 0; i < g.size(); ++i) r[i] += g[i];
    trim(r);
    return r;
}

QPoly poly_sub(const QPoly& f, const QPoly& g) { return poly_add(f, poly_scale(g, -1)); }

QPoly poly_scale(const QPoly& f, const Rat& c) {
    QPoly r(f);
    for (auto& x : r) x *= c;
    trim(r);
    return r;
}

QPoly poly_mul(const QPoly& f, const QPoly& g) {
    if (f.empty() || g.empty()) return {};
    QPoly r(f.size() + g.size() - 1, Rat(0));
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) r[i + j] += f[i] * g[j];
    trim(r);
    return r;
}

std::pair<QPoly, QPoly> poly_divrem(const QPoly& f, const QPoly& g) {
    if (g.empty()) throw MathError("polynomial division by zero");
    QPoly r = f, q;
    trim(r);
    if (r.size() >= g.size()) q.assign(r.size() - g.size() + 1, Rat(0));
    while (!r.empty() && r.size() >= g.size()) {
        size_t k = r.size() - g.size();
        Rat c = r.back() / g.back();
        q[k] = c;
        for (size_t i = 0; i < g.size(); ++i) r[i + k] -= c * g[i];
        r.pop_back();
        trim(r);
    }
    trim(q);
    return {q, r};
}

QPoly poly_gcd(QPoly f, QPoly g) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        QPoly r = poly_divrem(f, g).second;
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty()) f = poly_scale(f, 1 / Rat(f.back()));
    return f;
}

QPoly poly_derivative(const QPoly& f) {
    QPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * static_cast<long>(i));
    trim(r);
    return r;
}

Rat poly_eval(const QPoly& f, const Rat& x) {
    Rat r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

Rat resultant(QPoly f, QPoly g) {
    trim(f);
    trim(g);
    if (f.empty() || g.empty()) return 0;
    Rat res = 1;
    while (degree(g) > 0) {
        long m = degree(f), n = degree(g);
        QPoly r = poly_divrem(f, g).second;
        if (r.empty()) return 0;
        if ((m * n) % 2) res = -res;
        Rat lc = g.back();
        for (long k = 0; k < m - degree(r); ++k) res *= lc;
        f = std::move(g);
        g = std::move(r);
    }
    Rat c = g[0];
    for (long k = 0; k < degree(f); ++k) res *= c;
    return res;
}

namespace {

int sign_at_inf(const QPoly& f, bool negative) {
    if (f.empty()) return 0;
    int s = sgn(f.back());
    if (negative && degree(f) % 2) s = -s;
    return s;
}

int changes(const std::vector<QPoly>& seq, bool negative) {
    int count = 0, last = 0;
    for (const auto& p : seq) {
        int s = sign_at_inf(p, negative);
        if (s == 0) continue;
        if (last && s != last) ++count;
        last = s;
    }
    return count;
}

}  // namespace

long real_root_count(const QPoly& f0) {
    QPoly f = f0;
    trim(f);
    if (degree(f) < 1) return 0;
    QPoly s = poly_divrem(f, poly_gcd(f, poly_derivative(f))).first;
    std::vector<QPoly> seq{s, poly_derivative(s)};
    while (!seq.back().empty()) {
        QPoly r = poly_divrem(seq[seq.size() - 2], seq.back()).second;
        if (r.empty()) break;
        seq.push_back(poly_scale(r, -1));
    }
    return changes(seq, true) - changes(seq, false);
}

QPoly to_qpoly(const std::vector<Int>& c) {
    QPoly r;
    for (const auto& x : c) r.push_back(Rat(x));
    trim(r);
    return r;
}

namespace {

using FpPoly = std::vector<long>;

long mulmod(long a, long b, long p) { return static_cast<long>((__int128)a * b % p); }

long inv_mod(long a, long p) {
    long r = 1, e = p - 2, b = a % p;
    while (e) {
        if (e & 1) r = mulmod(r, b, p);
        b = mulmod(b, b, p);
        e >>= 1;
    }
    return r;
}

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

FpPoly fp_rem(FpPoly f, const FpPoly& g, long p) {
    long inv = inv_mod(g.back(), p);
    fp_trim(f);
    while (f.size() >= g.size()) {
        size_t k = f.size() - g.size();
        long c = mulmod(f.back(), inv, p);
        for (size_t i = 0; i < g.size(); ++i) f[i + k] = ((f[i + k] - mulmod(c, g[i], p)) % p + p) % p;
        fp_trim(f);
    }
    return f;
}

FpPoly fp_div(FpPoly f, const FpPoly& g, long p) {
    long inv = inv_mod(g.back(), p);
    fp_trim(f);
    FpPoly q(f.size() >= g.size() ? f.size() - g.size() + 1 : 0, 0);
    while (f.size() >= g.size()) {
        size_t k = f.size() - g.size();
        long c = mulmod(f.back(), inv, p);
        q[k] = c;
        for (size_t i = 0; i < g.size(); ++i) f[i + k] = ((f[i + k] - mulmod(c, g[i], p)) % p + p) % p;
        fp_trim(f);
    }
    return q;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, long p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    return fp_rem(r, m, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, long p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        FpPoly r = fp_rem(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        long inv = inv_mod(a.back(), p);
        for (auto& c : a) c = mulmod(c, inv, p);
    }
    return a;
}

FpPoly fp_powmod(FpPoly b, long e, const FpPoly& m, long p) {
    FpPoly r{1};
    b = fp_rem(b, m, p);
    while (e) {
        if (e & 1) r = fp_mulmod(r, b, m, p);
        b = fp_mulmod(b, b, m, p);
        e >>= 1;
    }
    return r;
}

// degrees of the irreducible factors of a squarefree monic f mod p
std::vector<long> ddf_degrees(FpPoly f, long p) {
    std::vector<long> out;
    FpPoly h{0, 1};
    for (long d = 1; 2 * d <= static_cast<long>(f.size()) - 1; ++d) {
        h = fp_powmod(h, p, f, p);
        FpPoly hx = h;
        if (hx.size() < 2) hx.resize(2, 0);
        hx[1] = (hx[1] - 1 + p) % p;
        fp_trim(hx);
        FpPoly g = fp_gcd(f, hx, p);
        long dg = static_cast<long>(g.size()) - 1;
        if (dg > 0) {
            for (long k = 0; k < dg / d; ++k) out.push_back(d);
            f = fp_div(f, g, p);
            h = fp_rem(h, f, p);
        }
    }
    if (f.size() > 1) out.push_back(static_cast<long>(f.size()) - 1);
    return out;
}

bool has_integer_root(const std::vector<Int>& f) {
    if (f[0] == 0) return true;
    std::vector<Int> divs{1};
    Int rest = abs(f[0]);
    for (const Int& q : prime_divisors(f[0])) {
        long k = 0;
        while (rest % q == 0) {
            rest /= q;
            ++k;
        }
        std::vector<Int> next;
        for (const Int& d : divs) {
            Int x = d;
            for (long i = 0; i <= k; ++i, x *= q) next.push_back(x);
        }
        divs = std::move(next);
        if (divs.size() > 1000000) throw MathError("constant term has too many divisors");
    }
    for (const Int& d : divs)
        for (const Int& r : {d, Int(-d)}) {
            Int v = 0;
            for (size_t i = f.size(); i-- > 0;) v = v * r + f[i];
            if (v == 0) return true;
        }
    return false;
}

}  // namespace

std::optional<bool> certify_irreducible(const std::vector<Int>& f) {
    const long n = static_cast<long>(f.size()) - 1;
    if (n < 1) return false;
    if (n == 1) return true;
    if (n > 60) return std::nullopt;
    std::bitset<64> possible;
    for (long k = 1; k < n; ++k) possible.set(k);
    int used = 0;
    for (long p = 3; p < 2000 && used < 80 && possible.any(); p += 2) {
        if (!is_prime(p)) continue;
        FpPoly fp;
        for (const Int& c : f) {
            Int r = c % p;
            if (r < 0) r += p;
            fp.push_back(r.get_si());
        }
        fp_trim(fp);
        if (static_cast<long>(fp.size()) - 1 != n) continue;
        FpPoly df;
        for (size_t i = 1; i < fp.size(); ++i) df.push_back(mulmod(fp[i], static_cast<long>(i) % p, p));
        fp_trim(df);
        if (fp_gcd(fp, df, p).size() != 1) continue;
        ++used;
        std::bitset<64> sums;
        sums.set(0);
        for (long d : ddf_degrees(fp, p)) sums |= sums << d;
        possible &= sums;
    }
    if (possible.none()) return true;
    if (has_integer_root(f)) return false;
    // without a linear factor, degree <= 3 is irreducible
    if (n <= 3) return true;
    return std::nullopt;
}

HeckeField make_hecke_field(std::vector<Int> poly) {
    while (!poly.empty() && poly.back() == 0) poly.pop_back();
    if (poly.size() < 2) throw MathError("Hecke polynomial must have degree at least one");
    if (poly.back() != 1) throw MathError("Hecke polynomial must be monic");
    auto irr = certify_irreducible(poly);
    if (!irr) throw MathError("could not certify irreducibility of the Hecke polynomial");
    if (!*irr) throw MathError("Hecke polynomial is reducible");
    return HeckeField{std::move(poly)};
}

HeckeElement hecke_from(const HeckeField& F, const Rat& r) {
    HeckeElement e(F.degree(), Rat(0));
    e[0] = r;
    return e;
}

HeckeElement hecke_add(const HeckeField& F, const HeckeElement& a, const HeckeElement& b) {
    HeckeElement r(F.degree(), Rat(0));
    for (long i = 0; i < F.degree(); ++i) r[i] = a[i] + b[i];
    return r;
}

HeckeElement hecke_sub(const HeckeField& F, const HeckeElement& a, const HeckeElement& b) {
    HeckeElement r(F.degree(), Rat(0));
    for (long i = 0; i < F.degree(); ++i) r[i] = a[i] - b[i];
    return r;
}

HeckeElement hecke_mul(const HeckeField& F, const HeckeElement& a, const HeckeElement& b) {
    const long n = F.degree();
    std::vector<Rat> prod(2 * n - 1, Rat(0));
    for (long i = 0; i < n; ++i)
        if (a[i] != 0)
            for (long j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    // reduce with x^n = -sum poly[k] x^k
    for (long k = 2 * n - 2; k >= n; --k) {
        if (prod[k] == 0) continue;
        Rat c = prod[k];
        prod[k] = 0;
        for (long i = 0; i < n; ++i) prod[k - n + i] -= c * F.poly[i];
    }
    prod.resize(n);
    return prod;
}

bool hecke_is_zero(const HeckeElement& a) {
    for (const auto& x : a)
        if (x != 0) return false;
    return true;
}

Rat hecke_norm(const HeckeField& F, const HeckeElement& e) {
    if (static_cast<long>(e.size()) > F.degree()) throw MathError("coordinate degree overflow");
    if (F.rational()) return e.empty() ? Rat(0) : e[0];
    QPoly g(e.begin(), e.end());
    trim(g);
    if (g.empty()) return 0;
    return resultant(to_qpoly(F.poly), g);
}

QPoly hecke_charpoly(const HeckeField& F, const HeckeElement& e) {
    const long n = F.degree();
    // multiplication matrix, column i = e * x^i
    std::vector<std::vector<Rat>> A(n, std::vector<Rat>(n, Rat(0)));
    HeckeElement basis = hecke_from(F, 1);
    for (long i = 0; i < n; ++i) {
        HeckeElement col = hecke_mul(F, e, basis);
        for (long r = 0; r < n; ++r) A[r][i] = col[r];
        HeckeElement x(n, Rat(0));
        if (n > 1) x[1] = 1;
        basis = n > 1 ? hecke_mul(F, basis, x) : basis;
    }
    // Faddeev-LeVerrier
    QPoly c(n + 1, Rat(0));
    c[n] = 1;
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
    for (long k = 1; k <= n; ++k) {
        std::vector<std::vector<Rat>> AM(n, std::vector<Rat>(n, Rat(0)));
        for (long i = 0; i < n; ++i)
            for (long l = 0; l < n; ++l)
                if (A[i][l] != 0)
                    for (long j = 0; j < n; ++j) AM[i][j] += A[i][l] * M[l][j];
        for (long i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
        M = AM;
        Rat tr = 0;
        for (long i = 0; i < n; ++i)
            for (long l = 0; l < n; ++l) tr += A[i][l] * M[l][i];
        c[n - k] = -tr / k;
    }
    return c;
}

bool hasse_bound_holds(const HeckeField& F, const HeckeElement& a, long N) {
    QPoly ca = hecke_charpoly(F, a);
    QPoly sq = poly_divrem(ca, poly_gcd(ca, poly_derivative(ca))).first;
    if (real_root_count(ca) != degree(sq)) return false;
    HeckeElement u = hecke_sub(F, hecke_from(F, 4 * N), hecke_mul(F, a, a));
    QPoly cu = hecke_charpoly(F, u);
    const long n = degree(cu);
    for (long k = 0; k <= n; ++k) {
        int s = sgn(cu[k]);
        if (s == 0) continue;
        int want = ((n - k) % 2 == 0) ? 1 : -1;
        if (s != want) return false;
    }
    return true;
}

namespace {

using ModPoly = std::vector<Int>;

void trim_mod(ModPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

ModPoly mod_rem(ModPoly f, const ModPoly& g, const Int& l) {
    Int inv;
    mpz_invert(inv.get_mpz_t(), Int(g.back()).get_mpz_t(), l.get_mpz_t());
    while (f.size() >= g.size()) {
        Int c = f.back() * inv % l;
        size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i) {
            f[shift + i] = (f[shift + i] - c * g[i]) % l;
            if (f[shift + i] < 0) f[shift + i] += l;
        }
        trim_mod(f);
    }
    return f;
}

ModPoly mod_gcd(ModPoly f, ModPoly g, const Int& l) {
    while (!g.empty()) {
        ModPoly r = mod_rem(f, g, l);
        f = std::move(g);
        g = std::move(r);
    }
    return f;
}

std::optional<ModPoly> reduce_mod(const std::vector<Rat>& c, const Int& l) {
    ModPoly out;
    for (const Rat& r : c) {
        if (r.get_den() % l == 0) return std::nullopt;
        Int inv;
        mpz_invert(inv.get_mpz_t(), r.get_den().get_mpz_t(), l.get_mpz_t());
        Int v = Int(r.get_num() * inv) % l;
        if (v < 0) v += l;
        out.push_back(v);
    }
    trim_mod(out);
    return out;
}

}  // namespace

std::optional<bool> common_prime_above(const HeckeField& F, const std::vector<HeckeElement>& els, long l) {
    const Int L = l;
    QPoly f = to_qpoly(F.poly);
    Rat disc = resultant(f, poly_derivative(f));
    if (disc == 0) throw MathError("common_prime_above: defining polynomial is not separable");
    if (disc.get_num() % (L * L) == 0) return std::nullopt;
    ModPoly g = *reduce_mod(f, L);
    for (const HeckeElement& e : els) {
        std::optional<ModPoly> r = reduce_mod(e, L);
        if (!r) return std::nullopt;
        g = mod_gcd(g, *r, L);
        if (g.size() <= 1) return false;
    }
    return g.size() > 1;
}

}  // namespace ppelim
