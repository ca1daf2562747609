#include "ppelim/gf.hpp"

#include <stdexcept>

namespace ppelim {

namespace {

// coefficient vectors of length k over F_p packed in base p
std::vector<long> unpack(long a, long p, int k) {
    std::vector<long> c(k);
    for (int i = 0; i < k; ++i) {
        c[i] = a % p;
        a /= p;
    }
    return c;
}

long pack(const std::vector<long>& c, long p) {
    long a = 0;
    for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) a = a * p + c[i];
    return a;
}

// monic f of degree k over F_p with no root in F_{p^j} for j <= k/2, found by brute force
std::vector<long> irreducible_modulus(long p, int k) {
    if (k == 1) return {0, 1};
    long total = 1;
    for (int i = 0; i < k; ++i) total *= p;
    for (long code = 0; code < total; ++code) {
        std::vector<long> f = unpack(code, p, k);
        f.push_back(1);
        // irreducible iff no factor of degree <= k/2; test by trial division over monic polys
        bool irreducible = true;
        for (int d = 1; 2 * d <= k && irreducible; ++d) {
            long count = 1;
            for (int i = 0; i < d; ++i) count *= p;
            for (long g = 0; g < count && irreducible; ++g) {
                std::vector<long> h = unpack(g, p, d);
                h.push_back(1);
                std::vector<long> r = f;
                for (int i = k; i >= d; --i) {
                    long c = r[i];
                    if (c == 0) continue;
                    for (int j = 0; j <= d; ++j) r[i - d + j] = ((r[i - d + j] - c * h[j]) % p + p) % p;
                }
                bool zero = true;
                for (int i = 0; i < d; ++i) zero = zero && r[i] == 0;
                if (zero) irreducible = false;
            }
        }
        if (irreducible) return f;
    }
    throw std::logic_error("no irreducible polynomial");
}

}  // namespace

GF::GF(long p, int k) : p_(p), k_(k) {
    if (!is_prime(p) || k < 1) throw std::invalid_argument("GF: bad characteristic or degree");
    q_ = 1;
    for (int i = 0; i < k; ++i) q_ *= p;
    if (q_ > 4096) throw std::invalid_argument("GF: field too large");
    std::vector<long> f = irreducible_modulus(p, k);
    add_.assign(q_ * q_, 0);
    mul_.assign(q_ * q_, 0);
    neg_.assign(q_, 0);
    for (long a = 0; a < q_; ++a) {
        std::vector<long> ca = unpack(a, p, k);
        std::vector<long> na(k);
        for (int i = 0; i < k; ++i) na[i] = (p - ca[i]) % p;
        neg_[a] = pack(na, p);
        for (long b = 0; b < q_; ++b) {
            std::vector<long> cb = unpack(b, p, k);
            std::vector<long> s(k);
            for (int i = 0; i < k; ++i) s[i] = (ca[i] + cb[i]) % p;
            add_[a * q_ + b] = pack(s, p);
            std::vector<long> prod(2 * k - 1, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p;
            for (int i = 2 * k - 2; i >= k; --i) {
                long c = prod[i];
                if (c == 0) continue;
                for (int j = 0; j <= k; ++j) prod[i - k + j] = ((prod[i - k + j] - c * f[j]) % p + p) % p;
            }
            prod.resize(k);
            mul_[a * q_ + b] = pack(prod, p);
        }
    }
}

long GF::inv(long a) const {
    if (a == 0) throw MathError("GF: inverse of zero");
    for (long b = 1; b < q_; ++b)
        if (mul(a, b) == 1) return b;
    throw std::logic_error("GF: no inverse");
}

long GF::from_int(const Int& n) const {
    Int r = n % p_;
    if (r < 0) r += p_;
    return r.get_si();
}

long GF::from_rat(const Rat& r) const {
    Int den = r.get_den();
    if (den % p_ == 0) throw MathError("GF: denominator divisible by the characteristic");
    return mul(from_int(r.get_num()), inv(from_int(den)));
}

long affine_points(const GF& F, long a1, long a2, long a3, long a4, long a6) {
    long q = F.q();
    long count = 0;
    for (long x = 0; x < q; ++x) {
        long x2 = F.mul(x, x);
        long rhs = F.add(F.add(F.mul(x2, x), F.mul(a2, x2)), F.add(F.mul(a4, x), a6));
        long lin = F.add(F.mul(a1, x), a3);
        for (long y = 0; y < q; ++y)
            if (F.add(F.mul(y, y), F.mul(lin, y)) == rhs) ++count;
    }
    return count;
}

long frobenius_trace(const GF& F, long a1, long a2, long a3, long a4, long a6) {
    return F.q() + 1 - (affine_points(F, a1, a2, a3, a4, a6) + 1);
}

bool nonsingular(const GF& F, long a1, long a2, long a3, long a4, long a6) {
    // b-invariants and discriminant in F
    auto m = [&](long a, long b) { return F.mul(a, b); };
    auto ad = [&](long a, long b) { return F.add(a, b); };
    auto c = [&](long n) { return F.from_int(n); };
    long b2 = ad(m(a1, a1), m(c(4), a2));
    long b4 = ad(m(a1, a3), m(c(2), a4));
    long b6 = ad(m(a3, a3), m(c(4), a6));
    long b8 = F.sub(ad(ad(m(m(a1, a1), a6), m(c(4), m(a2, a6))), m(a2, m(a3, a3))),
                    ad(m(a1, m(a3, a4)), m(a4, a4)));
    long d = F.neg(m(m(b2, b2), b8));
    d = F.sub(d, m(c(8), m(b4, m(b4, b4))));
    d = F.sub(d, m(c(27), m(b6, b6)));
    d = ad(d, m(c(9), m(b2, m(b4, b6))));
    return d != 0;
}

long ResidueField::reduce(const FieldElement& e) const {
    return F.add(F.from_rat(e.x()), F.mul(F.from_rat(e.y()), omega));
}

ResidueField residue_field(const PrimeIdeal& P) {
    const QuadField& K = P.K;
    if (P.f == 1) {
        GF F(P.p, 1);
        return {F, F.from_int(P.residue)};
    }
    GF F(P.p, 2);
    long T = F.from_int(K.T()), n = F.from_int(K.n());
    for (long w = 0; w < F.q(); ++w)
        if (F.mul(w, w) == F.add(F.mul(T, w), n)) return {F, w};
    throw std::logic_error("residue_field: w has no root");
}

std::optional<long> trace_at(const WeierstrassModel& E, const PrimeIdeal& P) {
    for (const FieldElement* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6})
        if (!a->is_zero() && valuation(*a, P) < 0) throw MathError("trace_at: model not integral at " + P.label);
    ResidueField R = residue_field(P);
    long a1 = R.reduce(E.a1), a2 = R.reduce(E.a2), a3 = R.reduce(E.a3), a4 = R.reduce(E.a4), a6 = R.reduce(E.a6);
    if (!nonsingular(R.F, a1, a2, a3, a4, a6)) return std::nullopt;
    return frobenius_trace(R.F, a1, a2, a3, a4, a6);
}

}  // namespace ppelim
