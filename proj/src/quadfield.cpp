#include "ppelim/quadfield.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>

namespace ppelim {

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rat& v) {
    Rat c = v;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rat parse_rational(const std::string& s) {
    auto bad = [&] { return MathError("malformed rational '" + s + "'"); };
    if (s.empty()) throw bad();
    auto slash = s.find('/');
    auto digits = [&](const std::string& t, bool sign_ok) {
        size_t i = 0;
        if (sign_ok && !t.empty() && (t[0] == '-' || t[0] == '+')) i = 1;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string num = s.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!digits(num, true) || !digits(den, false)) throw bad();
    if (num[0] == '+') num = num.substr(1);
    Int n(num), d(den);
    if (d == 0) throw bad();
    Rat r(n, d);
    r.canonicalize();
    return r;
}

bool is_squarefree(long n) {
    n = std::labs(n);
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

bool is_prime(long n) {
    if (n < 2) return false;
    for (long p = 2; p * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

long valuation(const Int& n, long p) {
    if (n == 0) throw MathError("valuation of zero");
    Int m = abs(n);
    long v = 0;
    while (mpz_divisible_ui_p(m.get_mpz_t(), p)) {
        m /= p;
        ++v;
    }
    return v;
}

long valuation(const Rat& r, long p) { return valuation(Int(r.get_num()), p) - valuation(Int(r.get_den()), p); }

namespace {

Int pollard_brent(const Int& n) {
    if (mpz_even_p(n.get_mpz_t())) return 2;
    for (unsigned long c = 1;; ++c) {
        Int y = 2, x, g = 1, q = 1, ys;
        unsigned long r = 1, m = 64;
        auto f = [&](const Int& v) { return Int((v * v + c) % n); };
        while (g == 1) {
            x = y;
            for (unsigned long i = 0; i < r; ++i) y = f(y);
            unsigned long k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (unsigned long i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = (q * abs(Int(x - y))) % n;
                }
                mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
                k += m;
            }
            r *= 2;
        }
        if (g == n) {
            do {
                ys = f(ys);
                Int d = abs(Int(x - ys));
                mpz_gcd(g.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void factor_into(Int n, std::set<Int>& out) {
    if (n == 1) return;
    if (mpz_probab_prime_p(n.get_mpz_t(), 40)) {
        out.insert(n);
        return;
    }
    Int d = pollard_brent(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<Int> prime_divisors(const Int& n0) {
    if (n0 == 0) throw MathError("prime divisors of zero");
    Int n = abs(n0);
    std::set<Int> out;
    for (unsigned long p = 2; p < 10000 && n > 1; ++p) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.insert(Int(p));
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
        }
    }
    factor_into(n, out);
    return {out.begin(), out.end()};
}

QuadField make_field(long m) {
    if (m == 0 || m == 1) throw MathError("degenerate field parameter " + std::to_string(m));
    if (!is_squarefree(m)) throw MathError("field parameter " + std::to_string(m) + " is not squarefree");
    QuadField K;
    K.m = m;
    K.half = ((m % 4) + 4) % 4 == 1;
    K.disc = K.half ? m : 4 * m;
    return K;
}

std::string QuadField::label() const {
    return "2." + std::to_string(real() ? 2 : 0) + "." + std::to_string(std::labs(disc)) + ".1";
}

FieldElement::FieldElement(const QuadField& K, Rat x, Rat y) : K_(K), x_(std::move(x)), y_(std::move(y)) {
    x_.canonicalize();
    y_.canonicalize();
}

void FieldElement::check(const FieldElement& o) const {
    if (K_ != o.K_) throw MathError("elements of different fields");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check(o);
    return FieldElement(K_, x_ + o.x_, y_ + o.y_);
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check(o);
    return FieldElement(K_, x_ - o.x_, y_ - o.y_);
}

FieldElement FieldElement::operator-() const { return FieldElement(K_, -x_, -y_); }

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check(o);
    Rat yy = y_ * o.y_;
    return FieldElement(K_, x_ * o.x_ + yy * K_.n(), x_ * o.y_ + y_ * o.x_ + yy * K_.T());
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    check(o);
    if (o.is_zero()) throw MathError("division by zero");
    Rat n = o.norm();
    FieldElement c = o.conjugate();
    return (*this * c) * Rat(1 / n);
}

bool FieldElement::operator==(const FieldElement& o) const { return K_ == o.K_ && x_ == o.x_ && y_ == o.y_; }

FieldElement FieldElement::conjugate() const { return FieldElement(K_, x_ + y_ * K_.T(), -y_); }

FieldElement FieldElement::pow(long k) const {
    if (k < 0) return FieldElement(K_, 1) / pow(-k);
    FieldElement r(K_, 1), b = *this;
    while (k) {
        if (k & 1) r = r * b;
        b = b * b;
        k >>= 1;
    }
    return r;
}

Rat FieldElement::norm() const { return x_ * x_ + x_ * y_ * K_.T() - y_ * y_ * K_.n(); }

Rat FieldElement::trace() const { return 2 * x_ + y_ * K_.T(); }

bool FieldElement::is_integral() const { return x_.get_den() == 1 && y_.get_den() == 1; }

int FieldElement::sign(int embedding) const {
    if (!K_.real()) throw MathError("sign requires a real field");
    Rat u = K_.half ? x_ + y_ / 2 : x_;
    Rat v = K_.half ? y_ / 2 : y_;
    if (embedding) v = -v;
    int su = sgn(u), sv = sgn(v);
    if (su >= 0 && sv >= 0) return (su || sv) ? 1 : 0;
    if (su <= 0 && sv <= 0) return -1;
    Rat uu = u * u, vv = v * v * K_.m;
    if (su > 0) return uu > vv ? 1 : -1;
    return vv > uu ? 1 : -1;
}

std::string FieldElement::str() const {
    if (y_ == 0) return to_string(x_);
    std::string s;
    if (x_ != 0) s = to_string(x_) + (y_ > 0 ? "+" : "");
    if (y_ == 1) return s + "w";
    if (y_ == -1) return s + "-w";
    return s + to_string(y_) + "*w";
}

FieldElement operator*(const Rat& r, const FieldElement& e) { return e * r; }
FieldElement operator*(long r, const FieldElement& e) { return e * Rat(r); }

int kronecker(const Int& a, long p) {
    Int pp(p);
    return mpz_kronecker(a.get_mpz_t(), pp.get_mpz_t());
}

namespace {

long mod(const Int& a, long p) {
    Int r = a % p;
    if (r < 0) r += p;
    return r.get_si();
}

long mulmod(long a, long b, long p) { return static_cast<long>((__int128)a * b % p); }

long powmod(long b, long e, long p) {
    Int r;
    Int bb(b), ee(e), pp(p);
    mpz_powm(r.get_mpz_t(), bb.get_mpz_t(), ee.get_mpz_t(), pp.get_mpz_t());
    return r.get_si();
}

long sqrt_mod(long a, long p) {
    a %= p;
    if (a < 0) a += p;
    if (a == 0) return 0;
    if (p == 2) return a;
    // Tonelli-Shanks
    long q = p - 1, s = 0;
    while (q % 2 == 0) {
        q /= 2;
        ++s;
    }
    long z = 2;
    while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
    long M = s, c = powmod(z, q, p), t = powmod(a, q, p), R = powmod(a, (q + 1) / 2, p);
    while (t != 1) {
        long i = 0, tt = t;
        while (tt != 1) {
            tt = mulmod(tt, tt, p);
            ++i;
        }
        long b = c;
        for (long j = 0; j < M - i - 1; ++j) b = mulmod(b, b, p);
        M = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        R = mulmod(R, b, p);
    }
    return R;
}

// roots of x^2 - T x - n modulo p, ascending
std::vector<long> omega_roots(const QuadField& K, long p) {
    std::vector<long> out;
    if (p == 2) {
        for (long r = 0; r < 2; ++r)
            if (((r * r - K.T() * r - K.n()) % 2 + 2) % 2 == 0) out.push_back(r);
        return out;
    }
    long s = sqrt_mod(mod(Int(K.disc), p), p);
    long inv2 = (p + 1) / 2;
    std::set<long> rs;
    for (long sg : {s, p - s}) rs.insert(mod(Int(K.T() + sg) * inv2, p));
    return {rs.begin(), rs.end()};
}

std::mutex gen_mutex;
std::map<std::tuple<long, long, long>, std::optional<FieldElement>> gen_cache;

}  // namespace

bool PrimeIdeal::operator<(const PrimeIdeal& o) const {
    return std::make_tuple(norm(), residue, p) < std::make_tuple(o.norm(), o.residue, o.p);
}

bool PrimeIdeal::contains(const FieldElement& a) const {
    if (a.is_zero()) return true;
    return valuation(a, *this) > 0;
}

std::vector<PrimeIdeal> split_prime(const QuadField& K, long p, bool generators) {
    if (!is_prime(p)) throw MathError(std::to_string(p) + " is not prime");
    int k = kronecker(Int(K.disc), p);
    std::vector<PrimeIdeal> out;
    if (k == -1) {
        PrimeIdeal P;
        P.K = K;
        P.p = p;
        P.e = 1;
        P.f = 2;
        P.label = std::to_string(p * p) + ".1";
        P.gen = FieldElement(K, p);
        out.push_back(P);
        return out;
    }
    auto roots = omega_roots(K, p);
    if ((k == 0) != (roots.size() == 1)) throw MathError("inconsistent splitting data");
    int idx = 1;
    for (long r : roots) {
        PrimeIdeal P;
        P.K = K;
        P.p = p;
        P.e = k == 0 ? 2 : 1;
        P.f = 1;
        P.residue = r;
        P.label = std::to_string(p) + "." + std::to_string(idx++);
        if (generators) P.gen = find_generator(P);
        out.push_back(P);
    }
    return out;
}

std::vector<PrimeIdeal> primes_up_to(const QuadField& K, long bound) {
    std::vector<PrimeIdeal> out;
    for (long p = 2; p < bound; ++p) {
        if (!is_prime(p)) continue;
        for (auto& P : split_prime(K, p))
            if (P.norm() < bound) out.push_back(P);
    }
    std::sort(out.begin(), out.end());
    return out;
}

PrimeIdeal prime_by_label(const QuadField& K, const std::string& label) {
    auto dot = label.find('.');
    if (dot == std::string::npos) throw MathError("malformed prime label '" + label + "'");
    long N = 0;
    try {
        N = std::stol(label.substr(0, dot));
    } catch (...) {
        throw MathError("malformed prime label '" + label + "'");
    }
    long p = 0;
    for (long q = 2; q * q <= N || q <= N; ++q)
        if (N % q == 0) {
            p = q;
            break;
        }
    if (p < 2) throw MathError("no prime of norm " + std::to_string(N));
    for (auto& P : split_prime(K, p))
        if (P.label == label) return P;
    throw MathError("no prime with label '" + label + "' in " + K.label());
}

PrimeIdeal unique_prime_above(const QuadField& K, long p) {
    auto ps = split_prime(K, p);
    if (ps.size() != 1) throw MathError(std::to_string(p) + " splits in " + K.label());
    return ps[0];
}

long valuation(const FieldElement& a, const PrimeIdeal& P) {
    if (a.is_zero()) throw MathError("valuation of zero");
    if (a.field() != P.K) throw MathError("prime of a different field");
    Int D = lcm(Int(a.x().get_den()), Int(a.y().get_den()));
    Int X = a.x().get_num() * (D / a.x().get_den());
    Int Y = a.y().get_num() * (D / a.y().get_den());
    long vD = D == 1 ? 0 : valuation(D, P.p) * P.e;
    long c = std::min(X == 0 ? LONG_MAX : valuation(X, P.p), Y == 0 ? LONG_MAX : valuation(Y, P.p));
    Int pc;
    mpz_pow_ui(pc.get_mpz_t(), Int(P.p).get_mpz_t(), c);
    X /= pc;
    Y /= pc;
    long v = c * P.e;
    if (P.f == 1) {
        Int r = X + Y * P.residue;
        if (mpz_divisible_ui_p(r.get_mpz_t(), P.p)) {
            FieldElement red(P.K, Rat(X), Rat(Y));
            v += valuation(Int(red.norm().get_num()), P.p);
        }
    }
    return v - vD;
}

std::optional<FieldElement> find_generator(const PrimeIdeal& P, long radius) {
    if (P.f == 2) return FieldElement(P.K, P.p);
    auto key = std::make_tuple(P.K.m, P.p, P.residue);
    {
        std::lock_guard<std::mutex> lk(gen_mutex);
        auto it = gen_cache.find(key);
        if (it != gen_cache.end()) return it->second;
    }
    const QuadField& K = P.K;
    std::optional<FieldElement> found;
    // 4 Norm(a + b w) = (2a + T b)^2 - disc b^2
    long bmax = radius;
    if (!K.real()) {
        long lim = 0;
        while (lim * lim * std::labs(K.disc) <= 4 * P.p) ++lim;
        bmax = std::min(bmax, lim);
    }
    for (long b = 0; b <= bmax && !found; ++b) {
        for (int s : {1, -1}) {
            if (!K.real() && s < 0) continue;
            Int rhs = Int(4 * P.p) * s + Int(K.disc) * b * b;
            if (rhs < 0 || !mpz_perfect_square_p(rhs.get_mpz_t())) continue;
            Int z = sqrt(rhs);
            for (Int zz : {z, Int(-z)}) {
                Int twoa = zz - K.T() * b;
                if (!mpz_even_p(twoa.get_mpz_t())) continue;
                FieldElement g(K, Rat(twoa / 2), Rat(b));
                for (const FieldElement& c : {g, g.conjugate()})
                    if (!found && valuation(c, P) == 1 && abs(c.norm()) == P.p) found = c;
            }
            if (found) break;
        }
    }
    std::lock_guard<std::mutex> lk(gen_mutex);
    gen_cache[key] = found;
    return found;
}

FieldElement fundamental_unit(const QuadField& K) {
    if (!K.real()) throw MathError("fundamental unit requested for an imaginary field");
    const long D = K.disc;
    Int s = sqrt(Int(D));
    Int P = K.T(), Q = 2;
    // p0/q0 the previous convergent, p1/q1 the one before
    Int p0 = 1, q0 = 0, p1 = 0, q1 = 1;
    for (int k = 0; k < 100000; ++k) {
        if (Q <= 0) throw MathError("continued fraction left the reduced range");
        Int a;
        mpz_fdiv_q(a.get_mpz_t(), Int(P + s).get_mpz_t(), Q.get_mpz_t());
        Int pk = a * p0 + p1, qk = a * q0 + q1;
        p1 = p0;
        q1 = q0;
        p0 = pk;
        q0 = qk;
        FieldElement alpha(K, Rat(pk), Rat(-qk));
        Rat n = alpha.norm();
        if (n == 1 || n == -1) {
            FieldElement eps(K, Rat(pk - K.T() * qk), Rat(qk));
            if ((eps - Rat(1)).sign() <= 0) throw MathError("unit below one");
            return eps;
        }
        Int Pn = a * Q - P;
        Int Qn = (Int(D) - Pn * Pn) / Q;
        P = Pn;
        Q = Qn;
    }
    throw MathError("continued fraction period too long");
}

long reduced_form_count(long D) {
    if (D >= 0) throw MathError("reduced_form_count needs a negative discriminant");
    long count = 0;
    for (long a = 1; 3 * a * a <= -D; ++a) {
        for (long b = -a + 1; b <= a; ++b) {
            if (((b - D) % 2 + 2) % 2) continue;
            long num = b * b - D;
            if (num % (4 * a)) continue;
            long c = num / (4 * a);
            if (c < a) continue;
            if (c == a && b < 0) continue;
            if (std::gcd(std::gcd(a, std::labs(b)), c) != 1) continue;
            ++count;
        }
    }
    return count;
}

namespace {

long indefinite_cycle_count(long D) {
    long s = Int(sqrt(Int(D))).get_si();
    using Form = std::tuple<long, long, long>;
    std::set<Form> reduced;
    for (long b = 1; b <= s; ++b) {
        if (((b - D) % 2 + 2) % 2) continue;
        long ac = (b * b - D) / 4;  // negative
        long absac = -ac;
        for (long d = 1; d <= absac; ++d) {
            if (absac % d) continue;
            for (long a : {d, -d}) {
                long c = ac / a;
                long aa = std::labs(a);
                if (!(s < 2 * aa + b && 2 * aa - b <= s)) continue;
                if (std::gcd(std::gcd(aa, b), std::labs(c)) != 1) continue;
                reduced.insert({a, b, c});
            }
        }
    }
    std::set<Form> seen;
    long cycles = 0;
    for (const auto& f : reduced) {
        if (seen.count(f)) continue;
        ++cycles;
        Form g = f;
        while (!seen.count(g)) {
            seen.insert(g);
            auto [a, b, c] = g;
            long m = 2 * std::labs(c);
            long bp = ((-b) % m + m) % m;
            // largest b' <= s with b' = -b mod 2|c|
            long top = s - ((s - bp) % m + m) % m;
            long cn = (top * top - D) / (4 * c);
            g = {c, top, cn};
            if (!reduced.count(g)) throw MathError("reduction cycle left the reduced set");
        }
    }
    return cycles;
}

}  // namespace

ClassNumbers class_numbers(const QuadField& K, long disc_limit) {
    if (std::labs(K.disc) > disc_limit)
        throw MathError("|disc| = " + std::to_string(std::labs(K.disc)) + " exceeds the configured limit");
    ClassNumbers c;
    if (!K.real()) {
        c.h = reduced_form_count(K.disc);
        c.h_plus = c.h;
        return c;
    }
    c.h_plus = indefinite_cycle_count(K.disc);
    bool plus = fundamental_unit(K).norm() == 1;
    c.h = plus ? c.h_plus / 2 : c.h_plus;
    return c;
}

std::optional<Rat> rational_sqrt(const Rat& r) {
    if (r < 0) return std::nullopt;
    Int n = r.get_num(), d = r.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    return Rat(Int(sqrt(n)), Int(sqrt(d)));
}

std::optional<FieldElement> sqrt_in_field(const FieldElement& e) {
    const QuadField& K = e.field();
    if (e.is_zero()) return e;
    auto rn = rational_sqrt(e.norm());
    // Norm(g)^2 = Norm(e); Tr(g)^2 = Tr(e) + 2 Norm(g)
    if (rn) {
        for (int s : {1, -1}) {
            Rat ng = *rn * s;
            auto t = rational_sqrt(e.trace() + 2 * ng);
            if (!t) continue;
            if (*t != 0) {
                FieldElement g = (e + ng) * Rat(1 / *t);
                if (g * g == e) return g;
            }
        }
    }
    if (e.is_rational()) {
        if (auto r = rational_sqrt(e.x())) return FieldElement(K, *r);
        // g = c (2w - T), g^2 = c^2 disc
        if (auto c = rational_sqrt(e.x() / K.disc)) {
            FieldElement g(K, -*c * K.T(), 2 * *c);
            if (g * g == e) return g;
        }
    }
    return std::nullopt;
}

long ideals_of_norm(const QuadField& K, long N) {
    if (N < 1) throw MathError("norm must be positive");
    long count = 1;
    long n = N;
    for (long p = 2; p <= n; ++p) {
        if (n % p) continue;
        long k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        int kr = kronecker(Int(K.disc), p);
        if (kr == 1) count *= k + 1;
        else if (kr == -1) count *= (k % 2 == 0) ? 1 : 0;
    }
    return count;
}

}  // namespace ppelim
