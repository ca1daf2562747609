#include "ppelim/catalog.hpp"

#include <algorithm>

namespace ppelim {

namespace {

const std::vector<long> kEffective{-3, -11, -19, -43, 3, 5, 11, 13, 19, 29};
const std::vector<long> kCubic{2, 5, 14};

std::string unique_label(const QuadField& K, long N) {
    if (ideals_of_norm(K, N) != 1)
        throw MathError("level of norm " + std::to_string(N) + " is not determined by its norm in " + K.label());
    return std::to_string(N) + ".1";
}

}  // namespace

bool in_catalog(long m, Signature sig) {
    if (sig == Signature::PPQ2_EFFECTIVE) return std::count(kEffective.begin(), kEffective.end(), m) > 0;
    if (sig == Signature::PPQ3_CUBIC) return std::count(kCubic.begin(), kCubic.end(), m) > 0;
    return false;
}

std::vector<std::pair<long, Signature>> catalog() {
    std::vector<std::pair<long, Signature>> out;
    for (long m : kEffective) out.emplace_back(m, Signature::PPQ2_EFFECTIVE);
    for (long m : kCubic) out.emplace_back(m, Signature::PPQ3_CUBIC);
    return out;
}

FieldCase field_case(long m, Signature sig) {
    if (!in_catalog(m, sig))
        throw std::invalid_argument("no effective case for m = " + std::to_string(m) + " and signature " +
                                    signature_name(sig));
    FieldCase c;
    c.K = make_field(m);
    c.sig = sig;
    c.d = std::labs(m);
    c.t = sig == Signature::PPQ3_CUBIC ? 3 : 2;
    c.kind = m < 0 ? FormKind::BIANCHI : FormKind::HILBERT;
    c.special = unique_prime_above(c.K, c.t);
    long Dnorm = 1;
    for (const Int& r : prime_divisors(Int(c.d))) {
        for (PrimeIdeal& P : split_prime(c.K, r.get_si())) {
            if (P.e != 2) throw MathError("prime above d is not ramified");
            Dnorm *= P.norm();
            c.d_primes.push_back(std::move(P));
        }
    }
    const std::string outer = c.t == 2 ? "PD" : "LD";
    c.levels.push_back({"D", unique_label(c.K, Dnorm), Dnorm});
    long N2 = Dnorm * c.special.norm();
    c.levels.push_back({outer, unique_label(c.K, N2), N2});
    if (sig == Signature::PPQ2_EFFECTIVE) c.excluded = {c.d};
    return c;
}

const LevelSpec& level_by_descriptor(const FieldCase& c, const std::string& descriptor) {
    std::string s = descriptor;
    if (s == "Q") s = "D";
    if (s == "PQ") s = "PD";
    for (const LevelSpec& l : c.levels)
        if (l.name == s || l.label == s) return l;
    throw std::invalid_argument("unknown level '" + descriptor + "' for " + c.K.label());
}

std::vector<PrimeIdeal> maximal_level_support(const FieldCase& c) {
    std::vector<PrimeIdeal> out = c.d_primes;
    out.push_back(c.special);
    return out;
}

}  // namespace ppelim
