#include "ppelim/criteria.hpp"

#include "ppelim/catalog.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>

namespace ppelim {

long ray_class_order(const QuadField& K) {
    if (std::labs(K.disc) > 10000) throw std::invalid_argument("ray_class_order: discriminant out of range");
    ClassNumbers c = class_numbers(K);
    return K.real() ? c.h_plus : c.h;
}

TorsionFloor torsion_floor(long theta_order, int t) {
    if (t != 2 && t != 3) throw std::invalid_argument("torsion_floor: unsupported t");
    if (theta_order == 1)
        return {13, t == 2 ? "a K-rational point of prime order p over a quadratic field has p <= 13"
                           : "no K-rational point of order 3p over a quadratic field for p >= 7"};
    if (theta_order == 2)
        return {17, "prime torsion over quartic fields has p <= 17"};
    throw std::invalid_argument("torsion_floor: unsupported character order " + std::to_string(theta_order));
}

Obstruction split_case_obstruction(long gen) {
    Int v = Int(gen) * gen - 1;
    if (v == 0) throw std::invalid_argument("split_case_obstruction: degenerate generator");
    Obstruction o{v, {}};
    for (const Int& r : prime_divisors(v)) o.primes.push_back(r.get_si());
    return o;
}

IrreducibilityContext irreducibility_context(const QuadField& K, Signature sig, long d) {
    IrreducibilityContext c;
    c.K = K;
    c.sig = sig;
    c.t = sig == Signature::PPQ3_CUBIC ? 3 : 2;
    c.P = unique_prime_above(K, c.t);
    if (sig == Signature::PPQ2_EFFECTIVE) c.excluded = {d};
    c.theta_order = ray_class_order(K);
    c.floor = torsion_floor(c.theta_order, c.t);
    return c;
}

std::vector<long> abelianization_torsion(const std::string& torsion_dir, const QuadField& K,
                                         const std::string& level_descriptor) {
    std::string label = level_descriptor;
    if (label.find('.') == std::string::npos) {
        if (!in_catalog(K.m, Signature::PPQ2_EFFECTIVE))
            throw std::invalid_argument("abelianization_torsion: no named levels for " + K.label());
        label = level_by_descriptor(field_case(K.m, Signature::PPQ2_EFFECTIVE), level_descriptor).label;
    }
    std::filesystem::path p = std::filesystem::path(torsion_dir) / (K.label() + "-" + label + ".json");
    std::ifstream in(p);
    if (!in) throw std::runtime_error("abelianization_torsion: missing fixture " + p.string());
    nlohmann::json j = nlohmann::json::parse(in);
    if (j.at("field_label") != K.label() || j.at("level_label") != label)
        throw std::runtime_error("abelianization_torsion: fixture " + p.string() + " does not match its name");
    std::vector<long> out = j.at("torsion_primes").get<std::vector<long>>();
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace ppelim
