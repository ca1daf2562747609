#pragma once

#include "ppelim/quadfield.hpp"

#include <optional>
#include <vector>

namespace ppelim {

// dense polynomial over Q, ascending coefficients, no trailing zeros
using QPoly = std::vector<Rat>;

void trim(QPoly& f);
long degree(const QPoly& f);
QPoly poly_add(const QPoly& f, const QPoly& g);
QPoly poly_sub(const QPoly& f, const QPoly& g);
QPoly poly_mul(const QPoly& f, const QPoly& g);
QPoly poly_scale(const QPoly& f, const Rat& c);
std::pair<QPoly, QPoly> poly_divrem(const QPoly& f, const QPoly& g);
QPoly poly_gcd(QPoly f, QPoly g);
QPoly poly_derivative(const QPoly& f);
Rat poly_eval(const QPoly& f, const Rat& x);
Rat resultant(QPoly f, QPoly g);
// number of distinct real roots
long real_root_count(const QPoly& f);

QPoly to_qpoly(const std::vector<Int>& c);

// nullopt when no certificate was found either way
std::optional<bool> certify_irreducible(const std::vector<Int>& f);

struct HeckeField {
    std::vector<Int> poly;  // monic, ascending
    long degree() const { return static_cast<long>(poly.size()) - 1; }
    bool rational() const { return degree() == 1; }
};

HeckeField make_hecke_field(std::vector<Int> poly);

// coordinates in the power basis 1, x, ..., x^(n-1)
using HeckeElement = std::vector<Rat>;

HeckeElement hecke_from(const HeckeField& F, const Rat& r);
HeckeElement hecke_add(const HeckeField& F, const HeckeElement& a, const HeckeElement& b);
HeckeElement hecke_sub(const HeckeField& F, const HeckeElement& a, const HeckeElement& b);
HeckeElement hecke_mul(const HeckeField& F, const HeckeElement& a, const HeckeElement& b);
bool hecke_is_zero(const HeckeElement& a);
Rat hecke_norm(const HeckeField& F, const HeckeElement& e);
QPoly hecke_charpoly(const HeckeField& F, const HeckeElement& e);
// |sigma(a)| <= 2 sqrt(N) at every embedding, and a totally real
bool hasse_bound_holds(const HeckeField& F, const HeckeElement& a, long N);

// whether one prime of Q_f above l divides every element; nullopt when l^2 | disc(F), where Z[x] may not be maximal at l
std::optional<bool> common_prime_above(const HeckeField& F, const std::vector<HeckeElement>& els, long l);

}  // namespace ppelim
