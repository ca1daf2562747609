#pragma once

#include "ppelim/freycurve.hpp"
#include "ppelim/quadfield.hpp"

#include <vector>

namespace ppelim {

// F_q, q = p^k <= 4096, elements indexed 0..q-1 by their coefficient vectors in base p
class GF {
public:
    GF(long p, int k);
    long p() const { return p_; }
    int k() const { return k_; }
    long q() const { return q_; }
    long add(long a, long b) const { return add_[a * q_ + b]; }
    long mul(long a, long b) const { return mul_[a * q_ + b]; }
    long neg(long a) const { return neg_[a]; }
    long sub(long a, long b) const { return add(a, neg(b)); }
    long inv(long a) const;
    long from_int(const Int& n) const;
    long from_rat(const Rat& r) const;

private:
    long p_, q_;
    int k_;
    std::vector<long> add_, mul_, neg_;
};

// #{(x, y) in F^2 : y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6}
long affine_points(const GF& F, long a1, long a2, long a3, long a4, long a6);
long frobenius_trace(const GF& F, long a1, long a2, long a3, long a4, long a6);
bool nonsingular(const GF& F, long a1, long a2, long a3, long a4, long a6);

// residue field of P with the image of w; elements must be P-integral
struct ResidueField {
    GF F;
    long omega;
    long reduce(const FieldElement& e) const;
};
ResidueField residue_field(const PrimeIdeal& P);

// a_P(E) = N(P) + 1 - #E(k_P); nullopt at bad reduction
std::optional<long> trace_at(const WeierstrassModel& E, const PrimeIdeal& P);

}  // namespace ppelim
