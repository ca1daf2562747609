#pragma once

#include "ppelim/freycurve.hpp"
#include "ppelim/quadfield.hpp"

#include <string>
#include <vector>

namespace ppelim {

// narrow class number for real K, class number for imaginary K
long ray_class_order(const QuadField& K);

struct TorsionFloor {
    long bound = 0;
    std::string citation;
};
TorsionFloor torsion_floor(long theta_order, int t);

struct Obstruction {
    Int value;
    std::vector<long> primes;
};
// gen^2 - 1 for P = gen O_K
Obstruction split_case_obstruction(long gen);

struct IrreducibilityContext {
    QuadField K;
    Signature sig = Signature::PPQ2_EFFECTIVE;
    PrimeIdeal P;
    int t = 2;
    std::vector<long> excluded;
    long theta_order = 1;
    TorsionFloor floor;
};
IrreducibilityContext irreducibility_context(const QuadField& K, Signature sig, long d);

// level descriptor: "D", "Q", "PD", "PQ", "LD" or an ideal label "N.i"
std::vector<long> abelianization_torsion(const std::string& torsion_dir, const QuadField& K,
                                         const std::string& level_descriptor);

}  // namespace ppelim
