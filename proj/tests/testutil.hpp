#pragma once

#include "ppelim/freycurve.hpp"
#include "ppelim/quadfield.hpp"

#include <unistd.h>

#include <filesystem>
#include <random>
#include <string>

namespace testutil {

using namespace ppelim;

inline std::string fixtures() { return PPELIM_FIXTURE_DIR; }

inline FieldElement random_element(std::mt19937_64& rng, const QuadField& K, long r = 6) {
    std::uniform_int_distribution<long> d(-r, r);
    return FieldElement(K, d(rng), d(rng));
}

inline FieldElement random_nonzero(std::mt19937_64& rng, const QuadField& K, long r = 6) {
    for (;;) {
        FieldElement e = random_element(rng, K, r);
        if (!e.is_zero()) return e;
    }
}

inline long random_exponent(std::mt19937_64& rng) {
    static const long ps[] = {3, 5, 7, 11, 13};
    return ps[std::uniform_int_distribution<int>(0, 4)(rng)];
}

// a = k m, b = k n, c = k^((p+1)/2) r with k = (A m^p + B n^p) / (C r^2): A a^p + B b^p = C c^2
inline SolutionTriple scaled_general(const FieldElement& A, const FieldElement& B, const FieldElement& C,
                                     const FieldElement& m, const FieldElement& n, const FieldElement& r, long p) {
    FieldElement k = (A * m.pow(p) + B * n.pow(p)) / (C * r * r);
    return general_triple(A, B, C, k * m, k * n, k.pow((p + 1) / 2) * r, p);
}

inline SolutionTriple scaled_effective(const FieldElement& d, const FieldElement& m, const FieldElement& n,
                                       const FieldElement& r, long p) {
    FieldElement k = (m.pow(p) + d * n.pow(p)) / (r * r);
    return effective_triple(d, k * m, k * n, k.pow((p + 1) / 2) * r, p);
}

// a = k^u m, b = k^u n, c = k^v r with u p + 1 = 3 v; p must not be 3
inline SolutionTriple scaled_cubic(const FieldElement& d, const FieldElement& m, const FieldElement& n,
                                      const FieldElement& r, long p) {
    FieldElement k = (m.pow(p) + d * n.pow(p)) / r.pow(3);
    long u = p % 3 == 2 ? 1 : 2;
    long v = (u * p + 1) / 3;
    return cubic_triple(d, k.pow(u) * m, k.pow(u) * n, k.pow(v) * r, p);
}

// odd integral A, B, C, pairwise coprime
inline void random_coefficients(std::mt19937_64& rng, const QuadField& K, FieldElement& A, FieldElement& B,
                                FieldElement& C) {
    for (;;) {
        A = random_nonzero(rng, K, 5);
        B = random_nonzero(rng, K, 5);
        C = random_nonzero(rng, K, 5);
        if (is_odd(A) && is_odd(B) && is_odd(C) && coprime(A, B) && coprime(A, C) && coprime(B, C)) return;
    }
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("ppelim-test-" + name + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testutil
