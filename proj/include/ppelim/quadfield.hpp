#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ppelim {

using Int = mpz_class;
using Rat = mpq_class;

struct MathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string to_string(const Int& v);
std::string to_string(const Rat& v);
Rat parse_rational(const std::string& s);

bool is_squarefree(long n);
bool is_prime(long n);
// distinct prime divisors of |n| (n != 0), ascending
std::vector<Int> prime_divisors(const Int& n);
long valuation(const Int& n, long p);
long valuation(const Rat& r, long p);

// Q(w) with w = sqrt(m) or (1+sqrt(m))/2, so w^2 = T*w + n
struct QuadField {
    long m = 0;
    long disc = 0;
    bool half = false;

    long T() const { return half ? 1 : 0; }
    long n() const { return half ? (m - 1) / 4 : m; }
    bool real() const { return m > 0; }
    std::string label() const;
    bool operator==(const QuadField& o) const { return m == o.m; }
    bool operator!=(const QuadField& o) const { return m != o.m; }
};

QuadField make_field(long m);

class FieldElement {
public:
    FieldElement() = default;
    FieldElement(const QuadField& K, Rat x = 0, Rat y = 0);
    static FieldElement omega(const QuadField& K) { return FieldElement(K, 0, 1); }

    const QuadField& field() const { return K_; }
    const Rat& x() const { return x_; }
    const Rat& y() const { return y_; }

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    FieldElement& operator+=(const FieldElement& o) { return *this = *this + o; }
    FieldElement& operator-=(const FieldElement& o) { return *this = *this - o; }
    FieldElement& operator*=(const FieldElement& o) { return *this = *this * o; }
    FieldElement operator*(const Rat& r) const { return FieldElement(K_, x_ * r, y_ * r); }
    FieldElement operator+(const Rat& r) const { return FieldElement(K_, x_ + r, y_); }
    FieldElement operator-(const Rat& r) const { return FieldElement(K_, x_ - r, y_); }
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement conjugate() const;
    FieldElement pow(long k) const;
    Rat norm() const;
    Rat trace() const;
    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }
    bool is_integral() const;
    // sign of the image under w -> (T + sqrt(disc))/2 (first embedding) or its conjugate
    int sign(int embedding = 0) const;
    std::string str() const;

private:
    void check(const FieldElement& o) const;
    QuadField K_;
    Rat x_ = 0, y_ = 0;
};

FieldElement operator*(const Rat& r, const FieldElement& e);
FieldElement operator*(long r, const FieldElement& e);

struct PrimeIdeal {
    QuadField K;
    long p = 0;
    int e = 1;
    int f = 1;
    // w = residue mod P when f = 1; the pair (p, w - residue) generates P
    long residue = -1;
    std::string label;
    std::optional<FieldElement> gen;

    long norm() const { return f == 1 ? p : p * p; }
    bool contains(const FieldElement& a) const;
    bool operator==(const PrimeIdeal& o) const { return K == o.K && p == o.p && residue == o.residue; }
    bool operator<(const PrimeIdeal& o) const;
};

int kronecker(const Int& a, long p);
std::vector<PrimeIdeal> split_prime(const QuadField& K, long p, bool generators = true);
// every prime of norm strictly below norm_bound, sorted
std::vector<PrimeIdeal> primes_up_to(const QuadField& K, long norm_bound);
PrimeIdeal prime_by_label(const QuadField& K, const std::string& label);
PrimeIdeal unique_prime_above(const QuadField& K, long p);

long valuation(const FieldElement& a, const PrimeIdeal& P);

// principal generator by bounded search; nullopt if none within the radius
std::optional<FieldElement> find_generator(const PrimeIdeal& P, long radius = 100000);

FieldElement fundamental_unit(const QuadField& K);

struct ClassNumbers {
    long h = 0;
    long h_plus = 0;
};
ClassNumbers class_numbers(const QuadField& K, long disc_limit = 10000);
long reduced_form_count(long D);

std::optional<FieldElement> sqrt_in_field(const FieldElement& e);
std::optional<Rat> rational_sqrt(const Rat& r);

// number of integral ideals of the given norm
long ideals_of_norm(const QuadField& K, long N);

}  // namespace ppelim
