#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ppelim/catalog.hpp"
#include "ppelim/criteria.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace ppelim;
using oracles::reduced_forms;

namespace {

std::string torsion_dir() { return testutil::fixtures() + "/torsion"; }

}  // namespace

TEST_CASE("ray class order examples") {
    CHECK(ray_class_order(make_field(11)) == 2);
    CHECK(ray_class_order(make_field(13)) == 1);
    CHECK(ray_class_order(make_field(-11)) == 1);
    CHECK(fundamental_unit(make_field(11)).norm() == 1);
    CHECK(fundamental_unit(make_field(13)).norm() == -1);
    CHECK(reduced_forms(-11) == 1);
    CHECK_THROWS(ray_class_order(make_field(10007)));
}

TEST_CASE("ray class order lies in {1, 2} over every catalog field") {
    for (const auto& [m, sig] : catalog()) {
        QuadField K = make_field(m);
        long r = ray_class_order(K);
        CAPTURE(m);
        CHECK((r == 1 || r == 2));
        if (K.real())
            CHECK(r == class_numbers(K).h * (fundamental_unit(K).norm() == 1 ? 2 : 1));
        else
            CHECK(r == reduced_forms(K.disc));
    }
}

TEST_CASE("torsion floors") {
    CHECK(torsion_floor(1, 2).bound == 13);
    CHECK(torsion_floor(2, 2).bound == 17);
    CHECK(torsion_floor(2, 3).bound == 17);
    for (int t : {2, 3}) {
        CHECK(torsion_floor(1, t).bound <= torsion_floor(2, t).bound);
        CHECK_FALSE(torsion_floor(1, t).citation.empty());
        CHECK_FALSE(torsion_floor(2, t).citation.empty());
        CHECK_THROWS(torsion_floor(3, t));
        CHECK_THROWS(torsion_floor(0, t));
    }
    CHECK_THROWS(torsion_floor(1, 5));
}

TEST_CASE("split case obstruction") {
    Obstruction a = split_case_obstruction(2);
    CHECK(a.value == 3);
    CHECK(a.primes == std::vector<long>{3});
    Obstruction b = split_case_obstruction(3);
    CHECK(b.value == 8);
    CHECK(b.primes == std::vector<long>{2});
    CHECK_THROWS(split_case_obstruction(1));
    CHECK_THROWS(split_case_obstruction(-1));
    for (long g = -40; g <= 40; ++g) {
        if (g * g == 1) continue;
        Obstruction o = split_case_obstruction(g);
        CHECK(o.value == g * g - 1);
        long rest = g * g - 1;
        for (long p : o.primes) {
            CHECK(rest % p == 0);
            while (rest % p == 0) rest /= p;
        }
        CHECK(std::labs(rest) == 1);
        if (std::labs(g) == 2 || std::labs(g) == 3)
            for (long p : o.primes) CHECK(p <= 17);
    }
}

TEST_CASE("abelianization torsion data") {
    QuadField K3 = make_field(-3);
    CHECK(abelianization_torsion(torsion_dir(), K3, "Q") == std::vector<long>{2});
    CHECK(abelianization_torsion(torsion_dir(), K3, "D") == std::vector<long>{2});
    CHECK(abelianization_torsion(torsion_dir(), K3, "PQ") == std::vector<long>{3});
    QuadField K43 = make_field(-43);
    CHECK(abelianization_torsion(torsion_dir(), K43, "PQ") == std::vector<long>{7});
    QuadField K19 = make_field(-19);
    CHECK(abelianization_torsion(torsion_dir(), K19, "D") == std::vector<long>{3});
    CHECK(abelianization_torsion(torsion_dir(), K19, "PD") == std::vector<long>{3});
    CHECK(abelianization_torsion(torsion_dir(), K19, "19.1") == std::vector<long>{3});
    CHECK_THROWS(abelianization_torsion(torsion_dir(), make_field(5), "D"));
    CHECK_THROWS(abelianization_torsion(torsion_dir(), K19, "19.2"));
    CHECK_THROWS(abelianization_torsion(torsion_dir(), make_field(-7), "D"));
}

TEST_CASE("irreducibility context") {
    for (const auto& [m, sig] : catalog()) {
        FieldCase fc = field_case(m, sig);
        IrreducibilityContext c = irreducibility_context(fc.K, sig, fc.d);
        CAPTURE(m);
        CHECK(c.t == (sig == Signature::PPQ3_CUBIC ? 3 : 2));
        std::vector<PrimeIdeal> above = split_prime(fc.K, c.t);
        REQUIRE(above.size() == 1);
        CHECK(c.P == above[0]);
        CHECK(c.theta_order == ray_class_order(fc.K));
        CHECK(c.floor.bound <= 17);
        if (sig == Signature::PPQ2_EFFECTIVE) CHECK(c.excluded == std::vector<long>{fc.d});
    }
}
