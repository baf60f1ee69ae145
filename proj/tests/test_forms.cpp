#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "qtwist/arith.hpp"
#include "qtwist/errors.hpp"
#include "qtwist/forms.hpp"
#include "qtwist/qseries.hpp"

using namespace qtwist;

namespace {

// prod_{n>=1} (1 - q^{t n})^r * q^shift, exponents < order, by repeated
// multiplication with (1 - q^m)
std::vector<BigInt> brute_eta_product(const std::vector<std::pair<std::uint64_t, unsigned>>& factors, std::uint64_t shift,
                                      std::uint64_t order) {
    std::vector<BigInt> poly(order, 0);
    if (shift < order) poly[shift] = 1;
    for (auto [t, r] : factors) {
        for (std::uint64_t m = t; m < order; m += t) {
            for (unsigned rep = 0; rep < r; ++rep)
                for (std::uint64_t e = order; e-- > m;) poly[e] -= poly[e - m];
        }
    }
    return poly;
}

std::vector<BigInt> as_dense(const IntegerQSeries& s) {
    std::vector<BigInt> out(s.truncation_order());
    for (std::uint64_t e = 0; e < s.truncation_order(); ++e) out[e] = s.coefficient(e);
    return out;
}

IntegerQSeries random_series(std::mt19937_64& rng, std::uint64_t offset, std::uint64_t order) {
    std::uniform_int_distribution<int> dist(-5, 5);
    std::vector<BigInt> c(order - offset);
    for (auto& x : c) x = dist(rng) * (dist(rng) > 2 ? 1 : 0);
    return IntegerQSeries(offset, std::move(c), order);
}

}  // namespace

TEST_CASE("eta_series") {
    const auto e = eta_series(1, 13);
    CHECK(as_dense(e) == brute_eta_product({{1, 1}}, 0, 13));
    std::vector<BigInt> expect(13, 0);
    expect[0] = 1, expect[1] = -1, expect[2] = -1, expect[5] = 1, expect[7] = 1, expect[12] = -1;
    CHECK(as_dense(e) == expect);
    std::vector<BigInt> e8(9, 0);
    e8[0] = 1, e8[8] = -1;
    CHECK(as_dense(eta_series(8, 9)) == e8);
    for (std::uint64_t t : {1, 3, 7}) CHECK(as_dense(eta_series(t, 1)) == std::vector<BigInt>{1});
    CHECK(as_dense(eta_series(1, 400)) == brute_eta_product({{1, 1}}, 0, 400));
    CHECK_THROWS_AS(eta_series(1, 0), InvalidArgument);
}

TEST_CASE("theta_series") {
    std::vector<BigInt> t1(10, 0);
    t1[0] = 1, t1[1] = 2, t1[4] = 2, t1[9] = 2;
    CHECK(as_dense(theta_series(1, 10)) == t1);
    std::vector<BigInt> t2(9, 0);
    t2[0] = 1, t2[2] = 2, t2[8] = 2;
    CHECK(as_dense(theta_series(2, 9)) == t2);
    CHECK(as_dense(theta_series(2, 2)) == std::vector<BigInt>{1, 0});
}

TEST_CASE("eta_quotient") {
    const std::vector<EtaFactor> x32{{4, 2}, {8, 2}};
    std::vector<BigInt> a(10, 0);
    a[1] = 1, a[5] = -2, a[9] = -3;
    CHECK(as_dense(eta_quotient(x32, 10)) == a);
    CHECK(as_dense(eta_quotient(x32, 600)) == brute_eta_product({{4, 2}, {8, 2}}, 1, 600));

    const std::vector<EtaFactor> delta{{1, 24}};
    CHECK(as_dense(eta_quotient(delta, 4)) == std::vector<BigInt>{0, 1, -24, 252});
    CHECK(as_dense(eta_quotient(delta, 300)) == brute_eta_product({{1, 24}}, 1, 300));

    const std::vector<EtaFactor> bad{{1, 1}};
    CHECK_THROWS_AS(eta_quotient(bad, 3), InvalidArgument);
}

TEST_CASE("series product: commutative and associative up to truncation") {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 20; ++i) {
        const auto a = random_series(rng, rng() % 3, 40 + rng() % 20);
        const auto b = random_series(rng, rng() % 3, 40 + rng() % 20);
        const auto c = random_series(rng, rng() % 3, 40 + rng() % 20);
        CHECK((a * b) == (b * a));
        CHECK(((a * b) * c) == (a * (b * c)));
    }
}

TEST_CASE("Delta coefficients") {
    const auto f = delta_coefficients(300);
    CHECK(f.level() == 1);
    CHECK(f.weight() == 12);
    CHECK(f.coefficient(1) == 1);
    CHECK(f.coefficient(2) == -24);
    CHECK(f.coefficient(3) == 252);
    CHECK(f.coefficient(6) == f.coefficient(2) * f.coefficient(3));
    CHECK(f.coefficient(4) == -1472);
    const auto brute = brute_eta_product({{1, 24}}, 1, 301);
    for (std::uint64_t n = 1; n <= 300; ++n) REQUIRE(f.coefficient(n) == brute[n]);
    // lambda and weight tables
    CHECK(f.lambda()[2] == doctest::Approx(-24.0 / std::pow(2.0, 5.5)));
    CHECK(f.weights()[3] == doctest::Approx(252.0 / std::pow(3.0, 6)));
    CHECK_THROWS_AS(delta_coefficients(10, 5), InvalidArgument);
}

TEST_CASE("ramanujan_tau agrees with the eta^24 expansion") {
    const auto tau = ramanujan_tau(10'000);
    const std::vector<EtaFactor> delta{{1, 24}};
    const auto eta = eta_quotient(delta, 10'001);
    for (std::uint64_t n = 0; n <= 10'000; ++n) REQUIRE(tau[n] == eta.coefficient(n));
}

TEST_CASE("level-32 a_p") {
    CHECK(level32_ap(2) == 0);
    CHECK(level32_ap(3) == 0);
    CHECK(level32_ap(5) == -2);
    CHECK(level32_ap_by_point_count(3) == 0);
    CHECK(level32_ap_by_point_count(5) == -2);
    const Sieve s(10'000);
    for (auto p : s.primes()) {
        if (p == 2) continue;
        REQUIRE(level32_ap(p) == level32_ap_by_point_count(p));
        if (p % 4 == 3) REQUIRE(level32_ap(p) == 0);
    }
}

TEST_CASE("level-32 form") {
    const auto f = level32_form(1000);
    CHECK(f.coefficient(1) == 1);
    CHECK(f.coefficient(25) == -1);
    const std::vector<EtaFactor> x32{{4, 2}, {8, 2}};
    const auto eta = eta_quotient(x32, 1001);
    for (std::uint64_t n = 1; n <= 1000; ++n) REQUIRE(f.coefficient(n) == eta.coefficient(n));
    CHECK(f.root_number() == 1);
}

TEST_CASE("hecke_extend") {
    std::map<std::uint64_t, BigInt> primes{{2, -24}, {3, 252}, {5, 4830}};
    const auto a = hecke_extend(primes, 1, 6, 6);
    CHECK(a[1] == 1);
    CHECK(a[4] == -1472);
    CHECK(a[6] == -24 * 252);
    // missing p = 7: the error names it
    try {
        hecke_extend(primes, 1, 6, 10);
        FAIL("expected an error");
    } catch (const NumericGuardError& e) {
        CHECK(std::string(e.what()).find("p = 7") != std::string::npos);
        CHECK(e.required() == 7);
    }
    // p | N: a_{p^2} = a_p^2
    const auto b = hecke_extend({{2, 3}, {3, 1}}, 2, 1, 4);
    CHECK(b[4] == 9);
}

TEST_CASE("Deligne bound and multiplicativity") {
    const auto delta = delta_coefficients(20'000);
    const auto x32 = level32_form(20'000);
    const Sieve s(20'000);
    for (auto p : s.primes()) {
        BigInt bound;
        mpz_ui_pow_ui(bound.get_mpz_t(), p, 11);
        REQUIRE(delta.coefficient(p) * delta.coefficient(p) <= 4 * bound);
        if (p != 2) REQUIRE(x32.coefficient(p) * x32.coefficient(p) <= 4 * BigInt(p));
    }
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::uint64_t> dist(1, 141);
    int pairs = 0;
    while (pairs < 10'000) {
        const auto m = dist(rng), n = dist(rng);
        if (gcd(m, n) != 1) continue;
        ++pairs;
        REQUIRE(delta.coefficient(m * n) == delta.coefficient(m) * delta.coefficient(n));
        REQUIRE(x32.coefficient(m * n) == x32.coefficient(m) * x32.coefficient(n));
    }
}

TEST_CASE("coefficient beyond the table comes from the recursion") {
    const auto f = level32_form(100);
    const auto big = level32_form(400);
    CHECK(f.coefficient(121) == big.coefficient(121));
    CHECK(f.coefficient(2 * 97) == big.coefficient(2 * 97));
    CHECK_THROWS_AS(f.coefficient(101 * 3), NumericGuardError);
    CHECK(f.truncated(50).max_n() == 50);
}

TEST_CASE("coefficient files") {
    const auto delta = delta_coefficients(100);
    std::stringstream buf;
    save_coefficients(delta, buf);
    const auto back = load_coefficients(buf);
    CHECK(back.coefficients() == delta.coefficients());
    CHECK(back.level() == 1);
    CHECK(back.weight() == 12);

    std::stringstream bad("# level=1 weight=0 maxn=2 source=x\n1,1\n2,-24\n");
    CHECK_THROWS_AS(load_coefficients(bad), FormatError);
    std::stringstream gap("# level=1 weight=12 maxn=3 source=x\n1,1\n3,252\n");
    CHECK_THROWS_AS(load_coefficients(gap), FormatError);
    CHECK_THROWS_AS(load_coefficients(std::filesystem::path("/nonexistent/qtwist.csv")), FormatError);

    const auto path = std::filesystem::temp_directory_path() / "qtwist_test_x32.csv";
    const auto fresh = level32_form(5000);
    save_coefficients(fresh, path);
    const auto loaded = load_coefficients(path);
    std::filesystem::remove(path);
    CHECK(loaded.coefficients() == fresh.coefficients());
    CHECK(loaded.root_number() == 1);
}
