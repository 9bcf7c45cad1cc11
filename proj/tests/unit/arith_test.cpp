#include <doctest.h>

#include <random>

#include "../support/oracles.hpp"
#include "twistcert/arith.hpp"

using namespace twistcert;

TEST_CASE("primality agrees with trial division") {
    for (std::uint64_t n = 0; n < 20000; ++n) CHECK(is_prime(n) == oracle::is_prime_trial(n));
    CHECK(is_prime(2305843009213693951ULL));        // 2^61 - 1
    CHECK_FALSE(is_prime(3215031751ULL));           // strong pseudoprime to 2, 3, 5, 7
    CHECK_FALSE(is_prime(3825123056546413051ULL));  // strong pseudoprime to bases up to 23
    CHECK(is_prime(9223372036854775783ULL));        // largest prime below 2^63
}

TEST_CASE("PrimeQ rejects composites and values past the cap") {
    CHECK_THROWS_AS(PrimeQ(1), Error);
    CHECK_THROWS_AS(PrimeQ(91), Error);
    CHECK_THROWS_AS(PrimeQ(18446744073709551557ULL), Error);  // prime, above 2^63
    CHECK(PrimeQ(2).value() == 2);
    CHECK_FALSE(PrimeQ(2).is_odd());
}

TEST_CASE("kronecker symbol values") {
    CHECK(kronecker(5, 7) == -1);
    CHECK(kronecker(5, 1) == 1);
    CHECK(kronecker(5, 43) == -1);
    CHECK(kronecker(5, 31) == 1);
    CHECK(kronecker(0, 1) == 1);
    CHECK(kronecker(2, 4) == 0);
    CHECK(kronecker(-1, -1) == -1);
    CHECK(kronecker(BigInt(5) + BigInt(43) * BigInt("1000000000000000000000000"), 43) == -1);
}

TEST_CASE("kronecker matches the definition") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> da(-5000, 5000), dn(-3000, 3000);
    for (int i = 0; i < 3000; ++i) {
        const auto a = da(rng);
        auto n = dn(rng);
        if (n == 0) n = 1;
        CHECK_MESSAGE(kronecker(a, n) == oracle::kronecker(a, n), "a=" << a << " n=" << n);
        CHECK(kronecker(BigInt(a), n) == kronecker(a, n));
    }
}

TEST_CASE("quadratic reciprocity on random odd coprime pairs") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> d(1, 200000);
    int checked = 0;
    while (checked < 500) {
        const std::int64_t m = 2 * d(rng) + 1, n = 2 * d(rng) + 1;
        if (std::gcd(m, n) != 1) continue;
        const int sign = ((m - 1) / 2 % 2 == 1 && (n - 1) / 2 % 2 == 1) ? -1 : 1;
        CHECK(kronecker(m, n) * kronecker(n, m) == sign);
        // supplementary laws
        CHECK(kronecker(-1, n) == ((n % 4 == 1) ? 1 : -1));
        CHECK(kronecker(2, n) == ((n % 8 == 1 || n % 8 == 7) ? 1 : -1));
        ++checked;
    }
}

TEST_CASE("kronecker is multiplicative in both arguments") {
    for (std::int64_t a = -30; a <= 30; ++a)
        for (std::int64_t b = -30; b <= 30; ++b)
            for (std::int64_t n : {3, 8, 15, 21, 40, 97}) {
                CHECK(kronecker(a * b, n) == kronecker(a, n) * kronecker(b, n));
                if (b != 0) CHECK(kronecker(a, n * b) == kronecker(a, n) * kronecker(a, b));
            }
}

TEST_CASE("cubic roots mod q") {
    using V = std::vector<std::uint64_t>;
    CHECK(cubic_roots_mod(0, 0, -2, PrimeQ(5)) == V{3});
    CHECK(cubic_roots_mod(0, 0, -2, PrimeQ(7)) == V{});
    CHECK(cubic_roots_mod(0, 0, -2, PrimeQ(43)) == V{20, 32, 34});
    CHECK_THROWS_AS(cubic_roots_mod(0, 0, -2, PrimeQ(2)), Error);
}

TEST_CASE("cubic roots agree with exhaustive scan for random cubics") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::int64_t> coef(-1000000, 1000000);
    const auto primes = primes_in_range(3, 1000);
    for (int i = 0; i < 200; ++i) {
        const std::int64_t c2 = coef(rng), c1 = coef(rng), c0 = coef(rng);
        for (auto q : primes) {
            const auto got = cubic_roots_mod(c2, c1, c0, PrimeQ(q));
            REQUIRE(got == oracle::cubic_roots(c2, c1, c0, q));
        }
    }
}

TEST_CASE("gcd root extraction matches scanning") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::uint64_t> coef(0, ~0ULL);
    for (auto q : primes_in_range(3, 3000)) {
        for (int i = 0; i < 3; ++i) {
            std::vector<std::uint64_t> f{coef(rng) % q, coef(rng) % q, coef(rng) % q, 1};
            CHECK(detail::roots_mod_gcd(f, q) == detail::roots_mod_scan(f, q));
        }
        // cubics with prescribed roots, including repeated ones
        const std::uint64_t r = coef(rng) % q, s = coef(rng) % q;
        // (x - r)^2 (x - s)
        const std::uint64_t a = (2 * r + s) % q, b = (r * r + 2 * r * s) % q, c = r * r % q * s % q;
        std::vector<std::uint64_t> g{(q - c) % q, b, (q - a) % q, 1};
        CHECK(detail::roots_mod_gcd(g, q) == detail::roots_mod_scan(g, q));
    }
}

TEST_CASE("cubic roots above the scan limit") {
    // x^3 - 2 over several primes past 10^4, checked root by root
    for (std::uint64_t q : {10007ULL, 100003ULL, 1000003ULL, 998244353ULL, 2305843009213693951ULL}) {
        const auto roots = cubic_roots_mod(0, 0, -2, PrimeQ(q));
        for (auto r : roots) CHECK(pow_mod(r, 3, q) == 2 % q);
        const bool cube_map_bijective = q % 3 == 2;
        if (cube_map_bijective) CHECK(roots.size() == 1);
        else CHECK((roots.size() == 0 || roots.size() == 3));
        CHECK(std::is_sorted(roots.begin(), roots.end()));
    }
    const std::uint64_t q = 10009;
    CHECK(cubic_roots_mod(0, 0, -2, PrimeQ(q)) == oracle::cubic_roots(0, 0, -2, q));
}

TEST_CASE("hensel lifting") {
    const Poly cube_minus_two{-2, 0, 0, 1};
    auto r = hensel_lift_root(cube_minus_two, PrimeQ(5), 3, 2);
    CHECK(r.residue == 3);
    CHECK(r.precision == 2);
    CHECK(r.prime == 5);

    const Poly square_minus_two{-2, 0, 1};
    CHECK(hensel_lift_root(square_minus_two, PrimeQ(7), 3, 2).residue == 10);

    const Poly square{0, 0, 1};
    try {
        hensel_lift_root(square, PrimeQ(3), 0, 2);
        FAIL("expected MultipleRoot");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::MultipleRoot);
    }
    CHECK_THROWS_AS(hensel_lift_root(cube_minus_two, PrimeQ(5), 2, 3), Error);  // not a root
}

TEST_CASE("hensel lifts are compatible across precisions") {
    const Poly f{-2, 0, 0, 1};
    for (std::uint64_t q : {5ULL, 11ULL, 31ULL, 43ULL, 127ULL}) {
        for (auto r0 : cubic_roots_mod(0, 0, -2, PrimeQ(q))) {
            for (unsigned k = 2; k <= 12; ++k) {
                const auto hi = hensel_lift_root(f, PrimeQ(q), r0, k);
                const auto lo = hensel_lift_root(f, PrimeQ(q), r0, k - 1);
                const BigInt qk = pow_big(BigInt(q), k), qk1 = pow_big(BigInt(q), k - 1);
                CHECK(mod_big(poly_eval(f, hi.residue), qk) == 0);
                CHECK(hi.residue % qk1 == lo.residue);
                CHECK(hi.residue % q == r0);
            }
        }
    }
}

TEST_CASE("p-adic roots") {
    // x^3 - 2: none in Q_2 and Q_3, one in Q_5, three in Q_43.
    const Poly f{-2, 0, 0, 1};
    CHECK(padic_roots(f, 2, 10).empty());
    CHECK(padic_roots(f, 3, 10).empty());
    CHECK(padic_roots(f, 5, 10).size() == 1);
    CHECK(padic_roots(f, 43, 4).size() == 3);
    // x^3 - x over Q_2 has roots 0, 1, -1 which collide mod 2
    const Poly g{0, -1, 0, 1};
    const auto roots = padic_roots(g, 2, 8);
    REQUIRE(roots.size() == 3);
    for (const auto& r : roots) CHECK(mod_big(poly_eval(g, r), 256) == 0);
    // x^3 - 17 x: 17 is a square in Q_2
    CHECK(padic_roots(Poly{0, -17, 0, 1}, 2, 12).size() == 3);
    // x^3 - 3 x: 3 is not a square in Q_2
    CHECK(padic_roots(Poly{0, -3, 0, 1}, 2, 12).size() == 1);
}

TEST_CASE("p-adic root counts agree with the exhaustive oracle") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> coef(-64, 64);
    int tested = 0;
    while (tested < 60) {
        const std::int64_t a = coef(rng), b = coef(rng);
        const BigInt disc = -(4 * BigInt(a) * a * a + 27 * BigInt(b) * b);
        if (disc == 0) continue;
        for (std::uint64_t p : {2ULL, 3ULL}) {
            const unsigned v = valuation(disc, p);
            if (v > 6) continue;
            const unsigned fine = p == 2 ? 20 : 12;
            const int expect = oracle::padic_root_classes(0, a, b, p, v + 2, fine);
            CHECK_MESSAGE(padic_roots(Poly{b, a, 0, 1}, p, 6).size() == static_cast<std::size_t>(expect),
                          "A=" << a << " B=" << b << " p=" << p);
        }
        ++tested;
    }
}

TEST_CASE("squarefree part") {
    CHECK(squarefree_part(-1728) == -3);
    CHECK(squarefree_part(1) == 1);
    CHECK(squarefree_part(50) == 2);
    CHECK(squarefree_part(-1) == -1);
    CHECK_THROWS_AS(squarefree_part(0), Error);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> d(-1000000000LL, 1000000000LL);
    for (int i = 0; i < 300; ++i) {
        const BigInt n = d(rng);
        if (n == 0) continue;
        const BigInt s = squarefree_part(n);
        CHECK(is_squarefree(s));
        REQUIRE(n % s == 0);
        const BigInt q = n / s;
        CHECK(q > 0);
        const BigInt root = boost::multiprecision::sqrt(q);
        CHECK(root * root == q);
    }
}

TEST_CASE("factorisation") {
    CHECK(factor(BigInt(-1728)) == std::vector<PrimePower>{{2, 6}, {3, 3}});
    CHECK(factor(BigInt(1)).empty());
    const BigInt big = BigInt(1000000007) * 998244353 * BigInt(2305843009213693951ULL);
    const auto f = factor(big);
    REQUIRE(f.size() == 3);
    CHECK(f[2].prime == 2305843009213693951ULL);
    // three copies of 2^61 - 1 leave a cofactor past the 127-bit budget
    const BigInt m61(2305843009213693951ULL);
    try {
        factor(3 * m61 * m61 * m61);
        FAIL("expected FactorizationOverflow");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::FactorizationOverflow);
    }
}

TEST_CASE("crt") {
    const std::vector<Congruence> a{{1, 8}, {2, 3}};
    CHECK(crt_solve(a) == Congruence{17, 24});
    const std::vector<Congruence> b{{3, 5}};
    CHECK(crt_solve(b) == Congruence{3, 5});
    const std::vector<Congruence> c{{1, 4}, {2, 6}};
    try {
        crt_solve(c);
        FAIL("expected NonCoprimeModuli");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonCoprimeModuli);
    }
    const std::vector<Congruence> neg{{-1, 7}, {5, 9}};
    const auto r = crt_solve(neg);
    CHECK(r.modulus == 63);
    CHECK(r.residue % 7 == 6);
    CHECK(r.residue % 9 == 5);
}

TEST_CASE("primes in range") {
    const auto p = primes_in_range(90, 110);
    CHECK(p == std::vector<std::uint64_t>{97, 101, 103, 107, 109});
    CHECK(primes_in_range(0, 2) == std::vector<std::uint64_t>{2});
    CHECK(primes_in_range(14, 16).empty());
}

TEST_CASE("decimal parsing") {
    CHECK(parse_bigint("-123456789012345678901234567890") == BigInt("-123456789012345678901234567890"));
    CHECK(parse_bigint("+7") == 7);
    CHECK_THROWS_AS(parse_bigint(""), Error);
    CHECK_THROWS_AS(parse_bigint("12a"), Error);
    CHECK_THROWS_AS(parse_bigint("-"), Error);
}
