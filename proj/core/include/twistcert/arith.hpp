#pragma once

// Exact integer primitives: primality, Kronecker symbols, roots of small
// polynomials modulo primes, Hensel lifting, CRT and factorisation of the
// moderately sized integers that appear in twist certificates.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "twistcert/error.hpp"

namespace twistcert {

using BigInt = boost::multiprecision::cpp_int;

/// Largest prime accepted anywhere in the library.
inline constexpr std::uint64_t kPrimeCap = std::uint64_t{1} << 63;
/// Bit budget for intermediate products (moduli, CRT results).
inline constexpr unsigned kIntermediateBits = 127;

bool is_prime(std::uint64_t n) noexcept;

/// A rational prime below `kPrimeCap`, checked on construction.
class PrimeQ {
public:
    explicit PrimeQ(std::uint64_t value);

    std::uint64_t value() const noexcept { return value_; }
    bool is_odd() const noexcept { return value_ != 2; }

    friend auto operator<=>(const PrimeQ&, const PrimeQ&) = default;

private:
    std::uint64_t value_;
};

// Modular helpers on 64-bit residues (128-bit intermediates).
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) noexcept;
std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) noexcept;
/// Inverse of `a` modulo `m`; `a` must be a unit.
std::uint64_t inv_mod(std::uint64_t a, std::uint64_t m);

/// Least non-negative residue of `n` modulo `m` (m > 0).
std::uint64_t mod_u64(const BigInt& n, std::uint64_t m);
BigInt mod_big(const BigInt& n, const BigInt& m);
/// p-adic valuation of a non-zero integer.
unsigned valuation(const BigInt& n, std::uint64_t p);
BigInt pow_big(const BigInt& base, unsigned exp);

/// Kronecker symbol (a/n), n != 0.
int kronecker(std::int64_t a, std::int64_t n);
int kronecker(const BigInt& a, std::int64_t n);
/// Legendre symbol for an odd prime modulus.
int legendre(const BigInt& a, std::uint64_t p);

/// Roots in F_q of x^3 + c2 x^2 + c1 x + c0, ascending.  Below q = 10^4 this
/// scans; above, it extracts roots from gcd(x^q - x, f).
std::vector<std::uint64_t> cubic_roots_mod(const BigInt& c2, const BigInt& c1, const BigInt& c0,
                                           PrimeQ q);

namespace detail {
inline constexpr std::uint64_t kCubicScanLimit = 10000;
/// Roots of a polynomial of degree <= 3 (ascending coefficients, already
/// reduced mod q) by exhaustive scan.
std::vector<std::uint64_t> roots_mod_scan(std::span<const std::uint64_t> coeffs, std::uint64_t q);
/// Same, by gcd with x^q - x followed by equal-degree splitting.
std::vector<std::uint64_t> roots_mod_gcd(std::span<const std::uint64_t> coeffs, std::uint64_t q);
}  // namespace detail

/// Roots mod q of a polynomial of degree <= 3 (ascending integer coefficients).
std::vector<std::uint64_t> poly_roots_mod(std::span<const BigInt> coeffs, std::uint64_t q);

/// Integer polynomial, ascending coefficients.
using Poly = std::vector<BigInt>;

BigInt poly_eval(const Poly& f, const BigInt& x);
Poly poly_derivative(const Poly& f);
/// f(x + shift)
Poly poly_taylor_shift(const Poly& f, const BigInt& shift);

struct PadicRoot {
    std::uint64_t prime = 0;
    BigInt residue;        // in [0, prime^precision)
    unsigned precision = 0;
};

/// Lifts a simple root r0 of f mod q to the unique root mod q^k.
/// Throws MultipleRoot when f'(r0) vanishes mod q.
PadicRoot hensel_lift_root(const Poly& f, PrimeQ q, const BigInt& r0, unsigned k);

/// All roots of a squarefree monic integer polynomial in Z_p, each to at
/// least `precision` p-adic digits, ordered by their residue mod p^precision.
/// Handles repeated roots modulo p by recursive refinement, so the count is
/// exact for any p (including 2).
std::vector<BigInt> padic_roots(const Poly& f, std::uint64_t p, unsigned precision);

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime factorisation of |n|, ascending.  Throws FactorizationOverflow when a
/// factor exceeds kPrimeCap or the cofactor resists splitting.
std::vector<PrimePower> factor(const BigInt& n);

bool is_squarefree(const BigInt& n);
/// sign(n) times the product of primes dividing n to an odd power.
BigInt squarefree_part(const BigInt& n);

struct Congruence {
    BigInt residue;
    BigInt modulus;
    friend bool operator==(const Congruence&, const Congruence&) = default;
};

/// Combines pairwise coprime congruences; throws NonCoprimeModuli otherwise.
Congruence crt_solve(std::span<const Congruence> congruences);

/// Primes p with lo <= p <= hi, ascending.
std::vector<std::uint64_t> primes_in_range(std::uint64_t lo, std::uint64_t hi);

std::string to_string(const BigInt& n);
/// Parses an optionally signed decimal integer; throws InvalidInput.
BigInt parse_bigint(std::string_view text);

}  // namespace twistcert
