#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "twistcert/curve.hpp"

namespace twistcert {

enum class Splitting { Inert, Split, Ramified };

std::string_view to_string(Splitting s) noexcept;

/// Where a prime sits in P_{E,0}, P_{E,1}, P_{E,2} and how it splits in K.
struct PrimeClass {
    std::uint64_t prime = 0;
    bool good_for_e = false;
    /// dim_F2 E(Q_q)[2]; set only for odd primes of good reduction.
    std::optional<int> torsion_dim;
    std::optional<Splitting> splitting_in_k;
};

/// Requires q odd and of good reduction (BadPrime otherwise).  The torsion
/// dimension is read off the root count of the 2-division cubic mod q.
PrimeClass classify_prime(const CurveQ& e, PrimeQ q);

/// Odd q: by the Kronecker symbol (D/q).  q = 2: Inert iff D = 5 mod 8,
/// Split iff D = 1 mod 8, else Ramified.
Splitting splitting_in_quadratic(const QuadField& k, PrimeQ q);

/// The `count` smallest odd primes q <= bound with good reduction, full local
/// 2-torsion and inert in K, coprime to 2 D disc(E).  Throws HypothesisFailed
/// when E has rational 2-torsion or K = Q(sqrt(disc)), SearchExhausted when
/// the bound is too small.  The range may be split across `threads` workers;
/// output does not depend on it.  If the search passes bound/2 still short of
/// `count`, `warn` gets one message with the density seen so far.
std::vector<PrimeQ> find_usable_primes(const CurveQ& e, const QuadField& k, std::size_t count,
                                       std::uint64_t bound, unsigned threads = 1,
                                       const std::function<void(const std::string&)>& warn = {});

/// One row per prime 2 <= p <= bound: bad primes and 2 carry no torsion_dim.
std::vector<PrimeClass> classify_range(const CurveQ& e, const std::optional<QuadField>& k,
                                       std::uint64_t bound, unsigned threads = 1);

}  // namespace twistcert
