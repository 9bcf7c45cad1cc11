#pragma once

#include <string>
#include <vector>

#include "twistcert/curve.hpp"

namespace twistcert {

enum class ReductionKind { Good, MultiplicativeSplit, MultiplicativeNonsplit, Additive };

std::string_view to_string(ReductionKind kind) noexcept;

/// Kodaira symbol.  `n` is only meaningful for I_n and I_n^*.
struct Kodaira {
    enum class Family { I, IStar, II, III, IV, IVStar, IIIStar, IIStar };

    Family family = Family::I;
    unsigned n = 0;

    std::string to_string() const;
    friend bool operator==(const Kodaira&, const Kodaira&) = default;
};

struct ReductionData {
    std::uint64_t prime = 0;
    ReductionKind kind = ReductionKind::Good;
    Kodaira kodaira;
    /// Valuation of the minimal discriminant.
    unsigned v_delta_min = 0;
    unsigned conductor_exponent = 0;
    unsigned tamagawa = 1;
};

/// Tate's algorithm at p, for every prime including 2 and 3.  Non-minimal
/// input models are rescaled by u = p until minimal.
ReductionData tate_reduction(const CurveQ& e, PrimeQ p);

bool is_good_at(const CurveQ& e, PrimeQ p);

/// Primes at which the curve has bad reduction, ascending.
std::vector<std::uint64_t> bad_primes(const CurveQ& e);

/// Long Weierstrass coefficients, used internally by Tate's algorithm and
/// exposed for tests of the coordinate changes.
struct WeierstrassModel {
    BigInt a1, a2, a3, a4, a6;

    static WeierstrassModel from_short(const CurveQ& e) { return {0, 0, 0, e.a(), e.b()}; }

    BigInt b2() const { return a1 * a1 + 4 * a2; }
    BigInt b4() const { return a1 * a3 + 2 * a4; }
    BigInt b6() const { return a3 * a3 + 4 * a6; }
    BigInt b8() const { return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4; }
    BigInt c4() const { return b2() * b2() - 24 * b4(); }
    BigInt c6() const;
    BigInt discriminant() const;

    /// Substitution x = x' + r, y = y' + s x' + t.
    WeierstrassModel rst_transform(const BigInt& r, const BigInt& s, const BigInt& t) const;
};

ReductionData tate_reduction(const WeierstrassModel& model, PrimeQ p);

}  // namespace twistcert
