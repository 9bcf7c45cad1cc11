#pragma once

#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "twistcert/arith.hpp"

namespace twistcert {

using Rational = boost::multiprecision::cpp_rational;

/// Integral short Weierstrass model y^2 = x^3 + A x + B with its
/// discriminant and c4 cached.
class CurveQ {
public:
    const BigInt& a() const noexcept { return a_; }
    const BigInt& b() const noexcept { return b_; }
    /// -16 (4A^3 + 27B^2)
    const BigInt& discriminant() const noexcept { return disc_; }
    /// -48 A
    const BigInt& c4() const noexcept { return c4_; }

    Rational j_invariant() const;

    friend bool operator==(const CurveQ& x, const CurveQ& y) { return x.a_ == y.a_ && x.b_ == y.b_; }

private:
    friend CurveQ make_curve(BigInt a, BigInt b);
    CurveQ(BigInt a, BigInt b, BigInt disc, BigInt c4)
        : a_(std::move(a)), b_(std::move(b)), disc_(std::move(disc)), c4_(std::move(c4)) {}

    BigInt a_, b_, disc_, c4_;
};

/// Throws SingularCurve when the discriminant vanishes.
CurveQ make_curve(BigInt a, BigInt b);

/// Parses "A,B" or {"A": int, "B": int} (integers may be JSON numbers or
/// decimal strings).  Throws InvalidInput / SingularCurve.
CurveQ parse_curve(std::string_view text);

/// Q(sqrt(D)) for a squarefree D not in {0, 1}.
class QuadField {
public:
    explicit QuadField(std::int64_t d);

    std::int64_t d() const noexcept { return d_; }

private:
    std::int64_t d_;
};

/// E^d : y^2 = x^3 + d^2 A x + d^3 B.  Throws NotSquarefree.
CurveQ twist(const CurveQ& e, const BigInt& d);

namespace detail {
/// Twist without the squarefree check, for callers that already factored d.
CurveQ twist_model(const CurveQ& e, const BigInt& d);
}  // namespace detail

/// Monic 2-division cubic x^3 + c2 x^2 + c1 x + c0 (c2 = 0 for short models).
struct Cubic {
    BigInt c2, c1, c0;

    Poly as_poly() const { return Poly{c0, c1, c2, BigInt(1)}; }
    BigInt operator()(const BigInt& x) const { return ((x + c2) * x + c1) * x + c0; }
};

Cubic two_division_cubic(const CurveQ& e);

/// True iff the 2-division cubic has an integer root (found among the
/// divisors of B).  Throws FactorizationOverflow on unfactorable B.
bool has_rational_two_torsion(const CurveQ& e);

/// True iff K differs from Q(sqrt(disc E)).
bool check_K_not_sqrt_disc(const CurveQ& e, const QuadField& k);

}  // namespace twistcert
