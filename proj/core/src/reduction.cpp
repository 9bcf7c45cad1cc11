#include "twistcert/reduction.hpp"

#include <array>

namespace twistcert {

using u64 = std::uint64_t;

std::string_view to_string(ReductionKind kind) noexcept {
    switch (kind) {
        case ReductionKind::Good: return "Good";
        case ReductionKind::MultiplicativeSplit: return "MultiplicativeSplit";
        case ReductionKind::MultiplicativeNonsplit: return "MultiplicativeNonsplit";
        case ReductionKind::Additive: return "Additive";
    }
    return "?";
}

std::string Kodaira::to_string() const {
    switch (family) {
        case Family::I: return "I" + std::to_string(n);
        case Family::IStar: return "I" + std::to_string(n) + "*";
        case Family::II: return "II";
        case Family::III: return "III";
        case Family::IV: return "IV";
        case Family::IVStar: return "IV*";
        case Family::IIIStar: return "III*";
        case Family::IIStar: return "II*";
    }
    return "?";
}

BigInt WeierstrassModel::c6() const {
    const BigInt b2v = b2(), b4v = b4();
    return -b2v * b2v * b2v + 36 * b2v * b4v - 216 * b6();
}

BigInt WeierstrassModel::discriminant() const {
    const BigInt b2v = b2(), b4v = b4(), b6v = b6(), b8v = b8();
    return -b2v * b2v * b8v - 8 * b4v * b4v * b4v - 27 * b6v * b6v + 9 * b2v * b4v * b6v;
}

WeierstrassModel WeierstrassModel::rst_transform(const BigInt& r, const BigInt& s, const BigInt& t) const {
    WeierstrassModel m;
    m.a1 = a1 + 2 * s;
    m.a2 = a2 - s * a1 + 3 * r - s * s;
    m.a3 = a3 + r * a1 + 2 * t;
    m.a4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t;
    m.a6 = a6 + r * a4 + r * r * a2 + r * r * r - t * a3 - t * t - r * t * a1;
    return m;
}

namespace {

bool divisible(const BigInt& x, const BigInt& m) { return x % m == 0; }

u64 res(const BigInt& x, u64 p) { return mod_u64(x, p); }

// Does a x^2 + b x + c have a root mod p?
bool quadratic_has_root(const BigInt& a, const BigInt& b, const BigInt& c, u64 p) {
    if (p == 2) {
        for (u64 x = 0; x < 2; ++x)
            if (res(a * x * x + b * x + c, 2) == 0) return true;
        return false;
    }
    if (res(a, p) == 0) return res(b, p) != 0 || res(c, p) == 0;
    return legendre(b * b - 4 * a * c, p) >= 0;
}

unsigned count_roots_mod(const BigInt& c2, const BigInt& c1, const BigInt& c0, u64 p) {
    const std::array<BigInt, 4> coeffs{c0, c1, c2, BigInt(1)};
    return static_cast<unsigned>(poly_roots_mod(coeffs, p).size());
}

ReductionData finish(u64 p, ReductionKind kind, Kodaira::Family fam, unsigned n, unsigned vd,
                     unsigned f, unsigned c) {
    return ReductionData{p, kind, Kodaira{fam, n}, vd, f, c};
}

}  // namespace

ReductionData tate_reduction(const WeierstrassModel& model, PrimeQ prime) {
    using F = Kodaira::Family;
    const u64 p = prime.value();
    const BigInt P(p);
    const BigInt P2 = P * P, P3 = P2 * P, P4 = P3 * P, P6 = P4 * P2;
    WeierstrassModel m = model;

    for (;;) {
        const BigInt disc = m.discriminant();
        if (disc == 0) throw Error(Errc::SingularCurve, "singular model in Tate's algorithm");
        const unsigned n = valuation(disc, p);
        if (n == 0) return finish(p, ReductionKind::Good, F::I, 0, 0, 0, 1);

        // Move the singular point of the reduction to (0, 0).
        const BigInt b2 = m.b2(), b4 = m.b4(), b6 = m.b6();
        const BigInt c4 = m.c4(), c6 = m.c6();
        BigInt r, t;
        if (p == 2) {
            if (divisible(b2, P)) {
                r = res(m.a4, 2);
                t = res(r * (1 + m.a2 + m.a4) + m.a6, 2);
            } else {
                r = res(m.a3, 2);
                t = res(r + m.a4, 2);
            }
        } else if (p == 3) {
            r = divisible(b2, P) ? BigInt(res(-b6, 3)) : BigInt(res(-b2 * b4, 3));
            t = res(m.a1 * r + m.a3, 3);
        } else {
            if (divisible(c4, P)) {
                r = mul_mod(p - inv_mod(12 % p, p), res(b2, p), p);
            } else {
                const u64 inv = inv_mod(mul_mod(12 % p, res(c4, p), p), p);
                r = mul_mod(p - inv, res(c6 + b2 * c4, p), p);
            }
            t = mul_mod(p - inv_mod(2, p), res(m.a1 * r + m.a3, p), p);
        }
        m = m.rst_transform(r, 0, t);

        if (!divisible(c4, P)) {
            const bool split = quadratic_has_root(1, m.a1, -m.a2, p);
            if (split) return finish(p, ReductionKind::MultiplicativeSplit, F::I, n, n, 1, n);
            return finish(p, ReductionKind::MultiplicativeNonsplit, F::I, n, n, 1, n % 2 == 0 ? 2 : 1);
        }

        if (!divisible(m.a6, P2)) return finish(p, ReductionKind::Additive, F::II, 0, n, n, 1);
        if (!divisible(m.b8(), P3)) return finish(p, ReductionKind::Additive, F::III, 0, n, n - 1, 2);
        if (!divisible(m.b6(), P3)) {
            const unsigned c = quadratic_has_root(1, m.a3 / P, -(m.a6 / P2), p) ? 3 : 1;
            return finish(p, ReductionKind::Additive, F::IV, 0, n, n - 2, c);
        }

        // Arrange p | a1, a2; p^2 | a3, a4; p^3 | a6.
        BigInt s;
        if (p == 2) {
            s = res(m.a2, 2);
            t = 2 * BigInt(res(m.a6 / 4, 2));
        } else {
            const u64 half = inv_mod(2, p);
            s = mul_mod(p - half, res(m.a1, p), p);
            t = mul_mod(p - half, res(m.a3, p), p);
        }
        m = m.rst_transform(0, s, t);

        // P(T) = T^3 + b T^2 + c T + d
        const BigInt b = m.a2 / P, c = m.a4 / P2, d = m.a6 / P3;
        const BigInt w = 27 * d * d - b * b * c * c + 4 * b * b * b * d - 18 * b * c * d + 4 * c * c * c;
        const BigInt x = 3 * c - b * b;

        if (!divisible(w, P)) {
            const unsigned c0 = 1 + count_roots_mod(b, c, d, p);
            return finish(p, ReductionKind::Additive, F::IStar, 0, n, n - 4, c0);
        }

        if (!divisible(x, P)) {
            // Double root: move it to 0, then alternate y- and x-refinements.
            if (p == 2) {
                r = c;
            } else if (p == 3) {
                r = b * c;
            } else {
                r = mul_mod(res(b * c - 9 * d, p), inv_mod(res(2 * x, p), p), p);
            }
            r = P * BigInt(res(r, p));
            m = m.rst_transform(r, 0, 0);
            unsigned ix = 3, iy = 3;
            BigInt mx = P2, my = P2;
            unsigned cp = 0;
            while (cp == 0) {
                BigInt a2t = m.a2 / P, a3t = m.a3 / my, a4t = m.a4 / (P * mx), a6t = m.a6 / (mx * my);
                if (!divisible(a3t * a3t + 4 * a6t, P)) {
                    cp = quadratic_has_root(1, a3t, -a6t, p) ? 4 : 2;
                    break;
                }
                t = p == 2 ? BigInt(my * a6t) : BigInt(my * mul_mod(p - inv_mod(2, p), res(a3t, p), p));
                m = m.rst_transform(0, 0, t);
                my *= P;
                ++iy;
                a2t = m.a2 / P;
                a3t = m.a3 / my;
                a4t = m.a4 / (P * mx);
                a6t = m.a6 / (mx * my);
                if (!divisible(a4t * a4t - 4 * a6t * a2t, P)) {
                    cp = quadratic_has_root(a2t, a4t, a6t, p) ? 4 : 2;
                    break;
                }
                if (p == 2) {
                    r = mx * a6t * a2t;
                } else {
                    r = mx * BigInt(mul_mod(p - res(a4t, p), inv_mod(res(2 * a2t, p), p), p));
                }
                m = m.rst_transform(r, 0, 0);
                mx *= P;
                ++ix;
            }
            const unsigned mm = ix + iy - 5;
            return finish(p, ReductionKind::Additive, F::IStar, mm, n, n - mm - 4, cp);
        }

        // Triple root: move it to 0.
        if (p == 2) {
            r = b;
        } else if (p == 3) {
            r = -d;  // b and c vanish mod 3, so P(T) = T^3 + d = (T + d)^3
        } else {
            r = mul_mod(p - inv_mod(3, p), res(b, p), p);
        }
        r = P * BigInt(res(r, p));
        m = m.rst_transform(r, 0, 0);
        const BigInt x3 = m.a3 / P2, x6 = m.a6 / P4;
        if (!divisible(x3 * x3 + 4 * x6, P)) {
            const unsigned cp = quadratic_has_root(1, x3, -x6, p) ? 3 : 1;
            return finish(p, ReductionKind::Additive, F::IVStar, 0, n, n - 6, cp);
        }
        t = p == 2 ? BigInt(res(x6, 2)) : BigInt(mul_mod(p - inv_mod(2, p), res(x3, p), p));
        m = m.rst_transform(0, 0, P2 * t);
        if (!divisible(m.a4, P4)) return finish(p, ReductionKind::Additive, F::IIIStar, 0, n, n - 7, 2);
        if (!divisible(m.a6, P6)) return finish(p, ReductionKind::Additive, F::IIStar, 0, n, n - 8, 1);

        // Non-minimal: scale by u = p and start over.
        m.a1 /= P;
        m.a2 /= P2;
        m.a3 /= P3;
        m.a4 /= P4;
        m.a6 /= P6;
    }
}

ReductionData tate_reduction(const CurveQ& e, PrimeQ p) {
    return tate_reduction(WeierstrassModel::from_short(e), p);
}

bool is_good_at(const CurveQ& e, PrimeQ p) {
    if (e.discriminant() % p.value() != 0) return true;
    return tate_reduction(e, p).kind == ReductionKind::Good;
}

std::vector<std::uint64_t> bad_primes(const CurveQ& e) {
    std::vector<std::uint64_t> out;
    for (const auto& pp : factor(e.discriminant())) {
        if (!is_good_at(e, PrimeQ(pp.prime))) out.push_back(pp.prime);
    }
    return out;
}

}  // namespace twistcert
