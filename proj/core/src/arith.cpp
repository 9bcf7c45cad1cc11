#include "twistcert/arith.hpp"

#include <algorithm>
#include <array>
#include <charconv>

namespace twistcert {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
using i128 = __int128;

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
        case Errc::InvalidInput: return "InvalidInput";
        case Errc::MultipleRoot: return "MultipleRoot";
        case Errc::FactorizationOverflow: return "FactorizationOverflow";
        case Errc::NonCoprimeModuli: return "NonCoprimeModuli";
        case Errc::SingularCurve: return "SingularCurve";
        case Errc::NotSquarefree: return "NotSquarefree";
        case Errc::BadPrime: return "BadPrime";
        case Errc::SearchExhausted: return "SearchExhausted";
        case Errc::HypothesisFailed: return "HypothesisFailed";
        case Errc::NotFullTorsion: return "NotFullTorsion";
        case Errc::NotInert: return "NotInert";
        case Errc::SamplingExhausted: return "SamplingExhausted";
        case Errc::EvenD: return "EvenD";
        case Errc::MissingExternalInput: return "MissingExternalInput";
        case Errc::VerificationFailed: return "VerificationFailed";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// 64-bit modular arithmetic

u64 mul_mod(u64 a, u64 b, u64 m) noexcept {
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) noexcept {
    u64 result = 1 % m;
    base %= m;
    while (exp > 0) {
        if (exp & 1) result = mul_mod(result, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return result;
}

u64 inv_mod(u64 a, u64 m) {
    i128 old_r = a % m, r = m, old_s = 1, s = 0;
    while (r != 0) {
        i128 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    if (old_r != 1) throw Error(Errc::InvalidInput, "inv_mod: not a unit");
    i128 res = old_s % static_cast<i128>(m);
    if (res < 0) res += m;
    return static_cast<u64>(res);
}

bool is_prime(u64 n) noexcept {
    if (n < 2) return false;
    static constexpr std::array<u64, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (u64 p : kWitnesses) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (u64 a : kWitnesses) {
        u64 x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

PrimeQ::PrimeQ(u64 value) : value_(value) {
    if (value > kPrimeCap || !is_prime(value)) {
        throw Error(Errc::InvalidInput, std::to_string(value) + " is not a supported prime");
    }
}

// ---------------------------------------------------------------------------
// BigInt helpers

u64 mod_u64(const BigInt& n, u64 m) {
    BigInt r = n % m;
    if (r < 0) r += m;
    return r.convert_to<u64>();
}

BigInt mod_big(const BigInt& n, const BigInt& m) {
    BigInt r = n % m;
    if (r < 0) r += m;
    return r;
}

unsigned valuation(const BigInt& n, u64 p) {
    if (n == 0) throw Error(Errc::InvalidInput, "valuation of zero");
    BigInt q, r, x = n;
    unsigned v = 0;
    for (;;) {
        boost::multiprecision::divide_qr(x, BigInt(p), q, r);
        if (r != 0) return v;
        x = q;
        ++v;
    }
}

BigInt pow_big(const BigInt& base, unsigned exp) {
    return boost::multiprecision::pow(base, exp);
}

std::string to_string(const BigInt& n) { return n.str(); }

BigInt parse_bigint(std::string_view text) {
    std::size_t i = 0;
    if (!text.empty() && (text[0] == '-' || text[0] == '+')) i = 1;
    if (i == text.size()) throw Error(Errc::InvalidInput, "empty integer");
    for (std::size_t j = i; j < text.size(); ++j) {
        if (text[j] < '0' || text[j] > '9') {
            throw Error(Errc::InvalidInput, "not an integer: '" + std::string(text) + "'");
        }
    }
    std::string s(text);
    if (s[0] == '+') s.erase(0, 1);
    return BigInt(s);
}

// ---------------------------------------------------------------------------
// Kronecker symbol

namespace {

constexpr std::array<int, 8> kTab2{0, 1, 0, -1, 0, -1, 0, 1};

int kronecker128(i128 a, i128 b) {
    if (b == 0) return (a == 1 || a == -1) ? 1 : 0;
    if ((a & 1) == 0 && (b & 1) == 0) return 0;
    int v = 0;
    while ((b & 1) == 0) {
        b >>= 1;
        ++v;
    }
    int k = (v % 2 == 0) ? 1 : kTab2[static_cast<int>(a & 7)];
    if (b < 0) {
        b = -b;
        if (a < 0) k = -k;
    }
    for (;;) {
        if (a == 0) return b > 1 ? 0 : k;
        v = 0;
        while ((a & 1) == 0) {
            a >>= 1;
            ++v;
        }
        if (v % 2 == 1) k *= kTab2[static_cast<int>(b & 7)];
        if (a & b & 2) k = -k;
        i128 r = a < 0 ? -a : a;
        a = b % r;
        b = r;
    }
}

}  // namespace

int kronecker(std::int64_t a, std::int64_t n) {
    if (n == 0) throw Error(Errc::InvalidInput, "kronecker: n = 0");
    return kronecker128(a, n);
}

int kronecker(const BigInt& a, std::int64_t n) {
    if (n == 0) throw Error(Errc::InvalidInput, "kronecker: n = 0");
    int sign = 1;
    i128 m = n;
    if (m < 0) {
        m = -m;
        if (a < 0) sign = -1;
    }
    // (a/m) only depends on a mod 8m for m > 0.
    const BigInt period = BigInt(8) * BigInt(static_cast<u64>(m));
    BigInt r = mod_big(a, period);
    const u64 lo = static_cast<u64>(r & BigInt(UINT64_MAX));
    const u64 hi = static_cast<u64>(r >> 64);
    const i128 reduced = static_cast<i128>((static_cast<u128>(hi) << 64) | lo);
    return sign * kronecker128(reduced, m);
}

int legendre(const BigInt& a, u64 p) {
    u64 r = mod_u64(a, p);
    if (r == 0) return 0;
    return kronecker128(r, p);
}

// ---------------------------------------------------------------------------
// Roots of small polynomials mod q

namespace {

using PolyModQ = std::vector<u64>;  // ascending, trimmed

void trim(PolyModQ& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

PolyModQ poly_mod(PolyModQ a, const PolyModQ& f, u64 q) {
    // f monic
    trim(a);
    const std::size_t n = f.size() - 1;
    while (a.size() > n) {
        const u64 lead = a.back();
        const std::size_t shift = a.size() - 1 - n;
        for (std::size_t i = 0; i <= n; ++i) {
            a[shift + i] = (a[shift + i] + q - mul_mod(lead, f[i], q)) % q;
        }
        trim(a);
    }
    return a;
}

PolyModQ poly_mulmod(const PolyModQ& a, const PolyModQ& b, const PolyModQ& f, u64 q) {
    if (a.empty() || b.empty()) return {};
    PolyModQ r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mul_mod(a[i], b[j], q)) % q;
    return poly_mod(std::move(r), f, q);
}

PolyModQ poly_powmod(PolyModQ base, u64 exp, const PolyModQ& f, u64 q) {
    PolyModQ result{1};
    base = poly_mod(std::move(base), f, q);
    while (exp > 0) {
        if (exp & 1) result = poly_mulmod(result, base, f, q);
        base = poly_mulmod(base, base, f, q);
        exp >>= 1;
    }
    return result;
}

PolyModQ make_monic(PolyModQ a, u64 q) {
    trim(a);
    if (a.empty()) return a;
    const u64 inv = inv_mod(a.back(), q);
    for (auto& c : a) c = mul_mod(c, inv, q);
    return a;
}

// Quotient and remainder of a by monic f.
std::pair<PolyModQ, PolyModQ> poly_divmod(PolyModQ a, const PolyModQ& f, u64 q) {
    trim(a);
    const std::size_t n = f.size() - 1;
    if (a.size() <= n) return {{}, a};
    PolyModQ quot(a.size() - n, 0);
    while (a.size() > n) {
        const u64 lead = a.back();
        const std::size_t shift = a.size() - 1 - n;
        quot[shift] = lead;
        for (std::size_t i = 0; i <= n; ++i) {
            a[shift + i] = (a[shift + i] + q - mul_mod(lead, f[i], q)) % q;
        }
        trim(a);
    }
    trim(quot);
    return {quot, a};
}

PolyModQ poly_gcd(PolyModQ a, PolyModQ b, u64 q) {
    a = make_monic(std::move(a), q);
    b = make_monic(std::move(b), q);
    while (!b.empty()) {
        PolyModQ r = poly_divmod(a, b, q).second;
        a = std::move(b);
        b = make_monic(std::move(r), q);
    }
    return a;
}

void split_linear_factors(const PolyModQ& g, u64 q, std::vector<u64>& roots) {
    const std::size_t deg = g.size() - 1;
    if (deg == 0) return;
    if (deg == 1) {
        roots.push_back((q - g[0]) % q);
        return;
    }
    for (u64 a = 0; a < q; ++a) {
        PolyModQ t = poly_powmod(PolyModQ{a, 1}, (q - 1) / 2, g, q);
        if (t.empty()) t = {0};
        t[0] = (t[0] + q - 1) % q;
        PolyModQ h = poly_gcd(g, t, q);
        const std::size_t dh = h.empty() ? 0 : h.size() - 1;
        if (dh > 0 && dh < deg) {
            split_linear_factors(h, q, roots);
            split_linear_factors(poly_divmod(g, h, q).first, q, roots);
            return;
        }
    }
    throw Error(Errc::InvalidInput, "root splitting failed (modulus not prime?)");
}

}  // namespace

namespace detail {

std::vector<u64> roots_mod_scan(std::span<const u64> coeffs, u64 q) {
    PolyModQ f(coeffs.begin(), coeffs.end());
    trim(f);
    if (f.empty()) throw Error(Errc::InvalidInput, "zero polynomial has every residue as root");
    std::vector<u64> roots;
    for (u64 x = 0; x < q; ++x) {
        u64 acc = 0;
        for (auto it = f.rbegin(); it != f.rend(); ++it) acc = (mul_mod(acc, x, q) + *it) % q;
        if (acc == 0) roots.push_back(x);
    }
    return roots;
}

std::vector<u64> roots_mod_gcd(std::span<const u64> coeffs, u64 q) {
    PolyModQ f(coeffs.begin(), coeffs.end());
    trim(f);
    if (f.empty()) throw Error(Errc::InvalidInput, "zero polynomial has every residue as root");
    if (q == 2) return roots_mod_scan(coeffs, q);
    f = make_monic(std::move(f), q);
    std::vector<u64> roots;
    if (f.size() == 1) return roots;
    PolyModQ xq = poly_powmod(PolyModQ{0, 1}, q, f, q);
    xq.resize(std::max<std::size_t>(xq.size(), 2), 0);
    xq[1] = (xq[1] + q - 1) % q;
    PolyModQ g = poly_gcd(f, xq, q);
    split_linear_factors(g, q, roots);
    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace detail

std::vector<u64> poly_roots_mod(std::span<const BigInt> coeffs, u64 q) {
    std::vector<u64> reduced;
    reduced.reserve(coeffs.size());
    for (const auto& c : coeffs) reduced.push_back(mod_u64(c, q));
    if (q < detail::kCubicScanLimit) return detail::roots_mod_scan(reduced, q);
    return detail::roots_mod_gcd(reduced, q);
}

std::vector<u64> cubic_roots_mod(const BigInt& c2, const BigInt& c1, const BigInt& c0, PrimeQ q) {
    if (!q.is_odd()) throw Error(Errc::InvalidInput, "cubic_roots_mod needs an odd prime");
    const std::array<BigInt, 4> coeffs{c0, c1, c2, BigInt(1)};
    return poly_roots_mod(coeffs, q.value());
}

// ---------------------------------------------------------------------------
// Integer polynomials, Hensel lifting and p-adic roots

BigInt poly_eval(const Poly& f, const BigInt& x) {
    BigInt acc = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Poly poly_derivative(const Poly& f) {
    if (f.size() <= 1) return {};
    Poly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = f[i] * static_cast<unsigned>(i);
    return d;
}

Poly poly_taylor_shift(const Poly& f, const BigInt& shift) {
    // Horner in polynomial form: g = (...(f_n)(x + s) + f_{n-1})(x + s) + ...
    Poly g;
    for (auto it = f.rbegin(); it != f.rend(); ++it) {
        Poly next(g.size() + 1, 0);
        for (std::size_t i = 0; i < g.size(); ++i) {
            next[i + 1] += g[i];
            next[i] += g[i] * shift;
        }
        next[0] += *it;
        g = std::move(next);
    }
    return g;
}

namespace {

BigInt inverse_mod_big(const BigInt& a, const BigInt& m) {
    BigInt old_r = mod_big(a, m), r = m, old_s = 1, s = 0;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw Error(Errc::InvalidInput, "not invertible");
    return mod_big(old_s, m);
}

BigInt lift_simple_root(const Poly& f, u64 p, const BigInt& r0, unsigned k) {
    const Poly df = poly_derivative(f);
    BigInt r = mod_big(r0, BigInt(p));
    unsigned prec = 1;
    while (prec < k) {
        prec = std::min(2 * prec, k);
        const BigInt mod = pow_big(BigInt(p), prec);
        const BigInt fr = poly_eval(f, r);
        const BigInt dfr = poly_eval(df, r);
        r = mod_big(r - fr * inverse_mod_big(dfr, mod), mod);
    }
    return mod_big(r, pow_big(BigInt(p), k));
}

void collect_padic_roots(const Poly& h, u64 p, unsigned digits, const BigInt& base,
                         const BigInt& scale, std::vector<BigInt>& out, unsigned depth) {
    if (depth > 4096) throw Error(Errc::InvalidInput, "p-adic root refinement did not terminate");
    const Poly dh = poly_derivative(h);
    for (u64 t0 : poly_roots_mod(h, p)) {
        if (mod_u64(poly_eval(dh, BigInt(t0)), p) != 0) {
            out.push_back(base + scale * lift_simple_root(h, p, BigInt(t0), std::max(digits, 1u)));
            continue;
        }
        // Repeated root mod p: substitute t = t0 + p*s and strip the content.
        Poly g = poly_taylor_shift(h, BigInt(t0));
        BigInt pk = 1;
        for (auto& c : g) {
            c *= pk;
            pk *= p;
        }
        unsigned v = UINT32_MAX;
        for (const auto& c : g)
            if (c != 0) v = std::min(v, valuation(c, p));
        const BigInt pv = pow_big(BigInt(p), v);
        for (auto& c : g) c /= pv;
        collect_padic_roots(g, p, digits > 1 ? digits - 1 : 1, base + scale * t0, scale * p, out,
                            depth + 1);
    }
}

}  // namespace

PadicRoot hensel_lift_root(const Poly& f, PrimeQ q, const BigInt& r0, unsigned k) {
    if (k == 0) throw Error(Errc::InvalidInput, "precision must be positive");
    const u64 p = q.value();
    if (mod_u64(poly_eval(f, r0), p) != 0) {
        throw Error(Errc::InvalidInput, "starting value is not a root mod " + std::to_string(p));
    }
    if (mod_u64(poly_eval(poly_derivative(f), r0), p) == 0) {
        throw Error(Errc::MultipleRoot, "f'(r0) = 0 mod " + std::to_string(p));
    }
    return PadicRoot{p, lift_simple_root(f, p, r0, k), k};
}

std::vector<BigInt> padic_roots(const Poly& f, u64 p, unsigned precision) {
    Poly g = f;
    while (!g.empty() && g.back() == 0) g.pop_back();
    if (g.size() < 2) return {};
    std::vector<BigInt> out;
    collect_padic_roots(g, p, std::max(precision, 1u), BigInt(0), BigInt(1), out, 0);
    const BigInt mod = pow_big(BigInt(p), std::max(precision, 1u));
    for (auto& r : out) r = mod_big(r, mod);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Factorisation

namespace {

constexpr u64 kTrialLimit = u64{1} << 21;

const std::vector<u64>& small_primes() {
    static const std::vector<u64> primes = primes_in_range(2, kTrialLimit);
    return primes;
}

u64 gcd64(u64 a, u64 b) {
    while (b) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}

// Brent's variant of Pollard rho; returns a non-trivial factor or 0.
u64 rho64(u64 n) {
    if (n % 2 == 0) return 2;
    for (u64 c = 1; c < 64; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mul_mod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            do {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mul_mod(q, x > y ? x - y : y - x, n);
                }
                g = gcd64(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1 && r < (u64{1} << 26));
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd64(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

BigInt rho_big(const BigInt& n, unsigned budget) {
    for (unsigned c = 1; c < 8; ++c) {
        BigInt x = 2, y = 2, g = 1;
        for (unsigned i = 0; i < budget && g == 1; ++i) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            g = boost::multiprecision::gcd(x > y ? BigInt(x - y) : BigInt(y - x), n);
        }
        if (g != 1 && g != n) return g;
    }
    return 0;
}

void factor_cofactor(const BigInt& m, std::vector<u64>& primes) {
    if (m == 1) return;
    if (m <= BigInt(UINT64_MAX)) {
        const u64 n = m.convert_to<u64>();
        if (is_prime(n)) {
            if (n > kPrimeCap)
                throw Error(Errc::FactorizationOverflow, "prime factor " + std::to_string(n) + " exceeds 2^63");
            primes.push_back(n);
            return;
        }
        const u64 f = rho64(n);
        if (f == 0) throw Error(Errc::FactorizationOverflow, "could not split " + std::to_string(n));
        factor_cofactor(BigInt(f), primes);
        factor_cofactor(BigInt(n / f), primes);
        return;
    }
    if (boost::multiprecision::msb(m) >= kIntermediateBits) {
        throw Error(Errc::FactorizationOverflow, "cofactor " + m.str() + " exceeds the 2^127 budget");
    }
    const BigInt f = rho_big(m, 1u << 18);
    if (f == 0) throw Error(Errc::FactorizationOverflow, "could not split cofactor " + m.str());
    factor_cofactor(f, primes);
    factor_cofactor(m / f, primes);
}

}  // namespace

std::vector<PrimePower> factor(const BigInt& n) {
    if (n == 0) throw Error(Errc::InvalidInput, "cannot factor 0");
    BigInt m = boost::multiprecision::abs(n);
    std::vector<PrimePower> out;
    BigInt q, r;
    for (u64 p : small_primes()) {
        if (BigInt(p) * p > m) break;
        if (mod_u64(m, p) != 0) continue;
        unsigned e = 0;
        for (;;) {
            boost::multiprecision::divide_qr(m, BigInt(p), q, r);
            if (r != 0) break;
            m = q;
            ++e;
        }
        out.push_back({p, e});
    }
    std::vector<u64> large;
    factor_cofactor(m, large);
    std::sort(large.begin(), large.end());
    for (u64 p : large) {
        if (!out.empty() && out.back().prime == p)
            ++out.back().exponent;
        else
            out.push_back({p, 1});
    }
    return out;
}

bool is_squarefree(const BigInt& n) {
    const auto fac = factor(n);
    return std::all_of(fac.begin(), fac.end(), [](const PrimePower& pp) { return pp.exponent == 1; });
}

BigInt squarefree_part(const BigInt& n) {
    BigInt out = n < 0 ? -1 : 1;
    for (const auto& pp : factor(n))
        if (pp.exponent % 2 == 1) out *= pp.prime;
    return out;
}

Congruence crt_solve(std::span<const Congruence> congruences) {
    for (const auto& c : congruences) {
        if (c.modulus <= 0) throw Error(Errc::InvalidInput, "moduli must be positive");
    }
    for (std::size_t i = 0; i < congruences.size(); ++i) {
        for (std::size_t j = i + 1; j < congruences.size(); ++j) {
            if (boost::multiprecision::gcd(congruences[i].modulus, congruences[j].modulus) != 1) {
                throw Error(Errc::NonCoprimeModuli, congruences[i].modulus.str() + " and " +
                                                        congruences[j].modulus.str());
            }
        }
    }
    Congruence acc{0, 1};
    for (const auto& c : congruences) {
        const BigInt r = mod_big(c.residue, c.modulus);
        const BigInt k = mod_big((r - acc.residue) * inverse_mod_big(acc.modulus, c.modulus), c.modulus);
        acc.residue += acc.modulus * k;
        acc.modulus *= c.modulus;
        acc.residue = mod_big(acc.residue, acc.modulus);
    }
    return acc;
}

std::vector<u64> primes_in_range(u64 lo, u64 hi) {
    std::vector<u64> out;
    if (hi < 2 || lo > hi) return out;
    lo = std::max<u64>(lo, 2);
    if (hi <= 50'000'000) {
        std::vector<bool> composite(hi + 1, false);
        for (u64 i = 2; i * i <= hi; ++i) {
            if (composite[i]) continue;
            for (u64 j = i * i; j <= hi; j += i) composite[j] = true;
        }
        for (u64 i = lo; i <= hi; ++i)
            if (!composite[i]) out.push_back(i);
        return out;
    }
    for (u64 i = lo; i <= hi && i >= lo; ++i)
        if (is_prime(i)) out.push_back(i);
    return out;
}

}  // namespace twistcert
