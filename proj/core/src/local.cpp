#include "twistcert/local.hpp"

#include <algorithm>
#include <optional>

#include "twistcert/arith.hpp"

namespace twistcert {

using u64 = std::uint64_t;

namespace {

constexpr H1Vec kUP1 = 1, kUP2 = 2, kQP1 = 4, kQP2 = 8;

int torsion_dim_from_root_count(std::size_t n) {
    switch (n) {
        case 0: return 0;
        case 1: return 1;
        case 3: return 2;
        default: throw Error(Errc::InvalidInput, "squarefree cubic with two roots");
    }
}

H1Vec leading_bit(H1Vec v) {
    return static_cast<H1Vec>(1u << (31 - __builtin_clz(static_cast<unsigned>(v))));
}

// Reduced row echelon basis of the span of `gens` over F_2.
std::vector<H1Vec> reduce_basis(const std::vector<H1Vec>& gens) {
    std::vector<H1Vec> basis;
    for (H1Vec g : gens) {
        H1Vec v = g & 0xF;
        for (H1Vec b : basis)
            if (v & leading_bit(b)) v ^= b;
        if (v == 0) continue;
        const H1Vec lead = leading_bit(v);
        for (auto& b : basis)
            if (b & lead) b ^= v;
        basis.push_back(v);
    }
    std::sort(basis.begin(), basis.end());
    return basis;
}

// Square class of a q-adic number known modulo q^k (value in [0, q^k)).
std::optional<SquareClass> class_of_approx(const BigInt& value, u64 q, unsigned k) {
    if (value == 0) return std::nullopt;
    const unsigned v = valuation(value, q);
    if (v >= k) return std::nullopt;
    const BigInt unit = value / pow_big(BigInt(q), v);
    return SquareClass{q, legendre(unit, q) == -1, v % 2 == 1};
}

// Kummer coordinates of (x - e1, x - e2) as a vector in the fixed basis.
// Pairing with the 2-torsion points identifies the class of x - e1 with
// the P2-coefficient and x - e2 with the P1-coefficient.
H1Vec kummer_vector(const SquareClass& k1, const SquareClass& k2) {
    H1Vec v = 0;
    if (k2.unit_bit) v |= kUP1;
    if (k1.unit_bit) v |= kUP2;
    if (k2.uni_bit) v |= kQP1;
    if (k1.uni_bit) v |= kQP2;
    return v;
}

unsigned precision_for(const CurveQ& e, u64 q) {
    // Root separation is bounded by the discriminant of the cubic.
    const unsigned vd = valuation(e.discriminant(), q);
    return 2 * vd + 8;
}

}  // namespace

// ---------------------------------------------------------------------------

u64 least_nonresidue(PrimeQ q) {
    if (!q.is_odd()) throw Error(Errc::InvalidInput, "least_nonresidue needs an odd prime");
    for (u64 u = 2;; ++u)
        if (kronecker(static_cast<std::int64_t>(u), static_cast<std::int64_t>(q.value())) == -1) return u;
}

SquareClass SquareClass::of(const BigInt& n, PrimeQ q) {
    if (!q.is_odd()) throw Error(Errc::InvalidInput, "square classes are modelled at odd primes only");
    if (n == 0) throw Error(Errc::InvalidInput, "zero has no square class");
    const unsigned v = valuation(n, q.value());
    const BigInt unit = n / pow_big(BigInt(q.value()), v);
    return SquareClass{q.value(), legendre(unit, q.value()) == -1, v % 2 == 1};
}

BigInt SquareClass::representative() const {
    BigInt r = 1;
    if (unit_bit) r *= least_nonresidue(PrimeQ(prime));
    if (uni_bit) r *= prime;
    return r;
}

std::string SquareClass::to_string() const {
    if (is_trivial()) return "1";
    if (unit_bit && uni_bit) return "uq";
    return unit_bit ? "u" : "q";
}

int hilbert_symbol_odd(const SquareClass& a, const SquareClass& b) {
    if (a.prime != b.prime) throw Error(Errc::InvalidInput, "Hilbert symbol of classes at different primes");
    // (u,u) = 0, (u,q) = 1, (q,q) = [q = 3 mod 4]
    const int qq = (a.prime % 4 == 3) ? 1 : 0;
    const int ua = a.unit_bit, qa = a.uni_bit, ub = b.unit_bit, qb = b.uni_bit;
    return (ua * qb + qa * ub + qa * qb * qq) % 2;
}

// ---------------------------------------------------------------------------

int LocalH1::pairing(H1Vec x, H1Vec y) const {
    int acc = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (((x >> i) & 1) && ((y >> j) & 1)) acc ^= gram_[i][j];
    return acc;
}

unsigned LocalH1::gram_rank() const {
    std::vector<H1Vec> rows;
    for (int i = 0; i < 4; ++i) {
        H1Vec r = 0;
        for (int j = 0; j < 4; ++j)
            if (gram_[i][j]) r |= static_cast<H1Vec>(1 << j);
        rows.push_back(r);
    }
    return static_cast<unsigned>(reduce_basis(rows).size());
}

LocalH1 build_local_h1(const CurveQ& e, PrimeQ q) {
    if (!q.is_odd()) throw Error(Errc::NotFullTorsion, "H^1 model needs an odd prime");
    const unsigned k = precision_for(e, q.value());
    auto roots = padic_roots(two_division_cubic(e).as_poly(), q.value(), k);
    if (roots.size() != 3) {
        throw Error(Errc::NotFullTorsion, "E(Q_" + std::to_string(q.value()) + ")[2] has dimension " +
                                              std::to_string(torsion_dim_from_root_count(roots.size())));
    }
    std::stable_sort(roots.begin(), roots.end(), [&](const BigInt& x, const BigInt& y) {
        return mod_u64(x, q.value()) < mod_u64(y, q.value());
    });

    LocalH1 h;
    h.prime_ = q.value();
    h.nonresidue_ = least_nonresidue(q);
    h.precision_ = k;
    std::copy(roots.begin(), roots.end(), h.roots_.begin());

    // Basis symbols a_i (x) P_i
    const std::array<SquareClass, 4> sym{SquareClass{q.value(), true, false}, SquareClass{q.value(), true, false},
                                         SquareClass{q.value(), false, true}, SquareClass{q.value(), false, true}};
    const std::array<int, 4> pt{1, 2, 1, 2};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const int weil = pt[i] != pt[j] ? 1 : 0;
            h.gram_[i][j] = hilbert_symbol_odd(sym[i], sym[j]) * weil;
        }
    return h;
}

// ---------------------------------------------------------------------------

H1Subspace::H1Subspace(std::shared_ptr<const LocalH1> parent, const std::vector<H1Vec>& generators)
    : parent_(std::move(parent)), basis_(reduce_basis(generators)) {}

bool H1Subspace::contains(H1Vec v) const {
    std::vector<H1Vec> gens = basis_;
    gens.push_back(v);
    return reduce_basis(gens).size() == basis_.size();
}

std::vector<H1Vec> H1Subspace::elements() const {
    std::vector<H1Vec> out;
    for (unsigned mask = 0; mask < (1u << basis_.size()); ++mask) {
        H1Vec v = 0;
        for (std::size_t i = 0; i < basis_.size(); ++i)
            if (mask & (1u << i)) v ^= basis_[i];
        out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

H1Subspace H1Subspace::intersect(const H1Subspace& other) const {
    if (parent_->prime() != other.parent_->prime())
        throw Error(Errc::InvalidInput, "subspaces live over different primes");
    std::vector<H1Vec> common;
    for (H1Vec v : elements())
        if (other.contains(v)) common.push_back(v);
    return H1Subspace(parent_, common);
}

bool H1Subspace::is_isotropic() const {
    for (H1Vec x : basis_)
        for (H1Vec y : basis_)
            if (parent_->pairing(x, y) != 0) return false;
    return true;
}

WSubspace w_subspace(const LocalH1& h1, const QuadField& k) {
    if (splitting_in_quadratic(k, PrimeQ(h1.prime())) != Splitting::Inert) {
        throw Error(Errc::NotInert, std::to_string(h1.prime()) + " is not inert in Q(sqrt(" +
                                        std::to_string(k.d()) + "))");
    }
    return WSubspace(std::make_shared<const LocalH1>(h1), {kUP1, kUP2});
}

H1Subspace kummer_image(const CurveQ& e, PrimeQ q, const SquareClass& d) {
    if (d.prime != q.value()) throw Error(Errc::InvalidInput, "square class taken at a different prime");
    auto h1 = std::make_shared<const LocalH1>(build_local_h1(e, q));
    const u64 p = q.value();
    const unsigned k = h1->precision();
    const BigInt mod = pow_big(BigInt(p), k);
    const BigInt delta = d.representative();

    // Roots of the twisted cubic are delta * e_i.
    std::array<BigInt, 3> roots;
    for (int i = 0; i < 3; ++i) roots[i] = mod_big(delta * h1->roots()[i], mod);
    const BigInt ta = delta * delta * e.a(), tb = delta * delta * delta * e.b();

    std::vector<H1Vec> gens;
    auto add = [&](H1Vec v) {
        gens.push_back(v);
        gens = reduce_basis(gens);
    };

    // Images of the 2-torsion points (e_i, 0): the vanishing factor is
    // replaced by the product of the other two.
    for (int i = 0; i < 3; ++i) {
        std::array<std::optional<SquareClass>, 3> c;
        for (int j = 0; j < 3; ++j)
            if (j != i) c[j] = class_of_approx(mod_big(roots[i] - roots[j], mod), p, k);
        const int a = (i + 1) % 3, b = (i + 2) % 3;
        if (!c[a] || !c[b]) continue;
        c[i] = *c[a] * *c[b];
        add(kummer_vector(*c[0], *c[1]));
    }

    std::uint64_t samples = 0;
    auto try_x = [&](const BigInt& x) {
        ++samples;
        const BigInt fx = (x * x + ta) * x + tb;
        if (fx == 0 || !SquareClass::of(fx, q).is_trivial()) return;
        const auto c1 = class_of_approx(mod_big(x - roots[0], mod), p, k);
        const auto c2 = class_of_approx(mod_big(x - roots[1], mod), p, k);
        if (!c1 || !c2) return;
        add(kummer_vector(*c1, *c2));
    };

    constexpr std::uint64_t kMaxSamples = 2'000'000;
    for (u64 x = 0; x < p && gens.size() < 2; ++x) try_x(BigInt(x));
    for (u64 j = 1; j < p && gens.size() < 2; ++j) try_x(BigInt(p) * j);
    const BigInt cube = BigInt(p) * p * p;
    for (BigInt x = p; x < cube && gens.size() < 2 && samples < kMaxSamples; ++x) try_x(x);

    if (gens.size() < 2) {
        throw Error(Errc::SamplingExhausted, "Kummer image at " + std::to_string(p) + " stalled at dimension " +
                                                 std::to_string(gens.size()));
    }
    return H1Subspace(h1, gens);
}

int local_two_torsion_dim(const CurveQ& e, PrimeQ p) {
    return torsion_dim_from_root_count(padic_roots(two_division_cubic(e).as_poly(), p.value(), 1).size());
}

int alpha_dim(const CurveQ& e, Place v) {
    if (v.is_infinite()) return e.discriminant() > 0 ? 1 : 0;
    const PrimeQ p(v.prime());
    const int t = local_two_torsion_dim(e, p);
    return p.is_odd() ? t : t + 1;
}

std::string format_h1_vector(H1Vec v) {
    static constexpr std::array<const char*, 4> names{"u*P1", "u*P2", "q*P1", "q*P2"};
    if (v == 0) return "0";
    std::string out;
    for (int i = 0; i < 4; ++i) {
        if (!((v >> i) & 1)) continue;
        if (!out.empty()) out += " + ";
        out += names[i];
    }
    return out;
}

}  // namespace twistcert
