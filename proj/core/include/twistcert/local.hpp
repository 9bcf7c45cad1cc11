#pragma once

// Local Galois cohomology at odd primes q where E has full 2-torsion over Q_q.
//
// There Galois acts trivially on E[2], so
//     H^1(Q_q, E[2]) = (Q_q^x / Q_q^x2) (x) E[2],
// a 4-dimensional F_2 space.  Vectors are 4-bit masks in the basis
//     bit 0: u (x) P1   bit 1: u (x) P2   bit 2: q (x) P1   bit 3: q (x) P2
// with u the least positive quadratic non-residue mod q and P1, P2 the
// 2-torsion points over the two smallest roots (ordered by residue mod q).
// The local Tate pairing is <a (x) P, b (x) Q> = (a, b)_q * e2(P, Q).

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "twistcert/classify.hpp"
#include "twistcert/curve.hpp"

namespace twistcert {

/// A place of Q: a prime, or infinity (stored as prime 0).
class Place {
public:
    static Place infinity() noexcept { return Place(0); }
    static Place finite(std::uint64_t p) noexcept { return Place(p); }

    bool is_infinite() const noexcept { return p_ == 0; }
    std::uint64_t prime() const noexcept { return p_; }
    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(p_); }

    friend auto operator<=>(const Place&, const Place&) = default;

private:
    explicit Place(std::uint64_t p) : p_(p) {}
    std::uint64_t p_;
};

std::uint64_t least_nonresidue(PrimeQ q);

/// Element of Q_q^x / Q_q^x2 for odd q: u^unit_bit * q^uni_bit.
struct SquareClass {
    std::uint64_t prime = 0;
    bool unit_bit = false;
    bool uni_bit = false;

    static SquareClass of(const BigInt& n, PrimeQ q);
    static SquareClass trivial(PrimeQ q) { return {q.value(), false, false}; }

    bool is_trivial() const noexcept { return !unit_bit && !uni_bit; }
    /// u^unit_bit * q^uni_bit with u the least non-residue.
    BigInt representative() const;
    std::string to_string() const;

    SquareClass operator*(const SquareClass& o) const { return {prime, unit_bit != o.unit_bit, uni_bit != o.uni_bit}; }
    friend bool operator==(const SquareClass&, const SquareClass&) = default;
};

/// Hilbert symbol (a, b)_q written additively in F_2 (0 = +1).
int hilbert_symbol_odd(const SquareClass& a, const SquareClass& b);

using H1Vec = std::uint8_t;

class LocalH1 {
public:
    std::uint64_t prime() const noexcept { return prime_; }
    std::uint64_t nonresidue() const noexcept { return nonresidue_; }
    const std::array<std::array<int, 4>, 4>& gram() const noexcept { return gram_; }
    /// Q_q-roots e1 < e2 < e3 of the 2-division cubic, mod q^precision.
    const std::array<BigInt, 3>& roots() const noexcept { return roots_; }
    unsigned precision() const noexcept { return precision_; }

    int pairing(H1Vec x, H1Vec y) const;
    unsigned gram_rank() const;

private:
    friend LocalH1 build_local_h1(const CurveQ& e, PrimeQ q);

    std::uint64_t prime_ = 0;
    std::uint64_t nonresidue_ = 0;
    std::array<std::array<int, 4>, 4> gram_{};
    std::array<BigInt, 3> roots_;
    unsigned precision_ = 0;
};

/// Throws NotFullTorsion unless q is odd and E(Q_q)[2] has dimension 2.
LocalH1 build_local_h1(const CurveQ& e, PrimeQ q);

/// Subspace of a LocalH1, kept as a reduced basis.
class H1Subspace {
public:
    H1Subspace(std::shared_ptr<const LocalH1> parent, const std::vector<H1Vec>& generators);

    const LocalH1& parent() const noexcept { return *parent_; }
    const std::vector<H1Vec>& basis() const noexcept { return basis_; }
    unsigned dim() const noexcept { return static_cast<unsigned>(basis_.size()); }

    bool contains(H1Vec v) const;
    std::vector<H1Vec> elements() const;
    H1Subspace intersect(const H1Subspace& other) const;
    /// The pairing vanishes identically on the subspace.
    bool is_isotropic() const;

private:
    std::shared_ptr<const LocalH1> parent_;
    std::vector<H1Vec> basis_;
};

using WSubspace = H1Subspace;

/// Classes killed by restriction to the unramified quadratic extension:
/// span{u (x) P1, u (x) P2}.  Throws NotInert unless q is inert in K.
WSubspace w_subspace(const LocalH1& h1, const QuadField& k);

/// Image of the Kummer map of E^d over Q_q, transported to H^1(Q_q, E[2]).
/// Uses the 2-torsion images first, then local points with integral x
/// scanned in the order 0..q-1, q*(1..q-1), q..q^3-1.
H1Subspace kummer_image(const CurveQ& e, PrimeQ q, const SquareClass& d);

/// dim_F2 E(Q_p)[2], exact for every prime (including bad ones and p = 2).
int local_two_torsion_dim(const CurveQ& e, PrimeQ p);

/// dim_F2 of the local Kummer image of E at v: the torsion dimension at odd
/// v, that plus 1 at v = 2, and 1 or 0 at infinity as disc E > 0 or not.
int alpha_dim(const CurveQ& e, Place v);

std::string format_h1_vector(H1Vec v);

}  // namespace twistcert
