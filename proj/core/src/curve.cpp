#include "twistcert/curve.hpp"

#include <nlohmann/json.hpp>

namespace twistcert {

CurveQ make_curve(BigInt a, BigInt b) {
    BigInt disc = -16 * (4 * a * a * a + 27 * b * b);
    if (disc == 0) {
        throw Error(Errc::SingularCurve, "A = " + a.str() + ", B = " + b.str());
    }
    BigInt c4 = -48 * a;
    return CurveQ(std::move(a), std::move(b), std::move(disc), std::move(c4));
}

Rational CurveQ::j_invariant() const {
    // keep the denominator positive; cpp_rational rejects some negative ones
    const BigInt num = c4_ * c4_ * c4_;
    return disc_ < 0 ? Rational(-num, -disc_) : Rational(num, disc_);
}

namespace {

BigInt json_integer(const nlohmann::json& v) {
    if (v.is_number_integer()) return BigInt(v.get<std::int64_t>());
    if (v.is_number_unsigned()) return BigInt(v.get<std::uint64_t>());
    if (v.is_string()) return parse_bigint(v.get<std::string>());
    throw Error(Errc::InvalidInput, "curve coefficient must be an integer");
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

CurveQ parse_curve(std::string_view text) {
    text = strip(text);
    if (!text.empty() && text.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& ex) {
            throw Error(Errc::InvalidInput, std::string("curve JSON: ") + ex.what());
        }
        if (!j.contains("A") || !j.contains("B")) throw Error(Errc::InvalidInput, "curve JSON needs A and B");
        return make_curve(json_integer(j["A"]), json_integer(j["B"]));
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos) throw Error(Errc::InvalidInput, "curve must be 'A,B'");
    return make_curve(parse_bigint(strip(text.substr(0, comma))), parse_bigint(strip(text.substr(comma + 1))));
}

QuadField::QuadField(std::int64_t d) : d_(d) {
    if (d == 0 || d == 1) throw Error(Errc::InvalidInput, "D must not be 0 or 1");
    if (!is_squarefree(BigInt(d))) throw Error(Errc::NotSquarefree, "D = " + std::to_string(d));
}

namespace detail {
CurveQ twist_model(const CurveQ& e, const BigInt& d) {
    return make_curve(d * d * e.a(), d * d * d * e.b());
}
}  // namespace detail

CurveQ twist(const CurveQ& e, const BigInt& d) {
    if (d == 0 || !is_squarefree(d)) throw Error(Errc::NotSquarefree, "d = " + d.str());
    return detail::twist_model(e, d);
}

Cubic two_division_cubic(const CurveQ& e) { return Cubic{BigInt(0), e.a(), e.b()}; }

bool has_rational_two_torsion(const CurveQ& e) {
    const Cubic f = two_division_cubic(e);
    if (e.b() == 0) return true;  // x = 0
    // Any rational root of a monic integral cubic is an integer dividing B.
    std::vector<BigInt> divisors{1};
    for (const auto& pp : factor(e.b())) {
        const std::size_t n = divisors.size();
        BigInt pk = 1;
        for (unsigned k = 1; k <= pp.exponent; ++k) {
            pk *= pp.prime;
            for (std::size_t i = 0; i < n; ++i) divisors.push_back(divisors[i] * pk);
        }
    }
    for (const auto& x : divisors) {
        if (f(x) == 0 || f(BigInt(-x)) == 0) return true;
    }
    return false;
}

bool check_K_not_sqrt_disc(const CurveQ& e, const QuadField& k) {
    return squarefree_part(e.discriminant()) != k.d();
}

}  // namespace twistcert
