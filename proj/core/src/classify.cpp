#include "twistcert/classify.hpp"

#include <algorithm>
#include <future>
#include <sstream>

#include "twistcert/reduction.hpp"

namespace twistcert {

std::string_view to_string(Splitting s) noexcept {
    switch (s) {
        case Splitting::Inert: return "inert";
        case Splitting::Split: return "split";
        case Splitting::Ramified: return "ramified";
    }
    return "?";
}

namespace {

int torsion_dim_from_roots(std::size_t roots) {
    switch (roots) {
        case 0: return 0;
        case 1: return 1;
        case 3: return 2;
        default:
            // Two distinct roots of a separable cubic force the third.
            throw Error(Errc::InvalidInput, "2-division cubic has exactly two roots at a good prime");
    }
}

// Runs `fn` over chunks of `primes` on up to `threads` workers and
// concatenates the results in input order.
template <typename Fn>
auto map_chunks(const std::vector<std::uint64_t>& primes, unsigned threads, Fn fn) {
    using Row = decltype(fn(std::uint64_t{}));
    std::vector<std::optional<Row>> rows(primes.size());
    const std::size_t workers = std::max(1u, threads);
    if (workers == 1 || primes.size() < 64) {
        for (std::size_t i = 0; i < primes.size(); ++i) rows[i] = fn(primes[i]);
    } else {
        std::vector<std::future<void>> jobs;
        const std::size_t chunk = (primes.size() + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t lo = w * chunk, hi = std::min(primes.size(), lo + chunk);
            if (lo >= hi) break;
            jobs.push_back(std::async(std::launch::async, [&, lo, hi] {
                for (std::size_t i = lo; i < hi; ++i) rows[i] = fn(primes[i]);
            }));
        }
        for (auto& j : jobs) j.get();
    }
    return rows;
}

}  // namespace

PrimeClass classify_prime(const CurveQ& e, PrimeQ q) {
    if (!q.is_odd()) throw Error(Errc::BadPrime, "q = 2 is not classified");
    if (!is_good_at(e, q)) throw Error(Errc::BadPrime, "bad reduction at " + std::to_string(q.value()));
    const Cubic f = two_division_cubic(e);
    PrimeClass out;
    out.prime = q.value();
    out.good_for_e = true;
    out.torsion_dim = torsion_dim_from_roots(cubic_roots_mod(f.c2, f.c1, f.c0, q).size());
    return out;
}

Splitting splitting_in_quadratic(const QuadField& k, PrimeQ q) {
    if (!q.is_odd()) {
        const std::int64_t r = ((k.d() % 8) + 8) % 8;
        if (r == 1) return Splitting::Split;
        if (r == 5) return Splitting::Inert;
        return Splitting::Ramified;
    }
    switch (kronecker(k.d(), static_cast<std::int64_t>(q.value()))) {
        case -1: return Splitting::Inert;
        case 1: return Splitting::Split;
        default: return Splitting::Ramified;
    }
}

std::vector<PrimeQ> find_usable_primes(const CurveQ& e, const QuadField& k, std::size_t count,
                                       std::uint64_t bound, unsigned threads,
                                       const std::function<void(const std::string&)>& warn) {
    if (has_rational_two_torsion(e)) throw Error(Errc::HypothesisFailed, "E has a rational 2-torsion point");
    if (!check_K_not_sqrt_disc(e, k)) throw Error(Errc::HypothesisFailed, "K = Q(sqrt(disc E))");
    if (count == 0) return {};

    const BigInt excluded = 2 * BigInt(k.d()) * e.discriminant();
    const auto usable = [&](std::uint64_t q) {
        if (excluded % q == 0) return false;
        const PrimeQ pq(q);
        return classify_prime(e, pq).torsion_dim == 2 && splitting_in_quadratic(k, pq) == Splitting::Inert;
    };

    std::vector<PrimeQ> found;
    std::size_t scanned = 0;
    // Walk the range in doubling blocks so the search stops soon after `count` hits.
    std::uint64_t block = 1024;
    bool warned = false;
    for (std::uint64_t lo = 3; lo <= bound && found.size() < count;) {
        const std::uint64_t hi = bound - lo < block ? bound : lo + block - 1;
        const auto primes = primes_in_range(lo, hi);
        const auto rows = map_chunks(primes, threads, usable);
        for (std::size_t i = 0; i < primes.size() && found.size() < count; ++i) {
            ++scanned;
            if (*rows[i]) found.emplace_back(primes[i]);
        }
        if (hi == bound) break;
        if (warn && !warned && hi >= bound / 2 && found.size() < count) {
            warned = true;
            std::ostringstream msg;
            msg << "usable-prime search past " << hi << " (bound/2 = " << bound / 2 << "): " << found.size() << " of "
                << count << " found among " << scanned << " primes, density "
                << static_cast<double>(found.size()) / static_cast<double>(scanned);
            warn(msg.str());
        }
        lo = hi + 1;
        block = std::min<std::uint64_t>(block * 2, 1 << 20);
    }
    if (found.size() < count) {
        std::ostringstream msg;
        msg << "found " << found.size() << " of " << count << " usable primes among " << scanned
            << " odd primes <= " << bound << " (observed density "
            << (scanned ? static_cast<double>(found.size()) / static_cast<double>(scanned) : 0.0)
            << ", expected about 1/12)";
        throw Error(Errc::SearchExhausted, msg.str());
    }
    return found;
}

std::vector<PrimeClass> classify_range(const CurveQ& e, const std::optional<QuadField>& k,
                                       std::uint64_t bound, unsigned threads) {
    const auto primes = primes_in_range(2, bound);
    const auto rows = map_chunks(primes, threads, [&](std::uint64_t p) {
        const PrimeQ pq(p);
        PrimeClass row;
        row.prime = p;
        row.good_for_e = is_good_at(e, pq);
        if (row.good_for_e && pq.is_odd()) row.torsion_dim = classify_prime(e, pq).torsion_dim;
        if (k) row.splitting_in_k = splitting_in_quadratic(*k, pq);
        return row;
    });
    std::vector<PrimeClass> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(*r);
    return out;
}

}  // namespace twistcert
