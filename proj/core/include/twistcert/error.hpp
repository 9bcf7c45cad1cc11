#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace twistcert {

enum class Errc {
    InvalidInput,
    MultipleRoot,
    FactorizationOverflow,
    NonCoprimeModuli,
    SingularCurve,
    NotSquarefree,
    BadPrime,
    SearchExhausted,
    HypothesisFailed,
    NotFullTorsion,
    NotInert,
    SamplingExhausted,
    EvenD,
    MissingExternalInput,
    VerificationFailed,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the `Errc` tags so that
/// callers (the CLI in particular) can map it to an exit code.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised by plan verification; names the first check that did not hold.
class VerificationFailed : public Error {
public:
    VerificationFailed(std::string check, std::optional<std::uint64_t> prime)
        : Error(Errc::VerificationFailed, describe(check, prime)),
          check_(std::move(check)), prime_(prime) {}

    const std::string& check() const noexcept { return check_; }
    std::optional<std::uint64_t> prime() const noexcept { return prime_; }

private:
    static std::string describe(const std::string& check, std::optional<std::uint64_t> prime) {
        return prime ? check + " at " + std::to_string(*prime) : check;
    }

    std::string check_;
    std::optional<std::uint64_t> prime_;
};

}  // namespace twistcert
