#ifndef CRIBMAC_ERRORS_HPP
#define CRIBMAC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cribmac {

// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// p(x) > 0 where the reference distribution q(x) = 0.
struct AbsoluteContinuityViolation : Error {
    explicit AbsoluteContinuityViolation(const std::string& msg) : Error(msg) {}
};

// Unknown or overlapping axis names in a joint-table query.
struct AxisError : Error {
    explicit AxisError(const std::string& msg) : Error(msg) {}
};

// Sequence length does not match the declared block length.
struct LengthMismatch : Error {
    explicit LengthMismatch(const std::string& msg) : Error(msg) {}
};

// Alphabet sizes of channel / law / target disagree.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// Input-law variant not admissible for the requested cribbing scenario.
struct LawVariantError : Error {
    explicit LawVariantError(const std::string& msg) : Error(msg) {}
};

// Two laws that were required to induce the same output law do not.
struct TargetMismatch : Error {
    explicit TargetMismatch(const std::string& msg) : Error(msg) {}
};

// Exact-enumeration state space exceeds the configured guard.
struct GuardExceeded : Error {
    explicit GuardExceeded(const std::string& msg) : Error(msg) {}
};

// Target-Q search found no admissible input law.
struct NoFeasibleLaw : Error {
    explicit NoFeasibleLaw(const std::string& msg) : Error(msg) {}
};

// Law violates the strict block-Markov feasibility constraint.
struct InfeasibleLaw : Error {
    explicit InfeasibleLaw(const std::string& msg) : Error(msg) {}
};

// Strategy decomposition requested on a table with a zero X1-marginal.
struct ZeroMarginal : Error {
    explicit ZeroMarginal(const std::string& msg) : Error(msg) {}
};

}  // namespace cribmac

#endif  // CRIBMAC_ERRORS_HPP
