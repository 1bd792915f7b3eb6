#ifndef BIASFLIP_ERRORS_HPP
#define BIASFLIP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace biasflip {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroNorm : Error { using Error::Error; };
struct GridMismatch : Error { using Error::Error; };
struct NotDoubleWell : Error { using Error::Error; };
struct NonPositiveDuration : Error { using Error::Error; };
struct ValidityViolation : Error { using Error::Error; };
struct ShiftTooLarge : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };
struct GridTooSmall : Error { using Error::Error; };
struct Ambiguous : Error { using Error::Error; };
struct UnstableStep : Error { using Error::Error; };
struct NormLoss : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };
struct WrongScenario : Error { using Error::Error; };
struct ConfigParse : Error { using Error::Error; };
struct IoFailure : Error { using Error::Error; };

}  // namespace biasflip

#endif
