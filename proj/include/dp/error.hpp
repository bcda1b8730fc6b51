#pragma once

#include <stdexcept>
#include <string>

namespace dp {

// Math-level contract violations. Each maps to one named failure mode of the
// library; CLI translates them to exit codes.
struct DpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NotAMonomial : DpError { using DpError::DpError; };
struct ZeroDivisor : DpError { using DpError::DpError; };
struct ZeroParameter : DpError { using DpError::DpError; };
struct TruncMismatch : DpError { using DpError::DpError; };
struct NonInvertibleConstantTerm : DpError { using DpError::DpError; };
struct ParityViolation : DpError { using DpError::DpError; };
struct ClosedFormMismatch : DpError { using DpError::DpError; };
struct VanishingSn : DpError { using DpError::DpError; };
struct DegenerateLeadingCoefficient : DpError { using DpError::DpError; };
struct CutoffMismatch : DpError { using DpError::DpError; };
struct DuplicateIndex : DpError { using DpError::DpError; };
struct ZeroMode : DpError { using DpError::DpError; };
struct BlowUpDetected : DpError { using DpError::DpError; };
struct CubeRootDomain : DpError { using DpError::DpError; };
struct CutoffArtifact : DpError { using DpError::DpError; };
struct ConfigError : DpError { using DpError::DpError; };

} // namespace dp
