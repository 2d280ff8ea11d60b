#pragma once

#include <stdexcept>
#include <string>

namespace lyaplab {

// Input/domain errors. The CLI maps these to exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SingularMatrix : InputError { using InputError::InputError; };
struct DimMismatch : InputError { using InputError::InputError; };
struct BadOrder : InputError { using InputError::InputError; };
struct BadTheta : InputError { using InputError::InputError; };
struct IndexMismatch : InputError { using InputError::InputError; };
struct DegenerateGap : InputError { using InputError::InputError; };
struct BadEccentricity : InputError { using InputError::InputError; };
struct BadTau : InputError { using InputError::InputError; };
struct BadRho : InputError { using InputError::InputError; };
struct BadGrid : InputError { using InputError::InputError; };
struct BadWindow : InputError { using InputError::InputError; };
struct NotIrreducible : InputError { using InputError::InputError; };
struct NotAperiodic : InputError { using InputError::InputError; };
struct ParseError : InputError { using InputError::InputError; };

// Numerical failures (solver breakdown, non-finite results). Exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lyaplab
