#pragma once

#include <stdexcept>
#include <string>

namespace collprob {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// geometry
struct NonOrthonormalRotation : Error { using Error::Error; };
struct NonPositiveAxis : Error { using Error::Error; };
struct InvalidEllipsoid : Error { using Error::Error; };
struct CoincidentCenters : Error { using Error::Error; };
struct ComplexMinimalEigenvalue : Error { using Error::Error; };
struct SingularShift : Error { using Error::Error; };

// quadform
struct NonSymmetricA : Error { using Error::Error; };
struct SingularSigma : Error { using Error::Error; };
struct NotConverged : Error { using Error::Error; };

// oracle
struct OracleDegenerate : Error { using Error::Error; };

// belief
struct NonFiniteDynamics : Error { using Error::Error; };
struct SingularInnovationCovariance : Error { using Error::Error; };

// scene/scenario files
struct ParseError : Error { using Error::Error; };

} // namespace collprob
