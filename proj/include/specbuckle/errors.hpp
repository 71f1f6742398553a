#pragma once

#include <stdexcept>
#include <string>

namespace specbuckle {

// Argument outside the mathematical domain of a function (x < 0 for J_nu, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// An iterative solver failed to bracket or converge. The message carries the
// last bracket / iterate so the failure can be reproduced.
class convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested enumeration would exceed a configured size cap.
class resource_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A spectrum was queried past the ceiling it was enumerated to, or does not
// hold enough eigenvalues for the requested check.
class query_error : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

}  // namespace specbuckle
