#pragma once

#include <stdexcept>
#include <string>

namespace gabor {

// Invalid construction input (bad knot list, non-finite bound, ...).
// The message names the offending field.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numeric argument outside a routine's documented domain
// (a <= 0, grid_step too coarse, b outside the synthesis range, ...).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// b <= 2/(N+a): the lattice is too coarse in frequency for a three-cell
// dual; the translation matrix acquires a zero row on part of the period.
class parameter_out_of_range : public parameter_error {
public:
    parameter_out_of_range(const std::string& what, double b, double limit)
        : parameter_error(what), b(b), limit(limit) {}

    double b;
    double limit;  // 2/(N+a) for the window and shift that were passed
};

// The pointwise 3x3 system is numerically singular somewhere on the period.
class singular_matrix_error : public std::runtime_error {
public:
    singular_matrix_error(const std::string& what, double x, double abs_det)
        : std::runtime_error(what), x(x), abs_det(abs_det) {}

    double x;        // argmin of |det| over the scanned period
    double abs_det;  // |det| at that point
};

// Frame-bound estimation was asked for a pair that fails the duality check.
class duality_not_verified : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A region classification produced contradictory verdicts: a sufficient rule
// certified a frame where the obstruction database records a non-frame.
// One of the two inputs is wrong, so the result must not be reported.
class atlas_integrity_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace gabor
