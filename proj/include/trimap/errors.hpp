#pragma once

#include <stdexcept>
#include <string>

namespace trimap {

// Argument or configuration outside the domain of an operation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class InsufficientPoints : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SizeLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Squared commutator norm fell below the representable range of its logarithm.
class NumericalUnderflow : public std::runtime_error {
public:
    NumericalUnderflow(std::size_t center, int t, const std::string& what)
        : std::runtime_error(what), center_(center), t_(t) {}
    std::size_t center() const noexcept { return center_; }
    int time() const noexcept { return t_; }

private:
    std::size_t center_;
    int t_;
};

} // namespace trimap

namespace trimap {

// Every sample of an ensemble had a zero Jacobian entry at some step.
class DegenerateEnsemble : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace trimap
