#pragma once

#include <stdexcept>
#include <string>

namespace credal_cert {

// Malformed or out-of-domain caller input (dimension mismatch, non-finite
// entries, invalid probability levels, parse failures).
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A well-formed request the numerics cannot honor: singular solves,
// degenerate bandwidths, formula singularities.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace credal_cert
