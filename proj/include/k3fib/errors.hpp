#ifndef K3FIB_ERRORS_HPP
#define K3FIB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace k3 {

// Computational failure: bad input data, degenerate objects, contract violations.
class MathError : public std::runtime_error {
public:
    explicit MathError(const std::string& what) : std::runtime_error(what) {}
};

// Something that should be unreachable if the theory and the code agree.
class InconsistencyError : public MathError {
public:
    explicit InconsistencyError(const std::string& what)
        : MathError("internal inconsistency: " + what) {}
};

class RegistryError : public std::runtime_error {
public:
    explicit RegistryError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace k3

#endif
