#pragma once

#include <stdexcept>
#include <string>

namespace rsdlab {

// Bad user input: malformed files, out-of-range parameters, inconsistent specs.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// Structurally valid input that the engine does not support (e.g. exact pmf of
// a continuous-noise technology).
class UnsupportedError : public std::runtime_error {
public:
    explicit UnsupportedError(const std::string& what) : std::runtime_error(what) {}
};

// Enumeration exceeded the configured budget. Carries the count seen so far.
class ResourceLimitError : public std::runtime_error {
public:
    ResourceLimitError(const std::string& what, long long atoms)
        : std::runtime_error(what + " (atoms: " + std::to_string(atoms) + ")"), atoms(atoms) {}
    long long atoms;
};

} // namespace rsdlab
