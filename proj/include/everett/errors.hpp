#pragma once

#include <stdexcept>
#include <string>

namespace everett {

/// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid input: bad labels, mismatched alphabets, malformed classes,
/// violated preconditions. Maps to a usage error at the CLI boundary.
class InputError : public Error {
public:
    explicit InputError(const std::string& what) : Error(what) {}
};

/// A construction that is mathematically impossible rather than misused,
/// e.g. requesting a unitary completion that cannot exist. Carries the
/// obstruction value so callers can report it.
class ObstructionError : public Error {
public:
    ObstructionError(const std::string& what, double obstruction)
        : Error(what), obstruction_(obstruction) {}

    double obstruction() const { return obstruction_; }

private:
    double obstruction_;
};

}  // namespace everett
