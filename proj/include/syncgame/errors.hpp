#pragma once

#include <stdexcept>
#include <string>

namespace syncgame {

/// Malformed or inconsistent input (files, distributions, arguments).
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A configured resource limit was hit. The computation stops without a partial result.
class ResourceCapError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal consistency check failed.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace syncgame
