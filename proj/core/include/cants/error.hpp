#pragma once

#include <stdexcept>
#include <string>

namespace cants {

/// Caller supplied a value outside an operation's domain.
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Broken internal invariant; indicates a bug rather than bad input.
class internal_error : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A colony configuration cannot produce usable genomes.
class colony_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Message received that the protocol does not allow.
class protocol_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input file missing, unreadable, or malformed.
class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace cants
