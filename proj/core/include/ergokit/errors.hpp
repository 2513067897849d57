#pragma once

#include <stdexcept>
#include <string>

namespace ergokit {

// Base class for all library errors. Catching this is enough to distinguish
// library failures from logic bugs elsewhere.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Normalizing or conditioning a measure whose selected mass is zero.
class ZeroMass : public Error {
public:
    using Error::Error;
};

// A pushforward map produced a point outside the measure's space.
class MapDomain : public Error {
public:
    using Error::Error;
};

// Conditioning region has zero mass under the measure.
class NullConditioning : public Error {
public:
    using Error::Error;
};

// Two objects that must live on the same metric space do not.
class SpaceMismatch : public Error {
public:
    using Error::Error;
};

// A density/support specification cannot be sampled (unbounded, empty, ...).
class BadSupport : public Error {
public:
    using Error::Error;
};

// A semiflow was asked to run backwards.
class NegativeTime : public Error {
public:
    using Error::Error;
};

// An argument is outside the mathematical domain of the function.
class DomainError : public Error {
public:
    using Error::Error;
};

// Numerical integrator step size too large for the requested horizon.
class StepTooLarge : public Error {
public:
    using Error::Error;
};

// Greedy cover construction received no candidate points.
class EmptyCandidates : public Error {
public:
    using Error::Error;
};

// Coarse-graining found a populated cell whose Bowen ball carries no mass.
class EmptyBall : public Error {
public:
    using Error::Error;
};

// A point that must be assigned to a cover cell is not within any cell.
class Unassigned : public Error {
public:
    using Error::Error;
};

// Invalid user-facing configuration (CLI flags, config files, manifests).
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace ergokit
