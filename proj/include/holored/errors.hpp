#pragma once

#include <stdexcept>
#include <string>

namespace holored {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// kinematics
class CollinearConfiguration : public Error { public: using Error::Error; };
class CollisionalPair : public Error { public: using Error::Error; };
class DomainError : public Error { public: using Error::Error; };
class NoSuchRotation : public Error { public: using Error::Error; };

// connection
class QuadratureFailure : public Error { public: using Error::Error; };
class StepTooLarge : public Error { public: using Error::Error; };

// potentials
class PotentialDomainError : public Error { public: using Error::Error; };

// dynamics
class ConvergenceFailure : public Error { public: using Error::Error; };
class NonPlanarState : public Error { public: using Error::Error; };

/// Integration left the admissible configuration space. The typed subclass
/// `DomainExit<State>` (dynamics.hpp) carries the partial trajectory.
class DomainExitError : public Error { public: using Error::Error; };

// cli
class ConfigError : public Error { public: using Error::Error; };
class MismatchedGrids : public Error { public: using Error::Error; };

}  // namespace holored
