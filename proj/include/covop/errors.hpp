#pragma once

#include <stdexcept>
#include <string>

namespace covop {

// Base class so callers can catch everything the library throws in one place.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Disconnected : Error {
    Disconnected() : Error("graph is not connected") {}
    explicit Disconnected(const std::string& what) : Error(what) {}
};

struct IsolatedNode : Error {
    explicit IsolatedNode(int node)
        : Error("node " + std::to_string(node) + " has degree 0") {}
};

struct NoConvergence : Error {
    long iterations;
    explicit NoConvergence(long iters)
        : Error("eigensolver did not converge after " + std::to_string(iters) +
                " iterations"),
          iterations(iters) {}
};

struct CompleteGraph : Error {
    CompleteGraph() : Error("graph is complete: no edge can be added") {}
};

struct MultiplicityAboveOne : Error {
    MultiplicityAboveOne()
        : Error("second-smallest eigenvalue has multiplicity above one") {}
};

struct DensityTooLow : Error {
    explicit DensityTooLow(const std::string& what) : Error(what) {}
};

struct Unreachable : Error {
    Unreachable(int from, int to)
        : Error("state " + std::to_string(to) + " is unreachable from " +
                std::to_string(from)) {}
};

struct MalformedMap : Error {
    explicit MalformedMap(const std::string& what) : Error(what) {}
};

struct MalformedTrack : Error {
    explicit MalformedTrack(const std::string& what) : Error(what) {}
};

struct OptionStuck : Error {
    OptionStuck(int option, int state)
        : Error("option " + std::to_string(option) +
                " has no policy entry at state " + std::to_string(state)) {}
};

struct NonPositiveConnectivity : Error {
    NonPositiveConnectivity()
        : Error("algebraic connectivity must be positive") {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(what) {}
};

}  // namespace covop
