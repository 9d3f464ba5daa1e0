#pragma once
// Error taxonomy shared by all modules. Each failure mode named by an
// operation contract gets its own type so callers can catch precisely.

#include <stdexcept>
#include <string>

namespace hypoforge {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed or missing input supplied by the caller.
struct InputError : Error {
    using Error::Error;
};

// Agent output that does not match its line protocol.
struct ParseError : Error {
    using Error::Error;
};

// A parsed value outside its declared range.
struct RangeError : Error {
    using Error::Error;
};

// Internally inconsistent agent output (e.g. stated total != sum).
struct ConsistencyError : Error {
    using Error::Error;
};

// A structurally valid message that violates the protocol's rules
// (empty action list, unparseable planner reply, malformed provider JSON).
struct ProtocolError : Error {
    using Error::Error;
};

// A prompt context missing a field its role requires.
struct ContextError : Error {
    using Error::Error;
};

// Trace append out of sequence.
struct SequencingError : Error {
    using Error::Error;
};

// Operation against a closed run or otherwise wrong lifecycle state.
struct StateError : Error {
    using Error::Error;
};

// Network-level failure after retries were exhausted.
struct TransportError : Error {
    using Error::Error;
};

// Scripted backend has no fixture for the requested digest.
struct FixtureMissError : Error {
    using Error::Error;
};

// Node selection produced an empty set after filtering.
struct SelectionError : Error {
    using Error::Error;
};

// Graph or corpus file rejected at load time.
struct LoadError : Error {
    using Error::Error;
};

// Comparison graph not connected; abilities not identifiable.
struct IdentifiabilityError : Error {
    using Error::Error;
};

// Numeric domain violation (zero vector, mismatched dimensions).
struct DomainError : Error {
    using Error::Error;
};

// Model fit failed (non-finite Hessian, impossible data).
struct FitError : Error {
    using Error::Error;
};

}  // namespace hypoforge
