#pragma once

#include <stdexcept>
#include <string>

namespace spikelab {

/// Malformed input: bad coordinates, mismatched dimensions, invalid profiles.
class InvalidInput : public std::invalid_argument {
public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// An enumeration (truthful profiles, deviation space) exceeded its cap.
class SpaceOverflow : public std::runtime_error {
public:
  explicit SpaceOverflow(const std::string& what) : std::runtime_error(what) {}
};

/// A transform precondition failed (e.g. compressing a profile that is not tight).
class PreconditionFailed : public std::logic_error {
public:
  explicit PreconditionFailed(const std::string& what) : std::logic_error(what) {}
};

} // namespace spikelab
