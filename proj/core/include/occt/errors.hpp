#pragma once

#include <stdexcept>
#include <string>

namespace occt {

// Error taxonomy shared across the library. Soft accuracy conditions are
// reported through result flags instead; only contract violations throw.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidRange : Error {
    using Error::Error;
};
struct UnsupportedKind : Error {
    using Error::Error;
};
struct UnstableModel : Error {
    using Error::Error;
};
struct DegenerateLevel : Error {
    using Error::Error;
};
struct DivergentTransform : Error {
    using Error::Error;
};
struct GridTooCoarse : Error {
    using Error::Error;
};
struct NoRoot : Error {
    using Error::Error;
};
struct DomainBoundary : Error {
    using Error::Error;
};
struct EmptySample : Error {
    using Error::Error;
};
struct InfiniteMoment : Error {
    using Error::Error;
};
struct DegenerateVariance : Error {
    using Error::Error;
};
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace occt
