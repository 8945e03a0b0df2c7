#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bdp {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class NonPositiveRate : public Error {
public:
    NonPositiveRate(std::int64_t k, char which)
        : Error("non-positive rate " + std::string(1, which) + "(" + std::to_string(k) + ")"),
          k(k), which(which) {}
    std::int64_t k;
    char which;  // 'a' or 'b'
};

class MalformedDescriptor : public Error {
public:
    explicit MalformedDescriptor(const std::string& what) : Error("malformed descriptor: " + what) {}
};

class Overflow : public Error {
public:
    explicit Overflow(std::int64_t k)
        : Error("value not representable at index " + std::to_string(k)), k(k) {}
    std::int64_t k;
};

/// A series could neither be certified convergent nor divergent within the budget.
class Inconclusive : public Error {
public:
    explicit Inconclusive(const std::string& quantity)
        : Error("inconclusive: " + quantity), quantity(quantity) {}
    std::string quantity;
};

class NoConvergence : public Error {
public:
    explicit NoConvergence(std::int64_t n_max)
        : Error("solver did not converge by N=" + std::to_string(n_max)), n_max(n_max) {}
    std::int64_t n_max;
};

class CrossCheckFailed : public Error {
public:
    CrossCheckFailed(std::int64_t i, double gap)
        : Error("cross-check failed at state " + std::to_string(i) +
                ", gap " + std::to_string(gap)),
          i(i), gap(gap) {}
    std::int64_t i;
    double gap;
};

class InadmissibleTriple : public Error {
public:
    explicit InadmissibleTriple(const std::string& why) : Error("inadmissible triple: " + why) {}
};

class DivergentSeries : public Error {
public:
    explicit DivergentSeries(const std::string& which) : Error("divergent series: " + which) {}
};

class TailUnbounded : public Error {
public:
    explicit TailUnbounded(const std::string& which) : Error("tail not certifiable: " + which) {}
};

class CInfUnavailable : public Error {
public:
    CInfUnavailable() : Error("scale limit estimate unavailable or infinite") {}
};

class NotDoob : public Error {
public:
    explicit NotDoob(const std::string& why) : Error("not a Doob triple: " + why) {}
};

class MaxEvents : public Error {
public:
    explicit MaxEvents(std::int64_t limit)
        : Error("event budget " + std::to_string(limit) + " exceeded"), limit(limit) {}
    std::int64_t limit;
};

class MalformedPath : public Error {
public:
    explicit MalformedPath(const std::string& why) : Error("malformed path: " + why) {}
};

class ZeroDenominator : public Error {
public:
    explicit ZeroDenominator(const std::string& where) : Error("zero denominator in " + where) {}
};

class HorizonExceeded : public Error {
public:
    HorizonExceeded(double t, double horizon)
        : Error("time " + std::to_string(t) + " beyond ensemble horizon " + std::to_string(horizon)) {}
};

class InversionUnstable : public Error {
public:
    explicit InversionUnstable(const std::string& why) : Error("Laplace inversion unstable: " + why) {}
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& reason)
        : Error("parse error at line " + std::to_string(line) + ": " + reason), line(line) {}
    int line;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string& key, const std::string& reason)
        : Error("invalid config key '" + key + "': " + reason), key(key) {}
    std::string key;
};

}  // namespace bdp
