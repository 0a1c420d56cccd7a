#pragma once

// Failure modes that are answers, not bugs: a pair can fail to be
// equivalent over some Z_p, fail to be equivalent over Q, or exhaust the
// retry budget for working precision (which indicates a defect somewhere,
// since every precision-dependent step is retried with doubled digits).

#include <stdexcept>
#include <string>

#include "rational.hpp"

namespace geneq {

struct NotLocallyEquivalentError : std::runtime_error {
    explicit NotLocallyEquivalentError(Prime p)
        : std::runtime_error("forms are not equivalent over Z_" + std::to_string(p)),
          prime(p) {}
    Prime prime;
};

struct NotRationallyEquivalentError : std::runtime_error {
    NotRationallyEquivalentError(bool certified_, const std::string& detail)
        : std::runtime_error(certified_
              ? "forms are not rationally equivalent (" + detail + ")"
              : "no rational equivalence found (" + detail + ")"),
          certified(certified_) {}
    bool certified;  // true: nonexistence proven; false: search inconclusive
};

struct PrecisionExhaustedError : std::runtime_error {
    explicit PrecisionExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace geneq
