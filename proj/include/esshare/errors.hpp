#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace esshare {

/// One failed invariant, addressed by field path (e.g. "rus[2].alpha").
struct Violation {
    std::string path;
    std::string message;
};

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed scenario document (syntax or wrong value types).
struct ParseError : Error {
    using Error::Error;
};

/// Scenario data violates a model invariant; carries the full violation list.
struct ValidationError : Error {
    explicit ValidationError(std::vector<Violation> v)
        : Error(format(v)), violations(std::move(v)) {}

    std::vector<Violation> violations;

  private:
    static std::string format(const std::vector<Violation>& v) {
        std::string msg = "scenario validation failed:";
        for (const auto& item : v) {
            msg += "\n  " + item.path + ": " + item.message;
        }
        return msg;
    }
};

/// Supply and demand curves never cross (highest bid below lowest reservation).
struct NoIntersectionError : Error {
    using Error::Error;
};

/// The participant cut left fewer than one RU or one SFC in the auction.
struct InsufficientParticipantsError : Error {
    using Error::Error;
};

/// Sweep and closed-form equilibrium disagree in the interior regime.
struct CrossCheckError : Error {
    using Error::Error;
};

}  // namespace esshare
