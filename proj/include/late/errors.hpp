#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace late {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class InvalidDistribution : public Error {
public:
    using Error::Error;
};

class InvalidTheta : public Error {
public:
    using Error::Error;
};

/// Complier share is zero; the complier effect is undefined.
class NoCompliers : public Error {
public:
    NoCompliers() : Error("complier share b is zero; mu1 undefined") {}
};

/// Defier share is zero; the defier effect is undefined.
class NoDefiers : public Error {
public:
    NoDefiers() : Error("defier share c is zero; mu2 undefined") {}
};

/// b == c (population) or k1_hat == k2_hat (sample): the IV estimand is undefined.
class WeakIV : public Error {
public:
    WeakIV() : Error("instrument arms have equal take-up; IV ratio undefined") {}
};

/// All observations share one instrument value.
class DegenerateInstrument : public Error {
public:
    DegenerateInstrument() : Error("instrument is single-valued in the data") {}
};

/// k1 = k2 = 0: nobody ever takes the treatment.
class NoTakers : public Error {
public:
    NoTakers() : Error("k1 + k2 = 0; magnitude bound undefined") {}
};

/// The sign-identification result needs cov(D,Z) > 0.
class AssumptionNotApplicable : public Error {
public:
    using Error::Error;
};

/// Caller must relabel Z so that k1 > k2.
class OrientationError : public Error {
public:
    OrientationError() : Error("k1 <= k2; relabel the instrument so that k1 > k2") {}
};

class InconsistentInputs : public Error {
public:
    using Error::Error;
};

/// Outcome values are not all in {0,1}.
class NotBinary : public Error {
public:
    using Error::Error;
};

/// A named forge precondition failed. `condition` holds the inequality text.
class PreconditionViolated : public Error {
public:
    PreconditionViolated(std::string condition, const std::string& detail)
        : Error("precondition failed: " + condition + (detail.empty() ? "" : " (" + detail + ")")),
          condition_(std::move(condition)) {}
    const std::string& condition() const { return condition_; }

private:
    std::string condition_;
};

/// A constructed signed mixture came out with a materially negative mass.
class ConstructionDegenerate : public Error {
public:
    using Error::Error;
};

class BootstrapFailed : public Error {
public:
    using Error::Error;
};

/// Twin-experiment refuses to run on a non-equivalent pair.
class RefuseToRun : public Error {
public:
    using Error::Error;
};

class UnknownProcedure : public Error {
public:
    using Error::Error;
};

/// Document or CSV parse failure; carries the offending line numbers when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::vector<std::size_t> lines = {})
        : Error(what), lines_(std::move(lines)) {}
    const std::vector<std::size_t>& lines() const { return lines_; }

private:
    std::vector<std::size_t> lines_;
};

}  // namespace late
