#pragma once

#include <stdexcept>
#include <string>

namespace wdrdg {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs whose dimensions (feature dimension, matrix shape, vector length)
/// do not line up.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// A value failed construction-time validation (weights off the simplex,
/// nonpositive sizes, malformed configuration, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// An operation that needs at least one element received none.
class EmptyInput : public Error {
public:
    using Error::Error;
};

/// A (domain, class) cell holds no samples.
class EmptyClassCell : public Error {
public:
    EmptyClassCell(std::string domain_id, int label)
        : Error("no samples for class " + std::to_string(label) + " in domain '" + domain_id + "'"),
          domain_id_(std::move(domain_id)),
          label_(label) {}

    const std::string& domain_id() const noexcept { return domain_id_; }
    int label() const noexcept { return label_; }

private:
    std::string domain_id_;
    int label_;
};

/// A solver stalled or produced a result that fails its own certificates.
/// Distinct from Infeasible/Unbounded, which are statuses, not errors.
class NumericalFailure : public Error {
public:
    using Error::Error;
};

/// The robust program admits no distribution pair that keeps every class
/// pair at least delta apart; the caller should lower delta.
class InfeasibleDelta : public Error {
public:
    explicit InfeasibleDelta(double delta)
        : Error("discriminability threshold delta=" + std::to_string(delta) +
                " makes the robust program infeasible"),
          delta_(delta) {}

    double delta() const noexcept { return delta_; }

private:
    double delta_;
};

/// Every candidate delta in an experiment grid was infeasible.
class AllDeltasInfeasible : public Error {
public:
    using Error::Error;
};

/// A coupling whose rows were expected to carry uniform mass 1/n does not.
class NonUniformSourceWeights : public Error {
public:
    using Error::Error;
};

/// Malformed input file. Carries the file and 1-based row for diagnostics.
class ParseError : public Error {
public:
    ParseError(const std::string& path, std::size_t row, const std::string& message)
        : Error(path + ":" + std::to_string(row) + ": " + message), path_(path), row_(row) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t row() const noexcept { return row_; }

private:
    std::string path_;
    std::size_t row_;
};

/// A sample label falls outside {1..K}.
class LabelOutOfRange : public Error {
public:
    using Error::Error;
};

}  // namespace wdrdg
