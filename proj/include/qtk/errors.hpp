#pragma once

#include <stdexcept>
#include <string>

namespace qtk {

/// Base of every error raised by the toolkit. The CLI maps these to exit code 2.
class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// A size bound (qubits, configurations, matrix dimension) was exceeded.
class CapacityError : public Error {
   public:
    using Error::Error;
};

/// Operand shapes do not agree (matrix vs. target count, state vs. circuit).
class DimensionError : public Error {
   public:
    using Error::Error;
};

/// A qubit, cell or basis index is out of range, or indices are duplicated.
class IndexError : public Error {
   public:
    using Error::Error;
};

/// The state violates a precondition such as normalization.
class StateError : public Error {
   public:
    using Error::Error;
};

/// Bad scalar argument (even run count, unknown gate name, missing angle...).
class ParameterError : public Error {
   public:
    using Error::Error;
};

/// An oracle is malformed, unbound, or queried with the wrong input length.
class OracleError : public Error {
   public:
    using Error::Error;
};

/// A matrix expected to be unitary is not.
class NotUnitaryError : public Error {
   public:
    using Error::Error;
};

/// A QTM definition is inconsistent, or its step operator is not unitary.
class MachineError : public Error {
   public:
    using Error::Error;
};

/// Violated algorithm precondition (e.g. gcd(a, n) != 1 for order finding).
class PreconditionError : public Error {
   public:
    using Error::Error;
};

/// Text-format error positioned at a 1-based line number.
class ParseError : public Error {
   public:
    ParseError(int line, const std::string &message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line), detail_(message) {
    }

    int line() const {
        return line_;
    }
    const std::string &detail() const {
        return detail_;
    }

   private:
    int line_;
    std::string detail_;
};

}  // namespace qtk
