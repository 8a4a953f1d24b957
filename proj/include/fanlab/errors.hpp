#pragma once

#include <stdexcept>
#include <string>

namespace fanlab {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
public:
    using Error::Error;
};

// Malformed or out-of-domain input (non-binary sequence, bad text form).
class InvalidInput : public Error {
public:
    using Error::Error;
};

// A search or simulation ran out of its budget. Never a negative answer.
class BudgetExhausted : public Error {
public:
    using Error::Error;
};

// Two comparable graph entries disagree.
class CorruptGraph : public Error {
public:
    using Error::Error;
};

// A supplied witness (perfection, lower bound, level cover) does not check out.
class WitnessViolation : public Error {
public:
    using Error::Error;
};

// The frame law failed while extending a path.
class FrameLawViolation : public Error {
public:
    using Error::Error;
};

} // namespace fanlab
