#pragma once

#include <stdexcept>
#include <string>

namespace fdkp {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad configuration or violated precondition. The CLI maps these to exit code 2.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class GridMismatch : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

class SupportViolation : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

// Numerical failure of an iterative stage. The CLI maps these to exit code 3.
class SolverError : public Error {
public:
    using Error::Error;
};

class NonContraction : public SolverError {
public:
    using SolverError::SolverError;
};

class MaxIterExceeded : public SolverError {
public:
    using SolverError::SolverError;
};

class NoNehariPoint : public SolverError {
public:
    using SolverError::SolverError;
};

class LineSearchStall : public SolverError {
public:
    using SolverError::SolverError;
};

class NonConvergence : public SolverError {
public:
    using SolverError::SolverError;
};

class LinearSolveStagnation : public SolverError {
public:
    using SolverError::SolverError;
};

class IoError : public Error {
public:
    using Error::Error;
};

} // namespace fdkp
