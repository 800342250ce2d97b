#pragma once

#include <stdexcept>
#include <string>

namespace floqcert {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Collocation matrix numerically singular.
class SingularSystem : public Error {
public:
    using Error::Error;
};

class NonConverged : public Error {
public:
    using Error::Error;
};

/// Bootstrap iteration blew up; the degree is too small for the certificates.
class Diverged : public Error {
public:
    using Error::Error;
};

class EigFailure : public Error {
public:
    using Error::Error;
};

class SingularGamma : public Error {
public:
    using Error::Error;
};

class NotDiagonalizable : public Error {
public:
    using Error::Error;
};

}  // namespace floqcert
