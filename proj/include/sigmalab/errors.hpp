#pragma once

#include <stdexcept>
#include <string>

namespace sigmalab {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class MalformedFormula : public Error {
public:
    using Error::Error;
};

class PartialDiagram : public Error {
public:
    using Error::Error;
};

class SignatureMismatch : public Error {
public:
    using Error::Error;
};

class ConstructionError : public Error {
public:
    using Error::Error;
};

class UnsupportedOracle : public Error {
public:
    using Error::Error;
};

class ConfigurationError : public Error {
public:
    using Error::Error;
};

// Two strong witnesses fired on the same fragment.
class WitnessInconsistency : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace sigmalab
