#pragma once

#include <stdexcept>
#include <string>

namespace motility {

class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// tracking
class InvalidWindow : public Error { public: using Error::Error; };
class TrackTooShort : public Error { public: using Error::Error; };
class DegenerateTangent : public Error { public: using Error::Error; };
class FrameMissing : public Error { public: using Error::Error; };
class EmptyGrid : public Error { public: using Error::Error; };
class InvalidTrack : public Error { public: using Error::Error; };

// correlation
class InsufficientOverlap : public Error { public: using Error::Error; };
class LagTooLarge : public Error { public: using Error::Error; };

// estimation
class FitError : public Error { public: using Error::Error; };
class TooFewPoints : public FitError { public: using FitError::FitError; };
class NotConcave : public FitError { public: using FitError::FitError; };

// simulator / configuration
class InvalidConfig : public Error { public: using Error::Error; };
class NumericalBlowup : public Error { public: using Error::Error; };

/// Malformed configuration text; carries the 1-based line number.
class ConfigParseError : public InvalidConfig
{
public:
    ConfigParseError(int line, std::string const& message)
        : InvalidConfig("line " + std::to_string(line) + ": " + message), _line{line}
    {
    }

    int line() const { return _line; }

private:
    int _line;
};

/// Malformed CSV input; carries the 1-based line number.
class CsvError : public Error
{
public:
    CsvError(int line, std::string const& message)
        : Error("csv line " + std::to_string(line) + ": " + message)
    {
    }
};

} // namespace motility
