#pragma once

#include <stdexcept>
#include <string>

namespace solarcast {

// Error categories, numbered to match the CLI exit codes.
enum class ErrorKind { Usage = 2, Data = 3, Numeric = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

// Bad flags, bad ratios, bad layer stacks.
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorKind::Usage, w) {}
};

// Anything wrong with input data or files.
struct DataError : Error {
    explicit DataError(const std::string& w) : Error(ErrorKind::Data, w) {}
};

// A required CSV column is absent or the schema file is malformed.
struct SchemaError : DataError {
    explicit SchemaError(const std::string& w) : DataError(w) {}
};

// A single CSV row failed to parse or violates a field invariant.
struct RowError : DataError {
    explicit RowError(const std::string& w) : DataError(w) {}
};

struct EmptyInputError : DataError {
    explicit EmptyInputError(const std::string& w) : DataError(w) {}
};

// Mismatched vector/tensor dimensions.
struct ShapeError : DataError {
    explicit ShapeError(const std::string& w) : DataError(w) {}
};

// A baseline query reaches before the start of the recorded history.
struct InsufficientHistoryError : DataError {
    explicit InsufficientHistoryError(const std::string& w) : DataError(w) {}
};

// Saved-model problems: bad version, truncated payload, wrong length.
struct ArtifactError : DataError {
    explicit ArtifactError(const std::string& w) : DataError(w) {}
};

// NaN/inf encountered where finite numbers are required.
struct NumericError : Error {
    explicit NumericError(const std::string& w) : Error(ErrorKind::Numeric, w) {}
};

}  // namespace solarcast
