#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace headmouse {

// Base of every error the engine raises. `code()` is a stable machine-readable
// class name (also used as the service protocol's error code).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct InvalidPixelError : Error {
    explicit InvalidPixelError(const std::string& m) : Error("invalid_pixel", m) {}
};

struct DimensionMismatchError : Error {
    explicit DimensionMismatchError(const std::string& m) : Error("dimension_mismatch", m) {}
};

struct InvalidArgumentError : Error {
    explicit InvalidArgumentError(const std::string& m) : Error("invalid_argument", m) {}
};

// A phrase (app label, menu name, synonym) that is already taken by the grammar.
struct CollisionError : Error {
    CollisionError(std::string phrase, const std::string& m)
        : Error("collision", m), phrase_(std::move(phrase)) {}
    const std::string& phrase() const noexcept { return phrase_; }

private:
    std::string phrase_;
};

struct DuplicateError : Error {
    explicit DuplicateError(const std::string& m) : Error("duplicate", m) {}
};

struct NotFoundError : Error {
    explicit NotFoundError(const std::string& m) : Error("not_found", m) {}
};

// Malformed file content. `context()` names the line and/or field at fault.
struct ParseError : Error {
    ParseError(std::string context, const std::string& m)
        : Error("parse_error", context.empty() ? m : context + ": " + m), context_(std::move(context)) {}
    const std::string& context() const noexcept { return context_; }

private:
    std::string context_;
};

struct VersionError : Error {
    explicit VersionError(long long version)
        : Error("version_error", "unsupported config version " + std::to_string(version)), version_(version) {}
    long long version() const noexcept { return version_; }

private:
    long long version_;
};

// Frame stream failure; `index()` is the zero-based frame at which it occurred.
struct StreamError : Error {
    StreamError(std::size_t index, const std::string& m)
        : Error("stream_error", "frame " + std::to_string(index) + ": " + m), index_(index) {}
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("io_error", m) {}
};

}  // namespace headmouse
