// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace carbonledger {

/// Base of every error the library raises. `code()` is a stable machine string
/// shared by the CLI exit-code mapping and the HTTP error bodies.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& message) : Error("not_found", message) {}
};

/// Malformed input file. `line` is 1-based; 0 when the problem is not tied to a row.
class ParseError : public Error {
public:
    ParseError(std::string file, std::size_t line, const std::string& message)
        : Error("parse_error", format(file, line, message)), file_(std::move(file)), line_(line) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }

private:
    static std::string format(const std::string& file, std::size_t line, const std::string& message)
    {
        if (line == 0) {
            return file + ": " + message;
        }
        return file + ":" + std::to_string(line) + ": " + message;
    }

    std::string file_;
    std::size_t line_;
};

/// A key that does not resolve against the catalog.
class ReferenceError : public Error {
public:
    ReferenceError(std::string kind, std::string key)
        : Error("reference_error", "unknown " + kind + " '" + key + "'"), kind_(std::move(kind)), key_(std::move(key)) {}

    const std::string& kind() const noexcept { return kind_; }
    const std::string& key() const noexcept { return key_; }

private:
    std::string kind_;
    std::string key_;
};

class DuplicateError : public Error {
public:
    DuplicateError(std::string kind, std::string key, const std::string& where)
        : Error("duplicate_error", where + ": duplicate " + kind + " '" + key + "'"), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message) : Error("validation_error", message) {}
};

/// Hourly curve absent, or a required hourly field is empty, for `region_id`.
class MissingHourlyDataError : public Error {
public:
    MissingHourlyDataError(std::string region_id, const std::string& what)
        : Error("missing_hourly_data", "region '" + region_id + "': " + what), region_id_(std::move(region_id)) {}

    const std::string& region_id() const noexcept { return region_id_; }

private:
    std::string region_id_;
};

class WriteError : public Error {
public:
    explicit WriteError(const std::string& message) : Error("write_error", message) {}
};

}  // namespace carbonledger
