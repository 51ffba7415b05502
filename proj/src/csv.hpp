// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carbonledger::csv {

struct Row {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

/// RFC 4180 style records: comma separated, optional double quotes with ""
/// escapes, LF or CRLF endings. A leading UTF-8 BOM is skipped and blank
/// lines are ignored. Throws ParseError tagged with `file_name`.
std::vector<Row> parse(std::string_view text, const std::string& file_name);

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

/// Strict decimal parse of a whole field. Returns nullopt on trailing junk,
/// empty input, or a non-finite value.
std::optional<double> to_double(std::string_view text);
std::optional<long long> to_integer(std::string_view text);

/// Shortest text that parses back to the same double.
std::string format_double(double value);

}  // namespace carbonledger::csv
