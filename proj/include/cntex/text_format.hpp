#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cntex {

/// 17 significant digits, shortest of fixed/scientific; round-trips exactly.
std::string format_double(double v);

std::optional<double> parse_double(std::string_view token) noexcept;
std::optional<std::int64_t> parse_int(std::string_view token) noexcept;

/// Splits on runs of spaces and tabs; a trailing '\r' is stripped first.
std::vector<std::string_view> split_whitespace(std::string_view line);

/// Splits text into lines on '\n'. A final empty line after a trailing
/// newline is dropped.
std::vector<std::string_view> split_lines(std::string_view text);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view contents);

}  // namespace cntex
