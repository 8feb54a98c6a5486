#include "dynsis/csv.hpp"

#include <charconv>
#include <limits>
#include <istream>
#include <stdexcept>

#include "dynsis/error.hpp"

namespace dynsis::csv {

std::string format(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw std::runtime_error("csv::format: conversion failed");
  return std::string(buf, ptr);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.emplace_back(line.substr(start));
      break;
    }
    out.emplace_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

double parse_double(std::string_view field) {
  field = trim(field);
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw DomainError("not a number: '" + std::string(field) + "'");
  return value;
}

long long parse_int(std::string_view field) {
  field = trim(field);
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw DomainError("not an integer: '" + std::string(field) + "'");
  return value;
}

std::vector<std::vector<std::string>> read_table(std::istream& in, std::string_view expected_header) {
  std::string line;
  if (!std::getline(in, line)) throw DomainError("empty CSV input");
  if (trim(line) != expected_header)
    throw DomainError("unexpected CSV header '" + line + "', expected '" + std::string(expected_header) + "'");
  const auto columns = split(expected_header).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto fields = split(trim(line));
    if (fields.size() != columns)
      throw DomainError("line " + std::to_string(lineno) + ": expected " + std::to_string(columns) +
                        " fields, got " + std::to_string(fields.size()));
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace dynsis::csv
