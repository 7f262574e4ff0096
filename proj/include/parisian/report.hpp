#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace parisian {

// Empty fields are written as an empty CSV cell and as JSON null; non-finite
// reals are written the same way.
using FieldValue = std::variant<std::monostate, double, std::int64_t, std::uint64_t, bool, std::string>;

// One flat output record with ordered columns.
struct Record {
    std::vector<std::pair<std::string, FieldValue>> fields;

    // Replaces the value of an existing column or appends a new one.
    Record& set(const std::string& key, FieldValue value);
    const FieldValue* find(const std::string& key) const;
    std::vector<std::string> columns() const;
};

// Reals with 17 significant digits and a '.' separator, independent of locale.
std::string format_real(double x);
std::string format_field(const FieldValue& v);

// RFC 4180 quoting: fields containing a comma, quote, CR or LF are quoted and
// embedded quotes doubled.
std::string csv_quote(const std::string& field);

// Header row plus one row per record, lines ending in "\n". Every record
// must have exactly the given columns in order.
std::string emit_csv(std::span<const std::string> columns, std::span<const Record> records);
// Array of flat objects with the same keys; "[]" for no records.
std::string emit_json(std::span<const std::string> columns, std::span<const Record> records);

// Writes bytes to path, or to standard output when path is empty or "-".
// Failures raise std::runtime_error naming the path.
void write_output(const std::string& path, const std::string& bytes);

}  // namespace parisian
