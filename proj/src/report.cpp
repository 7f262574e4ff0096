#include "parisian/report.hpp"

#include "json.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace parisian {

namespace {

void check_schema(std::span<const std::string> columns, const Record& r) {
    if (r.fields.size() != columns.size()) {
        throw std::invalid_argument("record has " + std::to_string(r.fields.size()) + " fields, schema has " +
                                    std::to_string(columns.size()));
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (r.fields[i].first != columns[i]) {
            throw std::invalid_argument("record field '" + r.fields[i].first + "' does not match column '" +
                                        columns[i] + "'");
        }
    }
}

}  // namespace

Record& Record::set(const std::string& key, FieldValue value) {
    for (auto& [k, v] : fields) {
        if (k == key) {
            v = std::move(value);
            return *this;
        }
    }
    fields.emplace_back(key, std::move(value));
    return *this;
}

const FieldValue* Record::find(const std::string& key) const {
    for (const auto& [k, v] : fields) {
        if (k == key) {
            return &v;
        }
    }
    return nullptr;
}

std::vector<std::string> Record::columns() const {
    std::vector<std::string> out;
    out.reserve(fields.size());
    for (const auto& f : fields) {
        out.push_back(f.first);
    }
    return out;
}

std::string format_real(double x) {
    if (!std::isfinite(x)) {
        return "";
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    // Guard against a locale with a ',' radix.
    for (char* c = buf; *c != '\0'; ++c) {
        if (*c == ',') {
            *c = '.';
        }
    }
    return buf;
}

std::string format_field(const FieldValue& v) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(double x) const { return format_real(x); }
        std::string operator()(std::int64_t x) const { return std::to_string(x); }
        std::string operator()(std::uint64_t x) const { return std::to_string(x); }
        std::string operator()(bool x) const { return x ? "true" : "false"; }
        std::string operator()(const std::string& x) const { return x; }
    };
    return std::visit(Visitor{}, v);
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) {
        return field;
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    out += '"';
    return out;
}

std::string emit_csv(std::span<const std::string> columns, std::span<const Record> records) {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out += (i ? "," : "") + csv_quote(columns[i]);
    }
    out += '\n';
    for (const Record& r : records) {
        check_schema(columns, r);
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            out += (i ? "," : "") + csv_quote(format_field(r.fields[i].second));
        }
        out += '\n';
    }
    return out;
}

std::string emit_json(std::span<const std::string> columns, std::span<const Record> records) {
    // Reals go through the same 17-digit text as the CSV so both formats carry
    // identical values.
    std::string out = "[";
    for (std::size_t n = 0; n < records.size(); ++n) {
        const Record& r = records[n];
        check_schema(columns, r);
        out += n ? ",\n  {" : "\n  {";
        for (std::size_t i = 0; i < r.fields.size(); ++i) {
            const auto& [key, value] = r.fields[i];
            out += (i ? ", " : "") + nlohmann::json(key).dump() + ": ";
            if (const double* x = std::get_if<double>(&value)) {
                out += std::isfinite(*x) ? format_real(*x) : "null";
            } else if (std::holds_alternative<std::monostate>(value)) {
                out += "null";
            } else if (const bool* b = std::get_if<bool>(&value)) {
                out += *b ? "true" : "false";
            } else if (const std::string* s = std::get_if<std::string>(&value)) {
                out += nlohmann::json(*s).dump();
            } else {
                out += format_field(value);
            }
        }
        out += "}";
    }
    out += records.empty() ? "]\n" : "\n]\n";
    return out;
}

void write_output(const std::string& path, const std::string& bytes) {
    if (path.empty() || path == "-") {
        std::cout << bytes;
        std::cout.flush();
        if (!std::cout) {
            throw std::runtime_error("cannot write to standard output");
        }
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) {
        throw std::runtime_error("cannot open '" + path + "' for writing: " + std::strerror(errno));
    }
    f << bytes;
    f.close();
    if (!f) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
}

}  // namespace parisian
