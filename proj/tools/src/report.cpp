#include "tzitzeica_cli/report.hpp"

#include <cmath>
#include <cstdio>

namespace tzitzeica::cli {

std::string format_double(double v) {
    if (!std::isfinite(v)) return "null";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

// Error messages may quote raw input lines; invalid UTF-8 becomes U+FFFD.
std::string dump_scalar(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

void emit(const Json& j, std::string& out, int depth) {
    const std::string pad(2 * (depth + 1), ' ');
    const std::string close(2 * depth, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out += ",\n";
            first = false;
            out += pad + dump_scalar(Json(key)) + ": ";
            emit(value, out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            emit(j[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_double(j.get<double>());
        return;
    default:
        out += dump_scalar(j);
        return;
    }
}

void flatten(const Json& j, const std::string& path, std::string& out) {
    if (j.is_object() && !j.empty()) {
        for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, out);
    } else if (j.is_array() && !j.empty()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
    } else {
        std::string value;
        if (j.is_number_float()) value = format_double(j.get<double>());
        else if (j.is_string()) value = j.get<std::string>();
        else value = dump_scalar(j);
        out += path + " = " + value + "\n";
    }
}

} // namespace

std::string dump_json(const Json& j) {
    std::string out;
    emit(j, out, 0);
    out += "\n";
    return out;
}

std::string dump_text(const Json& j) {
    std::string out;
    flatten(j, "", out);
    return out;
}

} // namespace tzitzeica::cli
