#include "sshstat/cli/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "sshstat/errors.hpp"
#include "sshstat/version.hpp"

namespace sshstat::cli {

double round_sig(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::strtod(buf, nullptr);
}

json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_sig(v);
}

std::string fmt_num(double v) {
    if (!std::isfinite(v)) return "";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_text(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        std::cout.flush();
        return;
    }
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write '" + tmp + "'");
        out << content;
        if (!out) throw ValidationError("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw ValidationError("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

json report_envelope(const std::string& command, json config) {
    json j;
    j["tool"] = "sshstat";
    j["version"] = kVersion;
    j["command"] = command;
    j["config"] = std::move(config);
    return j;
}

} // namespace sshstat::cli
