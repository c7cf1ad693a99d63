#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace vmt {

/// One named check inside a report. lhs/rhs/tol are the compared numbers;
/// pure boolean checks leave them at zero.
struct Assertion {
    std::string name;
    bool passed = false;
    double lhs = 0;
    double rhs = 0;
    double tol = 0;
};

/// Machine-readable result of one CLI command: echoed inputs, named numeric
/// outputs and a list of assertions. Serialization is key-sorted and
/// timestamp-free, so identical inputs and seed give identical bytes.
struct Report {
    std::string command;
    nlohmann::json inputs = nlohmann::json::object();
    nlohmann::json outputs = nlohmann::json::object();
    std::vector<Assertion> assertions;

    void check_close(const std::string& name, double lhs, double rhs, double tol) {
        assertions.push_back({name, std::abs(lhs - rhs) <= tol, lhs, rhs, tol});
    }
    void check_le(const std::string& name, double lhs, double rhs, double tol) {
        assertions.push_back({name, lhs <= rhs + tol, lhs, rhs, tol});
    }
    void check_ge(const std::string& name, double lhs, double rhs, double tol) {
        assertions.push_back({name, lhs >= rhs - tol, lhs, rhs, tol});
    }
    void check_flag(const std::string& name, bool ok) { assertions.push_back({name, ok, 0, 0, 0}); }

    bool all_passed() const {
        for (const auto& a : assertions)
            if (!a.passed) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["schema"] = 1;
        j["command"] = command;
        j["inputs"] = inputs;
        j["outputs"] = outputs;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& a : assertions) {
            nlohmann::json e;
            e["name"] = a.name;
            e["passed"] = a.passed;
            e["lhs"] = a.lhs;
            e["rhs"] = a.rhs;
            e["tol"] = a.tol;
            arr.push_back(e);
        }
        j["assertions"] = arr;
        return j;
    }

    std::string to_json_string() const { return to_json().dump(2) + "\n"; }

    /// Flattened projection of the outputs only: one "path,value" line each.
    std::string to_csv() const {
        std::string out = "key,value\n";
        const nlohmann::json flat = outputs.flatten();
        for (auto it = flat.begin(); it != flat.end(); ++it)
            out += it.key() + "," + it.value().dump() + "\n";
        return out;
    }

    std::string render(const std::string& format) const {
        if (format == "json") return to_json_string();
        if (format == "csv") return to_csv();
        throw std::invalid_argument("unknown report format: " + format);
    }
};

/// Writes through a temp file and renames, so readers never observe a
/// partially written report.
inline void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) throw std::invalid_argument("cannot open output file: " + tmp);
        os << content;
        if (!os.flush()) throw std::invalid_argument("failed writing output file: " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::invalid_argument("failed to move report into place: " + path);
}

}  // namespace vmt
