#pragma once

#include <cctype>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "vmt/random.hpp"

namespace vmt {

// Plain-text numeric format: whitespace-separated entries, one matrix row
// per line, `#` starts a comment. Complex entries are written re+imj
// (e.g. 1.5-2.25j); a bare real or a bare imaginary part (2j) also parses.

inline std::complex<double> parse_complex(const std::string& token) {
    const char* s = token.c_str();
    char* end = nullptr;
    const double first = std::strtod(s, &end);
    if (end == s) throw std::invalid_argument("bad numeric token: '" + token + "'");
    if (*end == '\0') return {first, 0.0};
    if (*end == 'j' && end[1] == '\0') return {0.0, first};
    if (*end != '+' && *end != '-')
        throw std::invalid_argument("bad numeric token: '" + token + "'");
    const char* s2 = end;
    const double second = std::strtod(s2, &end);
    if (end == s2 || *end != 'j' || end[1] != '\0')
        throw std::invalid_argument("bad numeric token: '" + token + "'");
    return {first, second};
}

inline std::string format_complex(std::complex<double> z) {
    char buf[64];
    if (z.imag() == 0.0) {
        std::snprintf(buf, sizeof buf, "%.17g", z.real());
        return buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
    return buf;
}

inline Eigen::MatrixXcd read_matrix(std::istream& is) {
    std::vector<std::vector<std::complex<double>>> rows;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::complex<double>> row;
        std::string token;
        while (ls >> token) row.push_back(parse_complex(token));
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::invalid_argument("matrix file: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("matrix file: no data");
    Eigen::MatrixXcd m(rows.size(), rows.front().size());
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < rows.front().size(); ++j) m(i, j) = rows[i][j];
    return m;
}

inline Eigen::MatrixXcd read_matrix_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("cannot open matrix file: " + path);
    return read_matrix(is);
}

inline void write_matrix(std::ostream& os, const Eigen::MatrixXcd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ' ';
            os << format_complex(m(i, j));
        }
        os << '\n';
    }
}

inline Eigen::VectorXcd parse_complex_list(const std::string& csv) {
    std::vector<std::complex<double>> vals;
    std::string token;
    std::istringstream is(csv);
    while (std::getline(is, token, ',')) {
        if (token.empty()) throw std::invalid_argument("empty entry in list: '" + csv + "'");
        vals.push_back(parse_complex(token));
    }
    if (vals.empty()) throw std::invalid_argument("empty list");
    return Eigen::Map<Eigen::VectorXcd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

inline std::vector<double> parse_real_list(const std::string& csv) {
    const Eigen::VectorXcd v = parse_complex_list(csv);
    std::vector<double> out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (v[i].imag() != 0.0) throw std::invalid_argument("expected real list: '" + csv + "'");
        out[static_cast<size_t>(i)] = v[i].real();
    }
    return out;
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(s);
    while (std::getline(is, token, sep)) parts.push_back(token);
    return parts;
}

inline int parse_dim(const std::string& s) {
    size_t idx = 0;
    const int n = std::stoi(s, &idx);
    if (idx != s.size() || n < 1) throw std::invalid_argument("bad dimension: '" + s + "'");
    return n;
}

}  // namespace detail

/// Matrix argument shorthands for the CLI:
///   diag:a,b,...      diagonal matrix, complex entries allowed
///   eye:n             identity
///   rand:n[:seed]     complex Gaussian n×n
///   randpsd:n[:seed]  positive semidefinite Gram matrix
///   randherm:n[:seed] hermitian Gaussian
/// anything else is read as a matrix file path.
inline Eigen::MatrixXcd parse_matrix_arg(const std::string& arg, uint64_t default_seed) {
    const auto colon = arg.find(':');
    if (colon != std::string::npos) {
        const std::string kind = arg.substr(0, colon);
        const std::string rest = arg.substr(colon + 1);
        if (kind == "diag") {
            const Eigen::VectorXcd d = parse_complex_list(rest);
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d.size(), d.size());
            m.diagonal() = d;
            return m;
        }
        if (kind == "eye") return Eigen::MatrixXcd::Identity(detail::parse_dim(rest),
                                                             detail::parse_dim(rest));
        if (kind == "rand" || kind == "randpsd" || kind == "randherm") {
            const auto parts = detail::split(rest, ':');
            if (parts.empty() || parts.size() > 2)
                throw std::invalid_argument("bad matrix shorthand: '" + arg + "'");
            const int n = detail::parse_dim(parts[0]);
            const uint64_t seed = parts.size() == 2 ? std::stoull(parts[1]) : default_seed;
            Rng rng(seed);
            Eigen::MatrixXcd g = rng.gaussian_cmatrix(n, n);
            if (kind == "rand") return g;
            if (kind == "randpsd") return g * g.adjoint();
            return 0.5 * (g + g.adjoint());
        }
        throw std::invalid_argument("unknown matrix shorthand: '" + arg + "'");
    }
    return read_matrix_file(arg);
}

}  // namespace vmt
