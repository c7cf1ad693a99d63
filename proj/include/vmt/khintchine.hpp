#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vmt/random.hpp"

namespace vmt {

/// Finite coefficient sequence of a Rademacher sign sum Σ a_n s_n.
struct SignSum {
    Eigen::VectorXcd coeffs;

    explicit SignSum(Eigen::VectorXcd a) : coeffs(std::move(a)) {
        if (coeffs.size() < 1) throw std::invalid_argument("SignSum: empty sequence");
    }
    static SignSum real(const Eigen::VectorXd& a) { return SignSum(a.cast<std::complex<double>>()); }

    int n() const { return static_cast<int>(coeffs.size()); }
    double l2() const { return coeffs.norm(); }
    bool is_real() const { return coeffs.imag().cwiseAbs().maxCoeff() == 0.0; }
};

/// k-th Rademacher function r_k(t) = r_1(2^{k-1} t), r_1 = +1 on [0,1/2),
/// -1 on [1/2,1), extended 1-periodically. k is capped at 62 to stay within
/// exact dyadic double arithmetic.
inline int rademacher(int k, double t) {
    if (k < 1 || k > 62) throw std::out_of_range("rademacher: k must be in [1, 62]");
    const double x = std::ldexp(t, k - 1);
    const double frac = x - std::floor(x);
    return frac < 0.5 ? 1 : -1;
}

namespace detail {

/// Visits |Σ a_i ε_i| for every sign pattern with ε_0 = +1 (global sign flips
/// leave the modulus unchanged); Gray-code order, one coefficient update per
/// step.
template <typename Visit>
inline void for_each_sign_sum(const Eigen::VectorXcd& a, Visit&& visit) {
    const int n = static_cast<int>(a.size());
    std::complex<double> s = a.sum();
    visit(s);
    if (n == 1) return;
    const uint64_t total = 1ULL << (n - 1);
    uint64_t gray_prev = 0;
    for (uint64_t i = 1; i < total; ++i) {
        const uint64_t gray = i ^ (i >> 1);
        const uint64_t diff = gray ^ gray_prev;
        const int bit = std::countr_zero(diff);
        if (gray & diff)
            s -= 2.0 * a[bit + 1];
        else
            s += 2.0 * a[bit + 1];
        gray_prev = gray;
        visit(s);
    }
}

}  // namespace detail

/// Exact L^p norm (∫ |Σ a_n s_n|^p dμ)^{1/p} of a sign sum by full
/// enumeration of the 2^n patterns. n ≤ 24.
inline double exact_moment(const SignSum& a, double p) {
    if (p < 1.0) throw std::invalid_argument("exact_moment: p must be >= 1");
    if (a.n() > 24) throw std::invalid_argument("exact_moment: n > 24, use mc_moment");
    double acc = 0;
    detail::for_each_sign_sum(a.coeffs, [&](std::complex<double> s) {
        acc += std::pow(std::abs(s), p);
    });
    acc /= static_cast<double>(1ULL << (a.n() - 1));
    return std::pow(acc, 1.0 / p);
}

struct McMoment {
    double estimate = 0;  // unbiased estimate of the p-th moment (before the root)
    double stderr_ = 0;
};

/// Monte Carlo estimate of ∫ |Σ a_n s_n|^p dμ with its standard error.
/// Deterministic for a fixed seed.
inline McMoment mc_moment(const SignSum& a, double p, int samples, uint64_t seed) {
    if (p < 1.0) throw std::invalid_argument("mc_moment: p must be >= 1");
    if (samples < 1) throw std::invalid_argument("mc_moment: samples must be >= 1");
    Rng rng(seed);
    const int n = a.n();
    double sum = 0, sumsq = 0;
    for (int rep = 0; rep < samples; ++rep) {
        std::complex<double> s = 0;
        uint64_t bits = 0;
        for (int i = 0; i < n; ++i) {
            if (i % 64 == 0) bits = rng.next_u64();
            s += ((bits >> (i % 64)) & 1) ? a.coeffs[i] : -a.coeffs[i];
        }
        const double v = std::pow(std::abs(s), p);
        sum += v;
        sumsq += v * v;
    }
    McMoment out;
    out.estimate = sum / samples;
    const double var = std::max(0.0, sumsq / samples - out.estimate * out.estimate);
    out.stderr_ = std::sqrt(var / samples);
    return out;
}

/// Bound constant of the upper Khintchine inequality, valid for complex
/// coefficients: C_p = 2 p^{1/p} Γ(p/2)^{1/p} for p > 2.
inline double khintchine_upper_c(double p) {
    if (p <= 2.0) throw std::invalid_argument("khintchine_upper_c: requires p > 2");
    return 2.0 * std::pow(p, 1.0 / p) * std::exp(std::lgamma(p / 2.0) / p);
}

/// Bound constant of the lower inequality for 1 ≤ p < 2, via the
/// interpolation C_p ≤ C_{4-p}^{4/p - 1}. At p = 1 this evaluates to 12√π.
inline double khintchine_lower_c(double p) {
    if (p < 1.0 || p >= 2.0) throw std::invalid_argument("khintchine_lower_c: requires p in [1,2)");
    return std::pow(khintchine_upper_c(4.0 - p), 4.0 / p - 1.0);
}

struct ConstantCheck {
    double p = 0;
    double moment = 0;     // exact L^p norm
    double l2 = 0;         // ‖a‖₂
    double bound = 0;      // admissible constant from the inequality chain
    double ratio = 0;      // empirical constant achieved by this sequence
    bool passed = false;
};

/// ‖K_p a‖_p ≤ C_p ‖a‖₂ for p > 2, checked exactly.
inline ConstantCheck check_upper_constant(const SignSum& a, double p) {
    if (p <= 2.0) throw std::invalid_argument("check_upper_constant: requires p > 2");
    ConstantCheck c;
    c.p = p;
    c.moment = exact_moment(a, p);
    c.l2 = a.l2();
    if (c.l2 <= 0) throw std::invalid_argument("check_upper_constant: zero sequence");
    c.bound = khintchine_upper_c(p);
    c.ratio = c.moment / c.l2;
    c.passed = c.moment <= c.bound * c.l2 + 1e-12;
    return c;
}

/// ‖a‖₂ ≤ C_p ‖K_p a‖_p for 1 ≤ p < 2; at p = 1 the classical 12√π bound
/// is asserted as well (it coincides with the interpolated constant).
inline ConstantCheck check_lower_constant(const SignSum& a, double p) {
    if (p < 1.0 || p >= 2.0)
        throw std::invalid_argument("check_lower_constant: requires p in [1,2)");
    ConstantCheck c;
    c.p = p;
    c.moment = exact_moment(a, p);
    c.l2 = a.l2();
    if (c.l2 <= 0) throw std::invalid_argument("check_lower_constant: zero sequence");
    c.bound = khintchine_lower_c(p);
    c.ratio = c.moment > 0 ? c.l2 / c.moment : std::numeric_limits<double>::infinity();
    c.passed = c.l2 <= c.bound * c.moment + 1e-12;
    if (p == 1.0)
        c.passed = c.passed && c.l2 <= 12.0 * std::sqrt(std::numbers::pi) * c.moment + 1e-12;
    return c;
}

struct TailPoint {
    double t = 0;
    double tail = 0;   // exact μ(|Σ a_n s_n| > t)
    double bound = 0;  // 2 e^{-t²/(2(a|a))}
};

struct TailReport {
    std::vector<TailPoint> points;
    bool passed = true;
};

/// Sub-Gaussian tail of a real sign sum: exact tail probabilities by
/// enumeration against 2 e^{-t²/(2(a|a))}. The exponent t²/(2(a|a)) follows
/// the Chernoff optimization that produces the bound.
inline TailReport tail_bound_check(const Eigen::VectorXd& a, const std::vector<double>& t_grid) {
    if (a.size() < 1 || a.size() > 24)
        throw std::invalid_argument("tail_bound_check: n must be in [1, 24]");
    SignSum sum = SignSum::real(a);
    const double aa = a.squaredNorm();
    std::vector<double> grid = t_grid;
    std::sort(grid.begin(), grid.end());
    std::vector<uint64_t> exceed(grid.size(), 0);
    uint64_t total = 0;
    detail::for_each_sign_sum(sum.coeffs, [&](std::complex<double> s) {
        ++total;
        const double v = std::abs(s);
        // count strictly exceeded grid points
        auto it = std::lower_bound(grid.begin(), grid.end(), v);
        for (auto jt = grid.begin(); jt != it; ++jt)
            if (v > *jt) ++exceed[static_cast<size_t>(jt - grid.begin())];
    });
    TailReport rep;
    for (size_t i = 0; i < grid.size(); ++i) {
        TailPoint pt;
        pt.t = grid[i];
        pt.tail = static_cast<double>(exceed[i]) / static_cast<double>(total);
        pt.bound = aa > 0 ? 2.0 * std::exp(-grid[i] * grid[i] / (2.0 * aa)) : (grid[i] > 0 ? 0.0 : 2.0);
        if (aa == 0) pt.bound = 2.0;
        if (pt.tail > pt.bound + 1e-15) rep.passed = false;
        rep.points.push_back(pt);
    }
    return rep;
}

struct GridCheck {
    double worst_margin = std::numeric_limits<double>::infinity();
    bool passed = true;
};

/// cosh(x) ≤ e^{x²/2} on the grid, the elementary step behind the tail bound.
inline GridCheck elementary_inequality_check(const std::vector<double>& xs) {
    GridCheck out;
    for (double x : xs) {
        if (std::abs(x) > 700) throw std::invalid_argument("elementary_inequality_check: overflow");
        const double lhs = std::cosh(x);
        const double rhs = std::exp(0.5 * x * x);
        out.worst_margin = std::min(out.worst_margin, rhs - lhs);
        if (lhs > rhs * (1 + 1e-15)) out.passed = false;
    }
    return out;
}

}  // namespace vmt
