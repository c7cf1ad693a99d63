#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "vmt/random.hpp"

namespace vmt {

/// Finite family of nonzero euclidean vectors in R^d; zero vectors are
/// dropped at construction.
struct VectorFamily {
    int d = 1;
    Eigen::MatrixXd vectors;             // d × n, zero columns removed
    std::vector<int> original_indices;   // positions in the input family

    VectorFamily(int dim, const Eigen::MatrixXd& vs) : d(dim) {
        if (d < 1) throw std::invalid_argument("VectorFamily: d must be >= 1");
        if (vs.rows() != d) throw std::invalid_argument("VectorFamily: dimension mismatch");
        std::vector<int> keep;
        for (int j = 0; j < vs.cols(); ++j)
            if (vs.col(j).norm() > 0) keep.push_back(j);
        vectors.resize(d, static_cast<Eigen::Index>(keep.size()));
        for (size_t c = 0; c < keep.size(); ++c) vectors.col(c) = vs.col(keep[c]);
        original_indices = std::move(keep);
    }

    int size() const { return static_cast<int>(vectors.cols()); }
    double norm_sum() const {
        double s = 0;
        for (int j = 0; j < size(); ++j) s += vectors.col(j).norm();
        return s;
    }
};

/// C_d = ∫_{|e|=1} (v,e)_+ de / |v| under the normalized surface measure:
/// Γ(d/2) / (2√π Γ((d+1)/2)). Gives 1/π at d = 2 and 1/4 at d = 3. At
/// d = 1 the normalized counting measure on {±1} yields 1/2; see the
/// estimate_cd documentation for the normalization caveat.
inline double cd_closed_form(int d) {
    if (d < 1) throw std::invalid_argument("cd_closed_form: d must be >= 1");
    return std::exp(std::lgamma(d / 2.0) - std::lgamma((d + 1) / 2.0)) /
           (2.0 * std::sqrt(std::numbers::pi));
}

struct HalfAverageConfig {
    uint64_t seed = 1;
    int restarts = 48;
    int max_iters = 300;
    double tol = 1e-12;
    double slack = 1e-9;  // tolerance on the C_d lower bound for the ratio
};

struct HalfAverageResult {
    std::vector<int> subset;     // J = {j : (v_j, e0) > 0}, original indices
    double ratio = 0;            // |Σ_{j∈J} v_j| / Σ_j |v_j|
    double g_value = 0;          // Σ_j (v_j, e0)_+
    Eigen::VectorXd direction;   // maximizing unit vector e0
    double cd = 0;               // closed-form C_d used for the bound
    bool bound_ok = false;       // ratio ≥ C_d - slack
};

namespace detail {

inline double half_avg_objective(const Eigen::MatrixXd& vs, const Eigen::VectorXd& e) {
    double g = 0;
    for (int j = 0; j < vs.cols(); ++j) g += std::max(0.0, vs.col(j).dot(e));
    return g;
}

/// Ascent e ← normalize(Σ_{(v_j,e)>0} v_j); each step can only increase the
/// objective, by the same argument as the semi-variation iteration.
inline std::pair<Eigen::VectorXd, double> half_avg_ascent(const Eigen::MatrixXd& vs,
                                                          Eigen::VectorXd e,
                                                          const HalfAverageConfig& cfg) {
    double g = half_avg_objective(vs, e);
    for (int it = 0; it < cfg.max_iters; ++it) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(vs.rows());
        for (int j = 0; j < vs.cols(); ++j)
            if (vs.col(j).dot(e) > 0) w += vs.col(j);
        const double wn = w.norm();
        if (wn <= 1e-300) break;
        Eigen::VectorXd e_next = w / wn;
        const double g_next = half_avg_objective(vs, e_next);
        if (g_next <= g + cfg.tol) {
            if (g_next > g) {
                e = e_next;
                g = g_next;
            }
            break;
        }
        e = e_next;
        g = g_next;
    }
    return {e, g};
}

/// Exact planar maximization of g(e) = Σ (v_j, e)_+ by the critical-angle
/// sweep: within each arc where the active set is constant, g is a single
/// cosine whose peak is at the direction of the active-set sum.
inline std::pair<Eigen::VectorXd, double> half_avg_plane(const Eigen::MatrixXd& vs) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> angles;
    for (int j = 0; j < vs.cols(); ++j) {
        const double phi = std::atan2(vs(1, j), vs(0, j));
        for (double cand : {phi + std::numbers::pi / 2, phi - std::numbers::pi / 2}) {
            double t = std::fmod(cand, two_pi);
            if (t < 0) t += two_pi;
            angles.push_back(t);
        }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());

    std::vector<double> candidates = angles;
    for (size_t i = 0; i < angles.size(); ++i) {
        const double a0 = angles[i];
        const double a1 = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + two_pi;
        const double mid = 0.5 * (a0 + a1);
        candidates.push_back(mid);
        // stationary direction of the arc's active-set sum
        Eigen::Vector2d e_mid(std::cos(mid), std::sin(mid));
        Eigen::Vector2d w = Eigen::Vector2d::Zero();
        for (int j = 0; j < vs.cols(); ++j)
            if (vs.col(j).dot(e_mid) > 0) w += vs.col(j);
        if (w.norm() > 0) candidates.push_back(std::atan2(w.y(), w.x()));
    }

    Eigen::VectorXd best_e(2);
    best_e << 1, 0;
    double best_g = half_avg_objective(vs, best_e);
    for (double theta : candidates) {
        Eigen::VectorXd e(2);
        e << std::cos(theta), std::sin(theta);
        const double g = half_avg_objective(vs, e);
        if (g > best_g) {
            best_g = g;
            best_e = e;
        }
    }
    return {best_e, best_g};
}

}  // namespace detail

/// Subset selection of the half average inequality: maximize
/// g(e) = Σ_j (v_j, e)_+ over the unit sphere, take J = {j : (v_j, e0) > 0},
/// and report ratio = |Σ_{j∈J} v_j| / Σ_j |v_j| ≥ C_d. Dimensions 1 and 2
/// are solved exactly; d ≥ 3 uses seeded multistart ascent.
inline HalfAverageResult half_average_subset(const VectorFamily& fam,
                                             const HalfAverageConfig& cfg = {}) {
    if (fam.size() == 0) throw std::invalid_argument("half_average_subset: empty family");
    const Eigen::MatrixXd& vs = fam.vectors;
    Eigen::VectorXd e0;
    double g = 0;

    if (fam.d == 1) {
        Eigen::VectorXd plus(1), minus(1);
        plus << 1;
        minus << -1;
        const double gp = detail::half_avg_objective(vs, plus);
        const double gm = detail::half_avg_objective(vs, minus);
        e0 = gp >= gm ? plus : minus;
        g = std::max(gp, gm);
    } else if (fam.d == 2) {
        std::tie(e0, g) = detail::half_avg_plane(vs);
    } else {
        Rng rng(cfg.seed);
        std::vector<Eigen::VectorXd> starts;
        Eigen::VectorXd total = vs.rowwise().sum();
        if (total.norm() > 0) starts.push_back(total.normalized());
        for (int j = 0; j < std::min(fam.size(), 16); ++j)
            starts.push_back(vs.col(j).normalized());
        for (int r = 0; r < cfg.restarts; ++r) starts.push_back(rng.unit_vector(fam.d));
        g = -1;
        for (const auto& s : starts) {
            auto [e_cand, g_cand] = detail::half_avg_ascent(vs, s, cfg);
            if (g_cand > g) {
                g = g_cand;
                e0 = e_cand;
            }
        }
    }

    HalfAverageResult res;
    res.direction = e0;
    res.g_value = g;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(fam.d);
    for (int j = 0; j < fam.size(); ++j) {
        if (vs.col(j).dot(e0) > 0) {
            res.subset.push_back(fam.original_indices[j]);
            sum += vs.col(j);
        }
    }
    res.ratio = sum.norm() / fam.norm_sum();
    res.cd = cd_closed_form(fam.d);
    res.bound_ok = res.ratio >= res.cd - cfg.slack;
    return res;
}

struct CdEstimate {
    double estimate = 0;
    double stderr_ = 0;
    double closed_form = 0;
};

/// Monte Carlo C_d: average of (e₁)_+ over uniform unit vectors under the
/// normalized surface measure. The value C_1 = 1 sometimes quoted for this
/// integral corresponds to the unnormalized (total mass 2) counting measure
/// on {±1}; under the normalized convention used here the d = 1 value is
/// 1/2 (and the family {v, -v} shows no subset ratio can beat 1/2), so
/// d ≥ 2 is required here and d = 1 checks use the closed form directly.
inline CdEstimate estimate_cd(int d, int samples, uint64_t seed) {
    if (d < 2) throw std::invalid_argument("estimate_cd: d must be >= 2");
    if (samples < 2) throw std::invalid_argument("estimate_cd: need at least 2 samples");
    Rng rng(seed);
    double sum = 0, sumsq = 0;
    for (int i = 0; i < samples; ++i) {
        const double v = std::max(0.0, rng.unit_vector(d)[0]);
        sum += v;
        sumsq += v * v;
    }
    CdEstimate out;
    out.estimate = sum / samples;
    const double var = std::max(0.0, sumsq / samples - out.estimate * out.estimate);
    out.stderr_ = std::sqrt(var / samples);
    out.closed_form = cd_closed_form(d);
    return out;
}

}  // namespace vmt
