#pragma once

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "vmt/half_average.hpp"
#include "vmt/hs_extension.hpp"
#include "vmt/khintchine.hpp"
#include "vmt/measures.hpp"
#include "vmt/tensor_norms.hpp"

namespace vmt::accept {

struct CriterionResult {
    int index = 0;
    std::string name;
    bool passed = false;
    std::string detail;   // deterministic for a fixed seed
    double seconds = 0;   // wall time, reported by the runner only
    double budget = 0;    // 0: no runtime requirement
};

namespace detail {

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace detail

/// 1. diag(3,4) achieves 5; 200 random positive matrices (n ≤ 8) achieve
///    the HS norm to relative 1e-8; under 5 s.
inline CriterionResult criterion_hs_construction(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{1, "hs-construction achieves the HS norm", false, "", 0, 5.0};
    Eigen::MatrixXcd d34 = Eigen::MatrixXcd::Zero(2, 2);
    d34(0, 0) = 3;
    d34(1, 1) = 4;
    const double diag_achieved = construct_hs_measures(d34).achieved;
    bool ok = std::abs(diag_achieved - 5.0) <= 1e-8;

    Rng rng(seed ^ 0xc1ULL);
    double worst = 0;
    for (int rep = 0; rep < 200; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 8);
        Eigen::MatrixXcd g = rng.gaussian_cmatrix(n, n);
        Eigen::MatrixXcd t = g * g.adjoint();
        const double hs = hs_norm(t);
        const double achieved = construct_hs_measures(t).achieved;
        worst = std::max(worst, std::abs(achieved - hs) / hs);
    }
    ok = ok && worst <= 1e-8;
    c.seconds = timer.seconds();
    c.passed = ok && c.seconds < c.budget;
    c.detail = "diag achieved " + detail::fmt(diag_achieved) + ", worst relative error " +
               detail::fmt(worst) + " over 200 matrices";
    return c;
}

/// 2. Five default divergence blocks: partial sums at least (1,...,5) while
///    Σ‖ξ_n‖² < 1; under 10 s.
inline CriterionResult criterion_divergence(uint64_t) {
    detail::Timer timer;
    CriterionResult c{2, "divergence witness partial sums", false, "", 0, 10.0};
    const auto w = divergence_witness(DivergenceSpec::defaults(5), 5);
    bool ok = w.partial_sums.size() == 5;
    for (size_t n = 0; n < w.partial_sums.size(); ++n)
        ok = ok && w.partial_sums[n] >= static_cast<double>(n + 1) - 1e-9;
    ok = ok && w.norm_sq_blocks < 1.0;
    c.seconds = timer.seconds();
    c.passed = ok && c.seconds < c.budget;
    std::string sums;
    for (double s : w.partial_sums) sums += (sums.empty() ? "" : ",") + detail::fmt(s);
    c.detail = "partial sums (" + sums + "), Σ‖ξ‖² = " + detail::fmt(w.norm_sq_blocks);
    return c;
}

/// 3. π-inequality on 500 random measures (≤ 12 atoms) and the 64-phase
///    instance with ratio ≥ 3.
inline CriterionResult criterion_pi_inequality(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{3, "pi-inequality for complex measures", false, "", 0, 0};
    Rng rng(seed ^ 0xc3ULL);
    bool ok = true;
    double worst_ratio = 0;
    for (int rep = 0; rep < 500; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 12);
        ComplexMeasure m(FiniteAlgebra(n), rng.gaussian_cvector(n));
        const double sup = subset_sup_enumerated(m, m.algebra().full());
        const double var = m.variation(m.algebra().full());
        ok = ok && var <= std::numbers::pi * sup + 1e-10;
        if (sup > 0) worst_ratio = std::max(worst_ratio, var / sup);
    }
    Eigen::VectorXcd phases(64);
    for (int k = 0; k < 64; ++k) phases[k] = std::polar(1.0, 2.0 * std::numbers::pi * k / 64);
    ComplexMeasure m64(FiniteAlgebra(64), phases);
    const double ratio64 = pi_ratio(m64, m64.algebra().full());
    ok = ok && ratio64 >= 3.0;
    c.seconds = timer.seconds();
    c.passed = ok;
    c.detail = "worst random ratio " + detail::fmt(worst_ratio) + ", 64-phase ratio " +
               detail::fmt(ratio64);
    return c;
}

/// 4. Semi-variation: orthogonal measures match the set norm to 1e-8; the
///    iterative solver matches the sign-enumeration oracle in ≥ 99% of 300
///    real cases and never overshoots.
inline CriterionResult criterion_semivariation(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{4, "semi-variation solver vs oracles", false, "", 0, 0};
    Rng rng(seed ^ 0xc4ULL);
    bool ok = true;
    double worst_orth = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 10);
        Eigen::VectorXd scales(n);
        for (int i = 0; i < n; ++i) scales[i] = 0.1 + rng.uniform();
        VectorMeasure phi(FiniteAlgebra(n), rng.unitary(n) * scales.asDiagonal(), true);
        const AtomSet a = AtomSet::from_mask(rng.next_u64() & ((1ULL << n) - 1));
        const double sv = semivariation(phi, a).value;
        worst_orth = std::max(worst_orth, std::abs(sv - phi.value(a).norm()));
    }
    ok = ok && worst_orth <= 1e-8;

    int matches = 0;
    bool bracket = true;
    const int cases = 300;
    for (int rep = 0; rep < cases; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 15);
        const int d = 2 + static_cast<int>(rng.next_u64() % 5);
        auto phi = VectorMeasure::real(FiniteAlgebra(n), rng.gaussian_matrix(d, n));
        const double oracle = semivariation(phi, phi.algebra().full()).value;  // 2^n signs
        OptConfig cfg;
        cfg.exact_cap = 0;
        cfg.seed = seed ^ (0x40000ULL + rep);
        const double solver = semivariation(phi, phi.algebra().full(), cfg).value;
        if (std::abs(solver - oracle) <= 1e-8) ++matches;
        bracket = bracket && solver <= oracle + 1e-8;
    }
    ok = ok && bracket && matches >= 297;
    c.seconds = timer.seconds();
    c.passed = ok;
    c.detail = "orthogonal gap " + detail::fmt(worst_orth) + ", solver matched " +
               std::to_string(matches) + "/300";
    return c;
}

/// 5. Cross-norm sandwich on 500 random tensors (m, n ≤ 6) and exact cross
///    norm on elementary tensors.
inline CriterionResult criterion_cross_norms(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{5, "cross norm sandwich", false, "", 0, 0};
    Rng rng(seed ^ 0xc5ULL);
    OptConfig cfg;
    cfg.restarts = 12;
    cfg.seed = seed ^ 0x50000ULL;
    bool ok = true;
    for (int rep = 0; rep < 500; ++rep) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 6);
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        TensorElement z(rng.gaussian_cmatrix(m, n));
        const double inj = injective_norm(z);
        const double proj = projective_norm(z);
        const NormInterval l = l_norm_bounds(z, cfg);
        const NormInterval r = r_norm_bounds(z, cfg);
        const NormInterval mid{0.5 * (l.lower + r.lower), 0.5 * (l.upper + r.upper), true};
        for (const auto& iv : {l, r, mid}) {
            ok = ok && std::abs(iv.lower - inj) <= 1e-8;
            ok = ok && iv.lower <= iv.upper + 1e-10 && iv.upper <= proj + 1e-8;
        }
    }
    double worst_elem = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int m = 1 + static_cast<int>(rng.next_u64() % 6);
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        Eigen::VectorXcd x = rng.gaussian_cvector(m), y = rng.gaussian_cvector(n);
        TensorElement z = TensorElement::elementary(x, y);
        const double expect = x.norm() * y.norm();
        const auto l = l_norm_bounds(z, cfg);
        const auto r = r_norm_bounds(z, cfg);
        for (double v : {injective_norm(z), projective_norm(z), l.lower, l.upper, r.upper})
            worst_elem = std::max(worst_elem, std::abs(v - expect));
    }
    ok = ok && worst_elem <= 1e-10;
    c.seconds = timer.seconds();
    c.passed = ok;
    c.detail = "sandwich held on 500 tensors, elementary deviation " + detail::fmt(worst_elem);
    return c;
}

/// 6. p-summing: the p = 2 bound with singular-vector families equals the
///    HS norm (100 matrices, n ≤ 6); bounds non-increasing in p on the
///    transfer-closed family set.
inline CriterionResult criterion_p_summing(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{6, "p-summing lower bounds", false, "", 0, 0};
    Rng rng(seed ^ 0xc6ULL);
    FamilyConfig cfg;
    cfg.include_gaussian = false;
    cfg.seed = seed ^ 0x60000ULL;
    bool ok = true;
    double worst_p2 = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 6);
        Eigen::MatrixXcd t = rng.gaussian_cmatrix(n, n);
        worst_p2 = std::max(worst_p2, std::abs(p_summing_lower_bound(t, 2.0, cfg) - hs_norm(t)));
        double prev = std::numeric_limits<double>::infinity();
        for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
            const double bound = p_summing_lower_bound(t, p, cfg);
            ok = ok && bound <= prev + 1e-10;
            prev = bound;
        }
    }
    ok = ok && worst_p2 <= 1e-8;
    c.seconds = timer.seconds();
    c.passed = ok;
    c.detail = "worst |p2 bound - hs| = " + detail::fmt(worst_p2) + " over 100 matrices";
    return c;
}

/// 7. Khintchine: exact second moment equals ‖a‖₂ to 1e-12 on 100 random
///    complex sequences (n ≤ 16); constants and tail bound hold on a fixed
///    50-case corpus; the p ∈ {1, 1.5, 3, 4} table finishes under 10 s.
inline CriterionResult criterion_khintchine(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{7, "khintchine constants and tail bound", false, "", 0, 10.0};
    Rng rng(seed ^ 0xc7ULL);
    bool ok = true;
    double worst_identity = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 16);
        SignSum a(rng.gaussian_cvector(n));
        worst_identity = std::max(worst_identity, std::abs(exact_moment(a, 2.0) - a.l2()));
    }
    ok = ok && worst_identity <= 1e-12;

    for (int i = 0; i < 50; ++i) {
        const int n = 1 + static_cast<int>(rng.next_u64() % 12);
        const bool complex_case = (i % 2 == 1);
        SignSum a = complex_case ? SignSum(rng.gaussian_cvector(n))
                                 : SignSum::real(rng.gaussian_vector(n));
        for (double p : {3.0, 4.0}) ok = ok && check_upper_constant(a, p).passed;
        for (double p : {1.0, 1.5}) ok = ok && check_lower_constant(a, p).passed;
        exact_moment(a, 1.5);  // completes the p ∈ {1, 1.5, 3, 4} table per case

        Eigen::VectorXd real_a = rng.gaussian_vector(n);
        std::vector<double> grid;
        const double sigma = real_a.norm();
        for (int gpt = 0; gpt <= 6; ++gpt) grid.push_back(0.5 * gpt * sigma);
        ok = ok && tail_bound_check(real_a, grid).passed;
    }
    c.seconds = timer.seconds();
    c.passed = ok && c.seconds < c.budget;
    c.detail = "identity gap " + detail::fmt(worst_identity) + ", 50-case corpus clean";
    return c;
}

/// 8. C_2 and C_3 Monte Carlo at 1e6 samples within 4 standard errors;
///    subset ratio bound on 1000 random families (d ≤ 5).
inline CriterionResult criterion_half_average(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{8, "half-average constants and subset bound", false, "", 0, 0};
    const auto d2 = estimate_cd(2, 1000000, seed ^ 0x82ULL);
    const auto d3 = estimate_cd(3, 1000000, seed ^ 0x83ULL);
    bool ok = std::abs(d2.estimate - 1.0 / std::numbers::pi) <= 4 * d2.stderr_ &&
              std::abs(d3.estimate - 0.25) <= 4 * d3.stderr_;

    Rng rng(seed ^ 0xc8ULL);
    int families = 0;
    double worst_margin = std::numeric_limits<double>::infinity();
    for (int rep = 0; rep < 1000; ++rep) {
        const int d = 1 + static_cast<int>(rng.next_u64() % 5);
        const int n = 1 + static_cast<int>(rng.next_u64() % 50);
        VectorFamily fam(d, rng.gaussian_matrix(d, n));
        if (fam.size() == 0) continue;
        HalfAverageConfig hcfg;
        hcfg.seed = seed ^ (0x80000ULL + rep);
        const auto res = half_average_subset(fam, hcfg);
        worst_margin = std::min(worst_margin, res.ratio - res.cd);
        ok = ok && res.ratio >= res.cd - 1e-9;
        ++families;
    }
    c.seconds = timer.seconds();
    c.passed = ok;
    c.detail = "C2 err " + detail::fmt(std::abs(d2.estimate - 1.0 / std::numbers::pi)) +
               ", C3 err " + detail::fmt(std::abs(d3.estimate - 0.25)) + ", min ratio margin " +
               detail::fmt(worst_margin) + " over " + std::to_string(families) + " families";
    return c;
}

/// 9. Product spectral identity: 5×5 hermitian evolution vs the
///    product-measure sum at 20 time points, discrepancy ≤ 1e-10.
inline CriterionResult criterion_spectral_demo(uint64_t seed) {
    detail::Timer timer;
    CriterionResult c{9, "spectral product-measure identity", false, "", 0, 0};
    Rng rng(seed ^ 0xc9ULL);
    Eigen::MatrixXcd h = rng.gaussian_cmatrix(5, 5);
    h = 0.5 * (h + h.adjoint()).eval();
    const Eigen::MatrixXcd t = rng.gaussian_cmatrix(5, 5);
    std::vector<double> times;
    for (int i = 1; i <= 20; ++i) times.push_back(0.5 * i);
    const auto rep = spectral_demo(h, t, rng.gaussian_cvector(5), rng.gaussian_cvector(5), times);
    c.seconds = timer.seconds();
    c.passed = rep.passed;
    c.detail = "max discrepancy " + detail::fmt(rep.max_discrepancy) + " over 20 times";
    return c;
}

/// Criteria 1-9; criterion 10 (byte-identical CLI reports) needs the CLI
/// binary and lives in the acceptance runner.
inline std::vector<CriterionResult> run_criteria(uint64_t seed) {
    return {criterion_hs_construction(seed), criterion_divergence(seed),
            criterion_pi_inequality(seed),   criterion_semivariation(seed),
            criterion_cross_norms(seed),     criterion_p_summing(seed),
            criterion_khintchine(seed),      criterion_half_average(seed),
            criterion_spectral_demo(seed)};
}

}  // namespace vmt::accept
