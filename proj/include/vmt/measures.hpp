#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "vmt/finite_algebra.hpp"
#include "vmt/random.hpp"

namespace vmt {

using Complex = std::complex<double>;

/// phase(z) = z/|z| with phase(0) defined as 1, which removes the
/// singularity from the dual ascent iterations.
inline Complex phase(Complex z) {
    double a = std::abs(z);
    return a > 0 ? z / a : Complex(1.0, 0.0);
}

inline double sign_or_one(double x) { return x < 0 ? -1.0 : 1.0; }

// ---------------------------------------------------------------------------
// Scalar measures
// ---------------------------------------------------------------------------

/// Complex-valued additive set function on a finite atomic algebra,
/// determined by its atom values.
class ComplexMeasure {
public:
    ComplexMeasure(FiniteAlgebra algebra, Eigen::VectorXcd atom_values)
        : algebra_(std::move(algebra)), values_(std::move(atom_values)) {
        if (values_.size() != static_cast<Eigen::Index>(algebra_.n_atoms))
            throw std::invalid_argument("ComplexMeasure: one value per atom required");
    }

    static ComplexMeasure from_values(std::vector<Complex> vals) {
        Eigen::VectorXcd v = Eigen::Map<Eigen::VectorXcd>(vals.data(), vals.size());
        return ComplexMeasure(FiniteAlgebra(static_cast<uint32_t>(vals.size())), v);
    }

    const FiniteAlgebra& algebra() const { return algebra_; }
    const Eigen::VectorXcd& atom_values() const { return values_; }

    Complex value(const AtomSet& a) const {
        algebra_.require_valid(a);
        Complex s = 0;
        for (uint32_t i : a.indices()) s += values_[i];
        return s;
    }

    /// |λ|(A). On an atomic algebra the finest partition is optimal, so the
    /// variation is the sum of atom moduli.
    double variation(const AtomSet& a) const {
        algebra_.require_valid(a);
        double s = 0;
        for (uint32_t i : a.indices()) s += std::abs(values_[i]);
        return s;
    }

    double total_variation() const { return variation(algebra_.full()); }

private:
    FiniteAlgebra algebra_;
    Eigen::VectorXcd values_;
};

/// sup{|λ(A)| : A ⊆ B} by exhaustive Gray-code enumeration. |B| <= 24.
inline double subset_sup_enumerated(const ComplexMeasure& lambda, const AtomSet& b) {
    lambda.algebra().require_valid(b);
    const auto& idx = b.indices();
    const size_t n = idx.size();
    if (n == 0) return 0.0;
    if (n > 24) throw std::invalid_argument("subset_sup_enumerated: more than 24 atoms");
    std::vector<Complex> z(n);
    for (size_t i = 0; i < n; ++i) z[i] = lambda.atom_values()[idx[i]];
    Complex s = 0;
    double best = 0;
    const uint64_t total = 1ULL << n;
    uint64_t gray_prev = 0;
    for (uint64_t i = 1; i < total; ++i) {
        const uint64_t gray = i ^ (i >> 1);
        const uint64_t diff = gray ^ gray_prev;
        const int bit = std::countr_zero(diff);
        if (gray & diff)
            s += z[bit];
        else
            s -= z[bit];
        gray_prev = gray;
        best = std::max(best, std::abs(s));
    }
    return best;
}

/// Exact sup{|λ(A)| : A ⊆ B} for any size, via the half-plane sweep.
/// A maximizing subset can be taken of the form {i : Re(e^{-iθ} z_i) ≥ 0};
/// it suffices to scan the finitely many angles where that set changes,
/// together with the midpoints of the arcs between them.
inline double subset_sup(const ComplexMeasure& lambda, const AtomSet& b) {
    lambda.algebra().require_valid(b);
    std::vector<Complex> z;
    z.reserve(b.size());
    for (uint32_t i : b.indices()) {
        Complex v = lambda.atom_values()[i];
        if (v != 0.0) z.push_back(v);
    }
    if (z.empty()) return 0.0;

    constexpr double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> angles;
    angles.reserve(2 * z.size());
    for (const Complex& v : z) {
        double a = std::arg(v);
        for (double cand : {a + std::numbers::pi / 2, a - std::numbers::pi / 2}) {
            double t = std::fmod(cand, two_pi);
            if (t < 0) t += two_pi;
            angles.push_back(t);
        }
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end()), angles.end());
    std::vector<double> candidates = angles;
    for (size_t i = 0; i < angles.size(); ++i) {
        double a0 = angles[i];
        double a1 = (i + 1 < angles.size()) ? angles[i + 1] : angles[0] + two_pi;
        candidates.push_back(0.5 * (a0 + a1));
    }

    double best = 0;
    for (double theta : candidates) {
        const Complex dir = std::polar(1.0, -theta);
        Complex closed = 0, open = 0;
        for (const Complex& v : z) {
            double re = (dir * v).real();
            if (re >= 0) closed += v;
            if (re > 0) open += v;
        }
        best = std::max({best, std::abs(closed), std::abs(open)});
    }
    return best;
}

/// |λ|(B) / sup{|λ(A)| : A ⊆ B}. Always ≤ π. The sup is enumerated for
/// |B| ≤ 24 and computed by the exact half-plane sweep for larger sets.
inline double pi_ratio(const ComplexMeasure& lambda, const AtomSet& b) {
    const double sup = b.size() <= 24 ? subset_sup_enumerated(lambda, b) : subset_sup(lambda, b);
    if (sup <= 0) throw std::invalid_argument("pi_ratio: measure vanishes on the set");
    const double ratio = lambda.variation(b) / sup;
    if (ratio > std::numbers::pi + 1e-12)
        throw std::logic_error("pi_ratio: ratio exceeded pi, enumeration is inconsistent");
    return ratio;
}

// ---------------------------------------------------------------------------
// Vector measures
// ---------------------------------------------------------------------------

/// Hilbert-space-valued additive set function on a finite atomic algebra.
/// Atom vectors are stored as the columns of a dim × n_atoms matrix. A
/// measure with exactly real atom vectors is treated as R^d-valued: its
/// semi-variation ranges over real functionals.
class VectorMeasure {
public:
    VectorMeasure(FiniteAlgebra algebra, Eigen::MatrixXcd atoms, bool orthogonal = false)
        : algebra_(std::move(algebra)), atoms_(std::move(atoms)), orthogonal_(orthogonal) {
        if (atoms_.cols() != static_cast<Eigen::Index>(algebra_.n_atoms))
            throw std::invalid_argument("VectorMeasure: one atom vector per atom required");
        if (atoms_.rows() < 1) throw std::invalid_argument("VectorMeasure: dim must be >= 1");
        real_valued_ = (atoms_.imag().cwiseAbs().maxCoeff() == 0.0);
        if (orthogonal_) check_orthogonality();
    }

    static VectorMeasure real(FiniteAlgebra algebra, const Eigen::MatrixXd& atoms,
                              bool orthogonal = false) {
        return VectorMeasure(std::move(algebra), atoms.cast<Complex>(), orthogonal);
    }

    const FiniteAlgebra& algebra() const { return algebra_; }
    int dim() const { return static_cast<int>(atoms_.rows()); }
    uint32_t n_atoms() const { return algebra_.n_atoms; }
    const Eigen::MatrixXcd& atoms() const { return atoms_; }
    bool orthogonal() const { return orthogonal_; }
    bool real_valued() const { return real_valued_; }

    Eigen::VectorXcd value(const AtomSet& a) const {
        algebra_.require_valid(a);
        Eigen::VectorXcd s = Eigen::VectorXcd::Zero(atoms_.rows());
        for (uint32_t i : a.indices()) s += atoms_.col(i);
        return s;
    }

    Eigen::MatrixXcd atoms_on(const AtomSet& a) const {
        algebra_.require_valid(a);
        Eigen::MatrixXcd sub(atoms_.rows(), a.size());
        Eigen::Index c = 0;
        for (uint32_t i : a.indices()) sub.col(c++) = atoms_.col(i);
        return sub;
    }

    /// Scalar measure ⟨v, φ(·)⟩ for a fixed vector v.
    ComplexMeasure pair_with(const Eigen::VectorXcd& v) const {
        if (v.size() != atoms_.rows()) throw std::invalid_argument("pair_with: dim mismatch");
        Eigen::VectorXcd vals(atoms_.cols());
        for (Eigen::Index i = 0; i < atoms_.cols(); ++i) vals[i] = v.dot(atoms_.col(i));
        return ComplexMeasure(algebra_, vals);
    }

private:
    // Pairwise inner products must vanish. The full Gram matrix is checked
    // up to 512 atoms; beyond that a deterministic sample of pairs is
    // verified, since the full check is cubic in the dimension.
    void check_orthogonality() const {
        const Eigen::Index n = atoms_.cols();
        constexpr double tol = 1e-10;
        if (n <= 512) {
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = i + 1; j < n; ++j)
                    if (std::abs(atoms_.col(i).dot(atoms_.col(j))) > tol)
                        throw std::invalid_argument("VectorMeasure: atoms are not orthogonal");
        } else {
            Rng rng(0x0a70a7u ^ static_cast<uint64_t>(n));
            for (int k = 0; k < 4096; ++k) {
                const auto i = static_cast<Eigen::Index>(rng.next_u64() % n);
                const auto j = static_cast<Eigen::Index>(rng.next_u64() % n);
                if (i == j) continue;
                if (std::abs(atoms_.col(i).dot(atoms_.col(j))) > tol)
                    throw std::invalid_argument("VectorMeasure: atoms are not orthogonal");
            }
        }
    }

    FiniteAlgebra algebra_;
    Eigen::MatrixXcd atoms_;
    bool orthogonal_ = false;
    bool real_valued_ = false;
};

// ---------------------------------------------------------------------------
// Semi-variation
// ---------------------------------------------------------------------------

struct OptConfig {
    uint64_t seed = 1;
    int restarts = 32;
    int max_iters = 500;
    double tol = 1e-10;
    double gap_tol = 1e-8;  // reported bracket width, not a proven bound
    int exact_cap = 20;     // sign enumeration limit for real measures
};

struct SemivarResult {
    double value = 0;       // best certified lower bound; exact when `exact`
    bool exact = false;     // sign enumeration was used
    bool converged = true;  // every restart reached the fixed-point tolerance
    int iterations = 0;     // total ascent iterations across restarts
    double gap_tol = 0;     // reported bracket width (from the config)
    double upper_hint() const { return exact ? value : value * (1.0 + gap_tol); }
};

namespace detail {

/// Exact max over sign patterns of ‖Σ σ_i c_i‖ for real columns c_i,
/// by Gray-code enumeration with σ_1 fixed to +1.
inline double sign_enumeration_max(const Eigen::MatrixXd& cols) {
    const int n = static_cast<int>(cols.cols());
    if (n == 0) return 0.0;
    Eigen::VectorXd s = cols.rowwise().sum();
    double best = s.norm();
    if (n == 1) return best;
    const uint64_t total = 1ULL << (n - 1);
    uint64_t gray_prev = 0;
    for (uint64_t i = 1; i < total; ++i) {
        const uint64_t gray = i ^ (i >> 1);
        const uint64_t diff = gray ^ gray_prev;
        const int bit = std::countr_zero(diff);
        // atom index bit+1; atom 0 keeps sign +1
        if (gray & diff)
            s -= 2.0 * cols.col(bit + 1);
        else
            s += 2.0 * cols.col(bit + 1);
        gray_prev = gray;
        best = std::max(best, s.norm());
    }
    return best;
}

/// Objective Σ_i |⟨v, c_i⟩| of the dual semi-variation problem.
inline double dual_objective(const Eigen::MatrixXcd& cols, const Eigen::VectorXcd& v) {
    double s = 0;
    for (Eigen::Index i = 0; i < cols.cols(); ++i) s += std::abs(cols.col(i).dot(v));
    return s;
}

/// Monotone ascent v ← normalize(Σ_i phase(⟨c_i, v⟩) c_i) from one start.
/// In the real field the phases degenerate to signs.
inline std::pair<double, bool> phase_ascent(const Eigen::MatrixXcd& cols, Eigen::VectorXcd v,
                                            bool real_field, const OptConfig& cfg,
                                            int* iters_out) {
    const Eigen::Index n = cols.cols();
    double g = dual_objective(cols, v);
    bool converged = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
        if (iters_out) ++*iters_out;
        Eigen::VectorXcd w = Eigen::VectorXcd::Zero(cols.rows());
        for (Eigen::Index i = 0; i < n; ++i) {
            Complex s = cols.col(i).dot(v);
            Complex u = real_field ? Complex(sign_or_one(s.real()), 0.0) : phase(s);
            w += u * cols.col(i);
        }
        const double wn = w.norm();
        if (wn < 1e-300) {
            converged = true;
            break;
        }
        v = w / wn;
        if (real_field) v = v.real().cast<Complex>();
        const double g_next = dual_objective(cols, v);
        if (g_next <= g + cfg.tol) {
            g = std::max(g, g_next);
            converged = true;
            break;
        }
        g = g_next;
    }
    return {g, converged};
}

}  // namespace detail

/// Semi-variation |φ|(A) = sup{ Σ_i |⟨v, φ_i⟩| : ‖v‖ ≤ 1 } over the atoms of
/// A. Real measures with few enough atoms are solved exactly by sign
/// enumeration; otherwise a multistart phase-ascent reports the best lower
/// bound found. The bracket [value, value·(1+gap_tol)] is reported, not
/// certified: the iteration is an ascent scheme whose global optimality at
/// these sizes is backed by the enumeration oracle in the test suite.
inline SemivarResult semivariation(const VectorMeasure& phi, const AtomSet& a,
                                   const OptConfig& cfg = {}) {
    phi.algebra().require_valid(a);
    SemivarResult res;
    res.gap_tol = cfg.gap_tol;
    if (a.empty()) {
        res.exact = true;
        return res;
    }
    const Eigen::MatrixXcd cols = phi.atoms_on(a);
    const bool real_field = phi.real_valued();

    if (real_field && static_cast<int>(a.size()) <= cfg.exact_cap) {
        res.value = detail::sign_enumeration_max(cols.real());
        res.exact = true;
        return res;
    }

    // Deterministic starts: the normalized set value, the top left singular
    // vector, then seeded random directions.
    std::vector<Eigen::VectorXcd> starts;
    Eigen::VectorXcd total = cols.rowwise().sum();
    if (total.norm() > 1e-300) starts.push_back(total.normalized());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(cols, Eigen::ComputeThinU);
    if (svd.singularValues().size() > 0 && svd.singularValues()[0] > 1e-300)
        starts.push_back(svd.matrixU().col(0));
    Rng rng(cfg.seed);
    for (int r = 0; r < cfg.restarts; ++r)
        starts.push_back(real_field ? rng.unit_vector(phi.dim()).cast<Complex>()
                                    : rng.unit_cvector(phi.dim()));

    bool all_converged = true;
    for (auto& v0 : starts) {
        Eigen::VectorXcd v = v0;
        if (real_field) v = v.real().cast<Complex>().normalized();
        auto [g, conv] = detail::phase_ascent(cols, v, real_field, cfg, &res.iterations);
        all_converged = all_converged && conv;
        res.value = std::max(res.value, g);
    }
    res.converged = all_converged;
    return res;
}

/// Σ_{j,k} |⟨ξ_j, T η_k⟩| over all atom pairs: the total variation of the
/// product semi-measure (ξ|Tη) on the atomic product algebra.
inline double total_variation_product(const VectorMeasure& xi, const VectorMeasure& eta,
                                      const Eigen::MatrixXcd& t) {
    if (t.rows() != xi.dim() || t.cols() != eta.dim())
        throw std::invalid_argument("total_variation_product: dimension mismatch");
    return (xi.atoms().adjoint() * t * eta.atoms()).cwiseAbs().sum();
}

/// Finite-dimensional control measure: μ(A) = (1/d) Σ_k |⟨e_k, φ⟩|(A) over
/// the standard basis. Satisfies μ ≤ |φ| and μ(A) = 0 ⇒ φ vanishes on all
/// subsets of A.
inline ComplexMeasure control_measure(const VectorMeasure& phi) {
    const double d = phi.dim();
    Eigen::VectorXcd vals(phi.n_atoms());
    for (uint32_t i = 0; i < phi.n_atoms(); ++i)
        vals[i] = phi.atoms().col(i).cwiseAbs().sum() / d;
    return ComplexMeasure(phi.algebra(), vals);
}

// ---------------------------------------------------------------------------
// Truncated measures and squeezing
// ---------------------------------------------------------------------------

/// Countably-atomic orthogonal measure truncated to finitely many blocks,
/// with an ℓ²-certified bound on the un-enumerated tail.
struct TruncatedMeasure {
    struct Block {
        VectorMeasure measure;
        double norm;  // ‖measure(S_n)‖
    };
    std::vector<Block> blocks;
    double tail_bound = 0;

    TruncatedMeasure() = default;
    TruncatedMeasure(std::vector<Block> b, double tail) : blocks(std::move(b)), tail_bound(tail) {
        if (tail_bound < 0) throw std::invalid_argument("TruncatedMeasure: negative tail bound");
        for (const auto& blk : blocks) {
            const double actual = blk.measure.value(blk.measure.algebra().full()).norm();
            if (std::abs(actual - blk.norm) > 1e-8 * (1.0 + blk.norm))
                throw std::invalid_argument("TruncatedMeasure: block norm mismatch");
        }
    }
};

struct SqueezingReport {
    std::vector<double> tail_norms;  // ‖m(blocks n..∞)‖ for n = 0..N
    bool monotone = true;            // non-increasing
    bool squeezed = true;            // last materialized tail ≤ tail_bound
};

/// Orthogonality makes ‖m(blocks n..∞)‖² = Σ_{k≥n} norm_k² + tail², which
/// must decrease to the tail bound: the numerical shadow of the squeezing
/// property of orthogonal measures.
inline SqueezingReport squeezing_witness(const TruncatedMeasure& m) {
    SqueezingReport rep;
    const size_t n = m.blocks.size();
    rep.tail_norms.resize(n + 1);
    double acc = m.tail_bound * m.tail_bound;
    rep.tail_norms[n] = m.tail_bound;
    for (size_t k = n; k-- > 0;) {
        acc += m.blocks[k].norm * m.blocks[k].norm;
        rep.tail_norms[k] = std::sqrt(acc);
    }
    for (size_t k = 0; k + 1 < rep.tail_norms.size(); ++k)
        if (rep.tail_norms[k] < rep.tail_norms[k + 1] - 1e-12) rep.monotone = false;
    rep.squeezed = rep.tail_norms.back() <= m.tail_bound + 1e-12;
    return rep;
}

}  // namespace vmt
