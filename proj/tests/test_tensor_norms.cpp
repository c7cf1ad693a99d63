#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "vmt/random.hpp"
#include "vmt/tensor_norms.hpp"

using namespace vmt;
using Catch::Approx;

namespace {

TensorElement random_tensor(Rng& rng, int m, int n) {
    return TensorElement(rng.gaussian_cmatrix(m, n));
}

// Independent oracle for the projective norm: Σ‖x_l‖‖y_l‖ minimized over
// gauge transforms of the SVD factors. The SVD representation itself
// attains the trace norm, and no representation can go below it.
double projective_rep_search(const TensorElement& z, Rng& rng, double* min_found) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(z.coeffs(),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd sv = svd.singularValues();
    const int rank = static_cast<int>((sv.array() > (sv.size() ? sv[0] : 0.0) * 1e-13).count());
    if (rank == 0) {
        *min_found = 0;
        return 0;
    }
    Eigen::MatrixXcd x0(z.m(), rank), y0(z.n(), rank);
    for (int l = 0; l < rank; ++l) {
        x0.col(l) = std::sqrt(sv[l]) * svd.matrixU().col(l);
        y0.col(l) = std::sqrt(sv[l]) * svd.matrixV().col(l).conjugate();
    }
    auto cost = [](const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& y) {
        double s = 0;
        for (Eigen::Index l = 0; l < x.cols(); ++l) s += x.col(l).norm() * y.col(l).norm();
        return s;
    };
    double best = cost(x0, y0);
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::MatrixXcd g =
            Eigen::MatrixXcd::Identity(rank, rank) + 0.3 * rng.gaussian_cmatrix(rank, rank);
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(g);
        if (std::abs(lu.determinant()) < 1e-8) continue;
        best = std::min(best, cost(x0 * g, y0 * lu.inverse().transpose()));
    }
    *min_found = best;
    return cost(x0, y0);
}

}  // namespace

TEST_CASE("cross norm property on elementary tensors", "[tensor]") {
    Rng rng(17);
    for (int rep = 0; rep < 25; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 5);
        int n = 1 + static_cast<int>(rng.next_u64() % 5);
        Eigen::VectorXcd x = rng.gaussian_cvector(m);
        Eigen::VectorXcd y = rng.gaussian_cvector(n);
        auto z = TensorElement::elementary(x, y);
        const double expect = x.norm() * y.norm();
        CHECK(injective_norm(z) == Approx(expect).margin(1e-10));
        CHECK(projective_norm(z) == Approx(expect).margin(1e-10));
        auto l = l_norm_bounds(z);
        auto r = r_norm_bounds(z);
        auto m_ = m_norm_bounds(z);
        CHECK(l.lower == Approx(expect).margin(1e-10));
        CHECK(l.upper == Approx(expect).margin(1e-10));
        CHECK(r.upper == Approx(expect).margin(1e-10));
        CHECK(m_.lower == Approx(expect).margin(1e-10));
        CHECK(m_.upper == Approx(expect).margin(1e-10));
    }
}

TEST_CASE("identity tensor norms", "[tensor]") {
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    TensorElement z(id);
    CHECK(injective_norm(z) == Approx(1.0));
    CHECK(projective_norm(z) == Approx(2.0));
    auto l = l_norm_bounds(z);
    CHECK(l.lower == Approx(1.0));
    // the SVD representation gives sqrt(2); the search may only improve on it
    CHECK(l.upper <= std::sqrt(2.0) + 1e-9);
    CHECK(l.upper >= l.lower - 1e-12);
    CHECK(l.upper <= 2.0 + 1e-9);
}

TEST_CASE("zero tensor", "[tensor]") {
    TensorElement z(Eigen::MatrixXcd::Zero(3, 2));
    CHECK(injective_norm(z) == 0.0);
    CHECK(projective_norm(z) == 0.0);
    auto l = l_norm_bounds(z);
    CHECK(l.lower == 0.0);
    CHECK(l.upper == 0.0);
}

TEST_CASE("r bounds are l bounds of the swapped tensor", "[tensor]") {
    Rng rng(23);
    auto z = random_tensor(rng, 3, 5);
    auto r = r_norm_bounds(z);
    auto l_swapped = l_norm_bounds(z.swapped());
    CHECK(r.lower == l_swapped.lower);
    CHECK(r.upper == l_swapped.upper);
}

TEST_CASE("m bounds are means of l and r bounds", "[tensor]") {
    Rng rng(29);
    auto z = random_tensor(rng, 4, 3);
    auto l = l_norm_bounds(z);
    auto r = r_norm_bounds(z);
    auto m = m_norm_bounds(z);
    CHECK(m.lower == Approx(0.5 * (l.lower + r.lower)).margin(1e-14));
    CHECK(m.upper == Approx(0.5 * (l.upper + r.upper)).margin(1e-14));
    CHECK(m.upper >= std::min(l.upper, r.upper) - 1e-12);
    CHECK(m.upper <= std::max(l.upper, r.upper) + 1e-12);
}

TEST_CASE("norm sandwich on random tensors", "[tensor][property]") {
    Rng rng(31);
    for (int rep = 0; rep < 60; ++rep) {
        int m = 1 + static_cast<int>(rng.next_u64() % 6);
        int n = 1 + static_cast<int>(rng.next_u64() % 6);
        auto z = random_tensor(rng, m, n);
        const double inj = injective_norm(z);
        const double proj = projective_norm(z);
        for (const auto& iv : {l_norm_bounds(z), r_norm_bounds(z), m_norm_bounds(z)}) {
            CHECK(iv.lower == Approx(inj).margin(1e-10));
            CHECK(iv.lower <= iv.upper + 1e-10);
            CHECK(iv.upper <= proj + 1e-8);
        }
    }
}

TEST_CASE("projective norm equals the representation-search value", "[tensor][property]") {
    Rng rng(37);
    for (int rep = 0; rep < 20; ++rep) {
        int m = 2 + static_cast<int>(rng.next_u64() % 4);
        int n = 2 + static_cast<int>(rng.next_u64() % 4);
        auto z = random_tensor(rng, m, n);
        double min_found = 0;
        double svd_cost = projective_rep_search(z, rng, &min_found);
        const double proj = projective_norm(z);
        CHECK(svd_cost == Approx(proj).epsilon(1e-10));
        CHECK(min_found >= proj - 1e-6);
        CHECK(min_found == Approx(proj).epsilon(1e-6));
    }
}

TEST_CASE("injective and projective are homogeneous subadditive norms", "[tensor][property]") {
    Rng rng(41);
    for (int rep = 0; rep < 25; ++rep) {
        int m = 2 + static_cast<int>(rng.next_u64() % 4);
        int n = 2 + static_cast<int>(rng.next_u64() % 4);
        auto a = random_tensor(rng, m, n);
        auto b = random_tensor(rng, m, n);
        const Complex c = rng.cnormal();
        TensorElement ca(c * a.coeffs());
        TensorElement sum(a.coeffs() + b.coeffs());
        CHECK(injective_norm(ca) == Approx(std::abs(c) * injective_norm(a)).margin(1e-10));
        CHECK(projective_norm(ca) == Approx(std::abs(c) * projective_norm(a)).margin(1e-10));
        CHECK(injective_norm(sum) <= injective_norm(a) + injective_norm(b) + 1e-10);
        CHECK(projective_norm(sum) <= projective_norm(a) + projective_norm(b) + 1e-10);
    }
}

TEST_CASE("representation reconstructs its tensor", "[tensor]") {
    Rng rng(43);
    auto z = random_tensor(rng, 3, 3);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(z.coeffs(),
                                           Eigen::ComputeThinU | Eigen::ComputeThinV);
    Representation rep;
    for (int l = 0; l < 3; ++l)
        rep.pairs.emplace_back(svd.singularValues()[l] * svd.matrixU().col(l),
                               svd.matrixV().col(l).conjugate());
    CHECK(rep.reproduces(z));
    rep.pairs[0].first *= 1.001;
    CHECK(!rep.reproduces(z));
}

TEST_CASE("hilbert-schmidt norm", "[tensor]") {
    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 4;
    CHECK(hs_norm(d) == Approx(5.0));
    CHECK(hs_norm(Eigen::MatrixXcd::Identity(7, 7)) == Approx(std::sqrt(7.0)));

    Rng rng(47);
    Eigen::VectorXcd u = rng.gaussian_cvector(4), v = rng.gaussian_cvector(4);
    CHECK(hs_norm(u * v.adjoint()) == Approx(u.norm() * v.norm()).epsilon(1e-12));
}

TEST_CASE("p-summing bound basics", "[tensor]") {
    Eigen::MatrixXcd one = Eigen::MatrixXcd::Identity(1, 1);
    for (double p : {1.0, 1.5, 2.0, 3.0})
        CHECK(p_summing_lower_bound(one, p) == Approx(1.0).margin(1e-12));

    Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(2, 2);
    d(0, 0) = 3;
    d(1, 1) = 4;
    CHECK(p_summing_lower_bound(d, 2.0) == Approx(5.0).epsilon(1e-12));

    CHECK(p_summing_lower_bound(Eigen::MatrixXcd::Identity(2, 2), 2.0) ==
          Approx(std::sqrt(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(p_summing_lower_bound(d, 0.5), std::invalid_argument);
}

TEST_CASE("p = 2 bound equals the Hilbert-Schmidt norm", "[tensor][property]") {
    Rng rng(53);
    for (int rep = 0; rep < 25; ++rep) {
        int n = 1 + static_cast<int>(rng.next_u64() % 6);
        Eigen::MatrixXcd t = rng.gaussian_cmatrix(n, n);
        CHECK(p_summing_lower_bound(t, 2.0) == Approx(hs_norm(t)).epsilon(1e-10));
    }
}

TEST_CASE("p-summing bounds are non-increasing in p on fixed families", "[tensor][property]") {
    Rng rng(59);
    FamilyConfig cfg;
    cfg.include_gaussian = false;  // exact denominators only: transfer-closed set
    for (int rep = 0; rep < 20; ++rep) {
        int n = 2 + static_cast<int>(rng.next_u64() % 5);
        Eigen::MatrixXcd t = rng.gaussian_cmatrix(n, n);
        double prev = std::numeric_limits<double>::infinity();
        for (double p : {1.0, 1.5, 2.0, 3.0, 4.0}) {
            double bound = p_summing_lower_bound(t, p, cfg);
            CHECK(bound <= prev + 1e-10);
            prev = bound;
        }
    }
}

TEST_CASE("weak norm of scaled orthonormal families is exact", "[tensor][property]") {
    Rng rng(61);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const int k = 1 + static_cast<int>(rng.next_u64() % n);
        Eigen::MatrixXcd q = rng.unitary(n).leftCols(k);
        Eigen::VectorXd lambda(k);
        for (int j = 0; j < k; ++j) lambda[j] = 0.2 + rng.uniform();
        for (double p : {1.0, 1.3, 2.0, 3.0, 4.0}) {
            const double den = vmt::detail::weak_p_norm_scaled_orthonormal(lambda, p);
            auto value_at = [&](const Eigen::VectorXcd& v) {
                double s = 0;
                for (int j = 0; j < k; ++j)
                    s += std::pow(lambda[j] * std::abs(q.col(j).dot(v)), p);
                return std::pow(s, 1.0 / p);
            };
            // the analytic maximizer attains the closed form...
            Eigen::VectorXcd vstar;
            if (p >= 2.0) {
                int arg = 0;
                lambda.maxCoeff(&arg);
                vstar = q.col(arg);
            } else {
                Eigen::VectorXd t(k);
                for (int j = 0; j < k; ++j) t[j] = std::pow(lambda[j], 2.0 * p / (2.0 - p));
                t /= t.sum();
                vstar = Eigen::VectorXcd::Zero(n);
                for (int j = 0; j < k; ++j) vstar += std::sqrt(t[j]) * q.col(j);
            }
            CHECK(value_at(vstar) == Approx(den).epsilon(1e-10));
            // ...and no sampled direction exceeds it
            for (int s = 0; s < 40; ++s)
                CHECK(value_at(rng.unit_cvector(n)) <= den + 1e-10);
        }
    }
}

TEST_CASE("generic weak norm bound dominates sampled values", "[tensor][property]") {
    Rng rng(67);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 5);
        const int k = 1 + static_cast<int>(rng.next_u64() % 6);
        Eigen::MatrixXcd fam = rng.gaussian_cmatrix(n, k);
        for (double p : {1.0, 1.5, 2.0, 3.0}) {
            const double upper = vmt::detail::weak_p_norm_upper(fam, p);
            for (int s = 0; s < 40; ++s) {
                const Eigen::VectorXcd v = rng.unit_cvector(n);
                double acc = 0;
                for (int j = 0; j < k; ++j) acc += std::pow(std::abs(v.dot(fam.col(j))), p);
                CHECK(std::pow(acc, 1.0 / p) <= upper + 1e-10);
            }
        }
    }
}

TEST_CASE("one-summing check for the l1 to l2 inclusion", "[tensor]") {
    const double c = 12.0 * std::sqrt(std::numbers::pi);

    // {e1, e2}: lhs = 2, sup over sign functionals = 2
    Eigen::MatrixXd fam(2, 2);
    fam << 1, 0, 0, 1;
    double lhs = fam.col(0).norm() + fam.col(1).norm();
    double den = 0;
    for (uint64_t mask = 0; mask < 4; ++mask) {
        double s = 0;
        for (int j = 0; j < 2; ++j) {
            double dot = 0;
            for (int i = 0; i < 2; ++i) dot += ((mask >> i) & 1 ? 1.0 : -1.0) * fam(i, j);
            s += std::abs(dot);
        }
        den = std::max(den, s);
    }
    CHECK(lhs == Approx(2.0));
    CHECK(den == Approx(2.0));
    CHECK(lhs <= c * den);

    auto report = khintchine_summing_check(8, 60, 2027);
    CHECK(report.passed);
    CHECK(report.cases == 60);
    CHECK(report.max_ratio <= report.constant);
    CHECK(report.max_ratio > 0);
}
