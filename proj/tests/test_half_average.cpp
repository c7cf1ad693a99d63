#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "vmt/half_average.hpp"
#include "vmt/random.hpp"

using namespace vmt;
using Catch::Approx;

namespace {

VectorFamily family_of(std::initializer_list<std::initializer_list<double>> rows) {
    // rows are the vectors; transpose into d × n
    const int n = static_cast<int>(rows.size());
    const int d = static_cast<int>(rows.begin()->size());
    Eigen::MatrixXd vs(d, n);
    int j = 0;
    for (const auto& row : rows) {
        int i = 0;
        for (double val : row) vs(i++, j) = val;
        ++j;
    }
    return VectorFamily(d, vs);
}

// brute-force sampled check that no direction beats the returned one
double best_sampled_g(const VectorFamily& fam, Rng& rng, int samples) {
    double best = 0;
    for (int s = 0; s < samples; ++s) {
        Eigen::VectorXd e = rng.unit_vector(fam.d);
        double g = 0;
        for (int j = 0; j < fam.size(); ++j) g += std::max(0.0, fam.vectors.col(j).dot(e));
        best = std::max(best, g);
    }
    return best;
}

}  // namespace

TEST_CASE("closed form constants", "[halfavg]") {
    CHECK(cd_closed_form(2) == Approx(1.0 / std::numbers::pi).epsilon(1e-13));
    CHECK(cd_closed_form(3) == Approx(0.25).epsilon(1e-13));
    // normalized counting measure on {±1} gives 1/2 at d = 1
    CHECK(cd_closed_form(1) == Approx(0.5).epsilon(1e-13));
}

TEST_CASE("single vector family", "[halfavg]") {
    auto res = half_average_subset(family_of({{1.0, 0.0}}));
    REQUIRE(res.subset.size() == 1);
    CHECK(res.subset[0] == 0);
    CHECK(res.ratio == Approx(1.0));
    CHECK(res.bound_ok);
}

TEST_CASE("opposite vectors keep half the mass", "[halfavg]") {
    auto res = half_average_subset(family_of({{1.0, 0.0}, {-1.0, 0.0}}));
    CHECK(res.subset.size() == 1);
    CHECK(res.ratio == Approx(0.5));
    CHECK(res.ratio >= 1.0 / std::numbers::pi);
    CHECK(res.bound_ok);
}

TEST_CASE("equiangular fan approaches the planar constant", "[halfavg]") {
    const int m = 64;
    Eigen::MatrixXd vs(2, m);
    for (int k = 0; k < m; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / m;
        vs(0, k) = std::cos(angle);
        vs(1, k) = std::sin(angle);
    }
    auto res = half_average_subset(VectorFamily(2, vs));
    // best half-plane collects a half-circle arc: ratio = |Σ arc| / m
    const double expected = (1.0 / std::sin(std::numbers::pi / m)) / m;
    CHECK(res.ratio == Approx(expected).epsilon(1e-10));
    CHECK(res.ratio >= 1.0 / std::numbers::pi);
    CHECK(std::abs(res.ratio - 1.0 / std::numbers::pi) < 2e-4);
    CHECK(res.bound_ok);
}

TEST_CASE("zero vectors are dropped", "[halfavg]") {
    auto fam = family_of({{0.0, 0.0}, {2.0, 0.0}});
    CHECK(fam.size() == 1);
    auto res = half_average_subset(fam);
    REQUIRE(res.subset.size() == 1);
    CHECK(res.subset[0] == 1);  // original index
    CHECK(res.ratio == Approx(1.0));

    Eigen::MatrixXd zeros = Eigen::MatrixXd::Zero(2, 3);
    CHECK_THROWS_AS(half_average_subset(VectorFamily(2, zeros)), std::invalid_argument);
}

TEST_CASE("dimension one picks the heavier side", "[halfavg]") {
    Eigen::MatrixXd vs(1, 3);
    vs << 2.0, -1.0, -0.5;
    auto res = half_average_subset(VectorFamily(1, vs));
    CHECK(res.g_value == Approx(2.0));
    CHECK(res.ratio == Approx(2.0 / 3.5));
    CHECK(res.bound_ok);  // C_1 = 1/2 under the normalized convention
}

TEST_CASE("subset sum dominates the objective", "[halfavg][property]") {
    // |Σ_{j∈J} v_j| ≥ g(e0): first display of the proof
    Rng rng(89);
    for (int rep = 0; rep < 40; ++rep) {
        int d = 2 + static_cast<int>(rng.next_u64() % 4);
        int n = 1 + static_cast<int>(rng.next_u64() % 20);
        VectorFamily fam(d, rng.gaussian_matrix(d, n));
        if (fam.size() == 0) continue;
        auto res = half_average_subset(fam);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
        for (int j = 0; j < fam.size(); ++j)
            if (fam.vectors.col(j).dot(res.direction) > 0) sum += fam.vectors.col(j);
        CHECK(sum.norm() >= res.g_value - 1e-10);
        CHECK(res.ratio >= res.cd - 1e-9);
        CHECK(res.bound_ok);
    }
}

TEST_CASE("returned direction is not beaten by sampling", "[halfavg][property]") {
    Rng rng(97);
    for (int rep = 0; rep < 10; ++rep) {
        int d = 2 + static_cast<int>(rng.next_u64() % 3);
        int n = 2 + static_cast<int>(rng.next_u64() % 12);
        VectorFamily fam(d, rng.gaussian_matrix(d, n));
        auto res = half_average_subset(fam);
        CHECK(best_sampled_g(fam, rng, 4000) <= res.g_value + 1e-9);
    }
}

TEST_CASE("cd estimates reproduce the stated constants", "[halfavg]") {
    auto d2 = estimate_cd(2, 200000, 11);
    CHECK(std::abs(d2.estimate - 1.0 / std::numbers::pi) <= 4 * d2.stderr_);
    CHECK(d2.closed_form == Approx(1.0 / std::numbers::pi).epsilon(1e-13));

    auto d3 = estimate_cd(3, 200000, 13);
    CHECK(std::abs(d3.estimate - 0.25) <= 4 * d3.stderr_);

    auto d5 = estimate_cd(5, 100000, 17);
    CHECK(std::abs(d5.estimate - d5.closed_form) <= 4 * d5.stderr_);

    CHECK_THROWS_AS(estimate_cd(1, 100, 1), std::invalid_argument);
}

TEST_CASE("lemma guarantee on random families", "[halfavg][property]") {
    Rng rng(101);
    for (int rep = 0; rep < 60; ++rep) {
        int d = 1 + static_cast<int>(rng.next_u64() % 5);
        int n = 1 + static_cast<int>(rng.next_u64() % 50);
        VectorFamily fam(d, rng.gaussian_matrix(d, n));
        if (fam.size() == 0) continue;
        auto res = half_average_subset(fam);
        // Σ|v_j| ≤ |Σ_{j∈J} v_j| / C_d
        CHECK(fam.norm_sum() <= res.ratio * fam.norm_sum() / res.cd + 1e-6);
        CHECK(res.bound_ok);
    }
}
