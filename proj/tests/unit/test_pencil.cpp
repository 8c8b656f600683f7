#include <gtest/gtest.h>

#include <algorithm>
#include <numbers>
#include <random>

#include "ftdoa/error.hpp"
#include "ftdoa/experiment.hpp"
#include "ftdoa/pencil.hpp"
#include "test_support.hpp"

using namespace ftdoa;

namespace {

const std::vector<double> kSixAngles{0, 5, 10, 15, 20, 30};

// Noiseless pencil pair for the given angles, assembled from the
// exponential model without going through the library.
std::pair<ComplexMatrix, ComplexMatrix> noiseless_pair(const std::vector<double>& angles, std::size_t m,
                                                       std::size_t window, std::uint64_t seed) {
    std::vector<cdouble> poles;
    for (double a : angles) poles.push_back(test::pole(a));
    const Eigen::VectorXcd x = test::exponential_sum(poles, test::unit_phases(angles.size(), seed), m);
    const Eigen::MatrixXcd h = test::hankel_of(x, window);
    return {h.leftCols(static_cast<Eigen::Index>(window)), h.rightCols(static_cast<Eigen::Index>(window))};
}

// Greedy nearest match; returns the worst distance.
double set_distance(std::vector<cdouble> got, const std::vector<cdouble>& want) {
    double worst = 0.0;
    for (cdouble w : want) {
        auto it = std::min_element(got.begin(), got.end(),
                                   [&](cdouble a, cdouble b) { return std::abs(a - w) < std::abs(b - w); });
        worst = std::max(worst, std::abs(*it - w));
        got.erase(it);
    }
    return worst;
}

Snapshot noiseless_snapshot(const std::vector<double>& angles, std::size_t m, std::uint64_t seed) {
    return snapshot(ArrayConfig{m, 0.5, 1.0}, gen_sources(angles.size(), seed, angles), kNoiseless, 0);
}

}  // namespace

TEST(TlsFilter, ExactRankIsUnchanged) {
    const ComplexMatrix x = test::random_rank(9, 7, 3, 11);
    EXPECT_LE(test::relative_error(tls_filter(x, 3), x), 1e-12);
}

TEST(TlsFilter, EckartYoungOnPerturbedRankOne) {
    const ComplexMatrix base = test::random_rank(8, 6, 1, 4);
    ComplexMatrix noise = test::random_matrix(8, 6, 99);
    noise *= 1e-6 / noise.norm();
    const ComplexMatrix filtered = tls_filter(base + noise, 1);
    EXPECT_LE((filtered - base).norm(), 2e-6);
    EXPECT_LE(linalg::singular_values(filtered)(1), 1e-12 * filtered.norm());
}

TEST(TlsFilter, FullRankRequestIsIdentity) {
    const ComplexMatrix x = test::random_matrix(5, 4, 2);
    EXPECT_EQ(tls_filter(x, 4), x);
    EXPECT_EQ(tls_filter(x, 9), x);
}

TEST(TlsFilter, ZeroRankIsParameterError) {
    try {
        tls_filter(ComplexMatrix::Identity(3, 3), 0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parameter);
    }
}

TEST(PencilEigs, SingleSourceAtThirtyDegrees) {
    const auto [x1, x2] = noiseless_pair({30.0}, 8, 3, 1);
    const PoleSet p = pencil_eigs(x1, x2, 1);
    ASSERT_EQ(p.poles.size(), 1u);
    EXPECT_LE(std::abs(p.poles[0] - cdouble(0, 1)), 1e-10);
}

TEST(PencilEigs, TwoSources) {
    const auto [x1, x2] = noiseless_pair({0.0, 30.0}, 12, 4, 2);
    const PoleSet p = pencil_eigs(x1, x2, 2);
    EXPECT_LE(set_distance(p.poles, {cdouble(1, 0), cdouble(0, 1)}), 1e-8);
}

TEST(PencilEigs, NoiselessPolesOnUnitCircle) {
    const auto [x1, x2] = noiseless_pair(kSixAngles, 100, 33, 3);
    const PoleSet p = pencil_eigs(tls_filter(x1, 6), tls_filter(x2, 6), 6);
    for (cdouble z : p.poles) {
        EXPECT_NEAR(std::abs(z), 1.0, 1e-6);
    }
}

TEST(PencilEigs, ShiftIdentityOnSmallArrays) {
    // Brute force over small geometries: the generating poles come back and
    // X1 * (pinv(X1) X2) reproduces X2.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-60.0, 60.0);
    for (std::size_t m = 4; m <= 12; ++m) {
        for (std::size_t n = 1; n <= 2; ++n) {
            if (2 * n > max_window(m)) continue;
            std::vector<double> angles{angle(rng)};
            if (n == 2) angles.push_back(angles[0] > 0 ? angles[0] - 40.0 : angles[0] + 40.0);
            const std::size_t window = std::max(n, max_window(m) - 1);
            const auto [x1, x2] = noiseless_pair(angles, m, window, m * 10 + n);
            std::vector<cdouble> poles;
            for (double a : angles) poles.push_back(test::pole(a));
            const PoleSet got = pencil_eigs(x1, x2, n);
            EXPECT_LE(set_distance(got.poles, poles), 1e-8) << "M=" << m << " N=" << n;
            const ComplexMatrix shift = linalg::pinv(x1) * x2;
            EXPECT_LE((x1 * shift - x2).norm(), 1e-9 * x2.norm());
        }
    }
}

TEST(PencilEigs, SwappedPairGivesReciprocalPoles) {
    const auto [x1, x2] = noiseless_pair({-20.0, 10.0, 40.0}, 40, 13, 7);
    const PoleSet forward = pencil_eigs(x1, x2, 3);
    const PoleSet backward = pencil_eigs(x2, x1, 3);
    std::vector<cdouble> reciprocal;
    for (cdouble z : forward.poles) reciprocal.push_back(1.0 / z);
    EXPECT_LE(set_distance(backward.poles, reciprocal), 1e-8);

    const ArrayConfig cfg{40};
    const auto a = doa_from_poles(forward, cfg);
    auto b = doa_from_poles(backward, cfg);
    for (double& v : b) v = -v;
    std::sort(b.begin(), b.end());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_NEAR(a[i], b[i], 1e-8);
    }
}

TEST(PencilEigs, Errors) {
    try {
        pencil_eigs(ComplexMatrix::Ones(4, 3), ComplexMatrix::Ones(4, 2), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Shape);
    }
    try {
        pencil_eigs(ComplexMatrix::Zero(5, 3), ComplexMatrix::Zero(5, 3), 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankDeficiency);
    }
    const auto [x1, x2] = noiseless_pair({10.0}, 12, 4, 1);
    try {
        pencil_eigs(x1, x2, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::RankDeficiency);
    }
}

TEST(DoaFromPoles, Inversion) {
    const ArrayConfig cfg{};
    EXPECT_NEAR(doa_from_poles(PoleSet{{std::polar(1.0, std::numbers::pi / 2)}}, cfg)[0], 30.0, 1e-12);
    EXPECT_EQ(doa_from_poles(PoleSet{{cdouble(1.0, 0.0)}}, cfg)[0], 0.0);
    EXPECT_EQ(doa_from_poles(PoleSet{{cdouble(-1.0, 0.0)}}, cfg)[0], 90.0);
}

TEST(DoaFromPoles, SortsAscending) {
    const auto angles = doa_from_poles(PoleSet{{test::pole(20), test::pole(-5), test::pole(3)}}, ArrayConfig{});
    EXPECT_TRUE(std::is_sorted(angles.begin(), angles.end()));
    EXPECT_NEAR(angles[0], -5.0, 1e-12);
}

TEST(DoaFromPoles, OutsideVisibleRegionIsAmbiguity) {
    const ArrayConfig quarter{10, 0.25, 1.0};
    try {
        doa_from_poles(PoleSet{{cdouble(-1.0, 1e-3)}}, quarter);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Ambiguity);
        EXPECT_NE(std::string(e.what()).find("pole"), std::string::npos);
    }
}

TEST(TlsMp, NoiselessSixSourcesExact) {
    const DoaEstimate est = tls_mp(noiseless_snapshot(kSixAngles, 100, 1), PencilParams{33, 6}, ArrayConfig{});
    ASSERT_EQ(est.angles_deg.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_NEAR(est.angles_deg[i], kSixAngles[i], 1e-8);
    }
    EXPECT_GT(est.singular_gap, 1e8);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_LE(std::abs(est.poles.poles[i] - test::pole(kSixAngles[i])), 1e-8);
    }
}

TEST(TlsMp, NoisyAccuracyAt24dB) {
    const ArrayConfig cfg{};
    double worst = 0.0;
    double sum_rmse = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Snapshot x = snapshot(cfg, gen_sources(6, seed, kSixAngles), 24.0, 100 + seed);
        const DoaEstimate est = tls_mp(x, PencilParams{33, 6}, cfg);
        for (std::size_t i = 0; i < 6; ++i) {
            worst = std::max(worst, std::abs(est.angles_deg[i] - kSixAngles[i]));
        }
        sum_rmse += rmse(kSixAngles, est.angles_deg);
    }
    EXPECT_LT(worst, 0.05);
    EXPECT_LT(sum_rmse / 10.0, 0.01);
}

TEST(TlsMp, WindowSmallerThanSourcesIsParameterError) {
    try {
        tls_mp(noiseless_snapshot(kSixAngles, 100, 1), PencilParams{1, 6}, ArrayConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Parameter);
    }
    EXPECT_THROW(tls_mp(noiseless_snapshot(kSixAngles, 100, 1), PencilParams{51, 6}, ArrayConfig{}), Error);
}

TEST(TlsMp, NoiselessExactnessProperty) {
    // Random scenarios: N <= 8 sources in (-60, 60) degrees separated by at
    // least two resolution cells in sin(theta), M >= 4N.
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<std::size_t> count(1, 8);
    std::uniform_real_distribution<double> angle(-59.9, 59.9);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n = count(rng);
        const std::size_t m = 4 * n + std::uniform_int_distribution<std::size_t>(0, 60)(rng);
        const double min_gap = 4.0 / static_cast<double>(m);
        std::vector<double> angles;
        while (angles.size() < n) {
            const double a = angle(rng);
            const double s = std::sin(a * std::numbers::pi / 180.0);
            const bool clear = std::all_of(angles.begin(), angles.end(), [&](double b) {
                return std::abs(std::sin(b * std::numbers::pi / 180.0) - s) >= min_gap;
            });
            if (clear) angles.push_back(a);
        }
        const DoaEstimate est =
            tls_mp(noiseless_snapshot(angles, m, trial), PencilParams::defaults(m, n), ArrayConfig{m, 0.5, 1.0});
        std::sort(angles.begin(), angles.end());
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(est.angles_deg[i], angles[i], 1e-8) << "trial " << trial << " M=" << m << " N=" << n;
        }
    }
}

TEST(TlsMp, SourceOrderDoesNotMatter) {
    const std::vector<double> fwd{-30, 0, 12, 45};
    const std::vector<double> rev{45, 12, 0, -30};
    const DoaEstimate a = tls_mp(noiseless_snapshot(fwd, 48, 3), PencilParams{16, 4}, ArrayConfig{48});
    const DoaEstimate b = tls_mp(noiseless_snapshot(rev, 48, 3), PencilParams{16, 4}, ArrayConfig{48});
    EXPECT_LE(set_distance(a.poles.poles, b.poles.poles), 1e-9);
}

TEST(FaultTolerant, NoFailuresBypassesCompletion) {
    const ArrayConfig cfg{};
    const Snapshot prev = snapshot(cfg, gen_sources(6, 1, kSixAngles), 24.0, 2);
    const Snapshot curr = snapshot(cfg, gen_sources(6, 3, kSixAngles), 24.0, 4);
    const DoaEstimate direct = tls_mp(curr, PencilParams{33, 6}, cfg);
    const DoaEstimate piped = fault_tolerant_estimate(prev, curr, PencilParams{33, 6}, cfg);
    EXPECT_EQ(piped.angles_deg, direct.angles_deg);
    EXPECT_EQ(piped.poles.poles, direct.poles.poles);
    EXPECT_TRUE(piped.failed_elements.empty());
    EXPECT_FALSE(piped.completion.has_value());
}

TEST(FaultTolerant, ForcedCompletionRunsSvt) {
    const ArrayConfig cfg{};
    const Snapshot prev = snapshot(cfg, gen_sources(6, 1, kSixAngles), 24.0, 2);
    const Snapshot curr = snapshot(cfg, gen_sources(6, 3, kSixAngles), 24.0, 4);
    FaultTolerantOptions opts;
    opts.force_completion = true;
    const DoaEstimate est = fault_tolerant_estimate(prev, curr, PencilParams{33, 6}, cfg, opts);
    ASSERT_TRUE(est.completion.has_value());
    EXPECT_GT(est.completion->iterations, 0);
    EXPECT_LT(rmse(kSixAngles, est.angles_deg), 0.05);
}

TEST(FaultTolerant, FiveFailuresAt24dB) {
    const ArrayConfig cfg{};
    double total = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Snapshot prev = snapshot(cfg, gen_sources(6, seed * 10, kSixAngles), 24.0, seed * 10 + 1);
        const Snapshot clean = snapshot(cfg, gen_sources(6, seed * 10 + 2, kSixAngles), 24.0, seed * 10 + 3);
        const auto failed = random_failure_indices(100, 5, seed);
        const Snapshot curr = inject_failures(clean, FailureSpec{failed, {FailureKind::StuckAtZero}});
        const DoaEstimate est = fault_tolerant_estimate(prev, curr, PencilParams{33, 6}, cfg);
        EXPECT_EQ(est.failed_elements, failed);
        ASSERT_TRUE(est.completion.has_value());
        total += rmse(kSixAngles, est.angles_deg);
    }
    EXPECT_LT(total / 5.0, 0.01);
}

TEST(FaultTolerant, ErrorsCarryStage) {
    const ArrayConfig cfg{};
    const Snapshot prev = snapshot(cfg, gen_sources(6, 1, kSixAngles), 24.0, 2);
    Snapshot short_curr = prev;
    short_curr.values.conservativeResize(60);
    try {
        fault_tolerant_estimate(prev, short_curr, PencilParams{33, 6}, cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.stage(), "detect");
        EXPECT_EQ(e.kind(), ErrorKind::Shape);
    }

    const Snapshot curr = inject_failures(snapshot(cfg, gen_sources(6, 5, kSixAngles), 24.0, 6),
                                          FailureSpec{{4, 9}, {FailureKind::StuckAtZero}});
    FaultTolerantOptions opts;
    opts.svt.delta = 50.0;
    opts.svt.k_max = 200;
    try {
        fault_tolerant_estimate(prev, curr, PencilParams{33, 6}, cfg, opts);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.stage(), "complete");
        EXPECT_EQ(e.kind(), ErrorKind::Divergence);
        EXPECT_NE(std::string(e.what()).find("[complete]"), std::string::npos);
    }
}
