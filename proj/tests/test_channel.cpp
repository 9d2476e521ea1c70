// SPDX-License-Identifier: Apache-2.0
//
// beamkit: hybrid beamforming for THz ultra-massive MIMO radar-communications
// Copyright (C) 2026 The beamkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <cmath>
#include <random>

#include "doctest.h"

#include "beamkit/channel.hpp"
#include "beamkit/linalg.hpp"
#include "oracles.hpp"

using namespace beamkit;

namespace
{
    const double f_c = 300e9;
    const double lambda_c = speed_of_light / f_c;

    ArrayGeometry geom(int nx, int ny, int qx, int qy)
    {
        return {nx, ny, qx, qy, lambda_c / 4, lambda_c / 4, lambda_c / 2, lambda_c / 2};
    }

    CMatrix random_matrix(Index r, Index c, std::uint64_t seed)
    {
        Rng rng(seed);
        CMatrix a(r, c);
        for (Index j = 0; j < c; ++j)
            for (Index i = 0; i < r; ++i)
                a(i, j) = rng.complex_normal();
        return a;
    }

    double rel_err(const CMatrix &a, const CMatrix &b) { return (a - b).norm() / b.norm(); }
}

TEST_CASE("subcarrier frequencies")
{
    CHECK(subcarrier_frequencies({f_c, 15e9, 1}) == std::vector<double>{f_c});

    const auto f = subcarrier_frequencies({f_c, 15e9, 64});
    REQUIRE(f.size() == 64);
    CHECK(f.front() == doctest::Approx(300e9 + (15e9 / 64) * -31.5).epsilon(1e-15));
    CHECK(f.front() == doctest::Approx(292.6171875e9).epsilon(1e-15));
    double mean = 0.0;
    for (int m = 0; m < 64; ++m)
    {
        CHECK(f[m] == doctest::Approx(oracle::subcarrier(f_c, 15e9, 64, m + 1)).epsilon(1e-15));
        if (m > 0)
            CHECK(f[m] > f[m - 1]);
        CHECK(f[m] + f[63 - m] == doctest::Approx(2 * f_c).epsilon(1e-15));
        mean += f[m] / 64;
    }
    CHECK(mean == doctest::Approx(f_c).epsilon(1e-14));
    CHECK_THROWS(subcarrier_frequencies({1e9, 3e9, 16}));
}

TEST_CASE("LoS gain")
{
    const double d_unit = speed_of_light / (4 * pi * f_c);
    CHECK(los_gain(f_c, d_unit, 2.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(los_gain(f_c, 20.0, 4.0, 0.0) == doctest::Approx(los_gain(f_c, 10.0, 4.0, 0.0) / 4).epsilon(1e-14));

    // (c0 / (4 pi f d))^(4/2) exp(-0.01 * 10 / 2), evaluated by hand
    const double spread = 299792458.0 / (4 * 3.141592653589793 * 300e9 * 10.0);
    CHECK(los_gain(f_c, 10.0, 4.0, 0.01) == doctest::Approx(spread * spread * std::exp(-0.05)).epsilon(1e-14));

    double prev = INFINITY;
    for (double d = 0.5; d < 100; d *= 1.3)
    {
        const double g = los_gain(f_c, d, 3.0, 0.02);
        CHECK(g < prev);
        prev = g;
    }
    CHECK_THROWS(los_gain(f_c, 0.0, 2.0, 0.0));
}

TEST_CASE("absorption table lookup")
{
    const AbsorptionTable t = AbsorptionTable::parse("# f kappa\n100e9 0.001\n300e9 0.01\n\n400e9 0.1\n");
    CHECK(t(50e9) == 0.001);
    CHECK(t(100e9) == 0.001);
    CHECK(t(299e9) == 0.001);
    CHECK(t(300e9) == 0.01);
    CHECK(t(1e12) == 0.1);
    CHECK(AbsorptionTable{}(300e9) == 0.0);
    CHECK_THROWS(AbsorptionTable::parse("300e9 0.1\n200e9 0.1\n"));
    CHECK_THROWS(AbsorptionTable::parse("300e9\n"));
}

TEST_CASE("degenerate scalar channel")
{
    const ArrayGeometry one{1, 1, 1, 1, 0, 0, 0, 0};
    ChannelScene scene;
    scene.n_clusters = 0;
    scene.path_loss_exponent = 2.0;
    scene.distance_m = speed_of_light / (4 * pi * f_c);
    scene.normalize_gains = false;
    const auto ch = generate_channel(one, one, {f_c, 0.0, 1}, scene, 5);
    REQUIRE(ch.h.size() == 1);
    CHECK(std::abs(ch.h[0](0, 0) - cd(1.0, 0.0)) <= 1e-14);
}

TEST_CASE("LoS-only channel has rank at most Q")
{
    const ArrayGeometry tx = geom(4, 4, 2, 1), rx = geom(3, 3, 2, 1);
    ChannelScene scene;
    scene.n_clusters = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto ch = generate_channel(tx, rx, {f_c, 15e9, 4}, scene, seed);
        for (const CMatrix &h : ch.h)
            CHECK(numerical_rank(h) <= 2);
    }
}

TEST_CASE("matrix-product channel matches the scalar loop oracle")
{
    struct Case
    {
        ArrayGeometry tx, rx;
        int clusters;
    };
    const std::vector<Case> cases{{geom(4, 1, 1, 1), geom(2, 1, 1, 1), 1},
                                  {geom(4, 2, 2, 2), geom(2, 2, 2, 2), 4},
                                  {geom(2, 3, 3, 1), geom(3, 1, 3, 1), 2}};
    for (const Case &c : cases)
    {
        ChannelScene scene;
        scene.n_clusters = c.clusters;
        const auto ch = generate_channel(c.tx, c.rx, {f_c, 30e9, 5}, scene, 77);
        REQUIRE(int(ch.paths.size()) == 1 + c.clusters);
        for (std::size_t m = 0; m < ch.h.size(); ++m)
        {
            const CMatrix ref = oracle::channel_loop(c.tx, c.rx, ch.paths, m, ch.frequencies[m], ch.gamma);
            CHECK(rel_err(ch.h[m], ref) <= 1e-12);
        }
    }
}

TEST_CASE("channel generation is deterministic and shares angles across subcarrier grids")
{
    const ArrayGeometry tx = geom(4, 4, 2, 2), rx = geom(2, 2, 2, 2);
    const ChannelScene scene;
    const auto a = generate_channel(tx, rx, {f_c, 15e9, 8}, scene, 42);
    const auto b = generate_channel(tx, rx, {f_c, 15e9, 8}, scene, 42);
    for (std::size_t m = 0; m < a.h.size(); ++m)
        CHECK((a.h[m] - b.h[m]).norm() == 0.0);

    const auto narrow = generate_channel(tx, rx, {f_c, 0.0, 1}, scene, 42);
    for (std::size_t l = 0; l < a.paths.size(); ++l)
    {
        CHECK(a.paths[l].aod.azimuth_deg == narrow.paths[l].aod.azimuth_deg);
        CHECK(a.paths[l].aoa.elevation_deg == narrow.paths[l].aoa.elevation_deg);
    }

    int los = 0;
    for (const auto &p : a.paths)
    {
        los += p.is_los;
        CHECK(p.aod.azimuth_deg >= -150.0);
        CHECK(p.aod.azimuth_deg <= 150.0);
        CHECK(p.aod.elevation_deg >= 70.0);
        CHECK(p.aod.elevation_deg <= 90.0);
    }
    CHECK(los == 1);
    CHECK(std::abs(a.paths[0].gains[0]) > 0.0);

    const auto c = generate_channel(tx, rx, {f_c, 15e9, 8}, scene, 43);
    CHECK((a.h[0] - c.h[0]).norm() > 0.0);
}

TEST_CASE("NLoS gain magnitude follows the configured power ratio")
{
    const ArrayGeometry tx = geom(2, 2, 1, 1), rx = geom(2, 1, 1, 1);
    ChannelScene scene;
    scene.nlos_ratio_db = -6.0;
    const auto ch = generate_channel(tx, rx, {f_c, 15e9, 4}, scene, 9);
    for (std::size_t m = 0; m < 4; ++m)
        for (std::size_t l = 1; l < ch.paths.size(); ++l)
            CHECK(std::abs(ch.paths[l].gains[m]) ==
                  doctest::Approx(std::abs(ch.paths[0].gains[m]) * std::pow(10.0, -6.0 / 20)).epsilon(1e-13));
    // gains are normalized to the LoS gain at f_c, so the lower subcarriers are slightly stronger
    CHECK(std::abs(ch.paths[0].gains[0]) > 1.0);
    CHECK(std::abs(ch.paths[0].gains[3]) < 1.0);
}

TEST_CASE("scene validation")
{
    ChannelScene s;
    s.azimuth_deg = {10.0, 5.0};
    CHECK_THROWS(s.validate());
    s = {};
    s.distance_m = 0.0;
    CHECK_THROWS(s.validate());
    s = {};
    s.nlos_ratio_db = NAN;
    CHECK_THROWS(s.validate());
}

TEST_CASE("unconstrained precoder")
{
    SUBCASE("identity channel")
    {
        const CMatrix f = unconstrained_precoder(CMatrix::Identity(2, 2), 1);
        CHECK(std::abs(std::abs(f(0, 0)) - 1.0) + std::abs(f(1, 0)) <= 1e-12);
        CHECK(f(0, 0).real() > 0.0);
    }
    SUBCASE("captured power matches the Gram eigenvalues")
    {
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
        {
            const CMatrix h = random_matrix(4, 6, seed);
            const CMatrix f = unconstrained_precoder(h, 2);
            const Eigen::VectorXd ev = oracle::gram_eigenvalues(h);
            CHECK((h * f).squaredNorm() == doctest::Approx(ev(0) + ev(1)).epsilon(1e-10));
            CHECK(f.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
            CHECK((f.adjoint() * f - CMatrix::Identity(2, 2)).norm() <= 1e-12);
            for (Index j = 0; j < f.cols(); ++j)
            {
                Index imax = 0;
                f.col(j).cwiseAbs().maxCoeff(&imax);
                CHECK(std::abs(f(imax, j).imag()) <= 1e-14);
                CHECK(f(imax, j).real() > 0.0);
            }
        }
    }
    SUBCASE("too many streams for the channel rank")
    {
        const CMatrix h = random_matrix(4, 1, 3) * random_matrix(1, 6, 4);
        CHECK_THROWS(unconstrained_precoder(h, 2));
    }
}

TEST_CASE("covariance matches the path-sum oracle")
{
    const ArrayGeometry tx = geom(3, 2, 2, 2), rx = geom(2, 2, 2, 2);
    const ChannelScene scene;
    const auto ch = generate_channel(tx, rx, {f_c, 15e9, 3}, scene, 21);

    for (std::size_t m = 0; m < 3; ++m)
        for (CovarianceMode mode : {CovarianceMode::exact, CovarianceMode::los_approx})
        {
            const CMatrix c = channel_covariance(ch.paths, tx, ch.frequencies[m], int(m), ch.gamma, mode);
            CMatrix ref = CMatrix::Zero(6, 6);
            for (const auto &p : ch.paths)
            {
                if (mode == CovarianceMode::los_approx && !p.is_los)
                    continue;
                for (int t = 0; t < 6; ++t)
                    for (int u = 0; u < 6; ++u)
                        for (int q = 0; q < 4; ++q)
                            ref(t, u) += std::norm(p.gains[m]) * ch.gamma * ch.gamma *
                                         oracle::steering(tx, t, q, p.aod.azimuth_deg, p.aod.elevation_deg,
                                                          ch.frequencies[m]) *
                                         std::conj(oracle::steering(tx, u, q, p.aod.azimuth_deg,
                                                                    p.aod.elevation_deg, ch.frequencies[m]));
            }
            CHECK(rel_err(c, ref) <= 1e-12);

            CHECK((c - c.adjoint()).norm() <= 1e-10 * c.norm());
            Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
            CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());
            if (mode == CovarianceMode::los_approx)
                CHECK(numerical_rank(c) <= tx.q());
        }
}

TEST_CASE("covariance with a single path: both modes agree")
{
    const ArrayGeometry tx = geom(4, 1, 1, 1), rx = geom(2, 1, 1, 1);
    ChannelScene scene;
    scene.n_clusters = 0;
    const auto ch = generate_channel(tx, rx, {f_c, 0.0, 1}, scene, 2);
    const CMatrix exact = channel_covariance(ch, tx, CovarianceMode::exact)[0];
    const CMatrix approx = channel_covariance(ch, tx, CovarianceMode::los_approx)[0];
    CHECK((exact - approx).norm() == 0.0);
    CHECK(numerical_rank(approx) == 1);

    std::vector<PathParams> nlos_only(ch.paths);
    nlos_only[0].is_los = false;
    CHECK_THROWS(channel_covariance(nlos_only, tx, f_c, 0, 1.0, CovarianceMode::los_approx));
}

TEST_CASE("statistical precoder")
{
    SUBCASE("diagonal covariance")
    {
        CMatrix c = CMatrix::Zero(3, 3);
        c.diagonal() << 3.0, 2.0, 1.0;
        const CMatrix f = statistical_precoder(c, 2);
        CHECK((f - CMatrix::Identity(3, 2)).norm() <= 1e-12);
    }
    SUBCASE("trace equals the top eigenvalues and beats random orthonormal candidates")
    {
        const ArrayGeometry tx = geom(4, 2, 2, 2), rx = geom(2, 2, 2, 2);
        const ChannelScene scene;
        const auto ch = generate_channel(tx, rx, {f_c, 0.0, 1}, scene, 8);
        const CMatrix c = channel_covariance(ch, tx, CovarianceMode::los_approx)[0];
        const int n_s = 2;
        const CMatrix f = statistical_precoder(c, n_s);
        const double achieved = (f.adjoint() * c * f).trace().real();

        Eigen::SelfAdjointEigenSolver<CMatrix> es(c);
        const Eigen::VectorXd ev = es.eigenvalues().reverse();
        CHECK(achieved == doctest::Approx(ev(0) + ev(1)).epsilon(1e-10));
        CHECK((f.adjoint() * f - CMatrix::Identity(n_s, n_s)).norm() <= 1e-12);

        double best = -INFINITY;
        for (std::uint64_t k = 0; k < 10000; ++k)
        {
            const CMatrix q = Eigen::HouseholderQR<CMatrix>(random_matrix(8, n_s, 1000 + k)).householderQ() *
                              CMatrix::Identity(8, n_s);
            best = std::max(best, (q.adjoint() * c * q).trace().real());
        }
        CHECK(best <= achieved * (1 + 1e-12));
    }
}

TEST_CASE("rng is reproducible and in range")
{
    Rng a(5), b(5);
    for (int i = 0; i < 1000; ++i)
    {
        const double u = a.uniform();
        CHECK(u == b.uniform());
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    Rng n(1);
    double s = 0, s2 = 0;
    const int count = 200000;
    for (int i = 0; i < count; ++i)
    {
        const double x = n.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / count) < 0.01);
    CHECK(std::abs(s2 / count - 1.0) < 0.02);
}
