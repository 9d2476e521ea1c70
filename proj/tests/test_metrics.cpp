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
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"

#include "beamkit/metrics.hpp"
#include "beamkit/radar.hpp"
#include "fixtures.hpp"

using namespace beamkit;
using fixture::random_matrix;

TEST_CASE("mutual information of a zero channel is zero")
{
    const CMatrix h = CMatrix::Zero(4, 6);
    const CMatrix f = random_matrix(6, 2, 1);
    CHECK(mutual_information(h, f, 10.0, 2) == 0.0);
}

TEST_CASE("scalar channel reduces to the Shannon formula")
{
    CMatrix h(1, 1), f(1, 1);
    h(0, 0) = cd(0.0, 2.0);
    f(0, 0) = 1.0;
    CHECK(mutual_information(h, f, 10.0, 1) == doctest::Approx(std::log2(41.0)).epsilon(1e-14));
}

TEST_CASE("right singular vectors diagonalize the channel")
{
    // Oracle: F = leading right singular vectors, so the value is sum log2(1 + snr sigma_i^2 / N_S)
    const CMatrix h = random_matrix(4, 6, 7);
    Eigen::JacobiSVD<CMatrix> svd(h, Eigen::ComputeFullV);
    const CMatrix f = svd.matrixV().leftCols(2);
    const double snr = 10.0;
    double expected = 0.0;
    for (int i = 0; i < 2; ++i)
        expected += std::log2(1.0 + snr * svd.singularValues()(i) * svd.singularValues()(i) / 2.0);
    CHECK(mutual_information(h, f, snr, 2) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("mutual information grows with the SNR")
{
    const CMatrix h = random_matrix(4, 6, 3);
    const CMatrix f = random_matrix(6, 2, 4);
    double prev = -1.0;
    for (double snr_db = -20; snr_db <= 30; snr_db += 5)
    {
        const double v = mutual_information(h, f, std::pow(10.0, snr_db / 10.0), 2);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("mutual information rejects non-conformable inputs")
{
    CHECK_THROWS_AS(mutual_information(random_matrix(4, 6, 1), random_matrix(5, 2, 2), 1.0, 2),
                    std::invalid_argument);
    CHECK_THROWS_AS(mutual_information(random_matrix(4, 6, 1), random_matrix(6, 2, 2), 1.0, 0),
                    std::invalid_argument);
}

TEST_CASE("spectral efficiency averages the subcarriers")
{
    std::vector<CMatrix> h, f;
    double sum = 0.0;
    for (int m = 0; m < 4; ++m)
    {
        h.push_back(random_matrix(3, 5, 10 + m));
        f.push_back(random_matrix(5, 2, 20 + m));
        sum += mutual_information(h.back(), f.back(), 10.0, 2);
    }
    CHECK(spectral_efficiency(h, f, SnrConfig{10.0, 2}) == doctest::Approx(sum / 4).epsilon(1e-14));
    CHECK_THROWS_AS(spectral_efficiency(h, std::vector<CMatrix>{}, SnrConfig{}), std::invalid_argument);
}

TEST_CASE("the unconstrained precoder bounds the hybrid one")
{
    fixture::Desk desk;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
    {
        const auto ch = desk.channel(seed);
        const JrcProblem p = desk.problem(ch, 1.0, ConnectivityMask::fully(64, 8));
        const HybridBeamformer bf = solve(p, seed).bf;
        const SnrConfig snr{10.0, desk.n_s};
        CHECK(spectral_efficiency(ch.h, p.f_c, snr) >= spectral_efficiency(ch, bf, snr));
    }
}

TEST_CASE("array gain of a matched precoder")
{
    const ArrayGeometry tx = fixture::geom(8, 8);
    const auto grid = elevation_cut(0.0, 0.0, 90.0, 1.0);
    const CVector w = subarray_steering_vector(tx, Direction{0.0, 60.0}, fixture::f_c);
    const auto g = array_gain(w, tx, grid, fixture::f_c);
    CHECK(grid[argmax(g)].elevation_deg == doctest::Approx(60.0));
    CHECK(*std::max_element(g.begin(), g.end()) == doctest::Approx(1.0).epsilon(1e-15));
    for (double v : g)
        CHECK(v >= 0.0);
    CHECK_THROWS_AS(array_gain(CVector::Zero(64), tx, grid, fixture::f_c), std::invalid_argument);
    CHECK_THROWS_AS(array_gain(w.head(10), tx, grid, fixture::f_c), std::invalid_argument);
}

TEST_CASE("a center-frequency beam squints at the band edges")
{
    const ArrayGeometry tx = fixture::geom(8, 8);
    const auto grid = elevation_cut(0.0, 0.0, 90.0, 0.25);
    const CVector w = subarray_steering_vector(tx, Direction{0.0, 60.0}, fixture::f_c);
    const auto freqs = subcarrier_frequencies(CarrierConfig{fixture::f_c, 30e9, 16});
    const double at_low = grid[argmax(array_gain(w, tx, grid, freqs.front()))].elevation_deg;
    const double at_high = grid[argmax(array_gain(w, tx, grid, freqs.back()))].elevation_deg;
    // sin(theta) scales with f_c / f, so the two edges move in opposite directions
    CHECK(std::abs(at_low - 60.0) >= 0.5);
    CHECK(std::abs(at_high - 60.0) >= 0.5);
    CHECK((at_low - 60.0) * (at_high - 60.0) < 0.0);
}

TEST_CASE("aggregate")
{
    SUBCASE("a single value has zero standard error")
    {
        const Summary s = aggregate({{3, 2.5}});
        CHECK(s.mean == 2.5);
        CHECK(s.std_error == 0.0);
        CHECK(s.count == 1);
    }
    SUBCASE("mean and standard error of 1, 2, 3")
    {
        const Summary s = aggregate({{0, 1.0}, {1, 2.0}, {2, 3.0}});
        CHECK(s.mean == doctest::Approx(2.0));
        CHECK(s.std_error == doctest::Approx(1.0 / std::sqrt(3.0)));
    }
    SUBCASE("input order does not change the bits")
    {
        std::vector<TrialValue> v;
        for (std::uint64_t t = 0; t < 50; ++t)
            v.push_back({t, std::sin(double(t) * 1.7) * 1e3 + 1e-7 * double(t)});
        const Summary a = aggregate(v);
        std::reverse(v.begin(), v.end());
        std::rotate(v.begin(), v.begin() + 17, v.end());
        const Summary b = aggregate(v);
        CHECK(a.mean == b.mean);
        CHECK(a.std_error == b.std_error);
    }
    SUBCASE("no values")
    {
        CHECK_THROWS_AS(aggregate({}), std::invalid_argument);
    }
}

TEST_CASE("argmax takes the first maximum")
{
    CHECK(argmax({1.0, 3.0, 2.0, 3.0}) == 1);
    CHECK(argmax({-1.0}) == 0);
    CHECK_THROWS_AS(argmax({}), std::invalid_argument);
}
