/*
 * Copyright (C) 2026 the gbtc authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "gbtc/errors.hpp"
#include "gbtc/eval.hpp"
#include "gbtc/transforms.hpp"
#include "oracles.hpp"
#include "synth.hpp"

namespace ev = gbtc::eval;
namespace tr = gbtc::transforms;
using gbtc::Image;
using gbtc::Mat;

namespace {

std::vector<ev::RdPoint> demo_curve(double rate_scale) {
    return {{1.0 * rate_scale, 30.0, 0.9},
            {2.0 * rate_scale, 33.0, 0.93},
            {4.0 * rate_scale, 36.0, 0.96},
            {8.0 * rate_scale, 39.0, 0.99}};
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("splitmix64 matches the reference sequence from seed 0") {
    std::uint64_t state = 0;
    CHECK(ev::splitmix64(state) == 0xE220A8397B1DCDAFULL);
    CHECK(ev::splitmix64(state) == 0x6E789E6AA1B965F4ULL);
    CHECK(ev::splitmix64(state) == 0x06C45D188009454FULL);
}

TEST_CASE("normal sampler is deterministic with sane moments") {
    ev::NormalSampler a(123);
    ev::NormalSampler b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());

    ev::NormalSampler s(2718);
    const int n = 200000;
    double sum = 0.0;
    double sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.next();
        sum += x;
        sum2 += x * x;
    }
    const double mean = sum / n;
    const double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean) < 0.01);
    CHECK(std::abs(var - 1.0) < 0.02);
}

TEST_CASE("power spectral entropy on worked examples") {
    CHECK(ev::pse({0.0, 3.0, 0.0}) == 0.0);
    CHECK(ev::pse({1.0, -1.0}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
    const std::vector<double> flat(8, 0.25);
    CHECK(ev::pse(flat) == doctest::Approx(std::log(8.0)).epsilon(1e-14));
    CHECK(ev::pse({5.0}) == 0.0);
    CHECK_THROWS_AS(ev::pse({0.0, 0.0}), gbtc::InvalidArgument);
    CHECK_THROWS_AS(ev::pse({}), gbtc::InvalidArgument);
}

TEST_CASE("pse stays inside [0, ln n] on random spectra") {
    std::uint64_t state = 5;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(16);
        for (double& x : v)
            x = static_cast<double>(ev::splitmix64(state) % 1000) / 250.0 - 2.0;
        bool all_zero = true;
        for (double x : v) all_zero = all_zero && x == 0.0;
        if (all_zero) continue;
        const double h = ev::pse(v);
        CHECK(h >= 0.0);
        CHECK(h <= std::log(16.0) + 1e-12);
    }
}

TEST_CASE("gmrf samples are zero-mean, reproducible and well-distributed") {
    const ev::GmrfModel model = ev::make_path_gmrf(ev::uniform_path_weights(8));
    const auto a = ev::sample_gmrf(model, 64, 42);
    const auto b = ev::sample_gmrf(model, 64, 42);
    CHECK(a == b);
    for (const auto& x : a) {
        double mean = 0.0;
        for (double v : x) mean += v;
        CHECK(std::abs(mean) < 1e-9);
    }

    // Empirical covariance approaches the precision pseudo-inverse.
    const int n_samples = 100000;
    const auto big = ev::sample_gmrf(model, n_samples, 777);
    Mat cov(8, 8);
    for (const auto& x : big)
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                cov(r, c) += x[static_cast<std::size_t>(r)] *
                             x[static_cast<std::size_t>(c)];
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) cov(r, c) /= n_samples;
    const Mat want = oracle::sym_pinv(model.precision);
    double num = 0.0;
    double den = 0.0;
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) {
            num += (cov(r, c) - want(r, c)) * (cov(r, c) - want(r, c));
            den += want(r, c) * want(r, c);
        }
    CHECK(std::sqrt(num / den) < 0.05);
}

TEST_CASE("the gmrf eigenbasis decorrelates its own samples") {
    const ev::GmrfModel model =
        ev::make_path_gmrf(ev::nonuniform_path_weights());
    const int n_samples = 100000;
    const auto samples = ev::sample_gmrf(model, n_samples, 31);
    Mat cov(8, 8);
    for (const auto& x : samples) {
        const std::vector<double> y = ev::apply_basis(model.eigen, x);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c)
                cov(r, c) += y[static_cast<std::size_t>(r)] *
                             y[static_cast<std::size_t>(c)];
    }
    double max_diag = 0.0;
    for (int i = 0; i < 8; ++i) max_diag = std::max(max_diag, cov(i, i));
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c)
            if (r != c) CHECK(std::abs(cov(r, c)) < 0.05 * max_diag);
}

TEST_CASE("learned path gbt from constant differences is the dct") {
    // All-equal training vectors have zero adjacent differences, so the
    // closed form gives uniform weights and the eigenbasis of a uniformly
    // weighted path, which is the dct for any positive weight.
    const std::vector<std::vector<double>> train(5,
                                                 std::vector<double>(8, 3.0));
    const tr::OrthonormalBasis learned =
        ev::learn_nonseparable_path_gbt(train, 0.01);
    CHECK(gbtc::max_abs_diff(learned.u, tr::dct_basis(8).u) < 1e-10);
}

TEST_CASE("learned klt picks up the dominant direction") {
    std::vector<std::vector<double>> train{{3.0, 0.0, 4.0}};
    const tr::OrthonormalBasis klt = ev::learn_klt(train);
    CHECK(klt.eigenvalues[0] == doctest::Approx(25.0).epsilon(1e-12));
    CHECK(klt.u(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(klt.u(1, 0) == doctest::Approx(0.0).scale(1.0));
    CHECK(klt.u(2, 0) == doctest::Approx(0.8).epsilon(1e-12));

    // Equal-count standard basis vectors give the identity covariance.
    std::vector<std::vector<double>> iso;
    for (int i = 0; i < 4; ++i) {
        std::vector<double> e(4, 0.0);
        e[static_cast<std::size_t>(i)] = 1.0;
        iso.push_back(e);
    }
    const tr::OrthonormalBasis id = ev::learn_klt(iso);
    CHECK(gbtc::max_abs_diff(id.u, Mat::identity(4)) < 1e-12);
}

TEST_CASE("pse experiment is deterministic and shares test sets per trial") {
    const ev::GmrfModel model = ev::make_path_gmrf(ev::uniform_path_weights(8));
    const std::vector<int> sizes{2, 8, 32};
    const auto a = ev::run_pse_experiment(model, sizes, 50, 3, 99);
    const auto b = ev::run_pse_experiment(model, sizes, 50, 3, 99);
    REQUIRE(a.size() == 3);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].training_size == sizes[i]);
        CHECK(a[i].dct == b[i].dct);
        CHECK(a[i].gbt == b[i].gbt);
        CHECK(a[i].klt == b[i].klt);
        // The DCT needs no training: its column is identical at all sizes.
        CHECK(a[i].dct == a[0].dct);
    }
}

TEST_CASE("psnr on worked examples") {
    const Image a = synth::constant(16, 16, 100);
    CHECK(std::isinf(ev::psnr(a, a)));

    Image plus_one = a;
    for (auto& p : plus_one.pixels) p = static_cast<std::uint8_t>(p + 1);
    CHECK(ev::psnr(a, plus_one) ==
          doctest::Approx(48.130803608679103).epsilon(1e-12));

    const Image black = synth::constant(16, 16, 0);
    const Image white = synth::constant(16, 16, 255);
    CHECK(ev::psnr(black, white) == doctest::Approx(0.0).scale(1.0));

    const Image wrong_size = synth::constant(8, 8, 0);
    CHECK_THROWS_AS(ev::psnr(a, wrong_size), gbtc::InvalidArgument);
}

TEST_CASE("ssim is 1 for identical images and small for unrelated noise") {
    const Image img = synth::gradient_sine(64, 64);
    CHECK(ev::ssim(img, img) == doctest::Approx(1.0).epsilon(1e-12));

    Image shifted = img;
    for (auto& p : shifted.pixels)
        p = static_cast<std::uint8_t>(std::min(255, p + 64));
    const double s = ev::ssim(img, shifted);
    CHECK(s < 1.0);
    CHECK(s > 0.0);

    const Image na = synth::uniform_noise(128, 128, 1);
    const Image nb = synth::uniform_noise(128, 128, 2);
    CHECK(std::abs(ev::ssim(na, nb)) < 0.1);

    CHECK_THROWS_AS(ev::ssim(synth::constant(8, 8, 0), synth::constant(8, 8, 0)),
                    gbtc::InvalidArgument);  // smaller than the window
}

TEST_CASE("bd-rate of a curve against itself is exactly zero") {
    const auto curve = demo_curve(1.0);
    CHECK(ev::bd_rate(curve, curve) == 0.0);
}

TEST_CASE("bd-rate of a uniform 10% rate saving is -10") {
    const auto anchor = demo_curve(1.0);
    const auto test = demo_curve(0.9);
    CHECK(ev::bd_rate(anchor, test) == doctest::Approx(-10.0).epsilon(1e-9));
    CHECK(ev::bd_rate(test, anchor) ==
          doctest::Approx(100.0 / 0.9 - 100.0).epsilon(1e-9));
}

TEST_CASE("bd-rate input validation") {
    auto anchor = demo_curve(1.0);
    auto short_curve = anchor;
    short_curve.pop_back();
    CHECK_THROWS_AS(ev::bd_rate(short_curve, anchor), gbtc::InvalidArgument);
    CHECK_THROWS_AS(ev::bd_rate(anchor, short_curve), gbtc::InvalidArgument);

    auto disjoint = anchor;
    for (auto& p : disjoint) p.psnr_db += 100.0;
    CHECK_THROWS_AS(ev::bd_rate(anchor, disjoint), gbtc::InvalidArgument);
}

TEST_CASE("glnu on worked examples") {
    CHECK(ev::glnu(synth::constant(4, 4, 77)) == 4.0);

    // Alternating columns: every pixel is its own run, two levels.
    Image alt(4, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 4; ++x) alt.at(y, x) = x % 2 ? 200 : 40;
    CHECK(ev::glnu(alt) == 8.0);

    // Runs concentrated in two levels score higher than scattered noise.
    const Image regular = synth::plaid(64, 64, 8, 8, 40, 220);
    const Image noise = synth::uniform_noise(64, 64, 12);
    CHECK(ev::glnu(regular) > ev::glnu(noise));

    CHECK_THROWS_AS(ev::glnu(synth::constant(4, 4, 0), 0),
                    gbtc::InvalidArgument);
}

TEST_CASE("path weight helpers") {
    const tr::PathGraphWeights u = ev::uniform_path_weights(8);
    CHECK(u.n == 8);
    CHECK(u.w == std::vector<double>(7, 1.0));

    const tr::PathGraphWeights nu = ev::nonuniform_path_weights();
    CHECK(nu.n == 8);
    REQUIRE(nu.w.size() == 7);
    CHECK(nu.w.front() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(nu.w.back() == doctest::Approx(1.0).epsilon(1e-15));
    for (std::size_t i = 1; i < nu.w.size(); ++i)
        CHECK(nu.w[i] - nu.w[i - 1] == doctest::Approx(0.15).epsilon(1e-12));
}

TEST_CASE("apply_basis validates dimensions") {
    const tr::OrthonormalBasis dct = tr::dct_basis(4);
    CHECK_THROWS_AS(ev::apply_basis(dct, std::vector<double>(5, 0.0)),
                    gbtc::InvalidArgument);
    // An orthonormal basis preserves the norm.
    const std::vector<double> x{1.0, -2.0, 3.0, 0.5};
    const std::vector<double> y = ev::apply_basis(dct, x);
    double nx = 0.0;
    double ny = 0.0;
    for (double v : x) nx += v * v;
    for (double v : y) ny += v * v;
    CHECK(nx == doctest::Approx(ny).epsilon(1e-12));
}

}  // TEST_SUITE
