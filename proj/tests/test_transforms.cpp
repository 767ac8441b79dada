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
#include <numbers>
#include <vector>

#include "gbtc/errors.hpp"
#include "gbtc/eval.hpp"
#include "gbtc/mat.hpp"
#include "gbtc/transforms.hpp"
#include "oracles.hpp"
#include "synth.hpp"

namespace tr = gbtc::transforms;
using gbtc::Mat;

namespace {

double orthonormality_error(const Mat& u) {
    const Mat gram = gbtc::matmul(gbtc::transpose(u), u);
    return gbtc::max_abs_diff(gram, Mat::identity(u.rows()));
}

tr::PathGraphWeights ramp_weights(int n) {
    tr::PathGraphWeights w{n, {}};
    for (int e = 0; e < n - 1; ++e)
        w.w.push_back(0.2 + 0.8 * e / std::max(1, n - 2));
    return w;
}

Mat random_spd(int n, std::uint64_t seed) {
    std::uint64_t state = seed;
    Mat a(n, 2 * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < 2 * n; ++c)
            a(r, c) =
                static_cast<double>(gbtc::eval::splitmix64(state) % 512) /
                    128.0 -
                2.0;
    Mat s = gbtc::matmul(a, gbtc::transpose(a));
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s(r, c) /= 2 * n;
    return s;
}

}  // namespace

TEST_SUITE("transforms") {

TEST_CASE("path laplacian matches degree minus adjacency") {
    const tr::PathGraphWeights w{3, {2.0, 5.0}};
    const Mat l = tr::path_graph_laplacian(w).m;
    CHECK(l(0, 0) == 2.0);
    CHECK(l(0, 1) == -2.0);
    CHECK(l(0, 2) == 0.0);
    CHECK(l(1, 1) == 7.0);
    CHECK(l(1, 2) == -5.0);
    CHECK(l(2, 2) == 5.0);
    for (int r = 0; r < 3; ++r) {
        double sum = 0.0;
        for (int c = 0; c < 3; ++c) {
            sum += l(r, c);
            CHECK(l(r, c) == l(c, r));
        }
        CHECK(std::abs(sum) < 1e-12);
    }
}

TEST_CASE("path laplacian rejects bad weights") {
    CHECK_THROWS_AS(tr::path_graph_laplacian({1, {}}), gbtc::InvalidArgument);
    CHECK_THROWS_AS(tr::path_graph_laplacian({3, {1.0}}),
                    gbtc::InvalidArgument);
    CHECK_THROWS_AS(tr::path_graph_laplacian({3, {1.0, 0.0}}),
                    gbtc::InvalidArgument);
    CHECK_THROWS_AS(tr::path_graph_laplacian({3, {1.0, -2.0}}),
                    gbtc::InvalidArgument);
}

TEST_CASE("dct basis is orthonormal and matches the closed form") {
    for (int n : {1, 2, 4, 8, 16}) {
        const tr::OrthonormalBasis dct = tr::dct_basis(n);
        CHECK(dct.u.rows() == n);
        CHECK(orthonormality_error(dct.u) < 1e-10);
        CHECK(dct.eigenvalues.empty());
    }
    const tr::OrthonormalBasis d2 = tr::dct_basis(2);
    const double s = std::sqrt(0.5);
    CHECK(d2.u(0, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(d2.u(1, 0) == doctest::Approx(s).epsilon(1e-14));
    CHECK(d2.u(0, 1) == doctest::Approx(s).epsilon(1e-14));
    CHECK(d2.u(1, 1) == doctest::Approx(-s).epsilon(1e-14));
}

TEST_CASE("dst basis is orthonormal and differs from the dct") {
    for (int n : {4, 8, 16}) {
        const tr::OrthonormalBasis dst = tr::dst_basis(n);
        CHECK(orthonormality_error(dst.u) < 1e-10);
        CHECK(gbtc::max_abs_diff(dst.u, tr::dct_basis(n).u) > 0.1);
    }
    // Direct formula check at n = 4, up to the documented column signs.
    const tr::OrthonormalBasis dst = tr::dst_basis(4);
    const double scale = 2.0 / 3.0;
    Mat want(4, 4);
    for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
            want(j, k) = scale * std::sin(std::numbers::pi * (2 * j + 1) *
                                          (k + 1) / 9.0);
    tr::apply_sign_convention(want);
    CHECK(gbtc::max_abs_diff(dst.u, want) < 1e-12);
}

TEST_CASE("unit-weight path eigenbasis equals the dct") {
    for (int n : {4, 8, 16}) {
        const auto lap =
            tr::path_graph_laplacian({n, std::vector<double>(n - 1, 1.0)});
        const tr::OrthonormalBasis gbt = tr::graph_fourier_basis(lap);
        CHECK(gbtc::max_abs_diff(gbt.u, tr::dct_basis(n).u) < 1e-10);
        CHECK(gbt.eigenvalues.size() == static_cast<std::size_t>(n));
        CHECK(std::abs(gbt.eigenvalues.front()) < 1e-10);
    }
}

TEST_CASE("path eigenbasis matches a dense solver oracle") {
    for (int n : {4, 8, 16}) {
        const auto lap = tr::path_graph_laplacian(ramp_weights(n));
        const tr::OrthonormalBasis gbt = tr::graph_fourier_basis(lap);
        CHECK(orthonormality_error(gbt.u) < 1e-10);

        oracle::EigResult ref = oracle::dense_sym_eigen(lap.m);
        tr::apply_sign_convention(ref.u);
        CHECK(gbtc::max_abs_diff(gbt.u, ref.u) < 1e-8);
        for (int i = 0; i < n; ++i) {
            CHECK(gbt.eigenvalues[i] ==
                  doctest::Approx(ref.eigenvalues[i]).epsilon(1e-10).scale(1));
            if (i) CHECK(gbt.eigenvalues[i] >= gbt.eigenvalues[i - 1]);
        }
        // U diag(lambda) U^T reproduces the Laplacian.
        Mat ul = gbt.u;
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) ul(r, c) *= gbt.eigenvalues[c];
        CHECK(gbtc::max_abs_diff(gbtc::matmul(ul, gbtc::transpose(gbt.u)),
                                 lap.m) < 1e-9);
    }
}

TEST_CASE("path eigenbasis is bitwise deterministic") {
    const auto lap = tr::path_graph_laplacian(ramp_weights(16));
    const tr::OrthonormalBasis a = tr::graph_fourier_basis(lap);
    const tr::OrthonormalBasis b = tr::graph_fourier_basis(lap);
    CHECK(a.u.storage() == b.u.storage());
    CHECK(a.eigenvalues == b.eigenvalues);
}

TEST_CASE("graph_fourier_basis validates its input") {
    Mat not_tridiag = Mat::identity(4);
    not_tridiag(0, 3) = -1.0;
    not_tridiag(3, 0) = -1.0;
    CHECK_THROWS_AS(tr::graph_fourier_basis({not_tridiag}),
                    gbtc::InvalidArgument);
    CHECK_THROWS_AS(tr::graph_fourier_basis({Mat(3, 4)}),
                    gbtc::InvalidArgument);
}

TEST_CASE("weights_from_msd applies the closed form") {
    const double alpha = 0.25;
    const tr::PathGraphWeights w =
        tr::weights_from_msd({0.0, 2.0, 0.5}, alpha);
    CHECK(w.n == 4);
    CHECK(w.w[0] == doctest::Approx(2.0).epsilon(1e-15));   // 1/(2*0.25)
    CHECK(w.w[1] == doctest::Approx(0.4).epsilon(1e-15));   // 1/(2+0.5)
    CHECK(w.w[2] == doctest::Approx(1.0).epsilon(1e-15));   // 1/(0.5+0.5)
    CHECK_THROWS_AS(tr::weights_from_msd({-1.0}, alpha),
                    gbtc::InvalidArgument);
    CHECK_THROWS_AS(tr::weights_from_msd({1.0}, 0.0), gbtc::InvalidArgument);
}

TEST_CASE("separable transform round-trips and preserves energy") {
    std::uint64_t state = 42;
    for (int n : {4, 8, 16}) {
        const tr::OrthonormalBasis vert = tr::graph_fourier_basis(
            tr::path_graph_laplacian(ramp_weights(n)));
        const tr::OrthonormalBasis horiz = tr::dct_basis(n);
        for (int trial = 0; trial < 10; ++trial) {
            const Mat block = synth::random_pixel_block(n, state);
            const tr::CoeffBlock coeffs =
                tr::forward_separable(block, vert, horiz);
            const Mat back = tr::inverse_separable(coeffs, vert, horiz);
            CHECK(gbtc::max_abs_diff(block, back) < 1e-9);
            CHECK(std::abs(gbtc::frobenius_norm(coeffs) -
                           gbtc::frobenius_norm(block)) < 1e-9);
        }
    }
}

TEST_CASE("separable transform orientation: vert acts on columns") {
    // Block with one active column; a vertical DCT must compress it onto
    // the first row of coefficients only when the column is constant.
    const int n = 4;
    Mat block(n, n);
    for (int r = 0; r < n; ++r) block(r, 2) = 1.0;
    const tr::OrthonormalBasis dct = tr::dct_basis(n);
    const tr::CoeffBlock c =
        tr::forward_separable(block, dct, tr::OrthonormalBasis{
                                              Mat::identity(n),
                                              tr::BasisKind::Dct,
                                              {}});
    // Constant column -> only the DC row carries energy.
    for (int r = 1; r < n; ++r)
        for (int col = 0; col < n; ++col)
            CHECK(std::abs(c(r, col)) < 1e-12);
    CHECK(c(0, 2) == doctest::Approx(2.0).epsilon(1e-12));  // sqrt(n) * 1
}

TEST_CASE("klt matches the dense oracle on random covariances") {
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        const Mat s = random_spd(8, seed);
        const tr::OrthonormalBasis klt = tr::klt_from_covariance(s);
        CHECK(orthonormality_error(klt.u) < 1e-10);
        for (std::size_t i = 1; i < klt.eigenvalues.size(); ++i)
            CHECK(klt.eigenvalues[i] <= klt.eigenvalues[i - 1] + 1e-12);

        oracle::EigResult ref = oracle::dense_sym_eigen(s);
        // Oracle is ascending; compare against the reversed order.
        for (int i = 0; i < 8; ++i)
            CHECK(klt.eigenvalues[i] ==
                  doctest::Approx(ref.eigenvalues[7 - i]).epsilon(1e-9));
        Mat rev(8, 8);
        for (int r = 0; r < 8; ++r)
            for (int c = 0; c < 8; ++c) rev(r, c) = ref.u(r, 7 - c);
        tr::apply_sign_convention(rev);
        CHECK(gbtc::max_abs_diff(klt.u, rev) < 1e-8);
    }
}

TEST_CASE("klt of a diagonal covariance sorts by variance") {
    Mat s(3, 3);
    s(0, 0) = 1.0;
    s(1, 1) = 9.0;
    s(2, 2) = 4.0;
    const tr::OrthonormalBasis klt = tr::klt_from_covariance(s);
    CHECK(klt.eigenvalues == std::vector<double>{9.0, 4.0, 1.0});
    CHECK(klt.u(1, 0) == 1.0);
    CHECK(klt.u(2, 1) == 1.0);
    CHECK(klt.u(0, 2) == 1.0);
}

TEST_CASE("klt rejects an asymmetric matrix") {
    Mat s = Mat::identity(3);
    s(0, 1) = 0.5;
    CHECK_THROWS_AS(tr::klt_from_covariance(s), gbtc::InvalidArgument);
}

TEST_CASE("sign convention picks the largest-magnitude entry") {
    Mat u(2, 2);
    u(0, 0) = 0.6;
    u(1, 0) = -0.8;  // largest entry negative: column flips
    u(0, 1) = -0.6;
    u(1, 1) = 0.8;  // largest entry already positive: column kept
    tr::apply_sign_convention(u);
    CHECK(u(0, 0) == -0.6);
    CHECK(u(1, 0) == 0.8);
    CHECK(u(0, 1) == -0.6);
    CHECK(u(1, 1) == 0.8);

    // Tie in magnitude: the lowest row index decides.
    Mat t(2, 1);
    t(0, 0) = -0.70710678118654757;
    t(1, 0) = 0.70710678118654757;
    tr::apply_sign_convention(t);
    CHECK(t(0, 0) > 0.0);
}

}  // TEST_SUITE
