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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gbtc/image.hpp"
#include "gbtc/mat.hpp"
#include "gbtc/transforms.hpp"

namespace gbtc::eval {

/// splitmix64 step; used to derive independent sub-seeds from one master
/// seed so experiment stages stay reproducible and uncorrelated.
std::uint64_t splitmix64(std::uint64_t& state);

/// Standard normal generator: mt19937_64 bits through an explicit
/// Box-Muller transform. Distribution code is spelled out (instead of
/// std::normal_distribution) because the standard leaves that algorithm
/// unspecified and reproducibility across library versions matters here.
class NormalSampler {
public:
    explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}
    double next();

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Zero-mean Gaussian whose precision matrix is a path-graph Laplacian;
/// samples live in the Laplacian's row space (zero mean over entries).
struct GmrfModel {
    int n = 0;
    Mat precision;
    transforms::OrthonormalBasis eigen;
};

GmrfModel make_path_gmrf(const transforms::PathGraphWeights& weights);

/// Draws `count` samples x = U diag(g) z with g_i = eigenvalue^(-1/2) on
/// non-null directions and 0 on the null space, z standard normal.
std::vector<std::vector<double>> sample_gmrf(const GmrfModel& model, int count,
                                             std::uint64_t seed);

/// Transform coefficients y = U^T x of one vector.
std::vector<double> apply_basis(const transforms::OrthonormalBasis& basis,
                                const std::vector<double>& x);

/// Power spectral entropy in nats: Shannon entropy of |y_i|^2 / sum |y_j|^2
/// with 0 ln 0 = 0. Throws InvalidArgument on the all-zero vector.
double pse(const std::vector<double>& coeffs);

/// Path GBT learned from training vectors: per-edge mean squared
/// differences, closed-form weights 1/(msd + 2 alpha), then the Laplacian
/// eigenbasis.
transforms::OrthonormalBasis learn_nonseparable_path_gbt(
    const std::vector<std::vector<double>>& train, double alpha);

/// KLT of the empirical second-moment matrix S = sum x x^T / N (no mean
/// subtraction; the data is zero-mean by construction).
transforms::OrthonormalBasis learn_klt(
    const std::vector<std::vector<double>>& train);

struct PseResult {
    int training_size = 0;
    double dct = 0.0;
    double gbt = 0.0;
    double klt = 0.0;
};

/// For each training size: learn GBT and KLT from fresh training samples,
/// evaluate mean PSE of DCT/GBT/KLT over n_test held-out samples, and
/// average over `trials` independent repetitions. Deterministic per seed.
std::vector<PseResult> run_pse_experiment(const GmrfModel& model,
                                          const std::vector<int>& sizes,
                                          int n_test, int trials,
                                          std::uint64_t seed);

/// Unit weights on an n-vertex path.
transforms::PathGraphWeights uniform_path_weights(int n);

/// The non-uniform 8-vertex path: weights 0.1 to 1.0 in 7 equidistant
/// steps along the edges.
transforms::PathGraphWeights nonuniform_path_weights();

/// 8-bit peak signal-to-noise ratio in dB; +infinity for identical images.
double psnr(const Image& a, const Image& b);

/// Mean structural similarity over valid 11x11 windows, Gaussian sigma
/// 1.5, K1 = 0.01, K2 = 0.03, dynamic range 255.
double ssim(const Image& a, const Image& b);

struct RdPoint {
    double rate_bpp = 0.0;
    double psnr_db = 0.0;
    double ssim = 0.0;
};

/// Bjontegaard delta rate in percent between two rate-distortion curves:
/// cubic fits of log10(rate) over PSNR, integrated across the overlapping
/// PSNR span. Negative means `test` needs less rate than `anchor`.
double bd_rate(const std::vector<RdPoint>& anchor,
               const std::vector<RdPoint>& test);

/// Gray-level non-uniformity from the horizontal run-length matrix with
/// `levels` equal bins over [0, 255]: sum over levels of (runs at that
/// level)^2, divided by the total run count.
double glnu(const Image& image, int levels = 16);

}  // namespace gbtc::eval
