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

#include "gbtc/eval.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gbtc/errors.hpp"

namespace gbtc::eval {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNullEigTol = 1e-12;

void check_same_shape(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height || a.width <= 0 ||
        a.height <= 0)
        throw InvalidArgument("images must share positive dimensions");
}

// 11-tap Gaussian, sigma 1.5, normalized to sum 1.
std::array<double, 11> ssim_kernel() {
    std::array<double, 11> g{};
    double sum = 0.0;
    for (int i = 0; i < 11; ++i) {
        const double d = i - 5;
        g[static_cast<std::size_t>(i)] = std::exp(-(d * d) / (2.0 * 1.5 * 1.5));
        sum += g[static_cast<std::size_t>(i)];
    }
    for (double& v : g) v /= sum;
    return g;
}

// Separable valid-mode filtering: (h x w) -> (h-10 x w-10).
std::vector<double> filter_valid(const std::vector<double>& in, int w, int h,
                                 const std::array<double, 11>& k) {
    const int ow = w - 10;
    const int oh = h - 10;
    std::vector<double> mid(static_cast<std::size_t>(h) * ow);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int t = 0; t < 11; ++t)
                s += k[static_cast<std::size_t>(t)] *
                     in[static_cast<std::size_t>(y) * w + x + t];
            mid[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(oh) * ow);
    for (int y = 0; y < oh; ++y) {
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int t = 0; t < 11; ++t)
                s += k[static_cast<std::size_t>(t)] *
                     mid[static_cast<std::size_t>(y + t) * ow + x];
            out[static_cast<std::size_t>(y) * ow + x] = s;
        }
    }
    return out;
}

// Least-squares cubic y(u) with u = x - center; 4x4 normal equations via
// Gaussian elimination with partial pivoting.
std::array<double, 4> cubic_fit(const std::vector<double>& x,
                                const std::vector<double>& y, double center) {
    double pow_sums[7] = {0, 0, 0, 0, 0, 0, 0};
    double rhs[4] = {0, 0, 0, 0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = x[i] - center;
        double up = 1.0;
        for (int p = 0; p < 7; ++p) {
            pow_sums[p] += up;
            if (p < 4) rhs[p] += y[i] * up;
            up *= u;
        }
    }
    double a[4][5];
    for (int r = 0; r < 4; ++r) {
        for (int c = 0; c < 4; ++c) a[r][c] = pow_sums[r + c];
        a[r][4] = rhs[r];
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0)
            throw NumericFailure("degenerate rate-distortion fit");
        if (piv != col)
            for (int c = 0; c < 5; ++c) std::swap(a[piv][c], a[col][c]);
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double f = a[r][col] / a[col][col];
            for (int c = col; c < 5; ++c) a[r][c] -= f * a[col][c];
        }
    }
    return {a[0][4] / a[0][0], a[1][4] / a[1][1], a[2][4] / a[2][2],
            a[3][4] / a[3][3]};
}

void check_rd_points(const std::vector<RdPoint>& pts, const char* who) {
    if (pts.size() < 4)
        throw InvalidArgument(std::string(who) + ": need at least 4 RD points");
    for (const RdPoint& p : pts)
        if (!(p.rate_bpp > 0.0) || !std::isfinite(p.rate_bpp) ||
            !std::isfinite(p.psnr_db))
            throw InvalidArgument(std::string(who) +
                                  ": rates must be positive, PSNR finite");
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double NormalSampler::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 =
        (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;  // (0, 1]
    const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * kPi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
}

GmrfModel make_path_gmrf(const transforms::PathGraphWeights& weights) {
    GmrfModel model;
    model.n = weights.n;
    model.precision = transforms::path_graph_laplacian(weights).m;
    model.eigen =
        transforms::graph_fourier_basis({Mat(model.precision)});
    return model;
}

std::vector<std::vector<double>> sample_gmrf(const GmrfModel& model, int count,
                                             std::uint64_t seed) {
    if (model.n < 1 || model.eigen.u.rows() != model.n)
        throw InvalidArgument("sample_gmrf: malformed model");
    if (count < 0) throw InvalidArgument("sample_gmrf: negative count");
    const int n = model.n;
    std::vector<double> gain(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double lam = model.eigen.eigenvalues[static_cast<std::size_t>(i)];
        gain[static_cast<std::size_t>(i)] =
            lam > kNullEigTol ? 1.0 / std::sqrt(lam) : 0.0;
    }
    NormalSampler normal(seed);
    std::vector<std::vector<double>> samples;
    samples.reserve(static_cast<std::size_t>(count));
    std::vector<double> scaled(static_cast<std::size_t>(n));
    for (int s = 0; s < count; ++s) {
        for (int i = 0; i < n; ++i)
            scaled[static_cast<std::size_t>(i)] =
                gain[static_cast<std::size_t>(i)] * normal.next();
        std::vector<double> x(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (int i = 0; i < n; ++i)
                v += model.eigen.u(j, i) * scaled[static_cast<std::size_t>(i)];
            x[static_cast<std::size_t>(j)] = v;
        }
        samples.push_back(std::move(x));
    }
    return samples;
}

std::vector<double> apply_basis(const transforms::OrthonormalBasis& basis,
                                const std::vector<double>& x) {
    const int n = basis.u.rows();
    if (static_cast<int>(x.size()) != n)
        throw InvalidArgument("apply_basis: dimension mismatch");
    std::vector<double> y(static_cast<std::size_t>(n), 0.0);
    for (int k = 0; k < n; ++k) {
        double v = 0.0;
        for (int j = 0; j < n; ++j) v += basis.u(j, k) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(k)] = v;
    }
    return y;
}

double pse(const std::vector<double>& coeffs) {
    if (coeffs.empty()) throw InvalidArgument("pse: empty coefficient vector");
    double total = 0.0;
    for (double c : coeffs) total += c * c;
    if (total == 0.0)
        throw InvalidArgument("pse: spectrum undefined for the zero vector");
    double entropy = 0.0;
    for (double c : coeffs) {
        const double s = c * c / total;
        if (s > 0.0) entropy -= s * std::log(s);
    }
    return entropy;
}

transforms::OrthonormalBasis learn_nonseparable_path_gbt(
    const std::vector<std::vector<double>>& train, double alpha) {
    if (train.empty())
        throw InvalidArgument("learn_nonseparable_path_gbt: empty training set");
    const int n = static_cast<int>(train.front().size());
    if (n < 2)
        throw InvalidArgument("learn_nonseparable_path_gbt: need n >= 2");
    std::vector<double> msd(static_cast<std::size_t>(n - 1), 0.0);
    for (const std::vector<double>& x : train) {
        if (static_cast<int>(x.size()) != n)
            throw InvalidArgument(
                "learn_nonseparable_path_gbt: ragged training set");
        for (int u = 0; u + 1 < n; ++u) {
            const double d = x[static_cast<std::size_t>(u)] -
                             x[static_cast<std::size_t>(u) + 1];
            msd[static_cast<std::size_t>(u)] += d * d;
        }
    }
    for (double& v : msd) v /= static_cast<double>(train.size());
    return transforms::graph_fourier_basis(transforms::path_graph_laplacian(
        transforms::weights_from_msd(msd, alpha)));
}

transforms::OrthonormalBasis learn_klt(
    const std::vector<std::vector<double>>& train) {
    if (train.empty()) throw InvalidArgument("learn_klt: empty training set");
    const int n = static_cast<int>(train.front().size());
    if (n < 1) throw InvalidArgument("learn_klt: empty vectors");
    Mat s(n, n);
    for (const std::vector<double>& x : train) {
        if (static_cast<int>(x.size()) != n)
            throw InvalidArgument("learn_klt: ragged training set");
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                s(i, j) += x[static_cast<std::size_t>(i)] *
                           x[static_cast<std::size_t>(j)];
    }
    const double inv = 1.0 / static_cast<double>(train.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s(i, j) *= inv;
    return transforms::klt_from_covariance(s);
}

std::vector<PseResult> run_pse_experiment(const GmrfModel& model,
                                          const std::vector<int>& sizes,
                                          int n_test, int trials,
                                          std::uint64_t seed) {
    if (sizes.empty()) throw InvalidArgument("run_pse_experiment: no sizes");
    for (int s : sizes)
        if (s < 1) throw InvalidArgument("run_pse_experiment: sizes must be >= 1");
    if (n_test < 1 || trials < 1)
        throw InvalidArgument("run_pse_experiment: n_test and trials must be >= 1");
    std::vector<PseResult> results(sizes.size());
    for (std::size_t i = 0; i < sizes.size(); ++i)
        results[i].training_size = sizes[i];
    const transforms::OrthonormalBasis dct = transforms::dct_basis(model.n);
    std::uint64_t state = seed;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t test_seed = splitmix64(state);
        const auto test = sample_gmrf(model, n_test, test_seed);
        for (std::size_t i = 0; i < sizes.size(); ++i) {
            const std::uint64_t train_seed = splitmix64(state);
            const auto train = sample_gmrf(model, sizes[i], train_seed);
            const auto gbt =
                learn_nonseparable_path_gbt(train, transforms::kDefaultAlpha);
            const auto klt = learn_klt(train);
            double e_dct = 0.0;
            double e_gbt = 0.0;
            double e_klt = 0.0;
            for (const std::vector<double>& x : test) {
                e_dct += pse(apply_basis(dct, x));
                e_gbt += pse(apply_basis(gbt, x));
                e_klt += pse(apply_basis(klt, x));
            }
            results[i].dct += e_dct / n_test;
            results[i].gbt += e_gbt / n_test;
            results[i].klt += e_klt / n_test;
        }
    }
    for (PseResult& r : results) {
        r.dct /= trials;
        r.gbt /= trials;
        r.klt /= trials;
    }
    return results;
}

transforms::PathGraphWeights uniform_path_weights(int n) {
    if (n < 2) throw InvalidArgument("uniform_path_weights: n must be >= 2");
    return {n, std::vector<double>(static_cast<std::size_t>(n - 1), 1.0)};
}

transforms::PathGraphWeights nonuniform_path_weights() {
    return {8, {0.1, 0.25, 0.4, 0.55, 0.7, 0.85, 1.0}};
}

double psnr(const Image& a, const Image& b) {
    check_same_shape(a, b);
    double sse = 0.0;
    for (std::size_t i = 0; i < a.pixels.size(); ++i) {
        const double d =
            static_cast<double>(a.pixels[i]) - static_cast<double>(b.pixels[i]);
        sse += d * d;
    }
    if (sse == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = sse / static_cast<double>(a.pixels.size());
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const Image& a, const Image& b) {
    check_same_shape(a, b);
    if (a.width < 11 || a.height < 11)
        throw InvalidArgument("ssim: images smaller than the 11x11 window");
    const int w = a.width;
    const int h = a.height;
    const std::size_t count = a.pixels.size();
    std::vector<double> fa(count);
    std::vector<double> fb(count);
    std::vector<double> faa(count);
    std::vector<double> fbb(count);
    std::vector<double> fab(count);
    for (std::size_t i = 0; i < count; ++i) {
        fa[i] = static_cast<double>(a.pixels[i]);
        fb[i] = static_cast<double>(b.pixels[i]);
        faa[i] = fa[i] * fa[i];
        fbb[i] = fb[i] * fb[i];
        fab[i] = fa[i] * fb[i];
    }
    const std::array<double, 11> k = ssim_kernel();
    const std::vector<double> mu_a = filter_valid(fa, w, h, k);
    const std::vector<double> mu_b = filter_valid(fb, w, h, k);
    const std::vector<double> raw_aa = filter_valid(faa, w, h, k);
    const std::vector<double> raw_bb = filter_valid(fbb, w, h, k);
    const std::vector<double> raw_ab = filter_valid(fab, w, h, k);
    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    double total = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
        const double ma = mu_a[i];
        const double mb = mu_b[i];
        const double va = raw_aa[i] - ma * ma;
        const double vb = raw_bb[i] - mb * mb;
        const double cov = raw_ab[i] - ma * mb;
        total += ((2.0 * ma * mb + c1) * (2.0 * cov + c2)) /
                 ((ma * ma + mb * mb + c1) * (va + vb + c2));
    }
    return total / static_cast<double>(mu_a.size());
}

double bd_rate(const std::vector<RdPoint>& anchor,
               const std::vector<RdPoint>& test) {
    check_rd_points(anchor, "bd_rate anchor");
    check_rd_points(test, "bd_rate test");
    const auto psnr_of = [](const RdPoint& p) { return p.psnr_db; };
    const auto minmax = [&](const std::vector<RdPoint>& pts) {
        double lo = psnr_of(pts.front());
        double hi = lo;
        for (const RdPoint& p : pts) {
            lo = std::min(lo, p.psnr_db);
            hi = std::max(hi, p.psnr_db);
        }
        return std::pair<double, double>{lo, hi};
    };
    const auto [alo, ahi] = minmax(anchor);
    const auto [tlo, thi] = minmax(test);
    const double low = std::max(alo, tlo);
    const double high = std::min(ahi, thi);
    if (!(high > low))
        throw InvalidArgument("bd_rate: PSNR ranges do not overlap");
    const double center = 0.5 * (low + high);
    const auto fit = [&](const std::vector<RdPoint>& pts) {
        std::vector<double> xs;
        std::vector<double> ys;
        xs.reserve(pts.size());
        ys.reserve(pts.size());
        for (const RdPoint& p : pts) {
            xs.push_back(p.psnr_db);
            ys.push_back(std::log10(p.rate_bpp));
        }
        return cubic_fit(xs, ys, center);
    };
    const std::array<double, 4> ca = fit(anchor);
    const std::array<double, 4> ct = fit(test);
    const double lo_u = low - center;
    const double hi_u = high - center;
    double integral = 0.0;
    for (int p = 0; p < 4; ++p)
        integral += (ct[static_cast<std::size_t>(p)] -
                     ca[static_cast<std::size_t>(p)]) *
                    (std::pow(hi_u, p + 1) - std::pow(lo_u, p + 1)) /
                    static_cast<double>(p + 1);
    const double avg_diff = integral / (high - low);
    return (std::pow(10.0, avg_diff) - 1.0) * 100.0;
}

double glnu(const Image& image, int levels) {
    if (image.width <= 0 || image.height <= 0)
        throw InvalidArgument("glnu: empty image");
    if (levels < 1 || levels > 256)
        throw InvalidArgument("glnu: levels must be in [1, 256]");
    std::vector<long long> runs(static_cast<std::size_t>(levels), 0);
    long long total = 0;
    for (int y = 0; y < image.height; ++y) {
        int x = 0;
        while (x < image.width) {
            const int g = image.at(y, x) * levels / 256;
            int len = 1;
            while (x + len < image.width &&
                   image.at(y, x + len) * levels / 256 == g)
                ++len;
            ++runs[static_cast<std::size_t>(g)];
            ++total;
            x += len;
        }
    }
    double s = 0.0;
    for (long long r : runs) s += static_cast<double>(r) * static_cast<double>(r);
    return s / static_cast<double>(total);
}

}  // namespace gbtc::eval
