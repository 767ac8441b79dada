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

#include "gbtc/codec.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>

#include "gbtc/errors.hpp"

namespace gbtc::codec {

namespace {

// 2^(k/6), k = 0..5, written out so every platform uses the same bits.
constexpr double kSixthOctave[6] = {
    1.0,
    1.122462048309373,
    1.2599210498948732,
    1.4142135623730951,
    1.5874010519681994,
    1.7817974362806785,
};

Mat block_from_image(const Image& img, int row, int col, int n) {
    Mat b(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            b(y, x) = static_cast<double>(img.at(row + y, col + x));
    return b;
}

// Integer reconstruction: round half away from zero, clip to pixel range.
void store_block(Image& recon, int row, int col, const Mat& pred,
                 const Mat& recon_res) {
    const int n = pred.rows();
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            long v = std::lround(pred(y, x) + recon_res(y, x));
            if (v < 0) v = 0;
            if (v > 255) v = 255;
            recon.at(row + y, col + x) = static_cast<std::uint8_t>(v);
        }
    }
}

// Everything about a block position both sides must agree on before any
// bit is written or read: eligibility, whether a transform flag travels,
// and the alternative bases it would select.
struct BlockPrep {
    bool eligible = false;
    bool flag_present = false;
    online_learning::BlockTemplate tmpl;
    std::optional<std::pair<transforms::OrthonormalBasis,
                            transforms::OrthonormalBasis>>
        alt;
};

BlockPrep prepare_block(const Image& recon,
                        const online_learning::ClusterBank& bank,
                        const CodecConfig& cfg,
                        const transforms::OrthonormalBasis& dst, int row,
                        int col) {
    BlockPrep prep;
    prep.eligible = row >= cfg.n && col >= cfg.n;
    if (!prep.eligible) return prep;
    switch (cfg.transform_set) {
        case TransformSet::kDctGbt: {
            prep.tmpl = online_learning::extract_template(recon, row, col, cfg.n);
            if (bank.fully_initialized()) {
                const int k = bank.nearest_cluster(prep.tmpl);
                if (bank.gbt_available(k)) {
                    prep.alt = bank.derive_gbt(k);
                    prep.flag_present = true;
                }
            }
            break;
        }
        case TransformSet::kDctDst:
            prep.alt = std::make_pair(dst, dst);
            prep.flag_present = true;
            break;
        case TransformSet::kDctOnly:
            break;
    }
    return prep;
}

struct Candidate {
    LevelBlock levels;
    Mat recon_res;
    double ssd = 0.0;
    std::uint64_t bits = 0;
    double j = 0.0;
};

Candidate evaluate_candidate(const Mat& residual,
                             const transforms::OrthonormalBasis& u_vert,
                             const transforms::OrthonormalBasis& u_horiz,
                             int qp, double lambda, bool flag_present) {
    const int n = residual.rows();
    Candidate cand;
    const auto coeffs = transforms::forward_separable(residual, u_vert, u_horiz);
    cand.levels = quantize(coeffs, qp);
    cand.recon_res = transforms::inverse_separable(
        dequantize(cand.levels, n, qp), u_vert, u_horiz);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double d = residual(y, x) - cand.recon_res(y, x);
            cand.ssd += d * d;
        }
    }
    BitWriter scratch;
    entropy_encode_block(cand.levels, n, scratch);
    cand.bits = scratch.bit_count() + (flag_present ? 1 : 0);
    cand.j = cand.ssd + lambda * static_cast<double>(cand.bits);
    return cand;
}

void fill_choice(RdChoice& choice, Candidate&& cand) {
    choice.levels = std::move(cand.levels);
    choice.recon_residual = std::move(cand.recon_res);
    choice.distortion = cand.ssd;
    choice.bits = cand.bits;
    choice.j_chosen = cand.j;
}

}  // namespace

void CodecConfig::validate() const {
    if (n < 2 || n > 64 || n % 2 != 0)
        throw InvalidArgument("config: block size must be even, in [2, 64]");
    if (width <= 0 || height <= 0 || width % n != 0 || height % n != 0)
        throw InvalidArgument("config: dimensions must be positive multiples of n");
    if (width > 0xFFFF || height > 0xFFFF)
        throw InvalidArgument("config: dimensions exceed 16-bit header fields");
    if (qp < 0 || qp > 51) throw InvalidArgument("config: qp must be in [0, 51]");
    if (k_clusters < 1 || k_clusters > 255)
        throw InvalidArgument("config: cluster count must be in [1, 255]");
    if (m_min < 1 || m_min > 255)
        throw InvalidArgument("config: m_min must be in [1, 255]");
    if (!(rho > 0.0) || rho > 1.0)
        throw InvalidArgument("config: rho must be in (0, 1]");
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw InvalidArgument("config: alpha must be positive");
    if (!(lambda_scale > 0.0) || !std::isfinite(lambda_scale))
        throw InvalidArgument("config: lambda_scale must be positive");
    const int ts = static_cast<int>(transform_set);
    if (ts < 1 || ts > 3) throw InvalidArgument("config: unknown transform set");
}

bool mode_available(int row, int col, PredMode mode) {
    switch (mode) {
        case PredMode::kVert: return row > 0;
        case PredMode::kHoriz: return col > 0;
        case PredMode::kDc: return true;
        case PredMode::kPlane: return row > 0 && col > 0;
    }
    return false;
}

Mat predict_block(const Image& recon, int row, int col, int n, PredMode mode) {
    if (row < 0 || col < 0 || row + n > recon.height || col + n > recon.width)
        throw InvalidArgument("predict_block: block outside the image");
    if (!mode_available(row, col, mode))
        throw InvalidArgument("predict_block: mode needs unavailable neighbors");
    Mat p(n, n);
    switch (mode) {
        case PredMode::kVert:
            for (int x = 0; x < n; ++x) {
                const double v = recon.at(row - 1, col + x);
                for (int y = 0; y < n; ++y) p(y, x) = v;
            }
            break;
        case PredMode::kHoriz:
            for (int y = 0; y < n; ++y) {
                const double v = recon.at(row + y, col - 1);
                for (int x = 0; x < n; ++x) p(y, x) = v;
            }
            break;
        case PredMode::kDc: {
            const bool top = row > 0;
            const bool left = col > 0;
            long sum = 0;
            long dc = 128;
            if (top)
                for (int x = 0; x < n; ++x) sum += recon.at(row - 1, col + x);
            if (left)
                for (int y = 0; y < n; ++y) sum += recon.at(row + y, col - 1);
            if (top && left)
                dc = (sum + n) / (2 * n);
            else if (top || left)
                dc = (sum + n / 2) / n;
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x) p(y, x) = static_cast<double>(dc);
            break;
        }
        case PredMode::kPlane: {
            const int h = n / 2;
            const auto top = [&](int x) -> long {
                return x < 0 ? recon.at(row - 1, col - 1)
                             : recon.at(row - 1, col + x);
            };
            const auto left = [&](int y) -> long {
                return y < 0 ? recon.at(row - 1, col - 1)
                             : recon.at(row + y, col - 1);
            };
            long long hs = 0;
            long long vs = 0;
            for (int i = 1; i <= h; ++i) {
                hs += static_cast<long long>(i) * (top(h - 1 + i) - top(h - 1 - i));
                vs += static_cast<long long>(i) * (left(h - 1 + i) - left(h - 1 - i));
            }
            const long long sq =
                static_cast<long long>(h) * (h + 1) * (2 * h + 1) / 6;
            const auto slope = [sq](long long s) {
                const long long mag = (32 * (s < 0 ? -s : s) + sq) / (2 * sq);
                return s < 0 ? -mag : mag;
            };
            const long long b = slope(hs);
            const long long c = slope(vs);
            const long long a = 16 * (top(n - 1) + left(n - 1));
            for (int y = 0; y < n; ++y) {
                for (int x = 0; x < n; ++x) {
                    long long v =
                        (a + b * (x - (h - 1)) + c * (y - (h - 1)) + 16) >> 5;
                    if (v < 0) v = 0;
                    if (v > 255) v = 255;
                    p(y, x) = static_cast<double>(v);
                }
            }
            break;
        }
    }
    return p;
}

PredMode select_mode(const Image& recon, int row, int col,
                     const Mat& original_block) {
    if (original_block.rows() != original_block.cols())
        throw InvalidArgument("select_mode: block must be square");
    const int n = original_block.rows();
    PredMode best = PredMode::kDc;
    double best_sad = -1.0;
    for (int m = 0; m < 4; ++m) {
        const PredMode mode = static_cast<PredMode>(m);
        if (!mode_available(row, col, mode)) continue;
        const Mat pred = predict_block(recon, row, col, n, mode);
        double sad = 0.0;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x)
                sad += std::abs(original_block(y, x) - pred(y, x));
        if (best_sad < 0.0 || sad < best_sad) {
            best_sad = sad;
            best = mode;
        }
    }
    return best;
}

double qstep_from_qp(int qp) {
    if (qp < 0 || qp > 51) throw InvalidArgument("qp must be in [0, 51]");
    return 0.625 * kSixthOctave[qp % 6] *
           static_cast<double>(1ULL << (qp / 6));
}

double lambda_from_qp(int qp, double lambda_scale) {
    if (qp < 0 || qp > 51) throw InvalidArgument("qp must be in [0, 51]");
    return lambda_scale * std::exp2((qp - 12) / 3.0);
}

LevelBlock quantize(const transforms::CoeffBlock& coeffs, int qp) {
    if (coeffs.rows() != coeffs.cols())
        throw InvalidArgument("quantize: block must be square");
    const int n = coeffs.rows();
    const double qstep = qstep_from_qp(qp);
    LevelBlock levels(static_cast<std::size_t>(n) * n);
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double c = coeffs(y, x);
            const double mag = std::floor(std::abs(c) / qstep + 1.0 / 3.0);
            if (mag >= 2147483647.0)
                throw InvalidArgument("quantize: coefficient out of level range");
            const auto lv = static_cast<std::int32_t>(mag);
            levels[static_cast<std::size_t>(y) * n + x] = c < 0.0 ? -lv : lv;
        }
    }
    return levels;
}

transforms::CoeffBlock dequantize(const LevelBlock& levels, int n, int qp) {
    if (static_cast<int>(levels.size()) != n * n)
        throw InvalidArgument("dequantize: level count mismatch");
    const double qstep = qstep_from_qp(qp);
    transforms::CoeffBlock coeffs(n, n);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            coeffs(y, x) = levels[static_cast<std::size_t>(y) * n + x] * qstep;
    return coeffs;
}

std::vector<int> zigzag_order(int n) {
    if (n < 1) throw InvalidArgument("zigzag_order: n must be positive");
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n) * n);
    for (int s = 0; s <= 2 * (n - 1); ++s) {
        if (s % 2 == 0) {
            for (int r = std::min(s, n - 1); r >= std::max(0, s - n + 1); --r)
                order.push_back(r * n + (s - r));
        } else {
            for (int r = std::max(0, s - n + 1); r <= std::min(s, n - 1); ++r)
                order.push_back(r * n + (s - r));
        }
    }
    return order;
}

void entropy_encode_block(const LevelBlock& levels, int n, BitWriter& writer) {
    if (static_cast<int>(levels.size()) != n * n)
        throw InvalidArgument("entropy_encode_block: level count mismatch");
    const std::vector<int> order = zigzag_order(n);
    std::uint64_t run = 0;
    for (int idx : order) {
        const std::int32_t v = levels[static_cast<std::size_t>(idx)];
        if (v == 0) {
            ++run;
            continue;
        }
        writer.put_ue(run);
        writer.put_se(v);
        run = 0;
    }
    writer.put_ue(static_cast<std::uint64_t>(n) * n);  // end of block
}

LevelBlock entropy_decode_block(BitReader& reader, int n) {
    const std::vector<int> order = zigzag_order(n);
    const std::uint64_t eob = static_cast<std::uint64_t>(n) * n;
    LevelBlock levels(static_cast<std::size_t>(n) * n, 0);
    std::uint64_t pos = 0;
    for (;;) {
        const std::uint64_t run = reader.get_ue();
        if (run == eob) break;
        if (pos + run >= eob)
            throw CorruptStream("run exceeds block size", reader.bit_pos());
        pos += run;
        const std::int64_t level = reader.get_se();
        if (level == 0 || level > 2147483646 || level < -2147483646)
            throw CorruptStream("level outside coded range", reader.bit_pos());
        levels[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] =
            static_cast<std::int32_t>(level);
        ++pos;
    }
    return levels;
}

RdChoice rd_select_transform(
    const Mat& residual, const transforms::OrthonormalBasis& dct,
    const std::pair<transforms::OrthonormalBasis,
                    transforms::OrthonormalBasis>* alt,
    int qp, double lambda) {
    if (residual.rows() != residual.cols())
        throw InvalidArgument("rd_select_transform: block must be square");
    if (!(lambda > 0.0))
        throw InvalidArgument("rd_select_transform: lambda must be positive");
    const bool flag_present = alt != nullptr;
    RdChoice choice;
    choice.flag_present = flag_present;
    Candidate dct_cand =
        evaluate_candidate(residual, dct, dct, qp, lambda, flag_present);
    choice.j_dct = dct_cand.j;
    if (flag_present) {
        Candidate alt_cand = evaluate_candidate(residual, alt->first,
                                                alt->second, qp, lambda, true);
        if (alt_cand.j < dct_cand.j) {
            choice.use_alt = true;
            fill_choice(choice, std::move(alt_cand));
            return choice;
        }
    }
    fill_choice(choice, std::move(dct_cand));
    return choice;
}

void write_header(BitWriter& writer, const CodecConfig& config) {
    config.validate();
    for (char ch : {'G', 'B', 'T', 'C'})
        writer.put_bits(static_cast<std::uint8_t>(ch), 8);
    writer.put_bits(static_cast<std::uint64_t>(config.transform_set), 8);
    writer.put_bits(static_cast<std::uint64_t>(config.width), 16);
    writer.put_bits(static_cast<std::uint64_t>(config.height), 16);
    writer.put_bits(static_cast<std::uint64_t>(config.n), 8);
    writer.put_bits(static_cast<std::uint64_t>(config.qp), 8);
    writer.put_bits(static_cast<std::uint64_t>(config.k_clusters), 8);
    writer.put_bits(static_cast<std::uint64_t>(config.m_min), 8);
    writer.put_bits(std::bit_cast<std::uint64_t>(config.rho), 64);
    writer.put_bits(std::bit_cast<std::uint64_t>(config.alpha), 64);
}

CodecConfig read_header(BitReader& reader) {
    for (char ch : {'G', 'B', 'T', 'C'})
        if (reader.get_bits(8) != static_cast<std::uint8_t>(ch))
            throw CorruptStream("bad stream magic", reader.bit_pos());
    CodecConfig config;
    const std::uint64_t version = reader.get_bits(8);
    if (version < 1 || version > 3)
        throw CorruptStream("unsupported stream version", reader.bit_pos());
    config.transform_set = static_cast<TransformSet>(version);
    config.width = static_cast<int>(reader.get_bits(16));
    config.height = static_cast<int>(reader.get_bits(16));
    config.n = static_cast<int>(reader.get_bits(8));
    config.qp = static_cast<int>(reader.get_bits(8));
    config.k_clusters = static_cast<int>(reader.get_bits(8));
    config.m_min = static_cast<int>(reader.get_bits(8));
    config.rho = std::bit_cast<double>(reader.get_bits(64));
    config.alpha = std::bit_cast<double>(reader.get_bits(64));
    try {
        config.validate();
    } catch (const InvalidArgument& e) {
        throw CorruptStream(std::string("invalid header: ") + e.what(),
                            reader.bit_pos());
    }
    return config;
}

EncodeResult encode_image(const Image& image, const CodecConfig& config) {
    config.validate();
    if (image.width != config.width || image.height != config.height ||
        image.pixels.size() !=
            static_cast<std::size_t>(image.width) * image.height)
        throw InvalidArgument("encode_image: image does not match config");
    const int n = config.n;
    const transforms::OrthonormalBasis dct = transforms::dct_basis(n);
    const transforms::OrthonormalBasis dst = transforms::dst_basis(n);
    const double lambda = lambda_from_qp(config.qp, config.lambda_scale);
    online_learning::ClusterBank bank(config.k_clusters, n, config.rho,
                                      config.alpha, config.m_min);
    Image recon(config.width, config.height);
    BitWriter writer;
    write_header(writer, config);
    CodecStats stats;
    stats.pixels = static_cast<std::uint64_t>(config.width) * config.height;
    for (int row = 0; row < config.height; row += n) {
        for (int col = 0; col < config.width; col += n) {
            const Mat original = block_from_image(image, row, col, n);
            const PredMode mode = select_mode(recon, row, col, original);
            const Mat pred = predict_block(recon, row, col, n, mode);
            Mat residual(n, n);
            for (int y = 0; y < n; ++y)
                for (int x = 0; x < n; ++x)
                    residual(y, x) = original(y, x) - pred(y, x);
            const BlockPrep prep =
                prepare_block(recon, bank, config, dst, row, col);
            const RdChoice choice = rd_select_transform(
                residual, dct, prep.alt ? &*prep.alt : nullptr, config.qp,
                lambda);
            writer.put_bits(static_cast<std::uint64_t>(mode), 2);
            if (prep.flag_present) writer.put_bit(choice.use_alt ? 1 : 0);
            entropy_encode_block(choice.levels, n, writer);
            store_block(recon, row, col, pred, choice.recon_residual);
            if (prep.eligible && config.transform_set == TransformSet::kDctGbt)
                bank.process_block(prep.tmpl,
                                   block_from_image(recon, row, col, n));
            ++stats.blocks;
            if (prep.eligible) ++stats.eligible_blocks;
            if (prep.flag_present) ++stats.flagged_blocks;
            if (choice.use_alt) ++stats.alt_transform_blocks;
            if (choice.j_chosen > choice.j_dct) ++stats.rd_violations;
        }
    }
    EncodeResult result{writer.bytes(), std::move(recon), std::move(bank),
                        stats};
    result.stats.stream_bits = 8 * result.stream.size();
    return result;
}

DecodeResult decode_image(const std::vector<std::uint8_t>& stream) {
    BitReader reader(stream);
    const CodecConfig config = read_header(reader);
    const int n = config.n;
    const transforms::OrthonormalBasis dct = transforms::dct_basis(n);
    const transforms::OrthonormalBasis dst = transforms::dst_basis(n);
    online_learning::ClusterBank bank(config.k_clusters, n, config.rho,
                                      config.alpha, config.m_min);
    Image recon(config.width, config.height);
    for (int row = 0; row < config.height; row += n) {
        for (int col = 0; col < config.width; col += n) {
            const auto mode = static_cast<PredMode>(reader.get_bits(2));
            if (!mode_available(row, col, mode))
                throw CorruptStream("mode needs unavailable neighbors",
                                    reader.bit_pos());
            const Mat pred = predict_block(recon, row, col, n, mode);
            const BlockPrep prep =
                prepare_block(recon, bank, config, dst, row, col);
            bool use_alt = false;
            if (prep.flag_present) use_alt = reader.get_bit() == 1;
            const LevelBlock levels = entropy_decode_block(reader, n);
            const transforms::OrthonormalBasis& u_vert =
                use_alt ? prep.alt->first : dct;
            const transforms::OrthonormalBasis& u_horiz =
                use_alt ? prep.alt->second : dct;
            const Mat recon_res = transforms::inverse_separable(
                dequantize(levels, n, config.qp), u_vert, u_horiz);
            store_block(recon, row, col, pred, recon_res);
            if (prep.eligible && config.transform_set == TransformSet::kDctGbt)
                bank.process_block(prep.tmpl,
                                   block_from_image(recon, row, col, n));
        }
    }
    if (reader.bit_size() - reader.bit_pos() >= 8)
        throw CorruptStream("trailing data after the last block",
                            reader.bit_pos());
    while (reader.bit_pos() < reader.bit_size())
        if (reader.get_bit() != 0)
            throw CorruptStream("nonzero padding bits", reader.bit_pos());
    return DecodeResult{std::move(recon), std::move(bank), config};
}

}  // namespace gbtc::codec
