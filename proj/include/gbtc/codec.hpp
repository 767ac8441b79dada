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
#include <utility>
#include <vector>

#include "gbtc/bitstream.hpp"
#include "gbtc/image.hpp"
#include "gbtc/mat.hpp"
#include "gbtc/online_learning.hpp"
#include "gbtc/transforms.hpp"

namespace gbtc::codec {

/// The four Intra_16x16-style luma prediction modes, coded as 2 raw bits.
enum class PredMode : int { kVert = 0, kHoriz = 1, kDc = 2, kPlane = 3 };

/// Which transforms the per-block selection may choose from. The value is
/// written as the stream version byte, so a decoder knows the scenario
/// without extra fields.
enum class TransformSet : int {
    kDctGbt = 1,  // DCT vs. cluster-learned GBT (the adaptive codec)
    kDctOnly = 2,
    kDctDst = 3,  // DCT vs. fixed DST, same signaling, no learning
};

struct CodecConfig {
    int width = 0;
    int height = 0;
    int n = 16;
    int qp = 27;
    int k_clusters = 8;
    int m_min = 4;
    double rho = 0.1;
    double alpha = transforms::kDefaultAlpha;
    double lambda_scale = 0.85;
    TransformSet transform_set = TransformSet::kDctGbt;

    void validate() const;
};

/// Row-major n*n quantized coefficient levels.
using LevelBlock = std::vector<std::int32_t>;

struct CodecStats {
    std::uint64_t stream_bits = 0;
    std::uint64_t pixels = 0;
    int blocks = 0;
    int eligible_blocks = 0;
    int flagged_blocks = 0;        // blocks carrying a transform flag bit
    int alt_transform_blocks = 0;  // flag == 1 (GBT or DST chosen)
    int rd_violations = 0;         // chosen J exceeded the DCT J (must stay 0)

    double rate_bpp() const {
        return pixels ? static_cast<double>(stream_bits) / pixels : 0.0;
    }
    double alt_usage_pct() const {
        return eligible_blocks
                   ? 100.0 * alt_transform_blocks / eligible_blocks
                   : 0.0;
    }
};

struct EncodeResult {
    std::vector<std::uint8_t> stream;
    Image recon;
    online_learning::ClusterBank bank;
    CodecStats stats;
};

struct DecodeResult {
    Image image;
    online_learning::ClusterBank bank;
    CodecConfig config;
};

/// True when the reconstructed neighbors the mode reads from exist. DC is
/// always available (it falls back to 128 with no neighbors).
bool mode_available(int row, int col, PredMode mode);

/// Integer-valued n x n prediction from reconstructed pixels only.
/// Throws InvalidArgument when the mode's neighbors are unavailable.
Mat predict_block(const Image& recon, int row, int col, int n, PredMode mode);

/// Available mode with minimal SAD against the original block, ties to the
/// lowest mode number. Independent of the later transform choice.
PredMode select_mode(const Image& recon, int row, int col,
                     const Mat& original_block);

/// Quantizer step 0.625 * 2^(qp/6), from an exact table of the six
/// sub-octave factors so every platform computes identical bits.
double qstep_from_qp(int qp);

/// Lagrange multiplier lambda_scale * 2^((qp-12)/3).
double lambda_from_qp(int qp, double lambda_scale);

/// Deadzone quantizer: level = sign(c) * floor(|c|/Qstep + 1/3).
LevelBlock quantize(const transforms::CoeffBlock& coeffs, int qp);

/// Midpoint reconstruction c' = level * Qstep.
transforms::CoeffBlock dequantize(const LevelBlock& levels, int n, int qp);

/// Diagonal (JPEG-style) scan order for an n x n block: returns row-major
/// indices in scan order.
std::vector<int> zigzag_order(int n);

/// (run, level) coding of one block along the zigzag scan. Runs use
/// unsigned and levels signed Exp-Golomb; end-of-block is the reserved run
/// value n*n, which no real run can reach.
void entropy_encode_block(const LevelBlock& levels, int n, BitWriter& writer);
LevelBlock entropy_decode_block(BitReader& reader, int n);

/// Outcome of the per-block transform decision.
struct RdChoice {
    bool flag_present = false;
    bool use_alt = false;  // value of the flag bit when present
    LevelBlock levels;
    Mat recon_residual;    // dequantized inverse transform of `levels`
    double distortion = 0.0;
    std::uint64_t bits = 0;  // entropy bits + flag bit when present
    double j_chosen = 0.0;
    double j_dct = 0.0;
};

/// Evaluates J = SSD + lambda * bits for the DCT and, when `alt` is
/// non-null, for the alternative separable pair; returns the minimizer,
/// ties to the DCT. The flag bit is charged to both candidates.
RdChoice rd_select_transform(
    const Mat& residual, const transforms::OrthonormalBasis& dct,
    const std::pair<transforms::OrthonormalBasis,
                    transforms::OrthonormalBasis>* alt,
    int qp, double lambda);

/// Serialized stream header (magic, version/profile, dimensions and the
/// learning parameters the decoder must mirror).
void write_header(BitWriter& writer, const CodecConfig& config);
CodecConfig read_header(BitReader& reader);

/// Full encode: raster-order intra prediction, per-block RD transform
/// choice, entropy coding, and the online cluster-bank update loop over
/// reconstructed blocks.
EncodeResult encode_image(const Image& image, const CodecConfig& config);

/// Full decode. Replays the identical learning loop, so the returned bank
/// and image match the encoder's bit for bit.
DecodeResult decode_image(const std::vector<std::uint8_t>& stream);

}  // namespace gbtc::codec
