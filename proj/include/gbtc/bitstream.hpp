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
#include <vector>

namespace gbtc::codec {

/// MSB-first bit packer. The buffer is zero-padded to a whole byte only
/// when bytes() is taken.
class BitWriter {
public:
    void put_bit(int bit);
    /// Writes the `count` low bits of value, most significant first.
    void put_bits(std::uint64_t value, int count);
    /// Unsigned Exp-Golomb: 0 -> "1", 1 -> "010", 2 -> "011", ...
    void put_ue(std::uint64_t value);
    /// Signed Exp-Golomb via the mapping k>0 -> 2k-1, k<=0 -> -2k.
    void put_se(std::int64_t value);

    std::uint64_t bit_count() const { return bit_count_; }
    /// Finalized, zero-padded byte buffer.
    std::vector<std::uint8_t> bytes() const;

private:
    std::vector<std::uint8_t> buf_;
    std::uint64_t bit_count_ = 0;
};

/// MSB-first bit unpacker over a byte buffer. Reads past the end raise
/// CorruptStream carrying the failing bit offset.
class BitReader {
public:
    explicit BitReader(std::vector<std::uint8_t> bytes)
        : buf_(std::move(bytes)) {}

    int get_bit();
    std::uint64_t get_bits(int count);
    std::uint64_t get_ue();
    std::int64_t get_se();

    std::uint64_t bit_pos() const { return pos_; }
    std::uint64_t bit_size() const { return 8 * buf_.size(); }

private:
    std::vector<std::uint8_t> buf_;
    std::uint64_t pos_ = 0;
};

}  // namespace gbtc::codec
