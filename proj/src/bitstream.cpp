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

#include "gbtc/bitstream.hpp"

#include <bit>

#include "gbtc/errors.hpp"

namespace gbtc::codec {

void BitWriter::put_bit(int bit) {
    if (bit != 0 && bit != 1) throw InvalidArgument("put_bit: bit must be 0/1");
    const int shift = 7 - static_cast<int>(bit_count_ % 8);
    if (shift == 7) buf_.push_back(0);
    buf_.back() |= static_cast<std::uint8_t>(bit << shift);
    ++bit_count_;
}

void BitWriter::put_bits(std::uint64_t value, int count) {
    if (count < 0 || count > 64)
        throw InvalidArgument("put_bits: count out of range");
    for (int i = count - 1; i >= 0; --i)
        put_bit(static_cast<int>((value >> i) & 1));
}

void BitWriter::put_ue(std::uint64_t value) {
    const std::uint64_t code = value + 1;
    const int width = std::bit_width(code);
    put_bits(0, width - 1);
    put_bits(code, width);
}

void BitWriter::put_se(std::int64_t value) {
    const std::uint64_t mapped =
        value > 0 ? 2 * static_cast<std::uint64_t>(value) - 1
                  : 2 * static_cast<std::uint64_t>(-value);
    put_ue(mapped);
}

std::vector<std::uint8_t> BitWriter::bytes() const { return buf_; }

int BitReader::get_bit() {
    if (pos_ >= bit_size())
        throw CorruptStream("read past end of stream", pos_);
    const std::uint8_t byte = buf_[pos_ / 8];
    const int bit = (byte >> (7 - pos_ % 8)) & 1;
    ++pos_;
    return bit;
}

std::uint64_t BitReader::get_bits(int count) {
    if (count < 0 || count > 64)
        throw InvalidArgument("get_bits: count out of range");
    std::uint64_t v = 0;
    for (int i = 0; i < count; ++i)
        v = (v << 1) | static_cast<std::uint64_t>(get_bit());
    return v;
}

std::uint64_t BitReader::get_ue() {
    int zeros = 0;
    while (get_bit() == 0) {
        if (++zeros > 63)
            throw CorruptStream("Exp-Golomb prefix too long", pos_);
    }
    std::uint64_t code = 1;
    for (int i = 0; i < zeros; ++i)
        code = (code << 1) | static_cast<std::uint64_t>(get_bit());
    return code - 1;
}

std::int64_t BitReader::get_se() {
    const std::uint64_t mapped = get_ue();
    if (mapped % 2 == 1)
        return static_cast<std::int64_t>((mapped + 1) / 2);
    return -static_cast<std::int64_t>(mapped / 2);
}

}  // namespace gbtc::codec
