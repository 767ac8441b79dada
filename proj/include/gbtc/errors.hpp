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
#include <stdexcept>
#include <string>

namespace gbtc {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Precondition violations: bad sizes, non-positive weights, out-of-range
/// parameters, mismatched dimensions.
class InvalidArgument : public Error {
public:
    explicit InvalidArgument(const std::string& what) : Error(what) {}
};

/// An iterative numeric routine failed to converge within its cap.
class NumericFailure : public Error {
public:
    explicit NumericFailure(const std::string& what) : Error(what) {}
};

/// A block in the first block row/column has no reconstructed template.
class TemplateUnavailable : public Error {
public:
    explicit TemplateUnavailable(const std::string& what) : Error(what) {}
};

/// Malformed coded data. Carries the bit offset at which decoding failed.
class CorruptStream : public Error {
public:
    CorruptStream(const std::string& what, std::uint64_t bit_offset)
        : Error(what + " (bit offset " + std::to_string(bit_offset) + ")"),
          bit_offset_(bit_offset) {}

    std::uint64_t bit_offset() const { return bit_offset_; }

private:
    std::uint64_t bit_offset_;
};

/// File-level input/output failure.
class IoFailure : public Error {
public:
    explicit IoFailure(const std::string& what) : Error(what) {}
};

}  // namespace gbtc
