/*
 * Copyright 2026 The KCF Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KCF_HASH_H_
#define KCF_HASH_H_

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>

namespace kcf {

// Incremental FNV-1a (64 bit). Values are fed little-endian byte by byte so
// the digest does not depend on the host.
class Fnv1a {
 public:
  void Bytes(std::string_view bytes) {
    for (unsigned char c : bytes) Byte(c);
  }

  template <typename T>
    requires std::is_integral_v<T>
  void Value(T value) {
    auto bits = static_cast<std::make_unsigned_t<T>>(value);
    for (std::size_t k = 0; k < sizeof(T); ++k) {
      Byte(static_cast<unsigned char>(bits & 0xFF));
      if constexpr (sizeof(T) > 1) bits >>= 8;
    }
  }

  template <typename T>
  void Values(std::span<const T> values) {
    for (const T& v : values) Value(v);
  }

  std::uint64_t digest() const { return state_; }

 private:
  void Byte(unsigned char c) {
    state_ ^= c;
    state_ *= 0x100000001B3ull;
  }
  std::uint64_t state_ = 0xCBF29CE484222325ull;
};

inline std::string HexDigest(std::uint64_t value) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(value));
  return buffer;
}

}  // namespace kcf

#endif  // KCF_HASH_H_
