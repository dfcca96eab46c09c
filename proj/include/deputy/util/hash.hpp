#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace deputy::util {

/// SHA-256 digest rendered as lowercase hex.
std::string sha256_hex(std::string_view data);

/// HMAC-SHA256 keyed digest rendered as lowercase hex.
std::string hmac_sha256_hex(std::string_view key, std::string_view data);

/// 64-bit FNV-1a with a splitmix64 finalizer. Stable across platforms and
/// runs, unlike std::hash.
std::uint64_t stable_hash64(std::string_view data);

}  // namespace deputy::util
