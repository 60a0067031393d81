#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace regretlab {

/// Incremental 64-bit FNV-1a.
class Fnv1a {
 public:
  void update(std::span<const std::byte> bytes);
  template <typename T>
  void update_values(const std::vector<T>& values) {
    update(std::as_bytes(std::span<const T>(values)));
  }
  std::uint64_t value() const { return state_; }

 private:
  std::uint64_t state_ = 0xcbf29ce484222325ULL;
};

/// Hex SHA-1 of "blob <size>\0<content>", identical to `git hash-object`.
std::string git_blob_sha1(std::string_view content);

std::string hex64(std::uint64_t value);

}  // namespace regretlab
