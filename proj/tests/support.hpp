#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "util/text.hpp"

namespace ttl::testutil {

inline std::filesystem::path fixture(const std::string& rel) {
  return std::filesystem::path(TTL_FIXTURE_DIR) / rel;
}

inline std::string fixture_text(const std::string& rel) { return text::read_file(fixture(rel)); }

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("ttl-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const { return path_ / rel; }

 private:
  std::filesystem::path path_;
};

}  // namespace ttl::testutil
