#pragma once

#include <filesystem>
#include <functional>
#include <random>
#include <string>

#include <doctest.h>

#include "dasp/error.hpp"

namespace testutil {

/// Kind of the dasp::Error thrown by `fn`; fails the test when nothing or
/// something else is thrown.
inline dasp::ErrorKind error_kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const dasp::Error& e) {
    return e.kind();
  }
  FAIL("expected dasp::Error");
  return dasp::ErrorKind::Io;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() / ("dasp-test-" + tag + "-" + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string operator/(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testutil
