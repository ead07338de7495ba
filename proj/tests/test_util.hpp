// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the test binaries.
#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sripipe/lidar_frame.hpp"

namespace test_util {

class TempDir {
 public:
  TempDir() {
    std::string tmpl =
        (std::filesystem::temp_directory_path() / "sripipe-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path,
                       const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
}

inline std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// Small deterministic frame with every pixel valid.
inline sripipe::LidarFrame make_ramp_frame(int width, int height) {
  const std::size_t n =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<uint32_t> range(n);
  std::vector<uint16_t> reflect(n), nir(n), signal(n);
  for (std::size_t i = 0; i < n; ++i) {
    // multiples of the default 4 mm range unit, so disk round trips are exact
    range[i] = static_cast<uint32_t>(4 * (250 + i % 5000));
    reflect[i] = static_cast<uint16_t>(i % 65536);
    nir[i] = static_cast<uint16_t>((3 * i + 17) % 65536);
    signal[i] = static_cast<uint16_t>((7 * i + 101) % 65536);
  }
  return sripipe::LidarFrame(width, height, std::move(range), std::move(reflect),
                             std::move(nir), std::move(signal));
}

}  // namespace test_util
