#pragma once

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "raster_oracle.hpp"

namespace votkit::test {

/// Fresh empty directory under the test temp root, unique per test.
inline std::filesystem::path scratch_dir(const std::string& tag = "") {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  std::string name = std::string(info->test_suite_name()) + "_" + info->name() + tag;
  std::replace(name.begin(), name.end(), '/', '_');
  const auto dir = std::filesystem::path(::testing::TempDir()) / "votkit" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace votkit::test
