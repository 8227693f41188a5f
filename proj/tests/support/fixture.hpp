#pragma once

#include <filesystem>
#include <random>
#include <string>

#include "innoscope/pipeline.hpp"
#include "oracles.hpp"

namespace fixture {

inline innoscope::PipelineConfig default_config() {
  innoscope::PipelineConfig c;
  c.input = oracle::fixture_path();
  return c;
}

// One full pipeline run on the fixture, shared by the tests of a binary.
inline const innoscope::RunArtifacts& run() {
  static const innoscope::RunArtifacts artifacts = innoscope::run_pipeline(default_config());
  return artifacts;
}

// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;
  TempDir() {
    std::random_device rd;
    path = std::filesystem::temp_directory_path() / ("innoscope-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace fixture
