#pragma once

#include <cstdint>
#include <string_view>

#include "dialdep/segment.hpp"
#include "dialdep/selection.hpp"
#include "dialdep/transform.hpp"

namespace dialdep {

// Run-wide settings. Defaults: epsilon 0.98, k 2, one selection round,
// seed 42.
struct PipelineConfig {
  SegmenterConfig segment;
  TransformConfig transform;
  double epsilon = 0.98;
  DedupScore dedup = DedupScore::Min;
  int iterations = 1;
  std::uint64_t seed = 42;
};

// INI text with optional [segment], [transform], [selection] and [run]
// sections; list values are separated by whitespace or commas. Keys not given keep the
// values already in `base`. Throws InvalidArgument.
PipelineConfig load_config(std::string_view ini_text, PipelineConfig base = {});

}  // namespace dialdep
