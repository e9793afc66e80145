#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "ambivox/corpus.hpp"
#include "ambivox/features.hpp"
#include "ambivox/stats.hpp"

namespace ambivox::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Speakers x ambiences design for one feature: each cell is the mean over a
/// speaker's clips in that ambience. Speakers missing an ambience are
/// dropped and listed in `dropped`.
struct FeatureDesign {
  RepeatedMeasuresDesign design;
  std::vector<std::string> dropped;
};

FeatureDesign feature_design(const FeatureTable& table, Feature feature, const RecordFilter& filter);

}  // namespace ambivox::cli
