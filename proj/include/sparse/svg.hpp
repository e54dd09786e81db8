#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sparse {

struct StemSeries {
  std::vector<double> values;
  std::string color;
  std::string label;
};

// Stem plot on a fixed 800x400 viewbox, one marker + stem per index, series
// overlaid. No plotting dependency; output is deterministic.
void write_stem_svg(const std::filesystem::path& path, const std::vector<StemSeries>& series,
                    const std::string& title);

}  // namespace sparse
