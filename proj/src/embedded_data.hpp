#ifndef CLUSTERABILITY_SRC_EMBEDDED_DATA_HPP
#define CLUSTERABILITY_SRC_EMBEDDED_DATA_HPP

#include <array>
#include <string_view>

namespace clusterability::detail {

struct EmbeddedFile {
  std::string_view name;
  std::string_view content;
};

extern const std::array<EmbeddedFile, 9> kBundledFiles;
extern const std::string_view kDefaultPresets;

}  // namespace clusterability::detail

#endif  // CLUSTERABILITY_SRC_EMBEDDED_DATA_HPP
