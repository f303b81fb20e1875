#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rngaudit/descriptor.hpp"

namespace rngaudit {

inline constexpr std::string_view kSampleHeaderPrefix = "# rngaudit-sample v1";
inline constexpr std::string_view kExternalProvenance = "external file";

// A finite sequence x_1..x_N in [0,1), in generation order, tagged with the
// descriptor (or "external file") it came from. Immutable after
// construction.
class Sample {
 public:
  Sample() = default;

  // Throws UsageError if any value lies outside [0,1) or is NaN.
  explicit Sample(std::vector<double> values, std::string provenance = std::string(kExternalProvenance));

  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::string& provenance() const { return provenance_; }

 private:
  std::vector<double> values_;
  std::string provenance_ = std::string(kExternalProvenance);
};

Sample generate_sample(const GeneratorDescriptor& descriptor, std::size_t count);

// Shortest round-trip decimal, always carrying a decimal point ("0.0", "0.6").
std::string format_uniform(double value);

// Header line plus one value per line.
std::string format_sample(const Sample& sample);

// Accepts an optional header line (and ignores other '#' comments and blank
// lines). The provenance is taken from the header when present.
Sample parse_sample(std::istream& in);

void write_sample_file(const std::filesystem::path& path, const Sample& sample);

// Throws IoError when the file cannot be opened, UsageError on malformed
// content.
Sample read_sample_file(const std::filesystem::path& path);

// Writes via a sibling temporary file and a rename. Throws IoError.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace rngaudit
