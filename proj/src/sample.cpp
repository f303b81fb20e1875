#include "rngaudit/sample.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include "rngaudit/error.hpp"

namespace rngaudit {

Sample::Sample(std::vector<double> values, std::string provenance)
    : values_(std::move(values)), provenance_(std::move(provenance)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v >= 0.0 && v < 1.0)) {
      std::ostringstream msg;
      msg << "sample value #" << (i + 1) << " = " << v << " is outside [0,1)";
      throw UsageError(msg.str());
    }
  }
}

Sample generate_sample(const GeneratorDescriptor& descriptor, std::size_t count) {
  Generator gen = make_generator(descriptor);
  std::vector<double> values(count);
  gen.fill(values);
  return Sample(std::move(values), to_string(descriptor));
}

std::string format_uniform(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  std::string out(buf, end);
  if (out.find_first_of(".e") == std::string::npos) out += ".0";
  return out;
}

std::string format_sample(const Sample& sample) {
  std::string out;
  out.reserve(sample.size() * 22 + 64);
  out += kSampleHeaderPrefix;
  out += ' ';
  out += sample.provenance();
  out += '\n';
  for (double v : sample.values()) {
    out += format_uniform(v);
    out += '\n';
  }
  return out;
}

Sample parse_sample(std::istream& in) {
  std::vector<double> values;
  std::string provenance(kExternalProvenance);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    std::string_view text(line);
    text.remove_prefix(first);
    if (text.front() == '#') {
      if (line_no == 1 && text.starts_with(kSampleHeaderPrefix)) {
        std::string_view rest = text.substr(kSampleHeaderPrefix.size());
        while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
        if (!rest.empty()) provenance = std::string(rest);
      }
      continue;
    }
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw UsageError("sample line " + std::to_string(line_no) + ": not a number: '" +
                       std::string(text) + "'");
    }
    values.push_back(v);
  }
  return Sample(std::move(values), std::move(provenance));
}

void write_sample_file(const std::filesystem::path& path, const Sample& sample) {
  write_file_atomic(path, format_sample(sample));
}

Sample read_sample_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sample file '" + path.string() + "'");
  return parse_sample(in);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move output into place at '" + path.string() + "'");
  }
}

}  // namespace rngaudit
