#include "macc/model.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace macc {

void InstanceParams::validate() const {
  if (num_nodes < 1) throw ConfigError("k must be >= 1");
  if (access_degree < 1 || access_degree > num_nodes)
    throw ConfigError("l must satisfy 1 <= l <= k");
  if (num_files < 1) throw ConfigError("n must be >= 1");
  if (file_bits < 1) throw ConfigError("b must be >= 1");
}

int mod1(long long value, int modulus) {
  if (modulus <= 0) throw std::invalid_argument("mod1: modulus must be positive");
  long long r = value % modulus;
  if (r <= 0) r += modulus;
  return static_cast<int>(r);
}

std::vector<int> window(int user, const InstanceParams& params) {
  params.validate();
  if (user < 1 || user > params.num_nodes) throw std::invalid_argument("window: user out of range");
  std::vector<int> nodes;
  nodes.reserve(params.access_degree);
  for (int t = 0; t < params.access_degree; ++t)
    nodes.push_back(mod1(static_cast<long long>(user) + t, params.num_nodes));
  return nodes;
}

std::string label_str(const NodeSet& label) {
  std::string s = "{";
  for (std::size_t i = 0; i < label.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(label[i]);
  }
  s += "}";
  return s;
}

NodeSet parse_label(std::string_view text) {
  const auto fail = [&]() -> void { throw ConfigError("bad subset label: " + std::string(text)); };
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') fail();
  NodeSet out;
  std::string_view body = text.substr(1, text.size() - 2);
  std::size_t pos = 0;
  bool expect_item = false;  // a separator was consumed, so an item must follow
  while (pos < body.size() || expect_item) {
    while (pos < body.size() && body[pos] == ' ') ++pos;
    if (pos >= body.size() && !expect_item) break;
    std::size_t end = body.find(',', pos);
    expect_item = end != std::string_view::npos;
    if (!expect_item) end = body.size();
    std::string_view item = pos < body.size() ? body.substr(pos, end - pos) : std::string_view{};
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    int value = 0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || p != item.data() + item.size() || value < 1) fail();
    out.push_back(value);
    pos = end + 1;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PartitionSpec PartitionSpec::from_sizes(const std::map<NodeSet, long long>& sizes,
                                        long long file_bits) {
  PartitionSpec spec;
  long long offset = 0;
  for (const auto& [label, length] : sizes) {
    if (length <= 0)
      throw ConfigError("partition part must have positive length: " + label_str(label));
    spec.parts_[label] = PartRange{offset, length};
    offset += length;
  }
  if (offset != file_bits)
    throw ConfigError("partition covers " + std::to_string(offset) + " of " +
                      std::to_string(file_bits) + " file bits");
  spec.total_bits_ = offset;
  return spec;
}

const PartRange& PartitionSpec::at(const NodeSet& label) const {
  const auto it = parts_.find(label);
  if (it == parts_.end())
    throw std::invalid_argument("partition: unknown label " + label_str(label));
  return it->second;
}

std::vector<NodeSet> blocked_sets(int user, const PartitionSpec& partition,
                                  const InstanceParams& params) {
  const std::vector<int> win = window(user, params);
  std::vector<NodeSet> blocked;
  for (const auto& [label, range] : partition.parts()) {
    bool touches = false;
    for (int node : label) {
      if (std::find(win.begin(), win.end(), node) != win.end()) {
        touches = true;
        break;
      }
    }
    if (!touches) blocked.push_back(label);
  }
  return blocked;
}

Library::Library(std::vector<BitVector> files) : files_(std::move(files)) {
  if (files_.empty()) throw ConfigError("library needs at least one file");
  for (const auto& f : files_)
    if (f.size() != files_[0].size()) throw ConfigError("library files must share one length");
}

Library Library::random(int num_files, long long file_bits, Rng& rng) {
  if (num_files < 1 || file_bits < 1) throw ConfigError("library needs n >= 1 files of b >= 1 bits");
  std::vector<BitVector> files;
  files.reserve(static_cast<std::size_t>(num_files));
  for (int n = 0; n < num_files; ++n) files.push_back(rng.bits(static_cast<std::size_t>(file_bits)));
  return Library(std::move(files));
}

const BitVector& Library::file(int n) const {
  if (n < 1 || n > num_files()) throw std::invalid_argument("library: file index out of range");
  return files_[static_cast<std::size_t>(n - 1)];
}

BitVector Library::subfile(int n, const PartRange& part) const {
  return file(n).slice(static_cast<std::size_t>(part.offset),
                       static_cast<std::size_t>(part.length));
}

void validate_demands(const DemandVector& demands, const InstanceParams& params) {
  if (static_cast<int>(demands.size()) != params.num_nodes)
    throw ConfigError("demand vector must list one file per user");
  for (int d : demands)
    if (d < 1 || d > params.num_files) throw ConfigError("demand index out of range [1..n]");
}

}  // namespace macc
