#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "macc/fraction.hpp"
#include "macc/model.hpp"

namespace macc {

/// One multicast transmission: the XOR of one content block per listed
/// (user, label) term. All terms of a packet share one block length.
struct Packet {
  BitVector payload;
  std::vector<std::pair<int, NodeSet>> recipe;
};

/// A content block a user still needs, tagged by its partition label.
struct NeedBlock {
  NodeSet label;
  BitVector content;
};

/// Per-user needed blocks, each user's list in blocked_sets order.
using Needs = std::map<int, std::vector<NeedBlock>>;

/// A non-private placement/delivery scheme. Placement is expressed purely as
/// labels (the same parts of every file), and delivery sees only opaque
/// labeled blocks, so a scheme cannot react to what is actually requested.
class BaseScheme {
 public:
  virtual ~BaseScheme() = default;
  virtual std::string name() const = 0;
  /// Library content cached per node, in units of files.
  virtual Fraction memory_ratio(const InstanceParams& params) const = 0;
  virtual PartitionSpec partition(const InstanceParams& params) const = 0;
  /// node -> labels of the parts it caches (of every file).
  virtual std::map<int, std::vector<NodeSet>> place(const InstanceParams& params) const = 0;
  virtual std::vector<Packet> deliver(const InstanceParams& params, const Needs& needs) const = 0;
};

std::unique_ptr<BaseScheme> uncached_scheme();
std::unique_ptr<BaseScheme> singleton_scheme();
std::unique_ptr<BaseScheme> stripe_scheme();
std::unique_ptr<BaseScheme> make_scheme(std::string_view name);

/// Placement description loaded from text, for auditing placements that did
/// not come out of a BaseScheme. Two record shapes (one per line):
///   node <id>: {1} {2,3}             parts cached for every file alike
///   node <id> file <n>: {1} {2,3}    parts cached for one file only
/// Blank lines and lines starting with '#' are skipped. A fixture uses one
/// shape throughout.
class PlacementFixture {
 public:
  static PlacementFixture parse(std::istream& in);
  static PlacementFixture load(const std::string& path);

  bool per_file() const { return per_file_; }
  int max_node() const { return max_node_; }
  int max_file() const { return max_file_; }
  std::vector<NodeSet> labels(int node) const;
  std::vector<NodeSet> labels(int node, int file) const;

 private:
  bool per_file_ = false;
  int max_node_ = 0;
  int max_file_ = 0;
  std::map<int, std::vector<NodeSet>> uncoded_;
  std::map<std::pair<int, int>, std::vector<NodeSet>> by_file_;
};

struct RequirementReport {
  bool pass = true;
  std::string detail;  // human-readable witness; empty on pass
  // witness fields, meaningful on failure
  int window_user = 0;  // window whose nodes collide
  NodeSet label;
  int node_a = 0;
  int node_b = 0;
  int node = 0;    // offending node (file-dependent placement)
  int file_a = 0;  // file pair whose cached parts differ
  int file_b = 0;
};

/// No L neighbouring nodes may cache a common bit: within every window the
/// nodes' cached label sets must be pairwise disjoint.
RequirementReport check_requirement1(const BaseScheme& scheme, const InstanceParams& params);
RequirementReport check_requirement1(const PlacementFixture& fixture, const InstanceParams& params);

/// Placement must be identically uncoded: the same parts of every file.
/// Structural for schemes built through the interface; real work only for
/// per-file fixtures.
RequirementReport check_requirement2(const BaseScheme& scheme, const InstanceParams& params);
RequirementReport check_requirement2(const PlacementFixture& fixture, int num_files);

}  // namespace macc
