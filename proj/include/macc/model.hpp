#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "macc/bitvector.hpp"
#include "macc/errors.hpp"
#include "macc/random.hpp"

namespace macc {

/// System dimensions: K cache-nodes serving K users, each user reading the
/// L cyclically consecutive nodes starting at its own index, and a library
/// of N files of B bits.
struct InstanceParams {
  int num_nodes = 0;        // K; also the number of users
  int access_degree = 0;    // L
  int num_files = 0;        // N
  long long file_bits = 0;  // B

  void validate() const;  // throws ConfigError
};

/// Subset of cache-node indices (1-based), kept sorted ascending. std::map
/// ordering of these vectors is the canonical lexicographic label order
/// used to assign subfile offsets.
using NodeSet = std::vector<int>;

std::string label_str(const NodeSet& label);   // "{}", "{1,3}"
NodeSet parse_label(std::string_view text);    // throws ConfigError

/// 1-based modulo: the unique r in [1..modulus] congruent to value.
int mod1(long long value, int modulus);

/// The L cache-nodes user k reads, in wrap-around order starting at node k.
std::vector<int> window(int user, const InstanceParams& params);

struct PartRange {
  long long offset = 0;
  long long length = 0;
};

/// A partition of the B file positions into labeled parts. The split is the
/// same for every file; offsets run in lexicographic label order.
class PartitionSpec {
 public:
  PartitionSpec() = default;
  static PartitionSpec from_sizes(const std::map<NodeSet, long long>& sizes, long long file_bits);

  const std::map<NodeSet, PartRange>& parts() const { return parts_; }
  long long total_bits() const { return total_bits_; }
  bool contains(const NodeSet& label) const { return parts_.count(label) > 0; }
  const PartRange& at(const NodeSet& label) const;

 private:
  std::map<NodeSet, PartRange> parts_;
  long long total_bits_ = 0;
};

/// Labels whose parts user k cannot reach through any node of its window.
/// Lexicographic label order. Note the empty label never intersects a
/// window, so a part cached nowhere is blocked for every user.
std::vector<NodeSet> blocked_sets(int user, const PartitionSpec& partition,
                                  const InstanceParams& params);

/// N files of equal length.
class Library {
 public:
  explicit Library(std::vector<BitVector> files);
  static Library random(int num_files, long long file_bits, Rng& rng);

  int num_files() const { return static_cast<int>(files_.size()); }
  long long file_bits() const { return static_cast<long long>(files_[0].size()); }
  const BitVector& file(int n) const;  // 1-based
  BitVector subfile(int n, const PartRange& part) const;

 private:
  std::vector<BitVector> files_;
};

/// demands[k-1] is the file index (1-based) user k requests.
using DemandVector = std::vector<int>;

void validate_demands(const DemandVector& demands, const InstanceParams& params);

}  // namespace macc
