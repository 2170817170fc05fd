#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "macc/model.hpp"
#include "macc/schemes.hpp"

namespace macc {

/// How key blocks are arranged across nodes.
///   pad:   masked key at the user's first node, one-time pad at its last
///          window node; needs l < k/2 + 1 so no other window sees both.
///   share: additive split into omega blocks spread over isolating window
///          positions; works whenever such positions exist.
enum class PrivacyMode { pad, share };

std::string to_string(PrivacyMode mode);
PrivacyMode parse_mode(std::string_view text);

/// Smallest set of window positions within [1..l] that no other user's
/// window fully covers; brute force in size-then-lexicographic order.
struct OmegaResult {
  int omega = 0;
  std::vector<int> witness;  // positions j_1 < ... < j_omega in [1..l]
};
std::optional<OmegaResult> compute_omega(int num_nodes, int access_degree);

/// Resolved key arrangement of one run. omega = 0 means no key material was
/// needed (nothing is blocked for any user).
struct PrivacyConfig {
  bool privatized = false;
  PrivacyMode mode = PrivacyMode::pad;
  int omega = 0;
  std::vector<int> share_nodes;  // witness positions, share mode
};

/// Resolve the key arrangement for a partition without drawing randomness.
/// Throws ConfigError when the mode cannot work at these dimensions.
PrivacyConfig make_privacy_config(const InstanceParams& params, const PartitionSpec& partition,
                                  PrivacyMode mode);

/// Server-side randomness: a coefficient row per user plus the free random
/// blocks backing pads/shares. Drawn from one seeded stream in fixed order
/// (rows for users 1..k, then per user, per blocked label, per block), and
/// independent of the library contents.
struct KeyMaterial {
  std::uint64_t seed = 0;
  PrivacyConfig config;
  std::vector<BitVector> coeff;  // coeff[k-1]: n-bit row of user k
  // (user, label) -> the omega-1 free random blocks of that key
  std::map<std::pair<int, NodeSet>, std::vector<BitVector>> masks;

  static KeyMaterial generate(const InstanceParams& params, const PartitionSpec& partition,
                              PrivacyMode mode, std::uint64_t seed);

  /// Versioned text fixture format; round-trips through deserialize.
  std::string serialize(const InstanceParams& params) const;
  static std::pair<InstanceParams, KeyMaterial> deserialize(std::istream& in);
};

/// Key block S of one (user, label): the row-weighted XOR of every file's
/// part under that label.
BitVector compute_key(const BitVector& coeff_row, const Library& library, const PartRange& part);

/// Coefficient row a user announces: its private row with the demanded
/// coordinate flipped. Self-inverse.
BitVector virtual_demand(int demand, const BitVector& coeff_row);

/// (omega, omega) additive sharing: omega-1 uniform blocks plus one
/// correction block; any omega-1 shares are independent of the secret.
std::vector<BitVector> share_split(const BitVector& secret, int omega, Rng& rng);
BitVector share_reconstruct(const std::vector<BitVector>& shares, int omega);

/// One cached key block.
struct KeyItem {
  enum class Kind { masked_key, pad, share };
  Kind kind = Kind::masked_key;
  int owner = 0;  // user whose key this block belongs to
  NodeSet label;
  int share_index = 0;  // 1-based within the split; share kind only
  BitVector content;
};

struct NodePlacement {
  std::vector<NodeSet> library_labels;  // identically uncoded across files
  std::vector<KeyItem> keys;            // sorted by (kind, owner, label, share_index)
  long long library_bits = 0;
  long long key_bits = 0;
  long long total_bits() const { return library_bits + key_bits; }
};

struct PlacementSpec {
  std::vector<NodePlacement> nodes;  // nodes[i] describes cache-node i+1
  const NodePlacement& node(int id) const { return nodes.at(static_cast<std::size_t>(id - 1)); }
};

/// Base placement plus key blocks. keys == nullptr gives the plain
/// non-private placement.
PlacementSpec private_place(const BaseScheme& base, const InstanceParams& params,
                            const Library& library, const KeyMaterial* keys);

struct Broadcast {
  int num_users = 0;
  int num_files = 0;
  BitVector header;  // num_users rows of num_files coefficient bits
  std::vector<Packet> packets;

  BitVector coeff_row(int user) const;
  long long payload_bits() const;
};

/// Announce one coefficient row per user, turn every blocked part into the
/// matching announced block, and run the base scheme's delivery on those
/// blocks. keys == nullptr runs the base scheme as-is; the rows degrade to
/// one-hot demand rows.
Broadcast private_deliver(const BaseScheme& base, const InstanceParams& params,
                          const Library& library, const DemandVector& demands,
                          const KeyMaterial* keys);

/// Everything user k can read: subfiles and key blocks of its window nodes.
struct UserView {
  int user = 0;
  std::vector<int> nodes;  // window order
  std::map<NodeSet, std::vector<BitVector>> subfiles;  // label -> files 1..n
  std::vector<KeyItem> keys;  // ascending node, then each node's key order
};
UserView user_view(int user, const InstanceParams& params, const PartitionSpec& partition,
                   const PlacementSpec& placement, const Library& library);

struct DecodeResult {
  bool ok = false;
  BitVector file;
  std::string diagnostic;
};

/// Rebuild the demanded file from the broadcast and the user's own view:
/// reachable parts are read directly; blocked parts are peeled out of their
/// packet using header rows plus cached subfiles, then unmasked with the
/// reconstructed key.
DecodeResult user_decode(int user, int demand, const Broadcast& broadcast, const UserView& view,
                         const InstanceParams& params, const PartitionSpec& partition,
                         const PrivacyConfig& config);

}  // namespace macc
