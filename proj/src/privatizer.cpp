#include "macc/privatizer.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace macc {

std::string to_string(PrivacyMode mode) { return mode == PrivacyMode::pad ? "pad" : "share"; }

PrivacyMode parse_mode(std::string_view text) {
  if (text == "pad") return PrivacyMode::pad;
  if (text == "share") return PrivacyMode::share;
  throw ConfigError("unknown privacy mode: " + std::string(text) + " (expected pad or share)");
}

std::optional<OmegaResult> compute_omega(int num_nodes, int access_degree) {
  if (num_nodes < 1 || access_degree < 1 || access_degree > num_nodes)
    throw std::invalid_argument("compute_omega: need 1 <= l <= k");
  const int k = num_nodes;
  const int l = access_degree;
  const InstanceParams probe{k, l, 1, 1};

  std::vector<std::uint64_t> other_windows;
  for (int u = 2; u <= k; ++u) {
    std::uint64_t mask = 0;
    for (int node : window(u, probe)) mask |= std::uint64_t{1} << node;
    other_windows.push_back(mask);
  }

  // subsets of [1..l] by size, lexicographic within a size
  for (int size = 1; size <= l; ++size) {
    std::vector<int> pick(static_cast<std::size_t>(size));
    for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
    while (true) {
      std::uint64_t mask = 0;
      for (int pos : pick) mask |= std::uint64_t{1} << pos;
      bool isolated = true;
      for (std::uint64_t w : other_windows) {
        if ((mask & ~w) == 0) {  // subset lies inside that window
          isolated = false;
          break;
        }
      }
      if (isolated) return OmegaResult{size, pick};

      int i = size - 1;
      while (i >= 0 && pick[static_cast<std::size_t>(i)] == l - (size - 1 - i)) --i;
      if (i < 0) break;
      ++pick[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < size; ++j)
        pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return std::nullopt;
}

namespace {

std::vector<std::vector<NodeSet>> blocked_per_user(const InstanceParams& params,
                                                   const PartitionSpec& partition) {
  std::vector<std::vector<NodeSet>> blocked(static_cast<std::size_t>(params.num_nodes) + 1);
  for (int k = 1; k <= params.num_nodes; ++k)
    blocked[static_cast<std::size_t>(k)] = blocked_sets(k, partition, params);
  return blocked;
}

bool keys_canonical_less(const KeyItem& a, const KeyItem& b) {
  return std::tie(a.kind, a.owner, a.label, a.share_index) <
         std::tie(b.kind, b.owner, b.label, b.share_index);
}

}  // namespace

PrivacyConfig make_privacy_config(const InstanceParams& params, const PartitionSpec& partition,
                                  PrivacyMode mode) {
  params.validate();
  if (partition.total_bits() != params.file_bits)
    throw ConfigError("partition does not match the instance parameters");

  PrivacyConfig config;
  config.privatized = true;
  config.mode = mode;

  long long blocked_total = 0;
  for (int k = 1; k <= params.num_nodes; ++k)
    for (const NodeSet& label : blocked_sets(k, partition, params))
      blocked_total += partition.at(label).length;
  if (blocked_total == 0) return config;

  if (mode == PrivacyMode::pad) {
    // l < k/2 + 1, i.e. 2l <= k+1: otherwise some other window holds both
    // the masked key and its pad.
    if (2 * params.access_degree > params.num_nodes + 1)
      throw ConfigError("pad mode needs l < k/2 + 1; rerun with --mode share");
    config.omega = 2;
  } else {
    const auto om = compute_omega(params.num_nodes, params.access_degree);
    if (!om)
      throw ConfigError(
          "share mode impossible: every candidate share set lies inside another user's window");
    config.omega = om->omega;
    config.share_nodes = om->witness;
  }
  return config;
}

KeyMaterial KeyMaterial::generate(const InstanceParams& params, const PartitionSpec& partition,
                                  PrivacyMode mode, std::uint64_t seed) {
  KeyMaterial km;
  km.seed = seed;
  km.config = make_privacy_config(params, partition, mode);

  const auto blocked = blocked_per_user(params, partition);

  Rng rng(seed);
  for (int k = 1; k <= params.num_nodes; ++k)
    km.coeff.push_back(rng.bits(static_cast<std::size_t>(params.num_files)));
  const int free_blocks = km.config.omega > 0 ? km.config.omega - 1 : 0;
  if (free_blocks > 0) {
    for (int k = 1; k <= params.num_nodes; ++k) {
      for (const NodeSet& label : blocked[static_cast<std::size_t>(k)]) {
        auto& blocks = km.masks[{k, label}];
        const long long len = partition.at(label).length;
        for (int h = 0; h < free_blocks; ++h)
          blocks.push_back(rng.bits(static_cast<std::size_t>(len)));
      }
    }
  }
  return km;
}

BitVector compute_key(const BitVector& coeff_row, const Library& library, const PartRange& part) {
  if (coeff_row.size() != static_cast<std::size_t>(library.num_files()))
    throw std::invalid_argument("compute_key: coefficient row needs one bit per file");
  BitVector acc(static_cast<std::size_t>(part.length));
  for (int n = 1; n <= library.num_files(); ++n)
    if (coeff_row.bit(static_cast<std::size_t>(n - 1))) acc ^= library.subfile(n, part);
  return acc;
}

BitVector virtual_demand(int demand, const BitVector& coeff_row) {
  if (demand < 1 || static_cast<std::size_t>(demand) > coeff_row.size())
    throw std::invalid_argument("virtual_demand: demand out of range");
  BitVector row = coeff_row;
  row.set_bit(static_cast<std::size_t>(demand - 1), !row.bit(static_cast<std::size_t>(demand - 1)));
  return row;
}

std::vector<BitVector> share_split(const BitVector& secret, int omega, Rng& rng) {
  if (omega < 1) throw std::invalid_argument("share_split: omega must be >= 1");
  std::vector<BitVector> shares;
  shares.reserve(static_cast<std::size_t>(omega));
  BitVector last = secret;
  for (int h = 1; h < omega; ++h) {
    shares.push_back(rng.bits(secret.size()));
    last ^= shares.back();
  }
  shares.push_back(std::move(last));
  return shares;
}

BitVector share_reconstruct(const std::vector<BitVector>& shares, int omega) {
  if (omega < 1 || static_cast<int>(shares.size()) != omega)
    throw std::invalid_argument("share_reconstruct: expected exactly omega shares");
  BitVector out = shares[0];
  for (std::size_t h = 1; h < shares.size(); ++h) out ^= shares[h];
  return out;
}

PlacementSpec private_place(const BaseScheme& base, const InstanceParams& params,
                            const Library& library, const KeyMaterial* keys) {
  params.validate();
  if (library.num_files() != params.num_files || library.file_bits() != params.file_bits)
    throw ConfigError("library does not match the instance parameters");
  const PartitionSpec partition = base.partition(params);

  PlacementSpec spec;
  spec.nodes.resize(static_cast<std::size_t>(params.num_nodes));

  for (const auto& [node, labels] : base.place(params)) {
    if (node < 1 || node > params.num_nodes) throw ConfigError("placement names a node out of range");
    NodePlacement& np = spec.nodes[static_cast<std::size_t>(node - 1)];
    np.library_labels = labels;
    std::sort(np.library_labels.begin(), np.library_labels.end());
    for (const NodeSet& label : np.library_labels)
      np.library_bits += partition.at(label).length * params.num_files;
  }

  if (keys) {
    const PrivacyConfig& cfg = keys->config;
    if (!cfg.privatized) throw std::invalid_argument("private_place: keys not marked privatized");
    if (static_cast<int>(keys->coeff.size()) != params.num_nodes)
      throw ConfigError("key material: need one coefficient row per user");
    for (const BitVector& row : keys->coeff)
      if (row.size() != static_cast<std::size_t>(params.num_files))
        throw ConfigError("key material: coefficient rows need one bit per file");

    const int free_blocks = cfg.omega > 0 ? cfg.omega - 1 : 0;
    for (int k = 1; k <= params.num_nodes; ++k) {
      for (const NodeSet& label : blocked_sets(k, partition, params)) {
        const PartRange& part = partition.at(label);
        const BitVector secret = compute_key(keys->coeff[static_cast<std::size_t>(k - 1)], library, part);

        static const std::vector<BitVector> kNoBlocks;
        const auto it = keys->masks.find({k, label});
        const std::vector<BitVector>& blocks = it == keys->masks.end() ? kNoBlocks : it->second;
        if (static_cast<int>(blocks.size()) != free_blocks)
          throw ConfigError("key material misses blocks for user " + std::to_string(k) +
                            " part " + label_str(label));
        for (const BitVector& b : blocks)
          if (b.size() != static_cast<std::size_t>(part.length))
            throw ConfigError("key material block length mismatch");

        if (cfg.mode == PrivacyMode::pad) {
          const BitVector& pad = blocks[0];
          const int far = mod1(static_cast<long long>(k) + params.access_degree - 1,
                               params.num_nodes);
          spec.nodes[static_cast<std::size_t>(k - 1)].keys.push_back(
              KeyItem{KeyItem::Kind::masked_key, k, label, 0, secret ^ pad});
          spec.nodes[static_cast<std::size_t>(far - 1)].keys.push_back(
              KeyItem{KeyItem::Kind::pad, k, label, 0, pad});
        } else {
          BitVector last = secret;
          for (const BitVector& b : blocks) last ^= b;
          for (int h = 1; h <= cfg.omega; ++h) {
            const int node = mod1(
                static_cast<long long>(cfg.share_nodes[static_cast<std::size_t>(h - 1)]) + k - 1,
                params.num_nodes);
            const BitVector& content = h < cfg.omega ? blocks[static_cast<std::size_t>(h - 1)] : last;
            spec.nodes[static_cast<std::size_t>(node - 1)].keys.push_back(
                KeyItem{KeyItem::Kind::share, k, label, h, content});
          }
        }
      }
    }
    for (NodePlacement& np : spec.nodes) {
      std::sort(np.keys.begin(), np.keys.end(), keys_canonical_less);
      for (const KeyItem& item : np.keys) np.key_bits += static_cast<long long>(item.content.size());
    }
  }
  return spec;
}

BitVector Broadcast::coeff_row(int user) const {
  if (user < 1 || user > num_users) throw std::invalid_argument("coeff_row: user out of range");
  return header.slice(static_cast<std::size_t>((user - 1) * num_files),
                      static_cast<std::size_t>(num_files));
}

long long Broadcast::payload_bits() const {
  long long bits = 0;
  for (const Packet& p : packets) bits += static_cast<long long>(p.payload.size());
  return bits;
}

Broadcast private_deliver(const BaseScheme& base, const InstanceParams& params,
                          const Library& library, const DemandVector& demands,
                          const KeyMaterial* keys) {
  params.validate();
  validate_demands(demands, params);
  if (library.num_files() != params.num_files || library.file_bits() != params.file_bits)
    throw ConfigError("library does not match the instance parameters");
  if (keys && static_cast<int>(keys->coeff.size()) != params.num_nodes)
    throw ConfigError("key material: need one coefficient row per user");

  const PartitionSpec partition = base.partition(params);
  const BitVector zero_row(static_cast<std::size_t>(params.num_files));

  Broadcast bc;
  bc.num_users = params.num_nodes;
  bc.num_files = params.num_files;

  Needs needs;
  for (int k = 1; k <= params.num_nodes; ++k) {
    const BitVector& p_row = keys ? keys->coeff[static_cast<std::size_t>(k - 1)] : zero_row;
    const BitVector q_row = virtual_demand(demands[static_cast<std::size_t>(k - 1)], p_row);
    bc.header.append(q_row);
    std::vector<NeedBlock> blocks;
    for (const NodeSet& label : blocked_sets(k, partition, params))
      blocks.push_back(NeedBlock{label, compute_key(q_row, library, partition.at(label))});
    if (!blocks.empty()) needs[k] = std::move(blocks);
  }
  bc.packets = base.deliver(params, needs);
  return bc;
}

UserView user_view(int user, const InstanceParams& params, const PartitionSpec& partition,
                   const PlacementSpec& placement, const Library& library) {
  params.validate();
  if (static_cast<int>(placement.nodes.size()) != params.num_nodes)
    throw std::invalid_argument("user_view: placement does not match the instance");
  UserView view;
  view.user = user;
  view.nodes = window(user, params);
  for (int node : view.nodes) {
    for (const NodeSet& label : placement.node(node).library_labels) {
      if (view.subfiles.count(label)) continue;
      std::vector<BitVector>& contents = view.subfiles[label];
      const PartRange& part = partition.at(label);
      for (int n = 1; n <= params.num_files; ++n) contents.push_back(library.subfile(n, part));
    }
  }
  std::vector<int> sorted_nodes = view.nodes;
  std::sort(sorted_nodes.begin(), sorted_nodes.end());
  sorted_nodes.erase(std::unique(sorted_nodes.begin(), sorted_nodes.end()), sorted_nodes.end());
  for (int node : sorted_nodes)
    for (const KeyItem& item : placement.node(node).keys) view.keys.push_back(item);
  return view;
}

DecodeResult user_decode(int user, int demand, const Broadcast& broadcast, const UserView& view,
                         const InstanceParams& params, const PartitionSpec& partition,
                         const PrivacyConfig& config) {
  DecodeResult result;
  const auto fail = [&](std::string why) {
    result.ok = false;
    result.diagnostic = std::move(why);
    return result;
  };
  if (view.user != user) return fail("view belongs to another user");
  if (demand < 1 || demand > params.num_files) return fail("demand out of range");
  if (broadcast.num_users != params.num_nodes || broadcast.num_files != params.num_files)
    return fail("broadcast does not match the instance");

  BitVector file(static_cast<std::size_t>(params.file_bits));

  for (const auto& [label, part] : partition.parts()) {
    const auto cached = view.subfiles.find(label);
    if (cached != view.subfiles.end()) {
      file.splice(static_cast<std::size_t>(part.offset),
                  cached->second[static_cast<std::size_t>(demand - 1)]);
      continue;
    }

    // blocked part: find its packet, peel the other terms, unmask the key
    const Packet* packet = nullptr;
    for (const Packet& p : broadcast.packets) {
      for (const auto& [term_user, term_label] : p.recipe) {
        if (term_user == user && term_label == label) {
          packet = &p;
          break;
        }
      }
      if (packet) break;
    }
    if (!packet)
      return fail("no packet carries part " + label_str(label) + " for user " +
                  std::to_string(user));

    BitVector block = packet->payload;
    for (const auto& [term_user, term_label] : packet->recipe) {
      if (term_user == user && term_label == label) continue;
      const auto other = view.subfiles.find(term_label);
      if (other == view.subfiles.end())
        return fail("cannot cancel term (user " + std::to_string(term_user) + ", " +
                    label_str(term_label) + "): part not cached in this window");
      const BitVector other_row = broadcast.coeff_row(term_user);
      BitVector term(other->second[0].size());
      for (int n = 1; n <= params.num_files; ++n)
        if (other_row.bit(static_cast<std::size_t>(n - 1)))
          term ^= other->second[static_cast<std::size_t>(n - 1)];
      if (term.size() != block.size()) return fail("packet mixes block lengths");
      block ^= term;
    }

    if (config.privatized && config.omega > 0) {
      if (config.mode == PrivacyMode::pad) {
        const BitVector* masked = nullptr;
        const BitVector* pad = nullptr;
        for (const KeyItem& item : view.keys) {
          if (item.owner != user || item.label != label) continue;
          if (item.kind == KeyItem::Kind::masked_key) masked = &item.content;
          if (item.kind == KeyItem::Kind::pad) pad = &item.content;
        }
        if (!masked || !pad)
          return fail("missing masked key or pad for part " + label_str(label));
        block ^= *masked;
        block ^= *pad;
      } else {
        std::vector<const BitVector*> shares(static_cast<std::size_t>(config.omega), nullptr);
        for (const KeyItem& item : view.keys) {
          if (item.kind != KeyItem::Kind::share || item.owner != user || item.label != label)
            continue;
          if (item.share_index < 1 || item.share_index > config.omega)
            return fail("share index out of range for part " + label_str(label));
          shares[static_cast<std::size_t>(item.share_index - 1)] = &item.content;
        }
        for (int h = 1; h <= config.omega; ++h) {
          const BitVector* s = shares[static_cast<std::size_t>(h - 1)];
          if (!s)
            return fail("missing share " + std::to_string(h) + " for part " + label_str(label));
          block ^= *s;
        }
      }
    }
    file.splice(static_cast<std::size_t>(part.offset), block);
  }

  result.ok = true;
  result.file = std::move(file);
  return result;
}

std::string KeyMaterial::serialize(const InstanceParams& params) const {
  std::ostringstream out;
  out << "macc-keys v1\n";
  out << "k " << params.num_nodes << "\n";
  out << "l " << params.access_degree << "\n";
  out << "n " << params.num_files << "\n";
  out << "b " << params.file_bits << "\n";
  out << "seed " << seed << "\n";
  out << "mode " << to_string(config.mode) << "\n";
  out << "omega " << config.omega << "\n";
  if (!config.share_nodes.empty()) {
    out << "share-positions";
    for (int pos : config.share_nodes) out << " " << pos;
    out << "\n";
  }
  for (std::size_t k = 0; k < coeff.size(); ++k)
    out << "coeff " << (k + 1) << " " << coeff[k].to_string() << "\n";
  for (const auto& [key, blocks] : masks) {
    for (std::size_t h = 0; h < blocks.size(); ++h)
      out << "mask " << key.first << " " << label_str(key.second) << " " << (h + 1) << " "
          << blocks[h].to_string() << "\n";
  }
  out << "end\n";  // trailer so a truncated dump cannot parse
  return out.str();
}

std::pair<InstanceParams, KeyMaterial> KeyMaterial::deserialize(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "macc-keys v1")
    throw ConfigError("key material: unknown format or version");
  InstanceParams params;
  KeyMaterial km;
  km.config.privatized = true;
  int lineno = 1;
  bool saw_end = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    const auto fail = [&]() -> void {
      throw ConfigError("key material line " + std::to_string(lineno) + ": bad record");
    };
    if (saw_end) fail();
    if (tag == "end") {
      saw_end = true;
    } else if (tag == "k") {
      if (!(ss >> params.num_nodes)) fail();
    } else if (tag == "l") {
      if (!(ss >> params.access_degree)) fail();
    } else if (tag == "n") {
      if (!(ss >> params.num_files)) fail();
    } else if (tag == "b") {
      if (!(ss >> params.file_bits)) fail();
    } else if (tag == "seed") {
      if (!(ss >> km.seed)) fail();
    } else if (tag == "mode") {
      std::string mode;
      if (!(ss >> mode)) fail();
      km.config.mode = parse_mode(mode);
    } else if (tag == "omega") {
      if (!(ss >> km.config.omega)) fail();
    } else if (tag == "share-positions") {
      int pos = 0;
      while (ss >> pos) km.config.share_nodes.push_back(pos);
    } else if (tag == "coeff") {
      int user = 0;
      std::string bits;
      if (!(ss >> user >> bits)) fail();
      if (user != static_cast<int>(km.coeff.size()) + 1) fail();
      km.coeff.push_back(BitVector::from_string(bits));
    } else if (tag == "mask") {
      int user = 0;
      int index = 0;
      std::string label;
      std::string bits;
      if (!(ss >> user >> label >> index >> bits)) fail();
      auto& blocks = km.masks[{user, parse_label(label)}];
      if (index != static_cast<int>(blocks.size()) + 1) fail();
      blocks.push_back(BitVector::from_string(bits));
    } else {
      fail();
    }
  }
  if (!saw_end) throw ConfigError("key material: truncated, end marker missing");
  params.validate();
  if (static_cast<int>(km.coeff.size()) != params.num_nodes)
    throw ConfigError("key material: wrong number of coefficient rows");
  for (const BitVector& row : km.coeff)
    if (static_cast<int>(row.size()) != params.num_files)
      throw ConfigError("key material: coefficient row length differs from the file count");
  return {params, km};
}

}  // namespace macc
