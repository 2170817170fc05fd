#include "macc/infoverify.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "macc/schemes.hpp"

namespace macc {

namespace {

constexpr int kMaxDenseObsBits = 22;
constexpr int kMaxWitnesses = 4;
constexpr int kMaxDecodeFailures = 8;
constexpr std::uint64_t kTableMark = ~std::uint64_t{0};

std::uint64_t fnv_fold(std::uint64_t hash, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    hash ^= (value >> (8 * i)) & 0xff;
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::uint64_t demand_space(const InstanceParams& params, long long cap) {
  std::uint64_t space = 1;
  for (int k = 0; k < params.num_nodes; ++k) {
    space *= static_cast<std::uint64_t>(params.num_files);
    if (space > static_cast<std::uint64_t>(cap))
      throw ConfigError("demand space exceeds the cap of " + std::to_string(cap) + " vectors");
  }
  return space;
}

/// Demand vector number `index`, counting with the last user fastest.
DemandVector demand_at(std::uint64_t index, const InstanceParams& params) {
  DemandVector d(static_cast<std::size_t>(params.num_nodes));
  for (int j = params.num_nodes; j >= 1; --j) {
    d[static_cast<std::size_t>(j - 1)] =
        1 + static_cast<int>(index % static_cast<std::uint64_t>(params.num_files));
    index /= static_cast<std::uint64_t>(params.num_files);
  }
  return d;
}

/// One XOR term of an observable bit. An observable bit is the XOR of its
/// atoms; every atom is a product of at most one enumerated library/mask bit
/// with a row-derived coefficient, so for fixed rows and demands the whole
/// observable is an affine function of the (library, mask) word.
struct ObsAtom {
  enum class Kind : std::uint8_t {
    header_flip,    // row bit (user, file) xor [demand(user) == file]
    announced_lib,  // that same coefficient gating a library bit
    row_lib,        // raw row bit (user, file) gating a library bit
    lib,            // a library bit
    mask            // a mask-word bit
  };
  Kind kind;
  int user = 0;
  int file = 0;
  int bit = 0;  // library bit index, or mask bit index for Kind::mask
};

struct EnumContext {
  InstanceParams params;
  std::unique_ptr<BaseScheme> base;
  PartitionSpec partition;
  bool privatize = false;
  PrivacyConfig pconfig;
  int lib_bits = 0;
  int row_bits = 0;
  int mask_bits = 0;
  std::map<std::pair<int, NodeSet>, int> mask_base;  // (owner, label) -> first mask bit
  PlacementSpec shape;                               // key-item structure, zero contents
  std::vector<Packet> packets;                       // packet structure, zero payloads
};

int lib_bit(const EnumContext& ctx, int file, const PartRange& part, long long pos) {
  return static_cast<int>((file - 1) * ctx.params.file_bits + part.offset + pos);
}

int row_bit(const EnumContext& ctx, int user, int file) {
  return (user - 1) * ctx.params.num_files + (file - 1);
}

int mask_bit(const EnumContext& ctx, int owner, const NodeSet& label, int block, long long pos) {
  return ctx.mask_base.at({owner, label}) +
         static_cast<int>(block * ctx.partition.at(label).length + pos);
}

EnumContext build_context(const VerifyConfig& config) {
  EnumContext ctx;
  ctx.params = config.params;
  ctx.params.validate();
  ctx.base = make_scheme(config.scheme);
  ctx.partition = ctx.base->partition(ctx.params);
  ctx.privatize = config.privatize;
  ctx.lib_bits = static_cast<int>(ctx.params.num_files * ctx.params.file_bits);

  std::vector<BitVector> zero_files(static_cast<std::size_t>(ctx.params.num_files),
                                    BitVector(static_cast<std::size_t>(ctx.params.file_bits)));
  const Library zero_library(std::move(zero_files));
  std::optional<KeyMaterial> zero_keys;
  if (ctx.privatize) {
    ctx.pconfig = make_privacy_config(ctx.params, ctx.partition, config.mode);
    ctx.row_bits = ctx.params.num_nodes * ctx.params.num_files;
    KeyMaterial km;
    km.config = ctx.pconfig;
    const int free_blocks = ctx.pconfig.omega > 0 ? ctx.pconfig.omega - 1 : 0;
    int cursor = 0;
    for (int k = 1; k <= ctx.params.num_nodes; ++k) {
      km.coeff.push_back(BitVector(static_cast<std::size_t>(ctx.params.num_files)));
      for (const NodeSet& label : blocked_sets(k, ctx.partition, ctx.params)) {
        const long long len = ctx.partition.at(label).length;
        ctx.mask_base[{k, label}] = cursor;
        cursor += static_cast<int>(free_blocks * len);
        if (free_blocks > 0)
          km.masks[{k, label}] = std::vector<BitVector>(static_cast<std::size_t>(free_blocks),
                                                        BitVector(static_cast<std::size_t>(len)));
      }
    }
    ctx.mask_bits = cursor;
    zero_keys = std::move(km);
  }
  const KeyMaterial* key_ptr = zero_keys ? &*zero_keys : nullptr;
  ctx.shape = private_place(*ctx.base, ctx.params, zero_library, key_ptr);
  const DemandVector ones(static_cast<std::size_t>(ctx.params.num_nodes), 1);
  ctx.packets = private_deliver(*ctx.base, ctx.params, zero_library, ones, key_ptr).packets;
  return ctx;
}

/// The packed observable one observer sees: announced rows, packet payloads,
/// then its window nodes ascending, per node the library parts (labels in
/// label order, files 1..n, bits in part order) followed by the node's key
/// blocks in their stored order.
struct Layout {
  int obs_bits = 0;
  int window_start = 0;  // first bit of the cache-content section
  std::vector<std::vector<ObsAtom>> bits;
};

Layout build_layout(const EnumContext& ctx, int observer) {
  Layout layout;
  const int n_files = ctx.params.num_files;
  for (int u = 1; u <= ctx.params.num_nodes; ++u)
    for (int n = 1; n <= n_files; ++n)
      layout.bits.push_back({ObsAtom{ObsAtom::Kind::header_flip, u, n, 0}});
  for (const Packet& pkt : ctx.packets) {
    for (std::size_t pos = 0; pos < pkt.payload.size(); ++pos) {
      std::vector<ObsAtom> atoms;
      for (const auto& [user, label] : pkt.recipe) {
        const PartRange& part = ctx.partition.at(label);
        for (int n = 1; n <= n_files; ++n)
          atoms.push_back(ObsAtom{ObsAtom::Kind::announced_lib, user, n,
                                  lib_bit(ctx, n, part, static_cast<long long>(pos))});
      }
      layout.bits.push_back(std::move(atoms));
    }
  }
  layout.window_start = static_cast<int>(layout.bits.size());

  std::vector<int> nodes = window(observer, ctx.params);
  std::sort(nodes.begin(), nodes.end());
  for (int node : nodes) {
    const NodePlacement& spot = ctx.shape.node(node);
    for (const NodeSet& label : spot.library_labels) {
      const PartRange& part = ctx.partition.at(label);
      for (int n = 1; n <= n_files; ++n)
        for (long long pos = 0; pos < part.length; ++pos)
          layout.bits.push_back({ObsAtom{ObsAtom::Kind::lib, 0, 0, lib_bit(ctx, n, part, pos)}});
    }
    for (const KeyItem& item : spot.keys) {
      const PartRange& part = ctx.partition.at(item.label);
      for (long long pos = 0; pos < part.length; ++pos) {
        std::vector<ObsAtom> atoms;
        const bool carries_secret =
            item.kind == KeyItem::Kind::masked_key ||
            (item.kind == KeyItem::Kind::share && item.share_index == ctx.pconfig.omega);
        if (carries_secret)
          for (int n = 1; n <= n_files; ++n)
            atoms.push_back(
                ObsAtom{ObsAtom::Kind::row_lib, item.owner, n, lib_bit(ctx, n, part, pos)});
        if (item.kind == KeyItem::Kind::share) {
          if (item.share_index < ctx.pconfig.omega)
            atoms.push_back(ObsAtom{ObsAtom::Kind::mask, 0, 0,
                                    mask_bit(ctx, item.owner, item.label,
                                             item.share_index - 1, pos)});
          else
            for (int b = 0; b + 1 < ctx.pconfig.omega; ++b)
              atoms.push_back(ObsAtom{ObsAtom::Kind::mask, 0, 0,
                                      mask_bit(ctx, item.owner, item.label, b, pos)});
        } else {
          atoms.push_back(
              ObsAtom{ObsAtom::Kind::mask, 0, 0, mask_bit(ctx, item.owner, item.label, 0, pos)});
        }
        layout.bits.push_back(std::move(atoms));
      }
    }
  }
  layout.obs_bits = static_cast<int>(layout.bits.size());
  if (layout.obs_bits > kMaxDenseObsBits)
    throw ConfigError("observable too wide for exact dense counting: " +
                      std::to_string(layout.obs_bits) + " bits, limit " +
                      std::to_string(kMaxDenseObsBits) + "; shrink the instance");
  return layout;
}

/// Exact outcome counts over all randomness for one demand vector: iterate
/// row words outside, then walk the (library, mask) word in Gray-code order
/// so each cell updates the affine observable with a single XOR.
void fill_table(const EnumContext& ctx, const Layout& layout, const DemandVector& demands,
                std::vector<std::uint64_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  const int lm_bits = ctx.lib_bits + ctx.mask_bits;
  const std::uint64_t row_space = std::uint64_t{1} << ctx.row_bits;
  std::vector<std::uint32_t> cols(static_cast<std::size_t>(lm_bits), 0);
  for (std::uint64_t rows = 0; rows < row_space; ++rows) {
    std::fill(cols.begin(), cols.end(), 0);
    std::uint32_t base = 0;
    for (std::size_t i = 0; i < layout.bits.size(); ++i) {
      const std::uint32_t mark = std::uint32_t{1} << i;
      bool constant = false;
      for (const ObsAtom& atom : layout.bits[i]) {
        switch (atom.kind) {
          case ObsAtom::Kind::header_flip:
            constant ^= (((rows >> row_bit(ctx, atom.user, atom.file)) & 1) != 0) ^
                        (demands[static_cast<std::size_t>(atom.user - 1)] == atom.file);
            break;
          case ObsAtom::Kind::announced_lib:
            if ((((rows >> row_bit(ctx, atom.user, atom.file)) & 1) != 0) ^
                (demands[static_cast<std::size_t>(atom.user - 1)] == atom.file))
              cols[static_cast<std::size_t>(atom.bit)] ^= mark;
            break;
          case ObsAtom::Kind::row_lib:
            if (((rows >> row_bit(ctx, atom.user, atom.file)) & 1) != 0)
              cols[static_cast<std::size_t>(atom.bit)] ^= mark;
            break;
          case ObsAtom::Kind::lib:
            cols[static_cast<std::size_t>(atom.bit)] ^= mark;
            break;
          case ObsAtom::Kind::mask:
            cols[static_cast<std::size_t>(ctx.lib_bits + atom.bit)] ^= mark;
            break;
        }
      }
      if (constant) base |= mark;
    }
    std::uint32_t obs = base;
    ++counts[obs];
    for (std::uint64_t gray = 1; gray < (std::uint64_t{1} << lm_bits); ++gray) {
      obs ^= cols[static_cast<std::size_t>(std::countr_zero(gray))];
      ++counts[obs];
    }
  }
}

struct GroupStats {
  bool demand_pass = true;
  std::uint64_t count_gap = 0;
  double mi_bits = 0.0;
  std::uint64_t fingerprint = 0xcbf29ce484222325ull;
  std::vector<PrivacyWitness> witnesses;
};

/// Walk all (own demand, other demands) groups in canonical order, comparing
/// every table in a group against its first table; exact equality is the
/// verdict, and two extra passes over a failing group turn its counts into
/// the conditional leak in bits.
template <typename Fill>
GroupStats analyze_groups(const InstanceParams& params, int observer, int obs_bits,
                          std::uint64_t demand_total, Fill&& fill) {
  const std::size_t table_size = std::size_t{1} << obs_bits;
  std::vector<std::uint64_t> current(table_size);
  std::vector<std::uint64_t> reference(table_size);
  std::vector<std::uint64_t> sum(table_size);

  GroupStats stats;
  stats.fingerprint = fnv_fold(stats.fingerprint, static_cast<std::uint64_t>(obs_bits));
  const std::uint64_t tables_per_group =
      demand_total / static_cast<std::uint64_t>(params.num_files);
  std::uint64_t per_table_total = 0;
  double mi_acc = 0.0;

  for (int own = 1; own <= params.num_files; ++own) {
    bool have_ref = false;
    bool group_mismatch = false;
    for (std::uint64_t idx = 0; idx < demand_total; ++idx) {
      const DemandVector d = demand_at(idx, params);
      if (d[static_cast<std::size_t>(observer - 1)] != own) continue;
      fill(idx, current);
      stats.fingerprint = fnv_fold(stats.fingerprint, kTableMark);
      for (std::size_t o = 0; o < table_size; ++o) {
        if (current[o] == 0) continue;
        stats.fingerprint = fnv_fold(stats.fingerprint, static_cast<std::uint64_t>(o));
        stats.fingerprint = fnv_fold(stats.fingerprint, current[o]);
      }
      if (!have_ref) {
        if (per_table_total == 0)
          for (std::uint64_t c : current) per_table_total += c;
        std::swap(current, reference);
        have_ref = true;
        continue;
      }
      for (std::size_t o = 0; o < table_size; ++o) {
        if (current[o] == reference[o]) continue;
        group_mismatch = true;
        stats.demand_pass = false;
        stats.count_gap += current[o] > reference[o] ? current[o] - reference[o]
                                                     : reference[o] - current[o];
        if (static_cast<int>(stats.witnesses.size()) < kMaxWitnesses)
          stats.witnesses.push_back(
              PrivacyWitness{own, d, static_cast<std::uint64_t>(o), current[o], reference[o]});
      }
    }
    if (!group_mismatch) continue;
    std::fill(sum.begin(), sum.end(), 0);
    for (std::uint64_t idx = 0; idx < demand_total; ++idx) {
      if (demand_at(idx, params)[static_cast<std::size_t>(observer - 1)] != own) continue;
      fill(idx, current);
      for (std::size_t o = 0; o < table_size; ++o) sum[o] += current[o];
    }
    for (std::uint64_t idx = 0; idx < demand_total; ++idx) {
      if (demand_at(idx, params)[static_cast<std::size_t>(observer - 1)] != own) continue;
      fill(idx, current);
      for (std::size_t o = 0; o < table_size; ++o)
        if (current[o] != 0)
          mi_acc += static_cast<double>(current[o]) *
                    std::log2(static_cast<double>(current[o]) *
                              static_cast<double>(tables_per_group) /
                              static_cast<double>(sum[o]));
    }
  }
  if (!stats.demand_pass && per_table_total > 0)
    stats.mi_bits = mi_acc / (static_cast<double>(per_table_total) *
                              static_cast<double>(tables_per_group) *
                              static_cast<double>(params.num_files));
  return stats;
}

struct PlacementIndependence {
  bool pass = true;
  std::string detail;
};

/// The cache-content section of the observable must have the same outcome
/// multiset over mask words for every value of the other users' rows, once
/// the library and the observer's own row are fixed.
PlacementIndependence placement_independence(const EnumContext& ctx, const Layout& layout,
                                             int observer) {
  PlacementIndependence out;
  if (!ctx.privatize) return out;
  const int n_files = ctx.params.num_files;
  const int other_bits = ctx.row_bits - n_files;
  const std::uint64_t lib_space = std::uint64_t{1} << ctx.lib_bits;
  const std::uint64_t own_space = std::uint64_t{1} << n_files;
  const std::uint64_t other_space = std::uint64_t{1} << other_bits;
  const std::uint64_t mask_space = std::uint64_t{1} << ctx.mask_bits;
  const std::uint64_t file_mask = (std::uint64_t{1} << n_files) - 1;

  const std::size_t z_begin = static_cast<std::size_t>(layout.window_start);
  const std::size_t z_bits = layout.bits.size() - z_begin;
  std::vector<std::uint32_t> cols(static_cast<std::size_t>(ctx.mask_bits));
  std::vector<std::uint32_t> outcomes(static_cast<std::size_t>(mask_space));
  std::vector<std::uint32_t> ref(static_cast<std::size_t>(mask_space));

  for (std::uint64_t lib = 0; lib < lib_space; ++lib) {
    for (std::uint64_t own = 0; own < own_space; ++own) {
      bool have_ref = false;
      for (std::uint64_t other = 0; other < other_space; ++other) {
        std::uint64_t rows = 0;
        int consumed = 0;
        for (int u = 1; u <= ctx.params.num_nodes; ++u) {
          std::uint64_t chunk;
          if (u == observer) {
            chunk = own;
          } else {
            chunk = (other >> consumed) & file_mask;
            consumed += n_files;
          }
          rows |= chunk << ((u - 1) * n_files);
        }
        std::fill(cols.begin(), cols.end(), 0);
        std::uint32_t base = 0;
        for (std::size_t i = 0; i < z_bits; ++i) {
          const std::uint32_t mark = std::uint32_t{1} << i;
          bool constant = false;
          for (const ObsAtom& atom : layout.bits[z_begin + i]) {
            switch (atom.kind) {
              case ObsAtom::Kind::lib:
                constant ^= ((lib >> atom.bit) & 1) != 0;
                break;
              case ObsAtom::Kind::row_lib:
                constant ^= (((rows >> row_bit(ctx, atom.user, atom.file)) & 1) &
                             ((lib >> atom.bit) & 1)) != 0;
                break;
              case ObsAtom::Kind::mask:
                cols[static_cast<std::size_t>(atom.bit)] ^= mark;
                break;
              default:
                break;  // delivery-time atoms never appear in the window section
            }
          }
          if (constant) base |= mark;
        }
        std::uint32_t obs = base;
        outcomes[0] = obs;
        for (std::uint64_t gray = 1; gray < mask_space; ++gray) {
          obs ^= cols[static_cast<std::size_t>(std::countr_zero(gray))];
          outcomes[static_cast<std::size_t>(gray)] = obs;
        }
        std::sort(outcomes.begin(), outcomes.end());
        if (!have_ref) {
          std::swap(ref, outcomes);
          have_ref = true;
        } else if (outcomes != ref) {
          out.pass = false;
          out.detail = "cache content seen by user " + std::to_string(observer) +
                       " shifts with other users' private rows (library word " +
                       std::to_string(lib) + ", own row " + std::to_string(own) + ")";
          return out;
        }
      }
    }
  }
  return out;
}

/// The packed observable through the real pipeline objects: must append bits
/// in exactly the order build_layout declares them.
std::uint64_t pack_observable(const EnumContext& ctx, int observer, const Broadcast& broadcast,
                              const PlacementSpec& placement, const Library& library) {
  BitVector obs;
  obs.append(broadcast.header);
  for (const Packet& pkt : broadcast.packets) obs.append(pkt.payload);
  std::vector<int> nodes = window(observer, ctx.params);
  std::sort(nodes.begin(), nodes.end());
  for (int node : nodes) {
    const NodePlacement& spot = placement.node(node);
    for (const NodeSet& label : spot.library_labels)
      for (int n = 1; n <= ctx.params.num_files; ++n)
        obs.append(library.subfile(n, ctx.partition.at(label)));
    for (const KeyItem& item : spot.keys) obs.append(item.content);
  }
  return obs.as_uint();
}

}  // namespace

long long verify_file_bits(std::string_view scheme, int num_nodes, int access_degree,
                           int bits_per_part) {
  if (bits_per_part < 1) throw ConfigError("bits per part must be positive");
  if (scheme == "uncached") return bits_per_part;
  if (scheme == "singleton") return static_cast<long long>(bits_per_part) * num_nodes;
  if (scheme == "stripe") return static_cast<long long>(bits_per_part) * access_degree;
  throw ConfigError("unknown scheme: " + std::string(scheme));
}

DecodeAllReport verify_decode_all(const VerifyConfig& config) {
  const InstanceParams& params = config.params;
  params.validate();
  const auto base = make_scheme(config.scheme);
  const PartitionSpec partition = base->partition(params);

  Rng lib_rng(config.seed);
  const Library library = Library::random(params.num_files, params.file_bits, lib_rng);
  std::optional<KeyMaterial> keys;
  if (config.privatize)
    keys = KeyMaterial::generate(params, partition, config.mode, config.seed + 1);
  const KeyMaterial* key_ptr = keys ? &*keys : nullptr;
  const PrivacyConfig pconfig = keys ? keys->config : PrivacyConfig{};

  const PlacementSpec placement = private_place(*base, params, library, key_ptr);
  std::vector<UserView> views;
  for (int k = 1; k <= params.num_nodes; ++k)
    views.push_back(user_view(k, params, partition, placement, library));

  DecodeAllReport report;
  const std::uint64_t space = demand_space(params, config.demand_cap);
  report.demand_count = static_cast<long long>(space);
  for (std::uint64_t idx = 0; idx < space; ++idx) {
    const DemandVector d = demand_at(idx, params);
    const Broadcast broadcast = private_deliver(*base, params, library, d, key_ptr);
    const long long payload = broadcast.payload_bits();
    if (idx == 0)
      report.payload_bits = payload;
    else if (payload != report.payload_bits)
      report.equal_load = false;
    for (int k = 1; k <= params.num_nodes; ++k) {
      const int want = d[static_cast<std::size_t>(k - 1)];
      const DecodeResult res = user_decode(k, want, broadcast,
                                           views[static_cast<std::size_t>(k - 1)], params,
                                           partition, pconfig);
      std::string why;
      if (!res.ok)
        why = res.diagnostic;
      else if (!(res.file == library.file(want)))
        why = "decoded bits differ from the library file";
      if (!why.empty()) {
        ++report.failure_count;
        if (static_cast<int>(report.failures.size()) < kMaxDecodeFailures)
          report.failures.push_back(DecodeFailure{d, k, why});
      }
    }
  }
  report.pass = report.failure_count == 0;
  return report;
}

std::uint64_t estimate_privacy_cells(const VerifyConfig& config) {
  const InstanceParams& params = config.params;
  params.validate();
  const auto base = make_scheme(config.scheme);
  const PartitionSpec partition = base->partition(params);
  long long exponent = params.num_files * params.file_bits;  // library realizations
  if (config.privatize) {
    const PrivacyConfig pconfig = make_privacy_config(params, partition, config.mode);
    exponent += static_cast<long long>(params.num_nodes) * params.num_files;
    const int free_blocks = pconfig.omega > 0 ? pconfig.omega - 1 : 0;
    for (int k = 1; k <= params.num_nodes; ++k)
      for (const NodeSet& label : blocked_sets(k, partition, params))
        exponent += free_blocks * partition.at(label).length;
  }
  if (exponent >= 63) return ~std::uint64_t{0};
  std::uint64_t cells = std::uint64_t{1} << exponent;
  for (int k = 0; k < params.num_nodes; ++k) {
    const std::uint64_t files = static_cast<std::uint64_t>(params.num_files);
    if (cells > ~std::uint64_t{0} / files) return ~std::uint64_t{0};
    cells *= files;
  }
  return cells;
}

PrivacyReport privacy_check(const VerifyConfig& config, int observer) {
  if (observer < 1 || observer > config.params.num_nodes)
    throw std::invalid_argument("privacy check: observer out of range");
  const std::uint64_t cells = estimate_privacy_cells(config);
  if (cells > config.budget)
    throw ConfigError("enumeration budget exceeded: the run needs " + std::to_string(cells) +
                      " cells, budget " + std::to_string(config.budget));
  const EnumContext ctx = build_context(config);
  const Layout layout = build_layout(ctx, observer);
  const std::uint64_t demand_total = demand_space(ctx.params, config.demand_cap);

  PrivacyReport report;
  report.cells = cells;
  const PlacementIndependence pi = placement_independence(ctx, layout, observer);
  report.placement_independent = pi.pass;
  report.placement_detail = pi.detail;

  GroupStats stats = analyze_groups(
      ctx.params, observer, layout.obs_bits, demand_total,
      [&](std::uint64_t idx, std::vector<std::uint64_t>& out) {
        fill_table(ctx, layout, demand_at(idx, ctx.params), out);
      });
  report.pass = stats.demand_pass && pi.pass;
  report.mi_bits = stats.mi_bits;
  report.mi_exact = stats.demand_pass ? "0" : "";
  report.count_gap = stats.count_gap;
  report.fingerprint = stats.fingerprint;
  report.witnesses = std::move(stats.witnesses);
  return report;
}

PrivacyReport privacy_check_reference(const VerifyConfig& config, int observer) {
  if (observer < 1 || observer > config.params.num_nodes)
    throw std::invalid_argument("privacy check: observer out of range");
  const std::uint64_t cells = estimate_privacy_cells(config);
  if (cells > (std::uint64_t{1} << 22))
    throw ConfigError("reference privacy engine is for tiny cross-checks: the run needs " +
                      std::to_string(cells) + " cells, cap " +
                      std::to_string(std::uint64_t{1} << 22));
  const EnumContext ctx = build_context(config);
  const Layout layout = build_layout(ctx, observer);
  const std::uint64_t demand_total = demand_space(ctx.params, config.demand_cap);
  const std::size_t table_size = std::size_t{1} << layout.obs_bits;
  if (demand_total > (std::uint64_t{1} << 26) / table_size)
    throw ConfigError("reference privacy engine: result tables exceed the memory cap");

  std::vector<std::vector<std::uint64_t>> tables(
      static_cast<std::size_t>(demand_total), std::vector<std::uint64_t>(table_size, 0));
  const std::uint64_t lib_space = std::uint64_t{1} << ctx.lib_bits;
  const std::uint64_t row_space = std::uint64_t{1} << ctx.row_bits;
  const std::uint64_t mask_space = std::uint64_t{1} << ctx.mask_bits;
  const int n_files = ctx.params.num_files;

  const auto low_bits = [](std::uint64_t value, long long width) {
    return width >= 64 ? value : value & ((std::uint64_t{1} << width) - 1);
  };
  for (std::uint64_t lib = 0; lib < lib_space; ++lib) {
    std::vector<BitVector> files;
    for (int n = 1; n <= n_files; ++n)
      files.push_back(BitVector::from_uint(
          low_bits(lib >> ((n - 1) * ctx.params.file_bits), ctx.params.file_bits),
          static_cast<std::size_t>(ctx.params.file_bits)));
    const Library library(std::move(files));
    for (std::uint64_t rows = 0; rows < row_space; ++rows) {
      for (std::uint64_t mask = 0; mask < mask_space; ++mask) {
        std::optional<KeyMaterial> keys;
        if (ctx.privatize) {
          KeyMaterial km;
          km.config = ctx.pconfig;
          for (int k = 1; k <= ctx.params.num_nodes; ++k)
            km.coeff.push_back(BitVector::from_uint(low_bits(rows >> row_bit(ctx, k, 1), n_files),
                                                    static_cast<std::size_t>(n_files)));
          const int free_blocks = ctx.pconfig.omega > 0 ? ctx.pconfig.omega - 1 : 0;
          if (free_blocks > 0) {
            for (const auto& [key, first_bit] : ctx.mask_base) {
              const long long len = ctx.partition.at(key.second).length;
              auto& blocks = km.masks[key];
              for (int b = 0; b < free_blocks; ++b)
                blocks.push_back(BitVector::from_uint(
                    low_bits(mask >> (first_bit + b * len), len), static_cast<std::size_t>(len)));
            }
          }
          keys = std::move(km);
        }
        const KeyMaterial* key_ptr = keys ? &*keys : nullptr;
        const PlacementSpec placement = private_place(*ctx.base, ctx.params, library, key_ptr);
        for (std::uint64_t idx = 0; idx < demand_total; ++idx) {
          const Broadcast broadcast =
              private_deliver(*ctx.base, ctx.params, library, demand_at(idx, ctx.params), key_ptr);
          ++tables[static_cast<std::size_t>(idx)]
                  [pack_observable(ctx, observer, broadcast, placement, library)];
        }
      }
    }
  }

  PrivacyReport report;
  report.cells = cells;
  const PlacementIndependence pi = placement_independence(ctx, layout, observer);
  report.placement_independent = pi.pass;
  report.placement_detail = pi.detail;
  GroupStats stats = analyze_groups(
      ctx.params, observer, layout.obs_bits, demand_total,
      [&](std::uint64_t idx, std::vector<std::uint64_t>& out) {
        out = tables[static_cast<std::size_t>(idx)];
      });
  report.pass = stats.demand_pass && pi.pass;
  report.mi_bits = stats.mi_bits;
  report.mi_exact = stats.demand_pass ? "0" : "";
  report.count_gap = stats.count_gap;
  report.fingerprint = stats.fingerprint;
  report.witnesses = std::move(stats.witnesses);
  return report;
}

JointDistribution conditional_distribution(const VerifyConfig& config, int observer,
                                           const DemandVector& demands) {
  if (observer < 1 || observer > config.params.num_nodes)
    throw std::invalid_argument("conditional distribution: observer out of range");
  validate_demands(demands, config.params);
  const std::uint64_t cells = estimate_privacy_cells(config);
  if (cells > config.budget)
    throw ConfigError("enumeration budget exceeded: the run needs " + std::to_string(cells) +
                      " cells, budget " + std::to_string(config.budget));
  const EnumContext ctx = build_context(config);
  const Layout layout = build_layout(ctx, observer);
  JointDistribution dist;
  dist.obs_bits = layout.obs_bits;
  dist.counts.resize(std::size_t{1} << layout.obs_bits);
  fill_table(ctx, layout, demands, dist.counts);
  for (std::uint64_t c : dist.counts) dist.total += c;
  return dist;
}

IsolationReport key_isolation_check(const InstanceParams& params, PrivacyMode mode) {
  params.validate();
  IsolationReport report;
  const int users = params.num_nodes;
  if (mode == PrivacyMode::pad) {
    report.omega = 2;
    for (int j = 1; j <= users; ++j) {
      const int far = mod1(static_cast<long long>(j) + params.access_degree - 1, users);
      for (int k = 1; k <= users; ++k) {
        if (k == j) continue;
        const std::vector<int> win = window(k, params);
        const bool sees_near = std::find(win.begin(), win.end(), j) != win.end();
        const bool sees_far = std::find(win.begin(), win.end(), far) != win.end();
        if (sees_near && sees_far) {
          report.pass = false;
          report.owner = j;
          report.other = k;
          report.detail = "window of user " + std::to_string(k) + " covers both nodes " +
                          std::to_string(j) + " and " + std::to_string(far) +
                          " holding the key blocks of user " + std::to_string(j);
          return report;
        }
      }
    }
    report.pass = true;
    report.detail = "no other window covers any masked-key and pad node pair";
    return report;
  }
  const auto result = compute_omega(users, params.access_degree);
  if (!result) {
    report.pass = false;
    report.detail = "no isolating set of window positions exists at these dimensions";
    return report;
  }
  report.omega = result->omega;
  report.witness = result->witness;
  for (int j = 1; j <= users; ++j) {
    std::vector<int> spots;
    for (int pos : result->witness)
      spots.push_back(mod1(static_cast<long long>(pos) + j - 1, users));
    const std::vector<int> own = window(j, params);
    for (int spot : spots) {
      if (std::find(own.begin(), own.end(), spot) == own.end()) {
        report.pass = false;
        report.owner = j;
        report.detail = "share node " + std::to_string(spot) +
                        " fell outside the window of user " + std::to_string(j);
        return report;
      }
    }
    for (int k = 1; k <= users; ++k) {
      if (k == j) continue;
      const std::vector<int> win = window(k, params);
      bool covers_all = true;
      for (int spot : spots) {
        if (std::find(win.begin(), win.end(), spot) == win.end()) {
          covers_all = false;
          break;
        }
      }
      if (covers_all) {
        report.pass = false;
        report.owner = j;
        report.other = k;
        report.detail = "window of user " + std::to_string(k) +
                        " covers every share node of user " + std::to_string(j);
        return report;
      }
    }
  }
  report.pass = true;
  report.detail = "every user's share nodes stay outside all other windows";
  return report;
}

LoadReport measure_load(const Broadcast& broadcast, long long file_bits) {
  if (file_bits <= 0) throw std::invalid_argument("measure_load: file bits must be positive");
  LoadReport report;
  report.payload_files = Fraction(broadcast.payload_bits(), file_bits);
  report.header_bits = static_cast<long long>(broadcast.header.size());
  return report;
}

}  // namespace macc
