#include "macc/schemes.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace macc {

namespace {

bool reaches(const NodeSet& label, const std::vector<int>& win) {
  for (int node : label)
    if (std::find(win.begin(), win.end(), node) != win.end()) return true;
  return false;
}

// Greedy clique cover over the side-information graph. Vertices are the
// needed (user, block) pairs in (user, label) lexicographic order; two
// vertices are joined when each user can fetch the other's block from its
// own window and the block lengths match. Every maximal clique becomes one
// XOR packet. Deterministic: cliques start at the first uncovered vertex
// and extend in scan order.
std::vector<Packet> greedy_clique_deliver(const InstanceParams& params, const Needs& needs) {
  struct Vertex {
    int user;
    const NeedBlock* block;
  };
  std::vector<Vertex> vertices;
  for (const auto& [user, blocks] : needs) {
    if (user < 1 || user > params.num_nodes)
      throw std::invalid_argument("deliver: user out of range");
    for (const auto& block : blocks) vertices.push_back(Vertex{user, &block});
  }
  std::stable_sort(vertices.begin(), vertices.end(), [](const Vertex& a, const Vertex& b) {
    if (a.user != b.user) return a.user < b.user;
    return a.block->label < b.block->label;
  });

  std::vector<std::vector<int>> wins(static_cast<std::size_t>(params.num_nodes) + 1);
  for (int k = 1; k <= params.num_nodes; ++k) wins[static_cast<std::size_t>(k)] = window(k, params);

  for (const Vertex& v : vertices) {
    if (reaches(v.block->label, wins[static_cast<std::size_t>(v.user)]))
      throw std::invalid_argument("deliver: block " + label_str(v.block->label) + " of user " +
                                  std::to_string(v.user) + " is already reachable in its window");
  }

  const auto adjacent = [&](const Vertex& a, const Vertex& b) {
    return a.user != b.user && a.block->content.size() == b.block->content.size() &&
           reaches(a.block->label, wins[static_cast<std::size_t>(b.user)]) &&
           reaches(b.block->label, wins[static_cast<std::size_t>(a.user)]);
  };

  std::vector<bool> covered(vertices.size(), false);
  std::vector<Packet> packets;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (covered[i]) continue;
    covered[i] = true;
    std::vector<std::size_t> clique{i};
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      if (covered[j]) continue;
      bool fits = true;
      for (std::size_t c : clique) {
        if (!adjacent(vertices[c], vertices[j])) {
          fits = false;
          break;
        }
      }
      if (fits) {
        clique.push_back(j);
        covered[j] = true;
      }
    }
    Packet packet;
    packet.payload = vertices[clique[0]].block->content;
    packet.recipe.emplace_back(vertices[clique[0]].user, vertices[clique[0]].block->label);
    for (std::size_t c = 1; c < clique.size(); ++c) {
      packet.payload ^= vertices[clique[c]].block->content;
      packet.recipe.emplace_back(vertices[clique[c]].user, vertices[clique[c]].block->label);
    }
    packets.push_back(std::move(packet));
  }
  return packets;
}

class UncachedScheme final : public BaseScheme {
 public:
  std::string name() const override { return "uncached"; }

  Fraction memory_ratio(const InstanceParams&) const override { return Fraction(0); }

  PartitionSpec partition(const InstanceParams& params) const override {
    params.validate();
    std::map<NodeSet, long long> sizes;
    sizes[NodeSet{}] = params.file_bits;  // one part, cached nowhere
    return PartitionSpec::from_sizes(sizes, params.file_bits);
  }

  std::map<int, std::vector<NodeSet>> place(const InstanceParams& params) const override {
    params.validate();
    std::map<int, std::vector<NodeSet>> placement;
    for (int i = 1; i <= params.num_nodes; ++i) placement[i] = {};
    return placement;
  }

  std::vector<Packet> deliver(const InstanceParams& params, const Needs& needs) const override {
    params.validate();
    return greedy_clique_deliver(params, needs);
  }
};

class SingletonScheme final : public BaseScheme {
 public:
  std::string name() const override { return "singleton"; }

  Fraction memory_ratio(const InstanceParams& params) const override {
    return Fraction(params.num_files, params.num_nodes);
  }

  PartitionSpec partition(const InstanceParams& params) const override {
    params.validate();
    if (params.file_bits % params.num_nodes != 0)
      throw ConfigError("singleton scheme needs k | b");
    std::map<NodeSet, long long> sizes;
    for (int i = 1; i <= params.num_nodes; ++i)
      sizes[NodeSet{i}] = params.file_bits / params.num_nodes;
    return PartitionSpec::from_sizes(sizes, params.file_bits);
  }

  std::map<int, std::vector<NodeSet>> place(const InstanceParams& params) const override {
    partition(params);  // validates divisibility
    std::map<int, std::vector<NodeSet>> placement;
    for (int i = 1; i <= params.num_nodes; ++i) placement[i] = {NodeSet{i}};
    return placement;
  }

  std::vector<Packet> deliver(const InstanceParams& params, const Needs& needs) const override {
    params.validate();
    return greedy_clique_deliver(params, needs);
  }
};

class StripeScheme final : public BaseScheme {
 public:
  std::string name() const override { return "stripe"; }

  Fraction memory_ratio(const InstanceParams& params) const override {
    return Fraction(params.num_files, params.access_degree);
  }

  PartitionSpec partition(const InstanceParams& params) const override {
    params.validate();
    // With l not dividing k the residues repeat inside a wrapped window, so
    // neighbouring nodes would cache common bits and some window would miss
    // a residue entirely.
    if (params.num_nodes % params.access_degree != 0)
      throw ConfigError("stripe scheme needs l | k");
    if (params.file_bits % params.access_degree != 0)
      throw ConfigError("stripe scheme needs l | b");
    std::map<NodeSet, long long> sizes;
    for (int r = 1; r <= params.access_degree; ++r) {
      NodeSet members;
      for (int i = 1; i <= params.num_nodes; ++i)
        if (mod1(i, params.access_degree) == r) members.push_back(i);
      sizes[members] = params.file_bits / params.access_degree;
    }
    return PartitionSpec::from_sizes(sizes, params.file_bits);
  }

  std::map<int, std::vector<NodeSet>> place(const InstanceParams& params) const override {
    const PartitionSpec spec = partition(params);
    std::map<int, std::vector<NodeSet>> placement;
    for (int i = 1; i <= params.num_nodes; ++i) placement[i] = {};
    for (const auto& [label, range] : spec.parts())
      for (int node : label) placement[node].push_back(label);
    return placement;
  }

  std::vector<Packet> deliver(const InstanceParams& params, const Needs& needs) const override {
    params.validate();
    // every window covers all residues, so nothing should be needed
    return greedy_clique_deliver(params, needs);
  }
};

}  // namespace

std::unique_ptr<BaseScheme> uncached_scheme() { return std::make_unique<UncachedScheme>(); }
std::unique_ptr<BaseScheme> singleton_scheme() { return std::make_unique<SingletonScheme>(); }
std::unique_ptr<BaseScheme> stripe_scheme() { return std::make_unique<StripeScheme>(); }

std::unique_ptr<BaseScheme> make_scheme(std::string_view name) {
  if (name == "uncached") return uncached_scheme();
  if (name == "singleton") return singleton_scheme();
  if (name == "stripe") return stripe_scheme();
  throw ConfigError("unknown scheme: " + std::string(name) +
                    " (expected uncached, singleton or stripe)");
}

PlacementFixture PlacementFixture::parse(std::istream& in) {
  PlacementFixture fx;
  bool saw_uncoded = false;
  bool saw_per_file = false;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fail = [&](const std::string& why) -> void {
      throw ConfigError("placement fixture line " + std::to_string(lineno) + ": " + why);
    };
    std::istringstream ss(line);
    std::string head;
    if (!(ss >> head) || head[0] == '#') continue;
    if (head != "node") fail("expected 'node <id>[ file <n>]: labels...'");

    // header tokens end with the one carrying the ':'
    std::vector<std::string> header;
    std::string tok;
    bool closed = false;
    while (!closed && ss >> tok) {
      if (!tok.empty() && tok.back() == ':') {
        tok.pop_back();
        closed = true;
      }
      if (!tok.empty()) header.push_back(tok);
    }
    if (!closed) fail("missing ':' after the node header");

    const auto to_int = [&](const std::string& s) {
      try {
        std::size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size() || v < 1) fail("bad index '" + s + "'");
        return v;
      } catch (const std::logic_error&) {
        fail("bad index '" + s + "'");
        return 0;
      }
    };

    int node = 0;
    int file = 0;
    if (header.size() == 1) {
      node = to_int(header[0]);
      saw_uncoded = true;
    } else if (header.size() == 3 && header[1] == "file") {
      node = to_int(header[0]);
      file = to_int(header[2]);
      saw_per_file = true;
    } else {
      fail("expected 'node <id>:' or 'node <id> file <n>:'");
    }

    std::vector<NodeSet> labels;
    while (ss >> tok) labels.push_back(parse_label(tok));
    std::sort(labels.begin(), labels.end());
    if (std::adjacent_find(labels.begin(), labels.end()) != labels.end())
      fail("duplicate label in one record");

    if (file == 0) {
      if (!fx.uncoded_.emplace(node, std::move(labels)).second) fail("duplicate node record");
    } else {
      if (!fx.by_file_.emplace(std::make_pair(node, file), std::move(labels)).second)
        fail("duplicate node/file record");
      fx.max_file_ = std::max(fx.max_file_, file);
    }
    fx.max_node_ = std::max(fx.max_node_, node);
  }
  if (saw_uncoded && saw_per_file)
    throw ConfigError("placement fixture mixes per-file and uncoded records");
  fx.per_file_ = saw_per_file;
  return fx;
}

PlacementFixture PlacementFixture::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open placement fixture: " + path);
  return parse(in);
}

std::vector<NodeSet> PlacementFixture::labels(int node) const {
  if (per_file_) throw std::logic_error("fixture is per-file; pass a file index");
  const auto it = uncoded_.find(node);
  return it == uncoded_.end() ? std::vector<NodeSet>{} : it->second;
}

std::vector<NodeSet> PlacementFixture::labels(int node, int file) const {
  if (!per_file_) {
    const auto it = uncoded_.find(node);
    return it == uncoded_.end() ? std::vector<NodeSet>{} : it->second;
  }
  const auto it = by_file_.find({node, file});
  return it == by_file_.end() ? std::vector<NodeSet>{} : it->second;
}

namespace {

// Shared requirement-1 sweep: labels(node, file) gives what a node caches of
// one file; per_file says whether files can differ.
template <typename LabelsFn>
RequirementReport requirement1_sweep(const InstanceParams& params, int files, LabelsFn&& labels) {
  params.validate();
  for (int k = 1; k <= params.num_nodes; ++k) {
    const std::vector<int> win = window(k, params);
    for (std::size_t a = 0; a < win.size(); ++a) {
      for (std::size_t b = a + 1; b < win.size(); ++b) {
        if (win[a] == win[b]) continue;  // wrapped window shorter than l
        for (int f = 1; f <= files; ++f) {
          const std::vector<NodeSet> la = labels(win[a], f);
          const std::vector<NodeSet> lb = labels(win[b], f);
          for (const NodeSet& label : la) {
            if (std::find(lb.begin(), lb.end(), label) != lb.end()) {
              RequirementReport rep;
              rep.pass = false;
              rep.window_user = k;
              rep.label = label;
              rep.node_a = win[a];
              rep.node_b = win[b];
              rep.detail = "window of user " + std::to_string(k) + ": nodes " +
                           std::to_string(win[a]) + " and " + std::to_string(win[b]) +
                           " both cache part " + label_str(label);
              return rep;
            }
          }
        }
      }
    }
  }
  return {};
}

}  // namespace

RequirementReport check_requirement1(const BaseScheme& scheme, const InstanceParams& params) {
  const auto placement = scheme.place(params);
  return requirement1_sweep(params, 1, [&](int node, int) -> std::vector<NodeSet> {
    const auto it = placement.find(node);
    return it == placement.end() ? std::vector<NodeSet>{} : it->second;
  });
}

RequirementReport check_requirement1(const PlacementFixture& fixture,
                                     const InstanceParams& params) {
  const int files = fixture.per_file() ? std::max(params.num_files, fixture.max_file()) : 1;
  return requirement1_sweep(
      params, files, [&](int node, int file) { return fixture.labels(node, file); });
}

RequirementReport check_requirement2(const BaseScheme& scheme, const InstanceParams& params) {
  // Placement through the interface is a pure label map, file-independent by
  // type. Sanity-check that every placed label is a real partition part.
  const PartitionSpec spec = scheme.partition(params);
  for (const auto& [node, labels] : scheme.place(params)) {
    for (const NodeSet& label : labels) {
      if (!spec.contains(label)) {
        RequirementReport rep;
        rep.pass = false;
        rep.node = node;
        rep.label = label;
        rep.detail = "node " + std::to_string(node) + " places unknown part " + label_str(label);
        return rep;
      }
    }
  }
  return {};
}

RequirementReport check_requirement2(const PlacementFixture& fixture, int num_files) {
  if (!fixture.per_file()) return {};
  const int files = std::max(num_files, fixture.max_file());
  for (int node = 1; node <= fixture.max_node(); ++node) {
    const std::vector<NodeSet> base = fixture.labels(node, 1);
    for (int f = 2; f <= files; ++f) {
      const std::vector<NodeSet> other = fixture.labels(node, f);
      if (other == base) continue;
      RequirementReport rep;
      rep.pass = false;
      rep.node = node;
      rep.file_a = 1;
      rep.file_b = f;
      // first label cached for one file but not the other
      for (const NodeSet& label : base)
        if (std::find(other.begin(), other.end(), label) == other.end()) rep.label = label;
      if (rep.label.empty() && !other.empty()) {
        for (const NodeSet& label : other)
          if (std::find(base.begin(), base.end(), label) == base.end()) rep.label = label;
      }
      rep.detail = "node " + std::to_string(node) + " caches part " + label_str(rep.label) +
                   " of file " + std::to_string(rep.file_a) + " and file " +
                   std::to_string(rep.file_b) + " differently";
      return rep;
    }
  }
  return {};
}

}  // namespace macc
