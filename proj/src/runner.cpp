#include "macc/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "macc/errors.hpp"
#include "macc/random.hpp"
#include "macc/tradeoff.hpp"

namespace macc {

namespace {

constexpr long long kAllDemandsCap = 1'000'000;

std::string hex64(std::uint64_t value) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(value));
  return buf;
}

std::string float_str(const Fraction& f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", f.to_double());
  return buf;
}

std::string demands_str(const DemandVector& demands) {
  std::string out;
  for (std::size_t i = 0; i < demands.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(demands[i]);
  }
  return out;
}

InstanceParams resolved_params(const RunConfig& config) {
  InstanceParams params = config.params;
  if (params.file_bits == 0)
    params.file_bits = default_file_bits(params.num_nodes, params.access_degree);
  params.validate();
  return params;
}

nlohmann::json failure_json(const DecodeFailure& failure) {
  return {{"demands", failure.demands}, {"user", failure.user}, {"diagnostic", failure.diagnostic}};
}

nlohmann::json params_json(const InstanceParams& params) {
  return {{"k", params.num_nodes},
          {"l", params.access_degree},
          {"n", params.num_files},
          {"b", params.file_bits}};
}

void append_points(std::ostringstream& out, const std::string& scheme,
                   const std::vector<TradeoffPoint>& points) {
  for (const TradeoffPoint& p : points)
    out << scheme << ',' << p.tag << ',' << p.memory.num << ',' << p.memory.den << ','
        << p.load.num << ',' << p.load.den << ',' << float_str(p.memory) << ','
        << float_str(p.load) << '\n';
}

}  // namespace

long long default_file_bits(int num_nodes, int access_degree) {
  return 32LL * std::lcm(static_cast<long long>(num_nodes),
                         static_cast<long long>(access_degree));
}

std::vector<DemandVector> parse_demands(const std::string& text, const InstanceParams& params) {
  if (text.empty()) {
    DemandVector d(static_cast<std::size_t>(params.num_nodes));
    for (int k = 1; k <= params.num_nodes; ++k)
      d[static_cast<std::size_t>(k - 1)] = mod1(k, params.num_files);
    return {d};
  }
  if (text == "all") {
    long long space = 1;
    for (int k = 0; k < params.num_nodes; ++k) {
      space *= params.num_files;
      if (space > kAllDemandsCap)
        throw ConfigError("demand space exceeds the \"all\" cap of " +
                          std::to_string(kAllDemandsCap) + " vectors");
    }
    std::vector<DemandVector> all;
    all.reserve(static_cast<std::size_t>(space));
    DemandVector d(static_cast<std::size_t>(params.num_nodes), 1);
    for (long long i = 0; i < space; ++i) {
      all.push_back(d);
      for (int j = params.num_nodes - 1; j >= 0; --j) {
        if (++d[static_cast<std::size_t>(j)] <= params.num_files) break;
        d[static_cast<std::size_t>(j)] = 1;
      }
    }
    return all;
  }
  DemandVector d;
  std::stringstream in(text);
  std::string piece;
  while (std::getline(in, piece, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(piece, &used);
      if (used != piece.size()) throw std::invalid_argument(piece);
      d.push_back(value);
    } catch (const std::exception&) {
      throw ConfigError("bad demand entry: \"" + piece + "\"");
    }
  }
  validate_demands(d, params);
  return {d};
}

std::string recipe_str(const Packet& packet) {
  std::string out = "{";
  for (std::size_t i = 0; i < packet.recipe.size(); ++i) {
    if (i) out += ',';
    out += '(' + std::to_string(packet.recipe[i].first) + ',' +
           label_str(packet.recipe[i].second) + ')';
  }
  out += '}';
  return out;
}

SimulateReport run_simulate(const RunConfig& config) {
  SimulateReport report;
  report.params = resolved_params(config);
  report.scheme = config.scheme;
  report.privatize = config.privatize;
  report.mode = config.mode;
  report.seed = config.seed;

  const auto base = make_scheme(config.scheme);
  const PartitionSpec partition = base->partition(report.params);
  Rng lib_rng(config.seed);
  const Library library =
      Library::random(report.params.num_files, report.params.file_bits, lib_rng);
  std::optional<KeyMaterial> keys;
  if (config.privatize)
    keys = KeyMaterial::generate(report.params, partition, config.mode, config.seed + 1);
  const KeyMaterial* key_ptr = keys ? &*keys : nullptr;
  const PrivacyConfig pconfig = keys ? keys->config : PrivacyConfig{};
  report.omega = pconfig.omega;

  const PlacementSpec placement = private_place(*base, report.params, library, key_ptr);
  for (int node = 1; node <= report.params.num_nodes; ++node)
    report.node_memory.push_back(
        Fraction(placement.node(node).total_bits(), report.params.file_bits));
  report.memory_uniform =
      std::all_of(report.node_memory.begin(), report.node_memory.end(),
                  [&](const Fraction& m) { return m == report.node_memory.front(); });

  std::vector<UserView> views;
  for (int user = 1; user <= report.params.num_nodes; ++user)
    views.push_back(user_view(user, report.params, partition, placement, library));

  const std::vector<DemandVector> vectors = parse_demands(config.demands, report.params);
  report.demand_count = static_cast<long long>(vectors.size());
  report.first_demands = vectors.front();
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const Broadcast broadcast =
        private_deliver(*base, report.params, library, vectors[i], key_ptr);
    if (i == 0) {
      report.payload_bits = broadcast.payload_bits();
      report.payload_files = Fraction(report.payload_bits, report.params.file_bits);
      report.header_bits = static_cast<long long>(broadcast.header.size());
      for (const Packet& pkt : broadcast.packets) report.recipes.push_back(recipe_str(pkt));
    } else if (broadcast.payload_bits() != report.payload_bits) {
      report.payload_constant = false;
    }
    for (int user = 1; user <= report.params.num_nodes; ++user) {
      const int want = vectors[i][static_cast<std::size_t>(user - 1)];
      const DecodeResult res =
          user_decode(user, want, broadcast, views[static_cast<std::size_t>(user - 1)],
                      report.params, partition, pconfig);
      std::string why;
      if (!res.ok)
        why = res.diagnostic;
      else if (!(res.file == library.file(want)))
        why = "decoded bits differ from the library file";
      if (!why.empty() && report.failures.size() < 8)
        report.failures.push_back(DecodeFailure{vectors[i], user, why});
      if (!why.empty()) report.decode_pass = false;
    }
  }
  report.decode_pass = report.failures.empty();
  return report;
}

VerifyReport run_verify(const RunConfig& config, const std::string& check) {
  VerifyReport report;
  report.check = check;
  report.params = resolved_params(config);
  report.scheme = config.scheme;
  report.privatize = config.privatize;
  report.mode = config.mode;
  report.seed = config.seed;

  if (check == "decode") {
    VerifyConfig vc;
    vc.params = report.params;
    vc.scheme = config.scheme;
    vc.privatize = config.privatize;
    vc.mode = config.mode;
    vc.seed = config.seed;
    vc.budget = config.budget;
    report.decode = verify_decode_all(vc);
    report.pass = report.decode.pass && report.decode.equal_load;
    return report;
  }
  if (check == "privacy") {
    report.file_bits_used = verify_file_bits(config.scheme, report.params.num_nodes,
                                             report.params.access_degree, config.bits_per_part);
    VerifyConfig vc;
    vc.params = report.params;
    vc.params.file_bits = report.file_bits_used;
    vc.scheme = config.scheme;
    vc.privatize = config.privatize;
    vc.mode = config.mode;
    vc.seed = config.seed;
    vc.budget = config.budget;
    if (config.observer > 0)
      report.observers = {config.observer};
    else
      for (int user = 1; user <= report.params.num_nodes; ++user) report.observers.push_back(user);
    report.pass = true;
    for (int observer : report.observers) {
      report.privacy.push_back(privacy_check(vc, observer));
      report.pass = report.pass && report.privacy.back().pass;
    }
    return report;
  }
  if (check == "requirements") {
    const auto base = make_scheme(config.scheme);
    if (!config.fixture_path.empty()) {
      report.fixture_mode = true;
      const PlacementFixture fixture = PlacementFixture::load(config.fixture_path);
      report.requirement1 = check_requirement1(fixture, report.params);
      report.requirement2 = check_requirement2(fixture, report.params.num_files);
    } else {
      report.requirement1 = check_requirement1(*base, report.params);
      report.requirement2 = check_requirement2(*base, report.params);
    }
    report.pass = report.requirement1.pass && report.requirement2.pass;
    return report;
  }
  if (check == "isolation") {
    report.isolation = key_isolation_check(report.params, config.mode);
    report.pass = report.isolation.pass;
    return report;
  }
  throw ConfigError("unknown check \"" + check + "\" (decode | privacy | requirements | isolation)");
}

std::string render_simulate_text(const SimulateReport& report) {
  std::ostringstream out;
  out << "simulate: scheme=" << report.scheme << " k=" << report.params.num_nodes
      << " l=" << report.params.access_degree << " n=" << report.params.num_files
      << " b=" << report.params.file_bits << " privatize=" << (report.privatize ? "yes" : "no");
  if (report.privatize) out << " mode=" << to_string(report.mode) << " omega=" << report.omega;
  out << " seed=" << report.seed << '\n';
  out << "memory per node (files):";
  for (const Fraction& m : report.node_memory) out << ' ' << m.str();
  out << (report.memory_uniform ? " (uniform)" : " (NOT uniform)") << '\n';
  out << "payload: " << report.payload_files.str() << " files (" << report.payload_bits
      << " bits), header " << report.header_bits << " bits\n";
  out << "packets for demands " << demands_str(report.first_demands) << ": "
      << report.recipes.size() << '\n';
  for (std::size_t i = 0; i < report.recipes.size(); ++i)
    out << "  " << (i + 1) << ": " << report.recipes[i] << '\n';
  out << "demand vectors checked: " << report.demand_count
      << (report.payload_constant ? "" : " (payload varies!)") << '\n';
  for (const DecodeFailure& f : report.failures)
    out << "  fail demands=" << demands_str(f.demands) << " user=" << f.user << ": "
        << f.diagnostic << '\n';
  out << "decode: " << (report.decode_pass ? "pass" : "FAIL") << '\n';
  return out.str();
}

std::string render_simulate_json(const SimulateReport& report) {
  nlohmann::json j;
  j["command"] = "simulate";
  j["params"] = params_json(report.params);
  j["scheme"] = report.scheme;
  j["privatize"] = report.privatize;
  if (report.privatize) {
    j["mode"] = to_string(report.mode);
    j["omega"] = report.omega;
  }
  j["seed"] = report.seed;
  j["memory_files_per_node"] = nlohmann::json::array();
  for (const Fraction& m : report.node_memory) j["memory_files_per_node"].push_back(m.str());
  j["memory_uniform"] = report.memory_uniform;
  j["payload_files"] = report.payload_files.str();
  j["payload_bits"] = report.payload_bits;
  j["payload_constant"] = report.payload_constant;
  j["header_bits"] = report.header_bits;
  j["demands"] = report.first_demands;
  j["packets"] = report.recipes;
  j["demand_count"] = report.demand_count;
  j["decode_pass"] = report.decode_pass;
  j["failures"] = nlohmann::json::array();
  for (const DecodeFailure& f : report.failures) j["failures"].push_back(failure_json(f));
  return j.dump(2) + "\n";
}

std::string render_verify_text(const VerifyReport& report) {
  std::ostringstream out;
  out << "verify: check=" << report.check << " scheme=" << report.scheme
      << " k=" << report.params.num_nodes << " l=" << report.params.access_degree
      << " n=" << report.params.num_files << " privatize=" << (report.privatize ? "yes" : "no");
  if (report.privatize) out << " mode=" << to_string(report.mode);
  out << " seed=" << report.seed << '\n';
  if (report.check == "decode") {
    out << "demand vectors: " << report.decode.demand_count
        << ", failures: " << report.decode.failure_count << ", payload "
        << report.decode.payload_bits << " bits "
        << (report.decode.equal_load ? "(constant)" : "(VARIES)") << '\n';
    for (const DecodeFailure& f : report.decode.failures)
      out << "  fail demands=" << demands_str(f.demands) << " user=" << f.user << ": "
          << f.diagnostic << '\n';
  } else if (report.check == "privacy") {
    out << "file bits used: " << report.file_bits_used << '\n';
    for (std::size_t i = 0; i < report.privacy.size(); ++i) {
      const PrivacyReport& p = report.privacy[i];
      out << "observer " << report.observers[i] << ": " << (p.pass ? "pass" : "FAIL")
          << " mi_bits=" << p.mi_bits;
      if (!p.mi_exact.empty()) out << " (exact " << p.mi_exact << ")";
      out << " count_gap=" << p.count_gap << " cells=" << p.cells
          << " fingerprint=" << hex64(p.fingerprint) << '\n';
      if (!p.placement_independent) out << "  placement: " << p.placement_detail << '\n';
      for (const PrivacyWitness& w : p.witnesses)
        out << "  witness: own=" << w.own_demand << " demands=" << demands_str(w.demands)
            << " obs=" << hex64(w.observable) << " count=" << w.count
            << " expected=" << w.expected << '\n';
    }
  } else if (report.check == "requirements") {
    out << "requirement 1 (no window caches a bit twice): "
        << (report.requirement1.pass ? "pass" : "FAIL") << '\n';
    if (!report.requirement1.pass) out << "  " << report.requirement1.detail << '\n';
    out << "requirement 2 (same parts of every file): "
        << (report.requirement2.pass ? "pass" : "FAIL") << '\n';
    if (!report.requirement2.pass) out << "  " << report.requirement2.detail << '\n';
  } else if (report.check == "isolation") {
    out << "key isolation (" << to_string(report.mode) << "): "
        << (report.isolation.pass ? "pass" : "FAIL") << " - " << report.isolation.detail << '\n';
    if (report.isolation.omega > 0) {
      out << "omega=" << report.isolation.omega;
      if (!report.isolation.witness.empty()) {
        out << " witness=" << label_str(report.isolation.witness);
      }
      out << '\n';
    }
  }
  out << "verdict: " << (report.pass ? "pass" : "FAIL") << '\n';
  return out.str();
}

std::string render_verify_json(const VerifyReport& report) {
  nlohmann::json j;
  j["command"] = "verify";
  j["check"] = report.check;
  j["params"] = params_json(report.params);
  j["scheme"] = report.scheme;
  j["privatize"] = report.privatize;
  if (report.privatize) j["mode"] = to_string(report.mode);
  j["seed"] = report.seed;
  j["pass"] = report.pass;
  if (report.check == "decode") {
    j["demand_count"] = report.decode.demand_count;
    j["failure_count"] = report.decode.failure_count;
    j["payload_bits"] = report.decode.payload_bits;
    j["payload_constant"] = report.decode.equal_load;
    j["failures"] = nlohmann::json::array();
    for (const DecodeFailure& f : report.decode.failures) j["failures"].push_back(failure_json(f));
  } else if (report.check == "privacy") {
    j["file_bits_used"] = report.file_bits_used;
    j["observers"] = nlohmann::json::array();
    for (std::size_t i = 0; i < report.privacy.size(); ++i) {
      const PrivacyReport& p = report.privacy[i];
      nlohmann::json o;
      o["observer"] = report.observers[i];
      o["pass"] = p.pass;
      o["mi_bits"] = p.mi_bits;
      o["mi_exact"] = p.mi_exact;
      o["count_gap"] = p.count_gap;
      o["cells"] = p.cells;
      o["fingerprint"] = hex64(p.fingerprint);
      o["placement_independent"] = p.placement_independent;
      if (!p.placement_independent) o["placement_detail"] = p.placement_detail;
      o["witnesses"] = nlohmann::json::array();
      for (const PrivacyWitness& w : p.witnesses)
        o["witnesses"].push_back({{"own_demand", w.own_demand},
                                  {"demands", w.demands},
                                  {"observable", hex64(w.observable)},
                                  {"count", w.count},
                                  {"expected", w.expected}});
      j["observers"].push_back(std::move(o));
    }
  } else if (report.check == "requirements") {
    j["fixture"] = report.fixture_mode;
    j["requirement1"] = {{"pass", report.requirement1.pass},
                         {"detail", report.requirement1.detail}};
    j["requirement2"] = {{"pass", report.requirement2.pass},
                         {"detail", report.requirement2.detail}};
  } else if (report.check == "isolation") {
    j["isolation"] = {{"pass", report.isolation.pass},
                      {"detail", report.isolation.detail},
                      {"omega", report.isolation.omega},
                      {"witness", report.isolation.witness}};
  }
  return j.dump(2) + "\n";
}

std::string tradeoff_csv(int num_nodes, int access_degree, int num_files,
                         const std::string& which) {
  const bool want_nonprivate = which == "nonprivate" || which == "both";
  const bool want_private = which == "private" || which == "both";
  if (!want_nonprivate && !want_private)
    throw ConfigError("unknown point family \"" + which + "\" (nonprivate | private | both)");
  std::ostringstream out;
  out << "scheme,t,M_num,M_den,R_num,R_den,M_float,R_float\n";
  if (want_nonprivate) {
    const auto points = nonprivate_points(num_nodes, access_degree, num_files);
    append_points(out, "nonprivate", points);
    append_points(out, "nonprivate-hull", LowerEnvelope(points).vertices());
  }
  if (want_private) {
    const auto points = private_points(num_nodes, access_degree, num_files);
    append_points(out, "private", points);
    append_points(out, "private-hull", LowerEnvelope(points).vertices());
    const auto general = private_points_general(num_nodes, access_degree, num_files);
    append_points(out, "private-general", general);
  }
  return out.str();
}

std::string demo_transcript() {
  const InstanceParams params{3, 2, 3, 96};
  const auto base = make_scheme("singleton");
  const PartitionSpec partition = base->partition(params);
  Rng lib_rng(7);
  const Library library = Library::random(params.num_files, params.file_bits, lib_rng);
  const KeyMaterial keys = KeyMaterial::generate(params, partition, PrivacyMode::pad, 8);
  const PlacementSpec placement = private_place(*base, params, library, &keys);
  const DemandVector demands{1, 2, 3};
  const Broadcast broadcast = private_deliver(*base, params, library, demands, &keys);

  std::ostringstream out;
  out << "three cache nodes, read windows of two, three files of 96 bits\n";
  out << "scheme: singleton parts, privatized with masked keys and pads (seed 7 library,"
         " seed 8 keys)\n\n";

  out << "partition of every file:";
  for (const auto& [label, range] : partition.parts())
    out << "  " << label_str(label) << " bits [" << range.offset << ","
        << range.offset + range.length << ")";
  out << '\n';
  for (int user = 1; user <= params.num_nodes; ++user) {
    out << "user " << user << " reads nodes {";
    const std::vector<int> win = window(user, params);
    for (std::size_t i = 0; i < win.size(); ++i) out << (i ? "," : "") << win[i];
    out << "}, blocked part";
    for (const NodeSet& label : blocked_sets(user, partition, params))
      out << ' ' << label_str(label);
    out << '\n';
  }
  out << '\n';

  for (int node = 1; node <= params.num_nodes; ++node) {
    const NodePlacement& spot = placement.node(node);
    out << "node " << node << " caches parts";
    for (const NodeSet& label : spot.library_labels) out << ' ' << label_str(label);
    out << " of every file (" << spot.library_bits << " bits)";
    for (const KeyItem& item : spot.keys) {
      out << (item.kind == KeyItem::Kind::masked_key ? "; masked key of user " : "; pad of user ")
          << item.owner << " part " << label_str(item.label);
    }
    out << "; total " << Fraction(spot.total_bits(), params.file_bits).str() << " files\n";
  }
  out << '\n';

  out << "demands (1,2,3); announced coefficient rows:\n";
  for (int user = 1; user <= params.num_nodes; ++user)
    out << "  user " << user << ": " << broadcast.coeff_row(user).to_string()
        << " (own row with the requested file's bit flipped)\n";
  out << "broadcast packets: " << broadcast.packets.size() << '\n';
  for (std::size_t i = 0; i < broadcast.packets.size(); ++i)
    out << "  packet " << (i + 1) << ": " << recipe_str(broadcast.packets[i]) << " payload "
        << broadcast.packets[i].payload.size() << " bits\n";
  out << '\n';

  bool all_ok = true;
  for (int user = 1; user <= params.num_nodes; ++user) {
    const int want = demands[static_cast<std::size_t>(user - 1)];
    out << "user " << user << " wants file " << want << ":\n";
    const std::vector<int> win = window(user, params);
    for (const auto& [label, range] : partition.parts()) {
      int from_node = 0;
      for (int node : win) {
        const auto& labels = placement.node(node).library_labels;
        if (std::find(labels.begin(), labels.end(), label) != labels.end()) {
          from_node = node;
          break;
        }
      }
      if (from_node != 0) {
        out << "  part " << label_str(label) << " read from node " << from_node << '\n';
        continue;
      }
      int packet_index = 0;
      for (std::size_t i = 0; i < broadcast.packets.size(); ++i)
        for (const auto& [term_user, term_label] : broadcast.packets[i].recipe)
          if (term_user == user && term_label == label) packet_index = static_cast<int>(i) + 1;
      out << "  part " << label_str(label) << " recovered from packet " << packet_index
          << ", key removed\n";
    }
    const UserView view = user_view(user, params, partition, placement, library);
    const DecodeResult res =
        user_decode(user, want, broadcast, view, params, partition, keys.config);
    const bool ok = res.ok && res.file == library.file(want);
    all_ok = all_ok && ok;
    out << "  decode " << (ok ? "ok" : "FAILED") << '\n';
  }
  out << '\n';
  out << (all_ok ? "all three users decoded their requested files\n"
                 : "decode failures above\n");
  const LoadReport load = measure_load(broadcast, params.file_bits);
  out << "memory per node: " << Fraction(placement.node(1).total_bits(), params.file_bits).str()
      << " files; payload: " << load.payload_files.str() << " files; header: " << load.header_bits
      << " bits\n";
  return out.str();
}

}  // namespace macc
