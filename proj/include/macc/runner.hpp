#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "macc/infoverify.hpp"
#include "macc/model.hpp"
#include "macc/privatizer.hpp"
#include "macc/schemes.hpp"

namespace macc {

/// Everything a run needs, mirrored one-to-one by the command-line flags.
/// A zero file_bits picks a size every implemented scheme can split evenly.
struct RunConfig {
  InstanceParams params{3, 2, 3, 0};
  std::string scheme = "singleton";
  bool privatize = false;
  PrivacyMode mode = PrivacyMode::pad;
  std::string demands;  // comma list, "all", or empty for the default pattern
  std::uint64_t seed = 1;
  int bits_per_part = 1;  // privacy checks scale the file size down to this
  std::uint64_t budget = kDefaultEnumerationBudget;
  std::string fixture_path;  // requirements check reads a placement from here
  int observer = 0;          // 0 means every user in turn
};

long long default_file_bits(int num_nodes, int access_degree);

/// Expands the demand field: empty -> one default vector, "all" -> the whole
/// demand space (refused beyond a million vectors), else one parsed vector.
std::vector<DemandVector> parse_demands(const std::string& text, const InstanceParams& params);

std::string recipe_str(const Packet& packet);

struct SimulateReport {
  InstanceParams params;
  std::string scheme;
  bool privatize = false;
  PrivacyMode mode = PrivacyMode::pad;
  std::uint64_t seed = 0;
  int omega = 0;
  std::vector<Fraction> node_memory;  // files per node, node order
  bool memory_uniform = true;
  Fraction payload_files;
  long long payload_bits = 0;
  bool payload_constant = true;
  long long header_bits = 0;
  std::vector<std::string> recipes;  // first demand vector's packets
  DemandVector first_demands;
  long long demand_count = 0;
  bool decode_pass = false;
  std::vector<DecodeFailure> failures;
};

SimulateReport run_simulate(const RunConfig& config);

struct VerifyReport {
  std::string check;
  bool pass = false;
  InstanceParams params;
  std::string scheme;
  bool privatize = false;
  PrivacyMode mode = PrivacyMode::pad;
  std::uint64_t seed = 0;
  // populated according to `check`
  DecodeAllReport decode;
  std::vector<int> observers;
  std::vector<PrivacyReport> privacy;
  long long file_bits_used = 0;
  bool fixture_mode = false;
  RequirementReport requirement1;
  RequirementReport requirement2;
  IsolationReport isolation;
};

VerifyReport run_verify(const RunConfig& config, const std::string& check);

std::string render_simulate_text(const SimulateReport& report);
std::string render_simulate_json(const SimulateReport& report);
std::string render_verify_text(const VerifyReport& report);
std::string render_verify_json(const VerifyReport& report);

/// Point table plus envelope vertices, one row per point.
std::string tradeoff_csv(int num_nodes, int access_degree, int num_files,
                         const std::string& which);

/// Fixed walk-through of the running three-node example at seeds 7/8,
/// byte-stable, used as a golden transcript.
std::string demo_transcript();

}  // namespace macc
