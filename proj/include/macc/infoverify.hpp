#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "macc/fraction.hpp"
#include "macc/model.hpp"
#include "macc/privatizer.hpp"

namespace macc {

inline constexpr std::uint64_t kDefaultEnumerationBudget = std::uint64_t{1} << 28;

/// One exhaustive-verification run: which scheme, whether the key transform
/// is applied, and how much enumeration is allowed.
struct VerifyConfig {
  InstanceParams params;
  std::string scheme = "singleton";
  bool privatize = true;
  PrivacyMode mode = PrivacyMode::pad;
  std::uint64_t seed = 1;
  long long demand_cap = 1'000'000;
  std::uint64_t budget = kDefaultEnumerationBudget;  // randomness x demand cells
};

/// Smallest file length that gives every part of the named scheme
/// bits_per_part bits.
long long verify_file_bits(std::string_view scheme, int num_nodes, int access_degree,
                           int bits_per_part);

struct DecodeFailure {
  DemandVector demands;
  int user = 0;
  std::string diagnostic;
};

/// Outcome of decoding every user under every demand vector.
struct DecodeAllReport {
  bool pass = false;
  long long demand_count = 0;
  long long failure_count = 0;
  bool equal_load = true;      // payload bit-count constant over demand vectors
  long long payload_bits = 0;  // per broadcast
  std::vector<DecodeFailure> failures;  // first few only
};

DecodeAllReport verify_decode_all(const VerifyConfig& config);

/// Exact outcome counts of one conditional distribution: counts[o] is the
/// number of randomness cells whose packed observable equals o.
struct JointDistribution {
  int obs_bits = 0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Exact outcome distribution one observer sees under a fixed demand vector,
/// counted over every randomness realization.
JointDistribution conditional_distribution(const VerifyConfig& config, int observer,
                                           const DemandVector& demands);

struct PrivacyWitness {
  int own_demand = 0;
  DemandVector demands;        // deviating demand vector
  std::uint64_t observable = 0;
  std::uint64_t count = 0;     // count under demands
  std::uint64_t expected = 0;  // count under the group's reference vector
};

struct PrivacyReport {
  bool pass = false;                  // exact count equality in every group
  bool placement_independent = true;  // cache content blind to other users' rows
  double mi_bits = 0.0;               // conditional leak seen by this observer
  std::string mi_exact;               // "0" when exactly private, empty otherwise
  std::uint64_t count_gap = 0;        // total |count difference| versus reference
  std::uint64_t cells = 0;            // enumerated randomness x demand cells
  std::uint64_t fingerprint = 0;      // over every (group, outcome, count)
  std::string placement_detail;
  std::vector<PrivacyWitness> witnesses;  // first few only
};

/// Cost formula enforced before any privacy enumeration runs.
std::uint64_t estimate_privacy_cells(const VerifyConfig& config);

/// Exhaustively certify that what one observer user sees (announced rows,
/// packets, window cache content) is conditionally independent of everyone
/// else's demands: exact counting over every (library, rows, key blocks,
/// demands) combination. Also certifies that the cache content alone is
/// independent of the other users' private rows.
PrivacyReport privacy_check(const VerifyConfig& config, int observer);

/// Same verdict computed through the real pipeline objects, slowly. Exists
/// to cross-check the packed engine: fingerprints must match exactly.
PrivacyReport privacy_check_reference(const VerifyConfig& config, int observer);

struct IsolationReport {
  bool pass = false;
  std::string detail;
  int owner = 0;  // whose key blocks leak (failure only)
  int other = 0;  // which other user sees all of them
  int omega = 0;
  std::vector<int> witness;  // share positions used, share mode
};

/// Pure window arithmetic: no other user's window may cover all the places
/// where one user's key blocks live.
IsolationReport key_isolation_check(const InstanceParams& params, PrivacyMode mode);

struct LoadReport {
  Fraction payload_files;  // payload bits / file bits
  long long header_bits = 0;
};

LoadReport measure_load(const Broadcast& broadcast, long long file_bits);

}  // namespace macc
