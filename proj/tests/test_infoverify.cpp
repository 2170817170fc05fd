#include <string>

#include "doctest.h"
#include "macc/infoverify.hpp"
#include "macc/schemes.hpp"

using namespace macc;

namespace {

VerifyConfig make_config(int k, int l, int n, const char* scheme, bool privatize,
                         PrivacyMode mode, int bits_per_part = 1) {
  VerifyConfig config;
  config.params = InstanceParams{k, l, n, verify_file_bits(scheme, k, l, bits_per_part)};
  config.scheme = scheme;
  config.privatize = privatize;
  config.mode = mode;
  return config;
}

}  // namespace

TEST_CASE("file size for one-bit parts per scheme") {
  CHECK(verify_file_bits("uncached", 4, 2, 1) == 1);
  CHECK(verify_file_bits("singleton", 4, 2, 1) == 4);
  CHECK(verify_file_bits("stripe", 4, 2, 1) == 2);
  CHECK(verify_file_bits("singleton", 4, 2, 3) == 12);
  CHECK_THROWS_AS(verify_file_bits("nonesuch", 4, 2, 1), ConfigError);
  CHECK_THROWS_AS(verify_file_bits("singleton", 4, 2, 0), ConfigError);
}

TEST_CASE("all demand vectors decode for seeded instances") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    VerifyConfig config;
    config.params = InstanceParams{4, 2, 2, 4};
    config.scheme = "singleton";
    config.privatize = true;
    config.mode = PrivacyMode::pad;
    config.seed = seed;
    const DecodeAllReport report = verify_decode_all(config);
    CHECK(report.pass);
    CHECK(report.demand_count == 16);
    CHECK(report.failure_count == 0);
    CHECK(report.equal_load);
    CHECK(report.payload_bits > 0);
  }
}

TEST_CASE("decode check also covers the plain pipeline and a single node") {
  VerifyConfig plain;
  plain.params = InstanceParams{3, 2, 3, 6};
  plain.scheme = "singleton";
  plain.privatize = false;
  CHECK(verify_decode_all(plain).pass);

  VerifyConfig solo;
  solo.params = InstanceParams{1, 1, 2, 2};
  solo.scheme = "singleton";
  solo.privatize = true;
  solo.mode = PrivacyMode::pad;
  const DecodeAllReport report = verify_decode_all(solo);
  CHECK(report.pass);
  CHECK(report.demand_count == 2);
  CHECK(report.payload_bits == 0);
}

TEST_CASE("decode check refuses demand spaces past the cap") {
  VerifyConfig config;
  config.params = InstanceParams{8, 2, 8, 8};
  config.scheme = "singleton";
  config.privatize = false;
  config.demand_cap = 1000;
  CHECK_THROWS_AS(verify_decode_all(config), ConfigError);
}

TEST_CASE("conditional outcome distributions ignore other users' demands only under keys") {
  const VerifyConfig keyed = make_config(3, 2, 2, "singleton", true, PrivacyMode::pad);
  const JointDistribution a = conditional_distribution(keyed, 1, {1, 1, 1});
  const JointDistribution b = conditional_distribution(keyed, 1, {1, 2, 2});
  CHECK(a.total == (std::uint64_t{1} << 15));
  CHECK(a.counts == b.counts);

  const VerifyConfig bare = make_config(3, 2, 2, "singleton", false, PrivacyMode::pad);
  const JointDistribution c = conditional_distribution(bare, 1, {1, 1, 1});
  const JointDistribution d = conditional_distribution(bare, 1, {1, 2, 2});
  CHECK(c.total == (std::uint64_t{1} << 6));
  CHECK(c.counts != d.counts);
}

TEST_CASE("privatized runs leak nothing at three nodes") {
  for (const PrivacyMode mode : {PrivacyMode::pad, PrivacyMode::share}) {
    const VerifyConfig config = make_config(3, 2, 2, "singleton", true, mode);
    for (int observer = 1; observer <= 3; ++observer) {
      const PrivacyReport report = privacy_check(config, observer);
      CHECK(report.pass);
      CHECK(report.mi_exact == "0");
      CHECK(report.count_gap == 0);
      CHECK(report.mi_bits == 0.0);
      CHECK(report.placement_independent);
      CHECK(report.witnesses.empty());
    }
  }
}

TEST_CASE("plain runs leak both other demands exactly") {
  const VerifyConfig config = make_config(3, 2, 2, "singleton", false, PrivacyMode::pad);
  const PrivacyReport report = privacy_check(config, 1);
  CHECK_FALSE(report.pass);
  CHECK(report.mi_exact.empty());
  CHECK(report.count_gap > 0);
  CHECK_FALSE(report.witnesses.empty());
  // the one-hot announcement reveals the other two binary demands in full
  CHECK(report.mi_bits == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("a single user has nothing to leak") {
  const VerifyConfig config = make_config(1, 1, 2, "singleton", true, PrivacyMode::pad);
  const PrivacyReport report = privacy_check(config, 1);
  CHECK(report.pass);
  CHECK(report.mi_exact == "0");
}

TEST_CASE("fast and reference privacy engines agree bit for bit") {
  struct Case {
    int k, l, n;
    bool privatize;
    PrivacyMode mode;
    int bits_per_part;
  };
  const Case cases[] = {
      {2, 1, 2, true, PrivacyMode::pad, 1},  {2, 1, 2, true, PrivacyMode::pad, 2},
      {2, 1, 2, true, PrivacyMode::share, 1}, {3, 2, 2, true, PrivacyMode::pad, 1},
      {3, 2, 2, false, PrivacyMode::pad, 1},
  };
  for (const Case& c : cases) {
    const VerifyConfig config =
        make_config(c.k, c.l, c.n, "singleton", c.privatize, c.mode, c.bits_per_part);
    for (int observer = 1; observer <= c.k; ++observer) {
      const PrivacyReport fast = privacy_check(config, observer);
      const PrivacyReport slow = privacy_check_reference(config, observer);
      CHECK(fast.fingerprint == slow.fingerprint);
      CHECK(fast.pass == slow.pass);
      CHECK(fast.count_gap == slow.count_gap);
      CHECK(fast.cells == slow.cells);
      CHECK(fast.mi_bits == doctest::Approx(slow.mi_bits).epsilon(1e-12));
    }
  }
}

TEST_CASE("privacy checks refuse to start past the cell budget") {
  VerifyConfig config = make_config(3, 2, 3, "singleton", true, PrivacyMode::pad);
  config.budget = 1000;
  try {
    privacy_check(config, 1);
    FAIL("expected a budget refusal");
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    CHECK(what.find("cells") != std::string::npos);
    CHECK(what.find("1000") != std::string::npos);
  }
  CHECK(estimate_privacy_cells(config) == (std::uint64_t{1} << 21) * 27);
}

TEST_CASE("privacy checks refuse observables too wide to count densely") {
  VerifyConfig config = make_config(3, 2, 3, "singleton", true, PrivacyMode::pad, 2);
  config.budget = ~std::uint64_t{0};
  CHECK_THROWS_AS(privacy_check(config, 1), ConfigError);
}

TEST_CASE("reference engine is guarded to tiny instances") {
  const VerifyConfig config = make_config(3, 2, 3, "singleton", true, PrivacyMode::pad);
  CHECK_THROWS_AS(privacy_check_reference(config, 1), ConfigError);
}

TEST_CASE("observer index is validated") {
  const VerifyConfig config = make_config(2, 1, 2, "singleton", true, PrivacyMode::pad);
  CHECK_THROWS_AS(privacy_check(config, 0), std::invalid_argument);
  CHECK_THROWS_AS(privacy_check(config, 3), std::invalid_argument);
}

TEST_CASE("key isolation holds exactly where the arrangements are sound") {
  CHECK(key_isolation_check(InstanceParams{3, 2, 2, 2}, PrivacyMode::pad).pass);
  CHECK(key_isolation_check(InstanceParams{5, 2, 2, 2}, PrivacyMode::pad).pass);
  CHECK(key_isolation_check(InstanceParams{2, 1, 2, 2}, PrivacyMode::pad).pass);

  const IsolationReport bad_pad = key_isolation_check(InstanceParams{4, 3, 2, 2}, PrivacyMode::pad);
  CHECK_FALSE(bad_pad.pass);
  CHECK(bad_pad.owner != 0);
  CHECK(bad_pad.other != 0);
  CHECK_FALSE(bad_pad.detail.empty());

  const IsolationReport good_share =
      key_isolation_check(InstanceParams{4, 3, 2, 2}, PrivacyMode::share);
  CHECK(good_share.pass);
  CHECK(good_share.omega == 3);

  const IsolationReport share_witness =
      key_isolation_check(InstanceParams{5, 2, 2, 2}, PrivacyMode::share);
  CHECK(share_witness.pass);
  CHECK(share_witness.omega == 2);
  CHECK(share_witness.witness == std::vector<int>{1, 2});

  const IsolationReport impossible =
      key_isolation_check(InstanceParams{4, 4, 2, 2}, PrivacyMode::share);
  CHECK_FALSE(impossible.pass);
  CHECK_FALSE(impossible.detail.empty());
}

TEST_CASE("load measurement splits payload from header") {
  const InstanceParams params{3, 2, 3, 96};
  const auto scheme = make_scheme("singleton");
  Rng rng(7);
  const Library library = Library::random(3, 96, rng);
  const Broadcast broadcast = private_deliver(*scheme, params, library, {1, 2, 3}, nullptr);
  const LoadReport report = measure_load(broadcast, 96);
  CHECK(report.payload_files == Fraction(1, 3));
  CHECK(report.header_bits == 9);

  const InstanceParams stripe_params{4, 2, 4, 8};
  const auto stripe = make_scheme("stripe");
  Rng rng2(3);
  const Library lib2 = Library::random(4, 8, rng2);
  const Broadcast empty = private_deliver(*stripe, stripe_params, lib2, {1, 2, 3, 4}, nullptr);
  const LoadReport zero = measure_load(empty, 8);
  CHECK(zero.payload_files == Fraction(0));
  CHECK(zero.header_bits == 16);

  const InstanceParams flood_params{3, 2, 3, 6};
  const auto flood = make_scheme("uncached");
  Rng rng3(5);
  const Library lib3 = Library::random(3, 6, rng3);
  const Broadcast all = private_deliver(*flood, flood_params, lib3, {1, 1, 1}, nullptr);
  CHECK(measure_load(all, 6).payload_files == Fraction(3));

  CHECK_THROWS_AS(measure_load(all, 0), std::invalid_argument);
}
