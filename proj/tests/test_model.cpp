#include <map>
#include <stdexcept>

#include "doctest.h"
#include "macc/model.hpp"
#include "macc/schemes.hpp"

using namespace macc;

TEST_CASE("mod1 stays in [1..modulus]") {
  CHECK(mod1(1, 3) == 1);
  CHECK(mod1(3, 3) == 3);
  CHECK(mod1(4, 3) == 1);
  CHECK(mod1(0, 3) == 3);
  CHECK(mod1(-1, 3) == 2);
  CHECK(mod1(7, 5) == 2);
  CHECK_THROWS_AS(mod1(1, 0), std::invalid_argument);
}

TEST_CASE("instance validation") {
  CHECK_NOTHROW((InstanceParams{3, 2, 3, 96}.validate()));
  CHECK_THROWS_AS((InstanceParams{0, 1, 1, 1}.validate()), ConfigError);
  CHECK_THROWS_AS((InstanceParams{3, 4, 3, 96}.validate()), ConfigError);
  CHECK_THROWS_AS((InstanceParams{3, 0, 3, 96}.validate()), ConfigError);
  CHECK_THROWS_AS((InstanceParams{3, 2, 0, 96}.validate()), ConfigError);
  CHECK_THROWS_AS((InstanceParams{3, 2, 3, 0}.validate()), ConfigError);
}

TEST_CASE("window wraps cyclically starting at the user's node") {
  const InstanceParams p32{3, 2, 1, 1};
  CHECK(window(1, p32) == std::vector<int>{1, 2});
  CHECK(window(3, p32) == std::vector<int>{3, 1});
  const InstanceParams p53{5, 3, 1, 1};
  CHECK(window(4, p53) == std::vector<int>{4, 5, 1});
  const InstanceParams p44{4, 4, 1, 1};
  CHECK(window(2, p44) == std::vector<int>{2, 3, 4, 1});
  CHECK_THROWS_AS(window(0, p32), std::invalid_argument);
  CHECK_THROWS_AS(window(4, p32), std::invalid_argument);
}

TEST_CASE("labels print and parse") {
  CHECK(label_str({}) == "{}");
  CHECK(label_str({1, 3}) == "{1,3}");
  CHECK(parse_label("{}") == NodeSet{});
  CHECK(parse_label("{2}") == NodeSet{2});
  CHECK(parse_label("{1,3}") == NodeSet{1, 3});
  CHECK_THROWS_AS(parse_label("1,3"), ConfigError);
  CHECK_THROWS_AS(parse_label("{1,}"), ConfigError);
  CHECK_THROWS_AS(parse_label("{a}"), ConfigError);
}

TEST_CASE("partition assigns contiguous ranges in label order") {
  const std::map<NodeSet, long long> sizes{{{1}, 32}, {{2}, 32}, {{3}, 32}};
  const PartitionSpec part = PartitionSpec::from_sizes(sizes, 96);
  CHECK(part.total_bits() == 96);
  CHECK(part.at({1}).offset == 0);
  CHECK(part.at({2}).offset == 32);
  CHECK(part.at({3}).offset == 64);
  CHECK(part.at({3}).length == 32);
  CHECK(part.contains({2}));
  CHECK_FALSE(part.contains({1, 2}));
  CHECK_THROWS_AS(part.at({4}), std::invalid_argument);

  CHECK_THROWS_AS(PartitionSpec::from_sizes(sizes, 100), ConfigError);
  CHECK_THROWS_AS(PartitionSpec::from_sizes({{{1}, 0}}, 0), ConfigError);
}

TEST_CASE("partition label order is lexicographic on the sets") {
  const std::map<NodeSet, long long> sizes{{{2}, 4}, {{1, 3}, 4}, {{1}, 4}};
  const PartitionSpec part = PartitionSpec::from_sizes(sizes, 12);
  CHECK(part.at({1}).offset == 0);
  CHECK(part.at({1, 3}).offset == 4);
  CHECK(part.at({2}).offset == 8);
}

TEST_CASE("blocked sets are the labels a window cannot reach") {
  const InstanceParams params{4, 2, 2, 4};
  const std::map<NodeSet, long long> sizes{{{1}, 1}, {{2}, 1}, {{3}, 1}, {{4}, 1}};
  const PartitionSpec part = PartitionSpec::from_sizes(sizes, 4);
  CHECK(blocked_sets(2, part, params) == std::vector<NodeSet>{{1}, {4}});
  CHECK(blocked_sets(4, part, params) == std::vector<NodeSet>{{2}, {3}});

  // the empty label has no node to intersect, so it is blocked everywhere
  const PartitionSpec whole = PartitionSpec::from_sizes({{NodeSet{}, 4}}, 4);
  CHECK(blocked_sets(1, whole, params) == std::vector<NodeSet>{{}});
}

TEST_CASE("every scheme partition covers each file exactly once") {
  for (const char* name : {"uncached", "singleton", "stripe"}) {
    const auto scheme = make_scheme(name);
    const InstanceParams params{6, 2, 4, 24};
    const PartitionSpec part = scheme->partition(params);
    long long covered = 0;
    long long cursor = 0;
    for (const auto& [label, range] : part.parts()) {
      CHECK(range.offset == cursor);  // contiguous in label order
      cursor += range.length;
      covered += range.length;
    }
    CHECK(covered == params.file_bits);
    CHECK(part.total_bits() == params.file_bits);
  }
}

TEST_CASE("bit vectors pack, slice, and xor") {
  BitVector v = BitVector::from_string("10110");
  CHECK(v.size() == 5);
  CHECK(v.bit(0));
  CHECK_FALSE(v.bit(1));
  CHECK(v.to_string() == "10110");
  CHECK(v.slice(1, 3).to_string() == "011");

  BitVector w(5);
  w.set_bit(4, true);
  v ^= w;
  CHECK(v.to_string() == "10111");

  v.splice(0, BitVector::from_string("00"));
  CHECK(v.to_string() == "00111");

  BitVector a;
  a.append(BitVector::from_string("11"));
  a.append_bit(false);
  CHECK(a.to_string() == "110");
  CHECK(a.as_uint() == 0b011u);  // bit 0 is the first character

  CHECK(BitVector::from_uint(5, 4).to_string() == "1010");
  CHECK_THROWS_AS(BitVector::from_string("102"), std::invalid_argument);
  CHECK_THROWS_AS(v.bit(99), std::out_of_range);
  CHECK_THROWS_AS(v.slice(3, 3), std::out_of_range);
  BitVector short_one(3);
  CHECK_THROWS_AS(short_one ^= v, std::invalid_argument);
  BitVector wide(65);
  CHECK_THROWS_AS(wide.as_uint(), std::logic_error);
}

TEST_CASE("bit vector equality ignores nothing") {
  CHECK(BitVector::from_string("101") == BitVector::from_string("101"));
  CHECK_FALSE(BitVector::from_string("101") == BitVector::from_string("100"));
  CHECK_FALSE(BitVector::from_string("101") == BitVector::from_string("1010"));
}

TEST_CASE("fractions normalize and compare exactly") {
  CHECK(Fraction(2, 4) == Fraction(1, 2));
  CHECK(Fraction(-2, -4) == Fraction(1, 2));
  CHECK(Fraction(2, -4) == Fraction(-1, 2));
  CHECK(Fraction(5, 3).str() == "5/3");
  CHECK(Fraction(3).str() == "3");
  CHECK(Fraction(0, 7).str() == "0");
  CHECK(Fraction(1, 3) + Fraction(1, 6) == Fraction(1, 2));
  CHECK(Fraction(1, 2) - Fraction(1, 2) == Fraction(0));
  CHECK(Fraction(2, 3) * Fraction(9, 4) == Fraction(3, 2));
  CHECK(Fraction(1, 2) / Fraction(1, 4) == Fraction(2));
  CHECK(Fraction(1, 3) < Fraction(1, 2));
  CHECK(Fraction(-1, 2) < Fraction(0));
  CHECK(Fraction(1, 3).to_double() == doctest::Approx(1.0 / 3.0));
  const Fraction huge(9'000'000'000'000'000'000LL, 1);
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("library holds equal-length files and slices subfiles") {
  Rng rng(11);
  const Library lib = Library::random(3, 8, rng);
  CHECK(lib.num_files() == 3);
  CHECK(lib.file_bits() == 8);
  CHECK(lib.file(1).size() == 8);
  CHECK_THROWS_AS(lib.file(0), std::invalid_argument);
  CHECK_THROWS_AS(lib.file(4), std::invalid_argument);
  const PartRange part{2, 4};
  CHECK(lib.subfile(2, part) == lib.file(2).slice(2, 4));

  Rng again(11);
  const Library same = Library::random(3, 8, again);
  for (int n = 1; n <= 3; ++n) CHECK(same.file(n) == lib.file(n));

  CHECK_THROWS_AS(Library(std::vector<BitVector>{}), ConfigError);
  CHECK_THROWS_AS(Library({BitVector(3), BitVector(4)}), ConfigError);
}

TEST_CASE("demand vectors are validated") {
  const InstanceParams params{3, 2, 3, 96};
  CHECK_NOTHROW(validate_demands({1, 2, 3}, params));
  CHECK_THROWS_AS(validate_demands({1, 2}, params), ConfigError);
  CHECK_THROWS_AS(validate_demands({1, 2, 4}, params), ConfigError);
  CHECK_THROWS_AS(validate_demands({0, 2, 3}, params), ConfigError);
}
