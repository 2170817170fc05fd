#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "macc/model.hpp"
#include "macc/privatizer.hpp"
#include "macc/random.hpp"
#include "macc/runner.hpp"

namespace py = pybind11;

namespace {

macc::RunConfig build_config(int k, int l, int n, long long b, const std::string& scheme,
                             bool privatize, const std::string& mode, const std::string& demands,
                             std::uint64_t seed) {
  macc::RunConfig config;
  config.params = macc::InstanceParams{k, l, n, b};
  config.scheme = scheme;
  config.privatize = privatize;
  config.mode = macc::parse_mode(mode);
  config.demands = demands;
  config.seed = seed;
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "multiaccess coded caching with private demands";
  m.attr("__version__") = "0.1.0";

  m.def(
      "mod1", [](long long value, int modulus) { return macc::mod1(value, modulus); },
      py::arg("value"), py::arg("modulus"), "1-based modulo, in [1..modulus]");

  m.def(
      "window",
      [](int user, int k, int l) {
        const macc::InstanceParams params{k, l, 1, 1};
        params.validate();
        return macc::window(user, params);
      },
      py::arg("user"), py::arg("k"), py::arg("l"),
      "the l consecutive nodes a user reads, wrap-around order");

  m.def(
      "omega",
      [](int k, int l) -> py::object {
        const auto result = macc::compute_omega(k, l);
        if (!result) return py::none();
        return py::make_tuple(result->omega, result->witness);
      },
      py::arg("k"), py::arg("l"),
      "(share count, witness positions) of the smallest isolated window subset, or None");

  m.def(
      "virtual_demand",
      [](int demand, const std::string& row) {
        return macc::virtual_demand(demand, macc::BitVector::from_string(row)).to_string();
      },
      py::arg("demand"), py::arg("row"), "coefficient row with the requested file's bit flipped");

  m.def(
      "share_split",
      [](const std::string& secret, int omega, std::uint64_t seed) {
        macc::Rng rng(seed);
        const auto shares =
            macc::share_split(macc::BitVector::from_string(secret), omega, rng);
        std::vector<std::string> out;
        out.reserve(shares.size());
        for (const auto& share : shares) out.push_back(share.to_string());
        return out;
      },
      py::arg("secret"), py::arg("omega"), py::arg("seed"),
      "split a bit string so that all omega pieces are needed");

  m.def(
      "share_reconstruct",
      [](const std::vector<std::string>& shares, int omega) {
        std::vector<macc::BitVector> in;
        in.reserve(shares.size());
        for (const auto& share : shares) in.push_back(macc::BitVector::from_string(share));
        return macc::share_reconstruct(in, omega).to_string();
      },
      py::arg("shares"), py::arg("omega"), "rebuild the secret from all omega pieces");

  m.def(
      "simulate_json",
      [](int k, int l, int n, long long b, const std::string& scheme, bool privatize,
         const std::string& mode, const std::string& demands, std::uint64_t seed) {
        return macc::render_simulate_json(
            macc::run_simulate(build_config(k, l, n, b, scheme, privatize, mode, demands, seed)));
      },
      py::arg("k") = 3, py::arg("l") = 2, py::arg("n") = 3, py::arg("b") = 0,
      py::arg("scheme") = "singleton", py::arg("privatize") = false, py::arg("mode") = "pad",
      py::arg("demands") = "", py::arg("seed") = 1,
      "run placement, delivery, and decode; returns the JSON report");

  m.def(
      "verify_json",
      [](const std::string& check, int k, int l, int n, long long b, const std::string& scheme,
         bool privatize, const std::string& mode, std::uint64_t seed, int bits_per_part,
         std::uint64_t budget, int observer, const std::string& fixture) {
        macc::RunConfig config = build_config(k, l, n, b, scheme, privatize, mode, "", seed);
        config.bits_per_part = bits_per_part;
        config.budget = budget;
        config.observer = observer;
        config.fixture_path = fixture;
        return macc::render_verify_json(macc::run_verify(config, check));
      },
      py::arg("check"), py::arg("k") = 3, py::arg("l") = 2, py::arg("n") = 3, py::arg("b") = 0,
      py::arg("scheme") = "singleton", py::arg("privatize") = false, py::arg("mode") = "pad",
      py::arg("seed") = 1, py::arg("bits_per_part") = 1,
      py::arg("budget") = macc::kDefaultEnumerationBudget, py::arg("observer") = 0,
      py::arg("fixture") = "", "run one exhaustive checker; returns the JSON report");

  m.def(
      "tradeoff_csv",
      [](int k, int l, int n, const std::string& which) {
        return macc::tradeoff_csv(k, l, n, which);
      },
      py::arg("k") = 3, py::arg("l") = 2, py::arg("n") = 3, py::arg("which") = "both",
      "memory-load corner points and envelope vertices as CSV text");

  m.def("demo", &macc::demo_transcript, "fixed three-node walk-through transcript");
}
