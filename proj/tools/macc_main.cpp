#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "macc/errors.hpp"
#include "macc/runner.hpp"

namespace {

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw macc::ConfigError("cannot open output path: " + out_path);
  out << text;
  if (!out.good()) throw macc::ConfigError("short write to output path: " + out_path);
}

void add_instance_options(CLI::App* cmd, macc::RunConfig& config, std::string& mode,
                          bool& json, std::string& out_path) {
  cmd->add_option("--k", config.params.num_nodes, "cache nodes (and users)")
      ->capture_default_str();
  cmd->add_option("--l", config.params.access_degree, "window size: consecutive nodes per user")
      ->capture_default_str();
  cmd->add_option("--n", config.params.num_files, "files in the library")->capture_default_str();
  cmd->add_option("--b", config.params.file_bits, "bits per file (0 picks a size all schemes split)")
      ->capture_default_str();
  cmd->add_option("--scheme", config.scheme, "uncached | singleton | stripe")
      ->capture_default_str();
  cmd->add_flag("--privatize", config.privatize, "wrap the scheme with demand privatization");
  cmd->add_option("--mode", mode, "key arrangement: pad | share")
      ->check(CLI::IsMember({"pad", "share"}))
      ->capture_default_str();
  cmd->add_option("--demands", config.demands, "comma list, \"all\", or empty for a default")
      ->capture_default_str();
  cmd->add_option("--seed", config.seed, "seed for library and key randomness")
      ->capture_default_str();
  cmd->add_flag("--json", json, "machine-readable report");
  cmd->add_option("--out", out_path, "write the report here instead of stdout");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiaccess coded caching with private demands"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "read options from an INI-style file; subcommand options go in a"
                 " [simulate], [verify], or [tradeoff] section");

  macc::RunConfig config;
  std::string mode = "pad";
  bool json = false;
  std::string out_path;
  std::string check;

  CLI::App* simulate = app.add_subcommand("simulate", "place, deliver, and decode one run");
  add_instance_options(simulate, config, mode, json, out_path);

  CLI::App* verify = app.add_subcommand("verify", "run one of the exhaustive checkers");
  add_instance_options(verify, config, mode, json, out_path);
  verify->add_option("--check", check, "decode | privacy | requirements | isolation")
      ->required()
      ->check(CLI::IsMember({"decode", "privacy", "requirements", "isolation"}));
  verify->add_option("--bits-per-part", config.bits_per_part,
                     "privacy check: subfile width in bits")
      ->capture_default_str();
  verify->add_option("--budget", config.budget, "privacy check: enumeration cell budget")
      ->capture_default_str();
  verify->add_option("--fixture", config.fixture_path,
                     "requirements check: audit this placement file instead of the scheme");
  verify->add_option("--observer", config.observer, "privacy check: single user (0 = all)")
      ->capture_default_str();

  int t_nodes = 3;
  int t_degree = 2;
  int t_files = 3;
  std::string which = "both";
  CLI::App* tradeoff = app.add_subcommand("tradeoff", "emit memory-load corner points as CSV");
  tradeoff->add_option("--k", t_nodes, "cache nodes (and users)")->capture_default_str();
  tradeoff->add_option("--l", t_degree, "window size")->capture_default_str();
  tradeoff->add_option("--n", t_files, "files in the library")->capture_default_str();
  tradeoff->add_option("--which", which, "nonprivate | private | both")
      ->check(CLI::IsMember({"nonprivate", "private", "both"}))
      ->capture_default_str();
  tradeoff->add_option("--out", out_path, "write the CSV here instead of stdout");

  CLI::App* demo = app.add_subcommand("demo", "walk through the three-node example");
  demo->add_option("--out", out_path, "write the transcript here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    config.mode = macc::parse_mode(mode);
    if (simulate->parsed()) {
      const macc::SimulateReport report = macc::run_simulate(config);
      emit(json ? macc::render_simulate_json(report) : macc::render_simulate_text(report),
           out_path);
      return report.decode_pass && report.payload_constant ? 0 : 1;
    }
    if (verify->parsed()) {
      const macc::VerifyReport report = macc::run_verify(config, check);
      emit(json ? macc::render_verify_json(report) : macc::render_verify_text(report), out_path);
      return report.pass ? 0 : 1;
    }
    if (tradeoff->parsed()) {
      emit(macc::tradeoff_csv(t_nodes, t_degree, t_files, which), out_path);
      return 0;
    }
    emit(macc::demo_transcript(), out_path);
    return 0;
  } catch (const macc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
