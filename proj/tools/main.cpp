#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cdc/errors.hpp"
#include "cli.hpp"

int main(int argc, char** argv) {
  using namespace cdc::cli;

  CLI::App app{"Coded distributed computing over a star network: run the scheme, "
               "sample the optimal surfaces and evaluate converse bounds."};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Execute the scheme and report measured loads");
  RunConfig flags;
  std::string config_file;
  std::string mode = "pure";
  std::string theta = "0,1,0";
  std::int64_t N = 0;
  std::int64_t V = 0;
  bool explain = false;
  bool no_verify = false;
  run->add_option("--config", config_file, "JSON config file; flags override its values");
  auto* opt_K = run->add_option("--K", flags.K, "Number of nodes");
  auto* opt_N = run->add_option("--N", N, "Number of files (default: minimal feasible)");
  auto* opt_W = run->add_option("--W", flags.W, "File width in bits");
  auto* opt_V = run->add_option("--V", V, "IV width in bits (default: lcm of the i in play)");
  auto* opt_seed = run->add_option("--seed", flags.seed, "Seed for files and map functions");
  auto* opt_i = run->add_option("--i", flags.i, "Scheme parameter");
  auto* opt_mode = run->add_option("--mode", mode, "pure | mixture | forwarding");
  auto* opt_theta = run->add_option("--theta", theta, "Mixture weights, e.g. 1/2,1/4,1/4");
  auto* opt_out = run->add_option("--out", flags.output, "Output file (relative to $CDC_OUTPUT_DIR)");
  auto* opt_format = run->add_option("--format", flags.format, "json | csv");
  auto* opt_no_verify = run->add_flag("--no-verify", no_verify, "Skip the oracle comparison verdict");
  run->add_flag("--explain", explain, "Explain chosen defaults on stderr");

  // surface
  auto* surface = app.add_subcommand("surface", "Sample L*(r,c) and D*(r,c) as CSV");
  int surface_K = 10;
  int resolution = 10;
  std::string space = "both";
  int digits = 6;
  surface->add_option("--K", surface_K, "Number of nodes")->required();
  surface->add_option("--resolution", resolution, "Grid points per axis");
  surface->add_option("--space", space, "uplink | downlink | both");
  surface->add_option("--digits", digits, "Decimal digits in the rounded columns");

  // pareto
  auto* pareto = app.add_subcommand("pareto", "Dump the P_i and Q_i corner tables");
  int pareto_K = 0;
  pareto->add_option("--K", pareto_K, "Number of nodes")->required();

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Evaluate the converse plane bounds at (r, c)");
  int bounds_K = 0;
  std::string r_text;
  std::string c_text;
  std::string variant = "standard";
  bounds->add_option("--K", bounds_K, "Number of nodes")->required();
  bounds->add_option("--r", r_text, "Storage load, p/q or decimal")->required();
  bounds->add_option("--c", c_text, "Computation load, p/q or decimal")->required();
  bounds->add_option("--variant", variant, "Downlink envelope: standard | literal");

  // verify
  auto* verify = app.add_subcommand("verify", "Exhaustive check over K <= K-max");
  int k_max = 6;
  int ceiling = 8;
  verify->add_option("--K-max,--k-max", k_max, "Largest K to check")->required();
  verify->add_option("--ceiling", ceiling, "Upper limit accepted for K-max");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      RunConfig config;
      if (!config_file.empty()) {
        std::ifstream in(config_file);
        if (!in) {
          std::cerr << "error: cannot read " << config_file << "\n";
          return 2;
        }
        apply_json(nlohmann::json::parse(in), config);
      }
      if (opt_K->count()) config.K = flags.K;
      if (opt_N->count()) config.N = N;
      if (opt_W->count()) config.W = flags.W;
      if (opt_V->count()) config.V = V;
      if (opt_seed->count()) config.seed = flags.seed;
      if (opt_i->count()) config.i = flags.i;
      if (opt_mode->count()) config.mode = parse_mode(mode);
      if (opt_theta->count()) config.theta = parse_theta(theta);
      if (opt_out->count()) config.output = flags.output;
      if (opt_format->count()) config.format = flags.format;
      if (opt_no_verify->count()) config.verify = false;
      return cmd_run(config, explain, std::cout, std::cerr);
    }
    if (surface->parsed()) return cmd_surface(surface_K, resolution, space, digits, std::cout, std::cerr);
    if (pareto->parsed()) return cmd_pareto(pareto_K, std::cout, std::cerr);
    if (bounds->parsed()) return cmd_bounds(bounds_K, r_text, c_text, variant, std::cout, std::cerr);
    if (verify->parsed()) return cmd_verify(k_max, ceiling, std::cout, std::cerr);
  } catch (const cdc::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: bad config: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
