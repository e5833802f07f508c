#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cdc/bounds.hpp"
#include "cdc/geometry.hpp"
#include "cdc/star_sim.hpp"
#include "json.hpp"

namespace cdc::cli {

enum class RunMode { kPure, kMixture, kForwarding };

struct RunConfig {
  int K = 0;
  std::optional<std::int64_t> N;  // defaults to the minimal feasible value
  std::optional<std::int64_t> V;  // defaults to lcm of the i values in play
  std::int64_t W = 64;
  std::uint64_t seed = 0;
  RunMode mode = RunMode::kPure;
  int i = 0;
  Theta theta{Rational(0), Rational(1), Rational(0)};
  std::string output;         // empty: stdout
  std::string format = "json";  // json | csv
  bool verify = true;
};

RunMode parse_mode(const std::string& name);
std::string to_string(RunMode mode);
// "a,b,c" with each weight as p/q or decimal.
Theta parse_theta(const std::string& text);

// Overlays the keys present in `j` onto `config`.
void apply_json(const nlohmann::json& j, RunConfig& config);

// Fills N and V defaults and returns every violated precondition, each with
// its minimal fix. `notes` receives the explanation of chosen defaults.
std::vector<std::string> resolve(RunConfig& config, std::vector<std::string>* notes = nullptr);

// Resolves a relative output path against $CDC_OUTPUT_DIR when set.
std::string output_path(const std::string& path);

int cmd_run(RunConfig config, bool explain, std::ostream& out, std::ostream& err);
int cmd_surface(int K, int resolution, const std::string& space, int digits, std::ostream& out,
                std::ostream& err);
int cmd_pareto(int K, std::ostream& out, std::ostream& err);
int cmd_bounds(int K, const std::string& r, const std::string& c, const std::string& variant,
               std::ostream& out, std::ostream& err);

struct VerifyCase {
  int K = 0;
  int i = 0;
  std::int64_t N = 0;
  std::int64_t V = 0;
  bool oracle = false;
  bool closed_form = false;
  bool lemma1 = false;       // measured downlink >= bound, with equality
  bool lemma2 = false;       // both inequalities, tight
  bool planes = false;       // plane bounds equal measured (L, D)
  bool buffer = false;       // AP holds at most one part per group
  bool passed() const { return oracle && closed_form && lemma1 && lemma2 && planes && buffer; }
};

VerifyCase verify_case(int K, int i);
int cmd_verify(int k_max, int ceiling, std::ostream& out, std::ostream& err);

}  // namespace cdc::cli
