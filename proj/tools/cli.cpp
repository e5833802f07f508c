#include "cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cdc/combinatorics.hpp"
#include "cdc/errors.hpp"

namespace cdc::cli {

RunMode parse_mode(const std::string& name) {
  if (name == "pure") return RunMode::kPure;
  if (name == "mixture") return RunMode::kMixture;
  if (name == "forwarding") return RunMode::kForwarding;
  throw ParameterError("unknown mode '" + name + "' (expected pure, mixture or forwarding)");
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::kPure: return "pure";
    case RunMode::kMixture: return "mixture";
    case RunMode::kForwarding: return "forwarding";
  }
  return "pure";
}

Theta parse_theta(const std::string& text) {
  Theta theta;
  std::stringstream ss(text);
  std::string item;
  int j = 0;
  while (std::getline(ss, item, ',')) {
    if (j == 3) throw ParameterError("theta takes exactly three weights");
    theta[j++] = parse_rational(item);
  }
  if (j != 3) throw ParameterError("theta takes exactly three weights");
  return theta;
}

void apply_json(const nlohmann::json& j, RunConfig& config) {
  if (j.contains("K")) config.K = j.at("K").get<int>();
  if (j.contains("N")) config.N = j.at("N").get<std::int64_t>();
  if (j.contains("V")) config.V = j.at("V").get<std::int64_t>();
  if (j.contains("W")) config.W = j.at("W").get<std::int64_t>();
  if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("i")) config.i = j.at("i").get<int>();
  if (j.contains("mode")) config.mode = parse_mode(j.at("mode").get<std::string>());
  if (j.contains("theta")) {
    const auto& t = j.at("theta");
    if (t.is_string()) {
      config.theta = parse_theta(t.get<std::string>());
    } else {
      if (!t.is_array() || t.size() != 3) throw ParameterError("theta must hold three weights");
      for (int k = 0; k < 3; ++k) {
        config.theta[k] = t[k].is_string() ? parse_rational(t[k].get<std::string>())
                                           : Rational(t[k].get<std::int64_t>());
      }
    }
  }
  if (j.contains("output")) config.output = j.at("output").get<std::string>();
  if (j.contains("format")) config.format = j.at("format").get<std::string>();
  if (j.contains("verify")) config.verify = j.at("verify").get<bool>();
}

std::vector<std::string> resolve(RunConfig& config, std::vector<std::string>* notes) {
  std::vector<std::string> problems;
  if (config.K < 2) {
    problems.push_back("K must be >= 2 (got " + std::to_string(config.K) + "); use --K 2 or more");
    return problems;
  }
  if (config.format != "json" && config.format != "csv") {
    problems.push_back("format must be json or csv (got " + config.format + ")");
  }
  const int K = config.K;
  const int i = config.i;
  if (config.mode == RunMode::kMixture) {
    if (i < 2 || i > K - 1) {
      problems.push_back("mixture needs 2 <= i <= K-1 (got i=" + std::to_string(i) + ")");
      return problems;
    }
    Rational sum = config.theta[0] + config.theta[1] + config.theta[2];
    if (sum != Rational(1)) {
      problems.push_back("theta must sum to 1 (sum is " + format_rational(sum) + ")");
      return problems;
    }
    for (const auto& t : config.theta) {
      if (t < Rational(0)) {
        problems.push_back("theta weights must be nonnegative");
        return problems;
      }
    }
    if (!config.N) {
      config.N = minimal_mixture_N(K, i, config.theta);
      if (notes) notes->push_back("N defaulted to " + std::to_string(*config.N) +
                                  ", the least N with each theta_j N a multiple of C(K, i_j)");
    }
    if (!config.V) {
      config.V = minimal_mixture_V(K, i, config.theta);
      if (notes) notes->push_back("V defaulted to " + std::to_string(*config.V) +
                                  ", the lcm of the sub-scheme parameters below K");
    }
    JobSpec job{K, *config.N, config.W, *config.V, config.seed};
    for (auto& p : mixture_violations(job, i, config.theta)) problems.push_back(p);
    return problems;
  }
  if (i < 1 || i > K) {
    problems.push_back("i must lie in [1, K] (got i=" + std::to_string(i) + ", K=" + std::to_string(K) + ")");
    return problems;
  }
  if (!config.N) {
    config.N = minimal_feasible_N(K, i);
    if (notes) notes->push_back("N defaulted to C(" + std::to_string(K) + "," + std::to_string(i) +
                                ") = " + std::to_string(*config.N));
  }
  if (!config.V) {
    config.V = minimal_feasible_V(K, i);
    if (notes) notes->push_back("V defaulted to " + std::to_string(*config.V) +
                                (i < K ? " = i" : " (no sub-block split at i = K)"));
  }
  JobSpec job{K, *config.N, config.W, *config.V, config.seed};
  for (auto& p : scheme_violations(job, i)) problems.push_back(p);
  return problems;
}

std::string output_path(const std::string& path) {
  std::filesystem::path p(path);
  const char* dir = std::getenv("CDC_OUTPUT_DIR");
  if (p.is_relative() && dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
  return p.string();
}

namespace {

int emit(const std::string& text, const std::string& path, std::ostream& out, std::ostream& err) {
  if (path.empty()) {
    out << text;
    return 0;
  }
  const std::string resolved = output_path(path);
  std::filesystem::path parent = std::filesystem::path(resolved).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream file(resolved);
  if (!file) {
    err << "error: cannot write " << resolved << "\n";
    return 2;
  }
  file << text;
  out << "wrote " << resolved << "\n";
  return 0;
}

SccQuad expected_point(const RunConfig& config) {
  const int K = config.K;
  if (config.mode == RunMode::kMixture) {
    SccQuad a = corner_p(K, config.i - 1);
    SccQuad b = corner_p(K, config.i);
    SccQuad k = corner_p(K, K);
    const auto& t = config.theta;
    return {t[0] * a.r + t[1] * b.r + t[2] * k.r, t[0] * a.c + t[1] * b.c + t[2] * k.c,
            t[0] * a.L + t[1] * b.L + t[2] * k.L, t[0] * a.D + t[1] * b.D + t[2] * k.D};
  }
  SccQuad p = corner_p(K, config.i);
  if (config.mode == RunMode::kForwarding) p.D = p.L;
  return p;
}

}  // namespace

int cmd_run(RunConfig config, bool explain, std::ostream& out, std::ostream& err) {
  std::vector<std::string> notes;
  std::vector<std::string> problems;
  try {
    problems = resolve(config, &notes);
  } catch (const ParameterError& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    err << "error: invalid configuration\n";
    for (const auto& p : problems) err << "  - " << p << "\n";
    return 2;
  }
  if (explain) {
    for (const auto& n : notes) err << "note: " << n << "\n";
  }

  const JobSpec job{config.K, *config.N, config.W, *config.V, config.seed};
  Execution ex = config.mode == RunMode::kMixture
                     ? run_mixture(job, config.i, config.theta)
                     : execute(job, config.i,
                               config.mode == RunMode::kForwarding ? RelayMode::kForward : RelayMode::kChain);
  const LoadReport& rep = ex.report;
  const SccQuad expect = expected_point(config);
  const bool closed_form = rep.r == expect.r && rep.c == expect.c && rep.L == expect.L && rep.D == expect.D;

  std::string text;
  if (config.format == "csv") {
    text = "mode,K,N,W,V,seed,i,r,c,L,D,stored_files,ivs,uplink_bits,downlink_bits,verdict,closed_form\n";
    text += to_string(config.mode) + "," + std::to_string(job.K) + "," + std::to_string(job.N) + "," +
            std::to_string(job.W) + "," + std::to_string(job.V) + "," + std::to_string(job.seed) + "," +
            std::to_string(config.i) + "," + format_rational(rep.r) + "," + format_rational(rep.c) + "," +
            format_rational(rep.L) + "," + format_rational(rep.D) + "," +
            std::to_string(rep.raw.stored_files) + "," + std::to_string(rep.raw.ivs) + "," +
            std::to_string(rep.raw.uplink_bits) + "," + std::to_string(rep.raw.downlink_bits) + "," +
            (config.verify ? ex.verdict.describe() : "skipped") + "," + (closed_form ? "pass" : "fail") + "\n";
  } else {
    nlohmann::ordered_json j;
    j["mode"] = to_string(config.mode);
    j["K"] = job.K;
    j["N"] = job.N;
    j["W"] = job.W;
    j["V"] = job.V;
    j["seed"] = job.seed;
    j["i"] = config.i;
    if (config.mode == RunMode::kMixture) {
      j["theta"] = {format_rational(config.theta[0]), format_rational(config.theta[1]),
                    format_rational(config.theta[2])};
    }
    j["report"] = nlohmann::ordered_json::parse(report_to_json(rep));
    j["expected"] = {{"r", format_rational(expect.r)}, {"c", format_rational(expect.c)},
                     {"L", format_rational(expect.L)}, {"D", format_rational(expect.D)}};
    j["closed_form"] = closed_form ? "pass" : "fail";
    j["verdict"] = config.verify ? ex.verdict.describe() : "skipped";
    j["peak_ap_buffer"] = ex.peak_ap_buffer;
    text = j.dump(2) + "\n";
  }
  if (int rc = emit(text, config.output, out, err); rc != 0) return rc;
  if (config.verify && !ex.verdict.pass) {
    err << "error: decode verification failed: " << ex.verdict.describe() << "\n";
    return 1;
  }
  if (!closed_form) {
    err << "error: measured loads differ from the closed form\n";
    return 1;
  }
  return 0;
}

int cmd_surface(int K, int resolution, const std::string& space, int digits, std::ostream& out,
                std::ostream& err) {
  std::optional<Space> only;
  if (space == "uplink") {
    only = Space::kUplink;
  } else if (space == "downlink") {
    only = Space::kDownlink;
  } else if (space != "both") {
    err << "error: space must be uplink, downlink or both\n";
    return 2;
  }
  if (K < 2 || resolution < 2) {
    err << "error: need K >= 2 and resolution >= 2\n";
    return 2;
  }
  out << surface_to_csv(sample_surface(K, resolution), digits, only);
  return 0;
}

int cmd_pareto(int K, std::ostream& out, std::ostream& err) {
  if (K < 2) {
    err << "error: K must be >= 2\n";
    return 2;
  }
  ParetoTable t = pareto_points(K);
  out << "point,i,r,c,L,D\n";
  for (const char* name : {"P", "Q"}) {
    const auto& pts = name[0] == 'P' ? t.P : t.Q;
    for (std::size_t j = 0; j < pts.size(); ++j) {
      out << name << "," << j + 1 << "," << format_rational(pts[j].r) << "," << format_rational(pts[j].c)
          << "," << format_rational(pts[j].L) << "," << format_rational(pts[j].D) << "\n";
    }
  }
  return 0;
}

int cmd_bounds(int K, const std::string& r, const std::string& c, const std::string& variant,
               std::ostream& out, std::ostream& err) {
  try {
    EnvelopeVariant v = EnvelopeVariant::kStandard;
    if (variant == "literal") {
      v = EnvelopeVariant::kLiteralOneOverR;
    } else if (variant != "standard") {
      throw ParameterError("variant must be standard or literal");
    }
    out << bounds_to_csv({plane_bounds(K, parse_rational(r), parse_rational(c), v)});
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

VerifyCase verify_case(int K, int i) {
  VerifyCase vc;
  vc.K = K;
  vc.i = i;
  vc.N = minimal_feasible_N(K, i);
  vc.V = minimal_feasible_V(K, i);
  const JobSpec job{K, vc.N, 16, vc.V, static_cast<std::uint64_t>(1000 * K + i)};
  const Execution ex = execute(job, i);
  const SccQuad p = corner_p(K, i);
  const LoadReport& rep = ex.report;
  vc.oracle = ex.verdict.pass;
  vc.closed_form = rep.r == p.r && rep.c == p.c && rep.L == p.L && rep.D == p.D;
  const ExclusivityStats stats = extract_stats(ex.trace);
  const Rational bound = lemma1_bound(stats, job.V);
  vc.lemma1 = Rational(rep.raw.downlink_bits) >= bound && Rational(rep.raw.downlink_bits) == bound;
  const Lemma2Verdict l2 = lemma2_check(stats, rep);
  vc.lemma2 = l2.holds() && l2.tight();
  const PlaneBounds pb = plane_bounds(K, rep.r, rep.c);
  vc.planes = pb.uplink.bound == rep.L && pb.downlink.bound == rep.D;
  vc.buffer = ex.peak_ap_buffer <= 1;
  return vc;
}

int cmd_verify(int k_max, int ceiling, std::ostream& out, std::ostream& err) {
  if (k_max < 2) {
    err << "error: K-max must be >= 2 (got " << k_max << ")\n";
    return 2;
  }
  if (k_max > ceiling) {
    err << "error: K-max " << k_max << " exceeds the ceiling " << ceiling
        << " (raise it with --ceiling)\n";
    return 2;
  }
  auto mark = [](bool ok) { return ok ? "pass" : "FAIL"; };
  int total = 0;
  int passed = 0;
  for (int K = 2; K <= k_max; ++K) {
    for (int i = 1; i <= K - 1; ++i) {
      const VerifyCase vc = verify_case(K, i);
      ++total;
      passed += vc.passed() ? 1 : 0;
      out << "K=" << K << " i=" << i << " N=" << vc.N << " V=" << vc.V << " oracle=" << mark(vc.oracle)
          << " closed_form=" << mark(vc.closed_form) << " lemma1=" << mark(vc.lemma1)
          << " lemma2=" << mark(vc.lemma2) << " planes=" << mark(vc.planes)
          << " buffer=" << mark(vc.buffer) << " => " << (vc.passed() ? "PASS" : "FAIL") << "\n";
    }
  }
  out << passed << "/" << total << " cases passed\n";
  return passed == total ? 0 : 1;
}

}  // namespace cdc::cli
