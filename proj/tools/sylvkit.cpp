// sylvkit command-line front end: theorem campaigns, threshold tables and
// Bertrand-type bound reports, with machine-readable output on stdout and
// progress on stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sylvkit/engine.hpp"

namespace {

using json = nlohmann::json;
using u64 = std::uint64_t;
using namespace sylvkit;

constexpr int kExitOk = 0;
constexpr int kExitRefuted = 2;
constexpr int kExitIncomplete = 3;
constexpr int kExitUsage = 64;
constexpr int kExitResource = 70;

struct CommonOptions {
  std::string format = "human";
  int precision_bits = 64;
  int max_escalations = 4;
  std::optional<u64> sieve_limit;
  std::optional<std::string> checkpoint;
  bool resume = false;
  unsigned workers = 0;
};

std::filesystem::path cache_dir() {
  if (const char* env = std::getenv("SYLVKIT_CACHE_DIR")) {
    if (*env != '\0') return std::filesystem::path(env);
  }
  return std::filesystem::current_path();
}

engine::EngineConfig engine_config(const CommonOptions& common) {
  engine::EngineConfig cfg;
  cfg.precision.start_bits = common.precision_bits;
  cfg.precision.max_escalations = common.max_escalations;
  cfg.sieve_limit_override = common.sieve_limit;
  cfg.workers = common.workers;
  cfg.resume = common.resume;
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonOptions& common) {
  cmd->add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}));
  cmd->add_option("--precision-bits", common.precision_bits,
                  "Starting working precision in bits")
      ->check(CLI::Range(53, 1 << 20));
  cmd->add_option("--sieve-limit", common.sieve_limit,
                  "Build the prime table at exactly this limit");
  cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint file path");
  cmd->add_flag("--resume", common.resume,
                "Skip work already recorded in the checkpoint");
  cmd->add_option("--workers", common.workers,
                  "Worker threads (0 = available parallelism)");
}

void emit_rows(const CommonOptions& common, const std::string& command,
               const std::vector<std::string>& columns,
               const std::vector<json>& rows) {
  if (common.format == "json") {
    const json doc{
        {"schema_version", 1}, {"command", command}, {"rows", rows}};
    std::cout << doc.dump(2) << '\n';
    return;
  }
  if (common.format == "csv") {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      std::cout << (i ? "," : "") << columns[i];
    }
    std::cout << '\n';
    for (const json& row : rows) {
      for (std::size_t i = 0; i < columns.size(); ++i) {
        const json& cell = row.at(columns[i]);
        std::cout << (i ? "," : "")
                  << (cell.is_string() ? cell.get<std::string>() : cell.dump());
      }
      std::cout << '\n';
    }
    return;
  }
  for (const json& row : rows) {
    bool first = true;
    for (const auto& col : columns) {
      std::cout << (first ? "" : "  ") << col << "=" << row.at(col).dump();
      first = false;
    }
    std::cout << '\n';
  }
}

std::vector<u64> parse_r_list(const std::string& text) {
  std::vector<u64> values;
  std::string token;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ',') {
      if (token.empty()) throw DomainError("--r: empty entry in list");
      for (char c : token) {
        if (c < '0' || c > '9') {
          throw DomainError("--r: '" + token + "' is not a nonnegative integer");
        }
      }
      values.push_back(std::stoull(token));
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(text[i]))) {
      token.push_back(text[i]);
    }
  }
  if (values.empty()) throw DomainError("--r: no values supplied");
  return values;
}

int cmd_thresholds(const CommonOptions& common, const std::string& r_list) {
  const auto rs = parse_r_list(r_list);
  const auto cfg = engine_config(common);
  std::vector<json> rows;
  for (u64 r : rs) {
    const engine::ThresholdResult res = engine::find_n_star(r, cfg);
    rows.push_back(json{{"r", r},
                        {"n_star", res.n_star},
                        {"e_mid", res.value.mid},
                        {"e_radius", res.value.radius},
                        {"minimality", engine::to_string(res.minimality)}});
  }
  emit_rows(common, "thresholds",
            {"r", "n_star", "e_mid", "e_radius", "minimality"}, rows);
  return kExitOk;
}

int cmd_theta(const CommonOptions& common, double theta) {
  const auto cfg = engine_config(common);
  const engine::ThresholdResult res = engine::theta_threshold(theta, cfg);
  emit_rows(common, "theta",
            {"theta", "n_star", "coeff_mid", "coeff_radius", "minimality"},
            {json{{"theta", theta},
                  {"n_star", res.n_star},
                  {"coeff_mid", res.value.mid},
                  {"coeff_radius", res.value.radius},
                  {"minimality", engine::to_string(res.minimality)}}});
  return kExitOk;
}

int cmd_bertrand(const CommonOptions& common, u64 from, u64 to,
                 const std::string& bound, double theta) {
  engine::BoundKind kind;
  if (bound == "E") {
    kind = engine::BoundKind::kE;
  } else if (bound == "rho") {
    kind = engine::BoundKind::kRho;
  } else if (bound == "theta") {
    kind = engine::BoundKind::kTheta;
  } else {
    throw DomainError("--bound must be one of E, rho, theta");
  }
  if (from > to) throw DomainError("bertrand: need --from <= --to");
  const u64 min_n = kind == engine::BoundKind::kE ? 1100 : 1123;
  if (from < min_n) {
    throw DomainError("bertrand: bound kind requires n >= " +
                      std::to_string(min_n));
  }
  const auto cfg = engine_config(common);
  const u64 limit = common.sieve_limit ? *common.sieve_limit : 2 * to;
  if (limit < 2 * to) {
    throw CoverageError("bertrand: sieve limit " + std::to_string(limit) +
                        " cannot cover ]n, 2n[ at n = " + std::to_string(to));
  }
  std::cerr << "sieving to " << limit << "...\n";
  const auto table = primes::PrimeTable::build(limit, cfg.sieve);

  std::vector<json> rows;
  bool all_ok = true;
  for (u64 n = from; n <= to; ++n) {
    const auto check =
        engine::bertrand_lower_bound_check(n, table, kind, cfg, theta);
    all_ok = all_ok && check.ok;
    rows.push_back(json{{"n", n},
                        {"actual", check.actual},
                        {"bound", check.bound},
                        {"ok", check.ok}});
    if ((n - from) % 8192 == 8191) {
      std::cerr << "checked " << (n - from + 1) << "/" << (to - from + 1)
                << "\n";
    }
  }
  emit_rows(common, "bertrand", {"n", "actual", "bound", "ok"}, rows);
  return all_ok ? kExitOk : kExitRefuted;
}

int cmd_verify(const CommonOptions& common, u64 r, u64 n_min,
               const std::optional<std::string>& output, bool probe) {
  engine::SylvesterClaim claim{r, n_min};
  claim.validate();

  auto cfg = engine_config(common);
  cfg.probe_below_n_min = probe;
  const std::string tag =
      "r" + std::to_string(r) + "-nmin" + std::to_string(n_min);
  cfg.checkpoint_path = common.checkpoint
                            ? *common.checkpoint
                            : (cache_dir() / ("checkpoint-" + tag + ".jsonl"))
                                  .string();
  const std::string cert_path =
      output ? *output
             : (cache_dir() / ("certificate-" + tag + ".json")).string();

  const auto progress = [](std::size_t done, std::size_t total) {
    if (total >= 16 && (done % 128 == 0 || done == total)) {
      std::cerr << "completed " << done << "/" << total << "\n";
    }
  };
  const engine::VerificationCertificate cert =
      engine::verify_claim(claim, cfg, progress);

  {
    std::ofstream out(cert_path, std::ios::trunc);
    out << engine::to_json(cert).dump(2) << '\n';
    if (!out) throw ResourceError("cannot write certificate to " + cert_path);
  }

  if (common.format == "json") {
    std::cout << engine::to_json(cert).dump(2) << '\n';
  } else {
    std::cout << "claim: more than " << r
              << " prime(s) > n divide P(m,n) for all m >= n >= " << n_min
              << '\n'
              << "n_star: " << cert.n_star << " ("
              << engine::to_string(cert.n_star_minimality)
              << "), E(n_star) = " << cert.e_at_n_star.mid << " +- "
              << cert.e_at_n_star.radius << '\n';
    std::size_t verified = 0, failed = 0, pending = 0;
    for (const auto& rec : cert.records) {
      switch (rec.status) {
        case engine::RecordStatus::kVerified: ++verified; break;
        case engine::RecordStatus::kFailed: ++failed; break;
        case engine::RecordStatus::kPending: ++pending; break;
      }
    }
    std::cout << "records: " << verified << " verified, " << failed
              << " failed, " << pending << " pending\n";
    for (const auto& w : cert.witnesses) {
      std::cout << "witness: n=" << w.n << " m=" << w.m
                << " large_prime_count=" << w.large_prime_count << '\n';
    }
    for (const auto& w : cert.boundary_witnesses) {
      std::cout << "boundary witness: n=" << w.n << " m=" << w.m
                << " large_prime_count=" << w.large_prime_count << '\n';
    }
    std::cout << "verdict: " << engine::to_string(cert.verdict) << '\n'
              << "certificate: " << cert_path << '\n';
  }

  switch (cert.verdict) {
    case engine::Verdict::kProven: return kExitOk;
    case engine::Verdict::kRefuted: return kExitRefuted;
    case engine::Verdict::kIncomplete: return kExitIncomplete;
  }
  return kExitIncomplete;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sylvkit: certified verification of Sylvester-type theorems "
               "and strengthened Bertrand bounds"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* verify = app.add_subcommand(
      "verify", "Run a full theorem campaign and write a certificate");
  u64 verify_r = 0;
  u64 verify_n_min = 2;
  std::optional<std::string> verify_output;
  bool verify_probe = false;
  verify->add_option("--r", verify_r, "Number of large primes to beat")
      ->required();
  verify->add_option("--n-min", verify_n_min, "Smallest n the claim covers");
  verify->add_option("--output", verify_output, "Certificate file path");
  verify->add_flag("--probe-boundary", verify_probe,
                   "Also scan n_min - 1 and report boundary witnesses");
  add_common_flags(verify, common);

  auto* thresholds = app.add_subcommand(
      "thresholds", "Print n_star and certified E(n_star) per r");
  std::string thresholds_r = "0";
  thresholds->add_option("--r", thresholds_r, "Comma-separated list of r");
  add_common_flags(thresholds, common);

  auto* bertrand = app.add_subcommand(
      "bertrand", "Check prime counts in ]n,2n[ against certified bounds");
  u64 b_from = 0, b_to = 0, b_n = 0;
  std::string b_bound = "E";
  double b_theta = 0.0;
  auto* opt_from = bertrand->add_option("--from", b_from, "First n");
  auto* opt_to = bertrand->add_option("--to", b_to, "Last n (inclusive)");
  auto* opt_n = bertrand->add_option("--n", b_n, "Single n");
  bertrand->add_option("--bound", b_bound, "Bound kind: E, rho or theta");
  bertrand->add_option("--theta", b_theta, "Ratio for the theta bound");
  add_common_flags(bertrand, common);

  auto* theta = app.add_subcommand(
      "theta", "Find the minimal n whose prime-count ratio exceeds theta");
  double theta_value = 0.0;
  theta->add_option("--theta", theta_value, "Target ratio")->required();
  add_common_flags(theta, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (app.got_subcommand(verify)) {
      return cmd_verify(common, verify_r, verify_n_min, verify_output,
                        verify_probe);
    }
    if (app.got_subcommand(thresholds)) {
      return cmd_thresholds(common, thresholds_r);
    }
    if (app.got_subcommand(bertrand)) {
      if (opt_n->count() > 0) {
        if (opt_from->count() > 0 || opt_to->count() > 0) {
          throw DomainError("bertrand: use either --n or --from/--to");
        }
        b_from = b_to = b_n;
      } else if (opt_from->count() == 0 || opt_to->count() == 0) {
        throw DomainError("bertrand: supply --n or both --from and --to");
      }
      return cmd_bertrand(common, b_from, b_to, b_bound, b_theta);
    }
    if (app.got_subcommand(theta)) {
      return cmd_theta(common, theta_value);
    }
    std::cerr << "usage error: no subcommand\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InconclusiveError& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return kExitIncomplete;
  } catch (const CoverageError& e) {
    std::cerr << "coverage error: " << e.what() << '\n';
    return kExitResource;
  } catch (const ResourceError& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  }
}
