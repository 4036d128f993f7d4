#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "sylvkit/bounds.hpp"
#include "sylvkit/errors.hpp"
#include "sylvkit/primes.hpp"
#include "sylvkit/valuations.hpp"
#include "sylvkit/version.hpp"

namespace sylvkit::engine {

using json = nlohmann::json;
using u64 = std::uint64_t;

/// "P(m,n) is divisible by more than r distinct primes greater than n,
/// for every m >= n >= n_min."
struct SylvesterClaim {
  u64 r = 0;
  u64 n_min = 2;

  void validate() const {
    if (n_min < 2) throw DomainError("SylvesterClaim: n_min must be >= 2");
  }
};

enum class RecordStatus { kVerified, kFailed, kPending };

struct PerNRecord {
  u64 n = 0;
  u64 pi_n = 0;
  u64 m_star = 0;
  u64 checked_lo = 0;  // scanned m range [checked_lo, checked_hi)
  u64 checked_hi = 0;
  std::vector<u64> failures;
  RecordStatus status = RecordStatus::kPending;
};

enum class Verdict { kProven, kRefuted, kIncomplete };
enum class Minimality { kTrueMinimal, kCertifiedMinimal };

struct ThresholdResult {
  u64 n_star = 0;
  bounds::CertifiedValue value;
  Minimality minimality = Minimality::kCertifiedMinimal;
};

struct Witness {
  u64 n = 0;
  u64 m = 0;
  u64 large_prime_count = 0;
};

struct Environment {
  int precision_bits = 0;
  int max_escalations = 0;
  u64 sieve_limit = 0;
  unsigned workers = 0;
  std::string toolkit_version;
  std::string floor_policy;
};

struct VerificationCertificate {
  SylvesterClaim claim;
  u64 n_star = 0;
  Minimality n_star_minimality = Minimality::kCertifiedMinimal;
  bounds::CertifiedValue e_at_n_star;
  std::vector<PerNRecord> records;
  Verdict verdict = Verdict::kIncomplete;
  std::vector<Witness> witnesses;
  std::vector<Witness> boundary_witnesses;
  Environment environment;
  std::string timestamp;
};

struct EngineConfig {
  bounds::PrecisionConfig precision{};
  primes::SieveConfig sieve{};
  /// Build the campaign sieve at exactly this limit instead of the
  /// adaptively discovered requirement. Too small is a hard error.
  std::optional<u64> sieve_limit_override;
  u64 n_star_search_cap = 10'000'000;
  u64 m_star_search_cap = 1'000'000'000;
  unsigned workers = 0;  // 0: hardware concurrency
  std::optional<std::string> checkpoint_path;
  bool resume = false;
  /// Also scan n_min - 1 and report its failures as boundary witnesses
  /// (never verdict-affecting).
  bool probe_below_n_min = false;
  /// Stop scheduling new n once a failure refutes the claim.
  bool stop_on_refutation = true;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

// ---------------------------------------------------------------------------
// searches

namespace detail {

struct MonotoneSearchResult {
  u64 value;
  bounds::CertifiedValue at_value;
  Minimality minimality;
};

/// Minimal n in [lo_false, cap] whose certified predicate-value exceeds
/// the threshold. The underlying true function must be increasing, so
/// exponential doubling plus binary search is legal. An inconclusive
/// comparison during the search counts as "not proven" (pushing the
/// result up, which keeps it certified); inconclusiveness at value-1
/// only downgrades the minimality tag.
template <typename Eval>
MonotoneSearchResult monotone_threshold_search(const Eval& eval,
                                               double threshold, u64 lo_false,
                                               u64 cap, const char* what,
                                               const bounds::PrecisionConfig& cfg) {
  using bounds::Certainty;
  const auto decide = [&](u64 v) {
    return bounds::certified_greater(
        [&](int bits) { return eval(v, bits); }, threshold, cfg);
  };

  u64 lo = lo_false;
  u64 hi = lo_false;
  bounds::CertifiedValue proven_value{};
  while (true) {
    hi *= 2;
    if (hi > cap) {
      throw ResourceError(std::string(what) + ": search cap " +
                          std::to_string(cap) + " exceeded");
    }
    const auto probe = decide(hi);
    if (probe.certainty == Certainty::kProven) {
      proven_value = probe.value;
      break;
    }
    lo = hi;
  }
  while (hi - lo > 1) {
    const u64 mid = lo + (hi - lo) / 2;
    const auto probe = decide(mid);
    if (probe.certainty == Certainty::kProven) {
      hi = mid;
      proven_value = probe.value;
    } else {
      lo = mid;
    }
  }
  const auto below = decide(hi - 1);
  const Minimality tag = below.certainty == Certainty::kDisproven
                             ? Minimality::kTrueMinimal
                             : Minimality::kCertifiedMinimal;
  return {hi, proven_value, tag};
}

}  // namespace detail

/// Minimal n with certified E(n) > r + 1. E is increasing from n = 3, so
/// every n above the result satisfies the same inequality.
inline ThresholdResult find_n_star(u64 r, const EngineConfig& cfg = {}) {
  const double threshold = static_cast<double>(r) + 1.0;
  const auto res = detail::monotone_threshold_search(
      [](u64 n, int bits) { return bounds::eval_E(n, bits); }, threshold,
      /*lo_false=*/2, cfg.n_star_search_cap, "find_n_star", cfg.precision);
  return {res.value, res.at_value, res.minimality};
}

/// Minimal m >= n with certified k(m,n) > pi_n + r, by doubling then
/// binary search (k is increasing in m). An inconclusive comparison at a
/// candidate, still unresolved at the precision cap, is an error.
inline u64 find_m_star(u64 n, u64 r, u64 pi_n, const EngineConfig& cfg = {}) {
  using bounds::Certainty;
  if (n < 2) throw DomainError("find_m_star: need n >= 2");
  const double threshold = static_cast<double>(pi_n + r);
  const auto decide = [&](u64 m) {
    const auto res = bounds::certified_greater(
        [&](int bits) { return bounds::eval_k(m, n, bits); }, threshold,
        cfg.precision);
    if (res.certainty == Certainty::kInconclusive) {
      throw InconclusiveError(
          "find_m_star: comparison k(" + std::to_string(m) + "," +
              std::to_string(n) + ") vs " + std::to_string(threshold) +
              " inconclusive at the precision cap",
          res.value.mid, res.value.radius);
    }
    return res.certainty == Certainty::kProven;
  };

  if (decide(n)) return n;
  u64 lo = n;
  u64 hi = n;
  while (true) {
    hi *= 2;
    if (hi > cfg.m_star_search_cap) {
      throw ResourceError("find_m_star: doubling cap " +
                          std::to_string(cfg.m_star_search_cap) +
                          " exceeded at n = " + std::to_string(n));
    }
    if (decide(hi)) break;
    lo = hi;
  }
  while (hi - lo > 1) {
    const u64 mid = lo + (hi - lo) / 2;
    if (decide(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

/// Minimal n whose certified theta coefficient exceeds theta. theta must
/// be strictly positive and provably below the log(4)/C - 1 ceiling.
inline ThresholdResult theta_threshold(double theta,
                                       const EngineConfig& cfg = {}) {
  using bounds::Certainty;
  if (!std::isfinite(theta) || theta <= 0.0) {
    throw DomainError("theta_threshold: theta must be > 0");
  }
  const auto ceiling_vs_theta = bounds::certified_greater(
      [](int bits) { return bounds::to_certified(
          bounds::Constants::theta_ceiling(bits)); },
      theta, cfg.precision);
  if (ceiling_vs_theta.certainty != Certainty::kProven) {
    throw DomainError("theta_threshold: theta " + std::to_string(theta) +
                      " is not provably below the ceiling log(4)/C - 1");
  }
  const auto res = detail::monotone_threshold_search(
      [](u64 n, int bits) { return bounds::eval_theta_coefficient(n, bits); },
      theta, /*lo_false=*/2, cfg.n_star_search_cap, "theta_threshold",
      cfg.precision);
  return {res.value, res.at_value, res.minimality};
}

// ---------------------------------------------------------------------------
// finite-case checking

/// Scans every m in [m_lo, m_hi) and reports the failures: the m whose
/// product P(m,n) is divided by at most r primes above n. A prime q > n
/// divides P(m,n) iff floor((m+n)/q) > floor(m/q), so each m costs a walk
/// over the primes in ]n, m+n] with pure integer arithmetic, cut short as
/// soon as r+1 divisors are found.
inline std::vector<u64> exhaustive_check(u64 n, u64 r, u64 m_lo, u64 m_hi,
                                         const primes::PrimeTable& table) {
  if (n < 2 || m_lo < n || m_hi < m_lo) {
    throw DomainError("exhaustive_check: need 2 <= n <= m_lo <= m_hi");
  }
  if (m_hi > m_lo && table.limit() < m_hi - 1 + n) {
    throw CoverageError("exhaustive_check: table limit " +
                        std::to_string(table.limit()) + " < required " +
                        std::to_string(m_hi - 1 + n));
  }
  std::vector<u64> failures;
  for (u64 m = m_lo; m < m_hi; ++m) {
    u64 count = 0;
    table.for_each_prime(n + 1, m + n, [&](u64 q) {
      if ((m + n) / q > m / q) ++count;
      return count <= r;
    });
    if (count <= r) failures.push_back(m);
  }
  return failures;
}

// ---------------------------------------------------------------------------
// floored certified bounds

enum class BoundKind { kE, kRho, kTheta };

struct CertifiedFloor {
  long long value = 0;
  /// True when the enclosure still contained an integer at the precision
  /// cap and the lower endpoint's floor was used.
  bool straddled = false;
};

/// Floor of a certified value. Escalates while the enclosure straddles an
/// integer; if it still does at the cap, conservatively floors the lower
/// endpoint.
inline CertifiedFloor certified_floor(const bounds::Producer& produce,
                                      const bounds::PrecisionConfig& cfg = {}) {
  int bits = cfg.start_bits;
  bounds::CertifiedValue last{};
  for (int step = 0; step <= cfg.max_escalations; ++step) {
    last = produce(bits);
    const double lo = std::floor(last.lower());
    const double hi = std::floor(last.upper());
    if (lo == hi) return {static_cast<long long>(lo), false};
    bits *= 2;
  }
  return {static_cast<long long>(std::floor(last.lower())), true};
}

struct BertrandCheck {
  u64 n = 0;
  u64 actual = 0;        // exact count of primes in ]n, 2n[
  long long bound = 0;   // floored certified lower bound
  bool ok = false;       // actual >= bound
};

/// Compares the exact number of primes in ]n, 2n[ with the floored
/// certified bound of the chosen kind. theta is only read for
/// BoundKind::kTheta.
inline BertrandCheck bertrand_lower_bound_check(u64 n,
                                                const primes::PrimeTable& table,
                                                BoundKind kind,
                                                const EngineConfig& cfg = {},
                                                double theta = 0.0) {
  using bounds::Certainty;
  if (kind == BoundKind::kE && n < 1100) {
    throw DomainError("bertrand E bound requires n >= 1100");
  }
  if ((kind == BoundKind::kRho || kind == BoundKind::kTheta) && n < 1123) {
    throw DomainError("bertrand rho/theta bounds require n >= 1123");
  }
  if (table.limit() < 2 * n) {
    throw CoverageError("bertrand check at n = " + std::to_string(n) +
                        " needs table limit >= " + std::to_string(2 * n));
  }
  const u64 actual = table.prime_count(2 * n - 1) - table.prime_count(n);
  const u64 pi_n = table.prime_count(n);

  bounds::Producer produce;
  switch (kind) {
    case BoundKind::kE:
      produce = [n](int bits) { return bounds::eval_E(n, bits); };
      break;
    case BoundKind::kRho:
      produce = [n, pi_n](int bits) { return bounds::eval_rho(n, pi_n, bits); };
      break;
    case BoundKind::kTheta: {
      if (!std::isfinite(theta) || theta <= 0.0) {
        throw DomainError("bertrand theta bound: theta must be > 0");
      }
      const auto applies = bounds::certified_greater(
          [n](int bits) { return bounds::eval_theta_coefficient(n, bits); },
          theta, cfg.precision);
      if (applies.certainty != Certainty::kProven) {
        throw DomainError("bertrand theta bound does not apply: coefficient at n = " +
                          std::to_string(n) + " is not provably above theta");
      }
      produce = [theta, pi_n](int bits) {
        const auto t = bounds::Interval::from_double(theta, bits);
        const auto p = bounds::Interval::from_integer(pi_n, bits);
        return bounds::to_certified(mul(t, p));
      };
      break;
    }
  }
  const CertifiedFloor floored = certified_floor(produce, cfg.precision);
  return {n, actual, floored.value,
          static_cast<long long>(actual) >= floored.value};
}

// ---------------------------------------------------------------------------
// serialization

inline std::string to_string(RecordStatus s) {
  switch (s) {
    case RecordStatus::kVerified: return "verified";
    case RecordStatus::kFailed: return "failed";
    case RecordStatus::kPending: return "pending";
  }
  return "pending";
}

inline RecordStatus record_status_from_string(const std::string& s) {
  if (s == "verified") return RecordStatus::kVerified;
  if (s == "failed") return RecordStatus::kFailed;
  if (s == "pending") return RecordStatus::kPending;
  throw DomainError("unknown record status: " + s);
}

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kProven: return "proven";
    case Verdict::kRefuted: return "refuted";
    case Verdict::kIncomplete: return "incomplete";
  }
  return "incomplete";
}

inline std::string to_string(Minimality m) {
  return m == Minimality::kTrueMinimal ? "true_minimal" : "certified_minimal";
}

inline json to_json(const PerNRecord& rec) {
  return json{{"n", rec.n},
              {"pi_n", rec.pi_n},
              {"m_star", rec.m_star},
              {"checked_lo", rec.checked_lo},
              {"checked_hi", rec.checked_hi},
              {"failures", rec.failures},
              {"status", to_string(rec.status)}};
}

inline PerNRecord record_from_json(const json& j) {
  PerNRecord rec;
  rec.n = j.at("n").get<u64>();
  rec.pi_n = j.at("pi_n").get<u64>();
  rec.m_star = j.at("m_star").get<u64>();
  rec.checked_lo = j.at("checked_lo").get<u64>();
  rec.checked_hi = j.at("checked_hi").get<u64>();
  rec.failures = j.at("failures").get<std::vector<u64>>();
  rec.status = record_status_from_string(j.at("status").get<std::string>());
  return rec;
}

inline json to_json(const VerificationCertificate& cert) {
  json records = json::array();
  for (const auto& rec : cert.records) records.push_back(to_json(rec));
  json witnesses = json::array();
  for (const auto& w : cert.witnesses) {
    witnesses.push_back(json{
        {"n", w.n}, {"m", w.m}, {"large_prime_count", w.large_prime_count}});
  }
  json boundary = json::array();
  for (const auto& w : cert.boundary_witnesses) {
    boundary.push_back(json{
        {"n", w.n}, {"m", w.m}, {"large_prime_count", w.large_prime_count}});
  }
  return json{
      {"schema_version", 1},
      {"kind", "sylvester_verification_certificate"},
      {"claim", {{"r", cert.claim.r}, {"n_min", cert.claim.n_min}}},
      {"n_star", cert.n_star},
      {"n_star_minimality", to_string(cert.n_star_minimality)},
      {"e_at_n_star",
       {{"mid", cert.e_at_n_star.mid}, {"radius", cert.e_at_n_star.radius}}},
      {"records", records},
      {"verdict", to_string(cert.verdict)},
      {"witnesses", witnesses},
      {"boundary_witnesses", boundary},
      {"environment",
       {{"precision_bits", cert.environment.precision_bits},
        {"max_escalations", cert.environment.max_escalations},
        {"sieve_limit", cert.environment.sieve_limit},
        {"workers", cert.environment.workers},
        {"toolkit_version", cert.environment.toolkit_version},
        {"floor_policy", cert.environment.floor_policy}}},
      {"timestamp", cert.timestamp}};
}

inline std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// ---------------------------------------------------------------------------
// checkpointing

/// Line-delimited checkpoint: a self-describing header line followed by
/// one completed PerNRecord per line. Appends are serialized through one
/// writer and flushed per record, so an interrupted campaign resumes
/// from its last completed n.
class CheckpointLog {
 public:
  CheckpointLog(const std::string& path, const SylvesterClaim& claim,
                const bounds::PrecisionConfig& precision, bool resume)
      : path_(path) {
    if (resume && std::filesystem::exists(path)) {
      load_existing(claim, precision);
      out_.open(path, std::ios::app);
    } else {
      out_.open(path, std::ios::trunc);
      const json header{{"type", "header"},
                        {"schema_version", 1},
                        {"claim", {{"r", claim.r}, {"n_min", claim.n_min}}},
                        {"precision_bits", precision.start_bits},
                        {"max_escalations", precision.max_escalations}};
      out_ << header.dump() << '\n';
      out_.flush();
    }
    if (!out_) {
      throw ResourceError("CheckpointLog: cannot open " + path);
    }
  }

  const std::map<u64, PerNRecord>& completed() const { return completed_; }

  void append(const PerNRecord& rec) {
    std::lock_guard<std::mutex> lock(mu_);
    json j = to_json(rec);
    j["type"] = "record";
    out_ << j.dump() << '\n';
    out_.flush();
  }

 private:
  void load_existing(const SylvesterClaim& claim,
                     const bounds::PrecisionConfig& precision) {
    std::ifstream in(path_);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      json j;
      try {
        j = json::parse(line);
      } catch (const json::parse_error&) {
        continue;  // torn trailing line from an interrupted run
      }
      const std::string type = j.value("type", "");
      if (type == "header") {
        if (j.at("claim").at("r").get<u64>() != claim.r ||
            j.at("claim").at("n_min").get<u64>() != claim.n_min) {
          throw DomainError("checkpoint " + path_ +
                            " belongs to a different claim");
        }
        if (j.value("precision_bits", -1) != precision.start_bits ||
            j.value("max_escalations", -1) != precision.max_escalations) {
          throw DomainError("checkpoint " + path_ +
                            " was written with different precision settings");
        }
        header_seen = true;
      } else if (type == "record") {
        try {
          const PerNRecord rec = record_from_json(j);
          if (rec.status != RecordStatus::kPending) {
            completed_[rec.n] = rec;
          }
        } catch (const json::exception&) {
          continue;
        }
      }
    }
    if (!header_seen) {
      throw DomainError("checkpoint " + path_ + " has no header line");
    }
  }

  std::string path_;
  std::ofstream out_;
  std::mutex mu_;
  std::map<u64, PerNRecord> completed_;
};

// ---------------------------------------------------------------------------
// campaign driver

namespace detail {

inline unsigned effective_workers(unsigned configured) {
  if (configured > 0) return configured;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(index) over [0, count) from a worker pool. The stop flag cuts
/// off scheduling; the first exception wins and is rethrown after the
/// pool drains.
template <typename Fn>
void run_indexed(std::size_t count, unsigned workers, std::atomic<bool>& stop,
                 Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  auto body = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t index = next.fetch_add(1, std::memory_order_relaxed);
      if (index >= count) return;
      try {
        fn(index);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!first_error) first_error = std::current_exception();
        stop.store(true, std::memory_order_relaxed);
        return;
      }
    }
  };
  const unsigned pool = std::max(1u, workers);
  if (pool == 1) {
    body();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (unsigned t = 0; t < pool; ++t) threads.emplace_back(body);
    for (auto& th : threads) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace detail

/// Full campaign for one claim: certify E(n_star) > r+1, then for every
/// n in [n_min, n_star) find m_star and exhaustively check the finite
/// window [n, m_star). Two-phase sieve sizing: all m_star searches run
/// first (they only need pi up to n_star), then one table is built at
/// the campaign-wide requirement.
inline VerificationCertificate verify_claim(const SylvesterClaim& claim,
                                            const EngineConfig& cfg = {},
                                            const ProgressFn& progress = {}) {
  claim.validate();
  const unsigned workers = detail::effective_workers(cfg.workers);

  const ThresholdResult threshold = find_n_star(claim.r, cfg);

  VerificationCertificate cert;
  cert.claim = claim;
  cert.n_star = threshold.n_star;
  cert.n_star_minimality = threshold.minimality;
  cert.e_at_n_star = threshold.value;
  cert.environment = {cfg.precision.start_bits, cfg.precision.max_escalations,
                      0, workers, kVersion, "floor-of-lower-endpoint-on-straddle"};

  std::optional<CheckpointLog> checkpoint;
  if (cfg.checkpoint_path) {
    checkpoint.emplace(*cfg.checkpoint_path, claim, cfg.precision, cfg.resume);
  }

  const u64 n_lo = claim.n_min;
  const u64 n_hi = std::max(threshold.n_star, n_lo);
  std::vector<u64> ns;
  for (u64 n = n_lo; n < n_hi; ++n) ns.push_back(n);
  const u64 probe_n =
      (cfg.probe_below_n_min && claim.n_min > 2) ? claim.n_min - 1 : 0;

  std::vector<PerNRecord> records(ns.size());
  std::vector<bool> done(ns.size(), false);
  if (checkpoint) {
    for (std::size_t i = 0; i < ns.size(); ++i) {
      const auto it = checkpoint->completed().find(ns[i]);
      if (it != checkpoint->completed().end()) {
        records[i] = it->second;
        done[i] = true;
      }
    }
  }

  // pi(n) for every n below n_star comes from one small table.
  const primes::PrimeTable pi_table =
      primes::PrimeTable::build(std::max<u64>(threshold.n_star, 2), cfg.sieve);

  // Phase 1: m_star searches (pure bound evaluations, no big sieve).
  std::atomic<bool> stop{false};
  detail::run_indexed(ns.size(), workers, stop, [&](std::size_t i) {
    if (done[i]) return;
    PerNRecord& rec = records[i];
    rec.n = ns[i];
    rec.pi_n = pi_table.prime_count(ns[i]);
    rec.m_star = find_m_star(ns[i], claim.r, rec.pi_n, cfg);
    rec.checked_lo = ns[i];
    rec.checked_hi = ns[i];
    rec.status = RecordStatus::kPending;
  });

  PerNRecord probe_record;
  if (probe_n >= 2) {
    probe_record.n = probe_n;
    probe_record.pi_n = pi_table.prime_count(probe_n);
    probe_record.m_star = find_m_star(probe_n, claim.r, probe_record.pi_n, cfg);
    probe_record.checked_lo = probe_n;
    probe_record.checked_hi = probe_n;
  }

  // Phase 2: size the sieve once, then scan the finite windows.
  u64 required = 2;
  for (std::size_t i = 0; i < ns.size(); ++i) {
    if (!done[i]) required = std::max(required, records[i].m_star + ns[i]);
  }
  if (probe_n >= 2) {
    required = std::max(required, probe_record.m_star + probe_n);
  }
  u64 sieve_limit = required;
  if (cfg.sieve_limit_override) {
    if (*cfg.sieve_limit_override < required) {
      throw ResourceError("sieve limit override " +
                          std::to_string(*cfg.sieve_limit_override) +
                          " is below the campaign requirement " +
                          std::to_string(required));
    }
    sieve_limit = *cfg.sieve_limit_override;
  }
  cert.environment.sieve_limit = sieve_limit;

  const bool any_pending =
      probe_n >= 2 || std::find(done.begin(), done.end(), false) != done.end();
  std::optional<primes::PrimeTable> big;
  if (any_pending) {
    big.emplace(primes::PrimeTable::build(sieve_limit, cfg.sieve));
  }

  std::atomic<std::size_t> completed_count{0};
  std::atomic<bool> scan_stop{false};
  detail::run_indexed(ns.size(), workers, scan_stop, [&](std::size_t i) {
    if (!done[i]) {
      PerNRecord& rec = records[i];
      rec.failures = exhaustive_check(rec.n, claim.r, rec.n, rec.m_star, *big);
      rec.checked_hi = rec.m_star;
      rec.status = rec.failures.empty() ? RecordStatus::kVerified
                                        : RecordStatus::kFailed;
      if (checkpoint) checkpoint->append(rec);
      if (rec.status == RecordStatus::kFailed && cfg.stop_on_refutation) {
        scan_stop.store(true, std::memory_order_relaxed);
      }
    }
    const std::size_t done_now =
        completed_count.fetch_add(1, std::memory_order_relaxed) + 1;
    if (progress) progress(done_now, ns.size());
  });

  if (probe_n >= 2) {
    probe_record.failures = exhaustive_check(
        probe_n, claim.r, probe_n, probe_record.m_star, *big);
    probe_record.checked_hi = probe_record.m_star;
    probe_record.status = probe_record.failures.empty()
                              ? RecordStatus::kVerified
                              : RecordStatus::kFailed;
    for (u64 m : probe_record.failures) {
      const auto witness = valuations::large_prime_divisors(
          valuations::ConsecutiveProduct(m, probe_n), *big);
      cert.boundary_witnesses.push_back(
          {probe_n, m, witness.primes.size()});
    }
  }

  bool any_failed = false;
  bool any_pending_left = false;
  u64 witness_reach = 0;
  for (const auto& rec : records) {
    if (rec.status == RecordStatus::kFailed) {
      any_failed = true;
      for (u64 m : rec.failures) {
        witness_reach = std::max(witness_reach, m + rec.n);
      }
    } else if (rec.status == RecordStatus::kPending) {
      any_pending_left = true;
    }
  }
  if (any_failed) {
    // Witness counts may be needed beyond the campaign sieve when failed
    // records came straight from a checkpoint.
    std::optional<primes::PrimeTable> fallback;
    const primes::PrimeTable* witness_table = nullptr;
    if (big && big->limit() >= witness_reach) {
      witness_table = &*big;
    } else {
      fallback.emplace(primes::PrimeTable::build(witness_reach, cfg.sieve));
      witness_table = &*fallback;
    }
    for (const auto& rec : records) {
      if (rec.status != RecordStatus::kFailed) continue;
      for (u64 m : rec.failures) {
        const auto witness = valuations::large_prime_divisors(
            valuations::ConsecutiveProduct(m, rec.n), *witness_table);
        cert.witnesses.push_back({rec.n, m, witness.primes.size()});
      }
    }
  }
  cert.records = std::move(records);
  cert.verdict = any_failed ? Verdict::kRefuted
                 : any_pending_left ? Verdict::kIncomplete
                                    : Verdict::kProven;
  cert.timestamp = utc_timestamp();
  return cert;
}

}  // namespace sylvkit::engine
