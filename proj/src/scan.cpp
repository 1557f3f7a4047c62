#include "fqval/scan.hpp"

#include <openssl/evp.h>

#include <condition_variable>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "fqval/arith.hpp"
#include "fqval/bounds.hpp"
#include "fqval/divisor.hpp"
#include "fqval/errors.hpp"
#include "json.hpp"

namespace fqval {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

const char* to_string(ScanMode m) {
  switch (m) {
    case ScanMode::Thm2:
      return "thm2";
    case ScanMode::Conjecture:
      return "conjecture";
    case ScanMode::Nagell:
      return "nagell";
  }
  return "?";
}

ScanMode parse_scan_mode(std::string_view s) {
  if (s == "thm2") return ScanMode::Thm2;
  if (s == "conjecture") return ScanMode::Conjecture;
  if (s == "nagell") return ScanMode::Nagell;
  throw DomainError("unknown scan mode '" + std::string(s) + "' (expected thm2, conjecture or nagell)");
}

void validate_scan_config(const ScanConfig& cfg) {
  if (cfg.p_min > cfg.p_max) throw DomainError("scan: p_min must be <= p_max");
  if (cfg.x_min < 2) throw DomainError("scan: x_min must be >= 2");
  if (cfg.x_min > cfg.x_max) throw DomainError("scan: x_min must be <= x_max");
  if (cfg.chunk_size < 1) throw DomainError("scan: chunk_size must be >= 1");
  if (cfg.workers < 1) throw DomainError("scan: workers must be >= 1");
  if (cfg.mode == ScanMode::Conjecture && cfg.p_min < 3) throw DomainError("scan: conjecture mode needs p_min >= 3");
  if (cfg.mode == ScanMode::Nagell && cfg.c_max < 1) throw DomainError("scan: c_max must be >= 1");
  if (cfg.output_path.empty()) throw DomainError("scan: output path is required");
  if (cfg.p_max >= Natural(1) << 62) throw CapExceeded("scan: p_max must be below 2^62");
  if (cfg.x_max >= Natural(1) << 40) throw CapExceeded("scan: x_max must be below 2^40");
}

std::string config_digest(const ScanConfig& cfg) {
  std::ostringstream s;
  s << "fqval-scan-v1\n"
    << "mode=" << to_string(cfg.mode) << "\n"
    << "p_min=" << to_decimal(cfg.p_min) << "\n"
    << "p_max=" << to_decimal(cfg.p_max) << "\n"
    << "x_min=" << to_decimal(cfg.x_min) << "\n"
    << "x_max=" << to_decimal(cfg.x_max) << "\n"
    << "chunk_size=" << cfg.chunk_size << "\n";
  if (cfg.mode == ScanMode::Nagell) s << "c_max=" << cfg.c_max << "\n";
  const std::string text = s.str();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

std::uint64_t chunk_count(const ScanConfig& cfg) {
  const std::uint64_t width = to_u64(cfg.p_max - cfg.p_min, "p range") + 1;
  return (width + cfg.chunk_size - 1) / cfg.chunk_size;
}

namespace {

struct ChunkResult {
  std::string text;
  ScanSummary counts;
};

ordered_json record(std::uint64_t p, std::uint64_t x) {
  ordered_json j;
  j["p"] = std::to_string(p);
  j["x"] = std::to_string(x);
  return j;
}

ChunkResult compute_chunk(const ScanConfig& cfg, std::uint64_t index) {
  const std::uint64_t p_min = to_u64(cfg.p_min, "p_min");
  const std::uint64_t p_max = to_u64(cfg.p_max, "p_max");
  const std::uint64_t x_min = to_u64(cfg.x_min, "x_min");
  const std::uint64_t x_max = to_u64(cfg.x_max, "x_max");
  const std::uint64_t lo = p_min + index * cfg.chunk_size;
  const std::uint64_t hi = std::min(p_max, lo + cfg.chunk_size - 1);

  std::vector<std::uint64_t> bases;
  if (cfg.mode == ScanMode::Nagell) {
    bases = primes_in_range(std::max<std::uint64_t>(x_min, 3), x_max);
  } else {
    for (std::uint64_t x = x_min; x <= x_max; ++x) bases.push_back(x);
  }

  ChunkResult out;
  std::string& text = out.text;
  for (std::uint64_t pv : primes_in_range(lo, hi)) {
    const Natural p = static_cast<unsigned long>(pv);
    for (std::uint64_t xv : bases) {
      if (xv % pv == 0) continue;
      const Natural x = static_cast<unsigned long>(xv);
      ++out.counts.pairs_checked;

      if (cfg.mode == ScanMode::Nagell) {
        const unsigned long base_v = fermat_quotient_valuation(x, p).exponent;
        for (std::uint64_t c = 1; c <= cfg.c_max; ++c) {
          const unsigned long lhs = vp(sigma_prime_power(x, c), p).exponent;
          const unsigned long rhs = base_v + vp(Natural(static_cast<unsigned long>(c + 1)), p).exponent;
          auto j = record(pv, xv);
          j["c"] = std::to_string(c);
          j["valuation"] = std::to_string(lhs);
          j["bound"] = std::to_string(rhs);
          j["margin"] = std::to_string(static_cast<long long>(rhs) - static_cast<long long>(lhs));
          j["wieferich"] = lhs >= 2;
          text += j.dump() + '\n';
          ++out.counts.records;
          out.counts.violations += lhs > rhs;
          out.counts.wieferich_hits += lhs >= 2;
        }
        continue;
      }

      const unsigned long v = fermat_quotient_valuation(x, p).exponent;
      auto j = record(pv, xv);
      j["valuation"] = std::to_string(v);
      if (cfg.mode == ScanMode::Thm2) {
        const Natural bound = thm2_bound_for_base(x, p).bound;
        j["bound"] = to_decimal(bound);
        j["margin"] = to_decimal(Natural(bound - v));
        out.counts.violations += bound < v;
      } else {
        const Interval bound = conj1_bound(x, p);
        const Natural vn = v;
        j["bound"] = bound.mid();
        j["margin"] = bound.mid() - static_cast<double>(v);
        const Truth exceeds = decide_with_escalation(
            [&](mpfr_prec_t prec) { return greater(Interval::exact(vn, prec), conj1_bound(x, p, prec)); });
        out.counts.violations += exceeds == Truth::Holds;
      }
      j["wieferich"] = v >= 2;
      text += j.dump() + '\n';
      ++out.counts.records;
      out.counts.wieferich_hits += v >= 2;
    }
  }
  return out;
}

void accumulate(ScanSummary& into, const ScanSummary& add) {
  into.pairs_checked += add.pairs_checked;
  into.records += add.records;
  into.violations += add.violations;
  into.wieferich_hits += add.wieferich_hits;
}

// Workers compute chunks ahead of the merger within a bounded window; the
// merger (the calling thread) appends them in index order and commits a
// checkpoint after each one.
ScanSummary execute(const ScanConfig& cfg, Checkpoint cp, std::ofstream& out, const RunOptions& opts) {
  const std::uint64_t total = chunk_count(cfg);
  const std::uint64_t start = static_cast<std::uint64_t>(cp.last_completed_chunk + 1);
  std::uint64_t end = total;
  if (opts.max_chunks) end = std::min(total, start + *opts.max_chunks);
  const std::uint64_t n = end > start ? end - start : 0;
  const std::uint64_t window = 2ull * cfg.workers;

  std::mutex m;
  std::condition_variable cv;
  std::map<std::uint64_t, ChunkResult> ready;
  std::uint64_t next_claim = 0, committed = 0;
  bool stop = false;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      std::uint64_t i;
      {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return stop || next_claim >= n || next_claim < committed + window; });
        if (stop || next_claim >= n) return;
        i = next_claim++;
      }
      try {
        ChunkResult r = compute_chunk(cfg, start + i);
        std::lock_guard lock(m);
        ready.emplace(i, std::move(r));
      } catch (...) {
        std::lock_guard lock(m);
        if (!error) error = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };

  std::vector<std::thread> pool;
  const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(cfg.workers, std::max<std::uint64_t>(n, 1)));
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);

  auto shutdown = [&] {
    {
      std::lock_guard lock(m);
      stop = true;
    }
    cv.notify_all();
    for (auto& t : pool) t.join();
    pool.clear();
  };

  try {
    for (std::uint64_t i = 0; i < n; ++i) {
      ChunkResult r;
      {
        std::unique_lock lock(m);
        cv.wait(lock, [&] { return error || ready.count(i); });
        if (error) std::rethrow_exception(error);
        r = std::move(ready.at(i));
        ready.erase(i);
      }
      out << r.text;
      out.flush();
      if (!out) throw DomainError("scan: write to " + cfg.output_path + " failed");
      cp.last_completed_chunk = static_cast<std::int64_t>(start + i);
      cp.records_written += r.counts.records;
      accumulate(cp.totals, r.counts);
      if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, cp);
      {
        std::lock_guard lock(m);
        committed = i + 1;
      }
      cv.notify_all();
    }
  } catch (...) {
    shutdown();
    throw;
  }
  shutdown();

  ScanSummary s = cp.totals;
  s.chunks_done = static_cast<std::uint64_t>(cp.last_completed_chunk + 1);
  s.chunks_total = total;
  return s;
}

}  // namespace

Checkpoint read_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open checkpoint " + path);
  Checkpoint cp;
  try {
    const auto j = nlohmann::json::parse(in);
    cp.digest = j.at("digest").get<std::string>();
    cp.last_completed_chunk = j.at("last_completed_chunk").get<std::int64_t>();
    cp.records_written = j.at("records_written").get<std::uint64_t>();
    cp.totals.records = cp.records_written;
    cp.totals.pairs_checked = j.at("pairs_checked").get<std::uint64_t>();
    cp.totals.violations = j.at("violations").get<std::uint64_t>();
    cp.totals.wieferich_hits = j.at("wieferich_hits").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw DomainError("corrupted checkpoint " + path + ": " + e.what());
  }
  if (cp.last_completed_chunk < -1) throw DomainError("corrupted checkpoint " + path + ": negative chunk index");
  return cp;
}

void write_checkpoint(const std::string& path, const Checkpoint& cp) {
  ordered_json j;
  j["digest"] = cp.digest;
  j["last_completed_chunk"] = cp.last_completed_chunk;
  j["records_written"] = cp.records_written;
  j["pairs_checked"] = cp.totals.pairs_checked;
  j["violations"] = cp.totals.violations;
  j["wieferich_hits"] = cp.totals.wieferich_hits;
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << j.dump(2) << '\n';
    out.flush();
    if (!out) throw DomainError("cannot write checkpoint " + tmp);
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw DomainError("cannot replace checkpoint " + path + ": " + ec.message());
}

ScanSummary run_scan(const ScanConfig& cfg, const RunOptions& opts) {
  validate_scan_config(cfg);
  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open output " + cfg.output_path);
  Checkpoint cp;
  cp.digest = config_digest(cfg);
  if (!cfg.checkpoint_path.empty()) write_checkpoint(cfg.checkpoint_path, cp);
  return execute(cfg, cp, out, opts);
}

ScanSummary resume(const ScanConfig& cfg, const RunOptions& opts) {
  validate_scan_config(cfg);
  if (cfg.checkpoint_path.empty()) throw DomainError("resume: checkpoint path is required");
  Checkpoint cp = read_checkpoint(cfg.checkpoint_path);
  if (cp.digest != config_digest(cfg))
    throw DomainError("resume: checkpoint digest does not match the supplied configuration");
  if (cp.last_completed_chunk + 1 > static_cast<std::int64_t>(chunk_count(cfg)))
    throw DomainError("corrupted checkpoint: chunk index beyond the configured range");

  // Keep exactly the committed records; anything after them belongs to a
  // chunk that never reached the checkpoint.
  std::uint64_t keep_bytes = 0, lines = 0;
  {
    std::ifstream in(cfg.output_path, std::ios::binary);
    if (!in) throw DomainError("resume: cannot open output " + cfg.output_path);
    std::string line;
    while (lines < cp.records_written && std::getline(in, line)) {
      if (in.eof()) break;  // final line without a newline is incomplete
      keep_bytes += line.size() + 1;
      ++lines;
    }
  }
  if (lines < cp.records_written)
    throw DomainError("corrupted output: checkpoint records " + std::to_string(cp.records_written) + " lines, file has " +
                      std::to_string(lines));
  fs::resize_file(cfg.output_path, keep_bytes);

  std::ofstream out(cfg.output_path, std::ios::binary | std::ios::app);
  if (!out) throw DomainError("cannot open output " + cfg.output_path);
  return execute(cfg, cp, out, opts);
}

namespace {

std::string csv_cell(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number()) return v.dump();
  throw DomainError("unexpected value type");
}

}  // namespace

ExportResult export_csv(const std::string& records_path, const std::string& csv_path) {
  std::ifstream in(records_path);
  if (!in) throw DomainError("cannot open records " + records_path);
  static const char* fields[] = {"p", "x", "valuation", "bound", "margin", "wieferich"};
  std::vector<nlohmann::json> rows;
  bool has_c = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      if (!j.is_object()) throw DomainError("not an object");
      for (const char* f : fields)
        if (!j.contains(f)) throw DomainError(std::string("missing field '") + f + "'");
      if (!j["wieferich"].is_boolean()) throw DomainError("wieferich must be a boolean");
      has_c = has_c || j.contains("c");
      rows.push_back(std::move(j));
    } catch (const std::exception& e) {
      throw DomainError(records_path + ":" + std::to_string(lineno) + ": malformed record: " + e.what());
    }
  }

  std::ofstream out(csv_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DomainError("cannot open " + csv_path);
  out << "p,x,valuation,bound,margin,wieferich" << (has_c ? ",c" : "") << '\n';
  for (const auto& j : rows) {
    for (std::size_t i = 0; i < std::size(fields); ++i) out << (i ? "," : "") << csv_cell(j[fields[i]]);
    if (has_c) out << ',' << (j.contains("c") ? csv_cell(j["c"]) : "");
    out << '\n';
  }
  out.flush();
  if (!out) throw DomainError("write to " + csv_path + " failed");
  return {rows.size()};
}

}  // namespace fqval
