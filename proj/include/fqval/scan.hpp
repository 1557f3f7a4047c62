#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "fqval/natural.hpp"

namespace fqval {

enum class ScanMode { Thm2, Conjecture, Nagell };
const char* to_string(ScanMode m);
ScanMode parse_scan_mode(std::string_view s);

/// A sweep over primes p in [p_min, p_max] and bases x in [x_min, x_max].
/// The p range is cut into chunks of `chunk_size` consecutive integers;
/// each chunk is one unit of work and one checkpoint step.
///
/// In nagell mode x runs over odd primes q != p and each (p, q) pair yields
/// one record per exponent c in [1, c_max].
struct ScanConfig {
  Natural p_min = 3, p_max = 100;
  Natural x_min = 2, x_max = 50;
  ScanMode mode = ScanMode::Thm2;
  std::uint64_t chunk_size = 1000;
  std::string output_path;
  std::string checkpoint_path;
  unsigned workers = 1;
  std::uint64_t c_max = 50;
};

void validate_scan_config(const ScanConfig& cfg);

/// SHA-256 over the fields that determine the output (not paths or workers).
std::string config_digest(const ScanConfig& cfg);

std::uint64_t chunk_count(const ScanConfig& cfg);

struct ScanSummary {
  std::uint64_t pairs_checked = 0;
  std::uint64_t records = 0;
  std::uint64_t violations = 0;
  std::uint64_t wieferich_hits = 0;
  std::uint64_t chunks_done = 0;
  std::uint64_t chunks_total = 0;
  bool complete() const { return chunks_done == chunks_total; }
};

struct Checkpoint {
  std::string digest;
  std::int64_t last_completed_chunk = -1;
  std::uint64_t records_written = 0;
  ScanSummary totals;
};

Checkpoint read_checkpoint(const std::string& path);
void write_checkpoint(const std::string& path, const Checkpoint& cp);

struct RunOptions {
  /// Stop after this many chunks have been committed in this call; used to
  /// simulate an interrupted run.
  std::optional<std::uint64_t> max_chunks;
};

/// Fresh run: truncates the output file and writes a checkpoint after
/// every chunk (if a checkpoint path is set).
ScanSummary run_scan(const ScanConfig& cfg, const RunOptions& opts = {});

/// Continues the run recorded at cfg.checkpoint_path. Refuses a digest
/// mismatch; drops output lines written after the last checkpoint; reports
/// a truncated output as corruption. A completed scan is a no-op.
ScanSummary resume(const ScanConfig& cfg, const RunOptions& opts = {});

struct ExportResult {
  std::uint64_t rows = 0;
};

/// JSONL records to CSV with header p,x,valuation,bound,margin,wieferich
/// (plus a trailing c column when the records carry one).
ExportResult export_csv(const std::string& records_path, const std::string& csv_path);

}  // namespace fqval
