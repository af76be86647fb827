// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "simscore/features.hpp"
#include "simscore/predictors.hpp"
#include "simscore/stats_parser.hpp"
#include "simscore/synthetic.hpp"

namespace simscore {

enum class JobStatus { kOk, kBuildFailed, kRunFailed, kTimeout, kParseFailed };

std::string to_string(JobStatus status);

/// One build-and-simulate unit.
struct TuningJob {
  std::uint64_t job_id = 0;
  GroupKey group;
  std::string impl_params_json;  // opaque blob handed to the builder
  std::filesystem::path workdir;
};

struct JobResult {
  std::uint64_t job_id = 0;
  JobStatus status = JobStatus::kRunFailed;
  std::optional<StatVector> stats;
  std::optional<double> score;
  std::string diagnostics;
};

/// Executes one job, leaving a stats file at {workdir}/stats.txt on
/// success. Implementations must be stateless per invocation.
class SimulatorAdapter {
 public:
  virtual ~SimulatorAdapter() = default;
  virtual std::pair<JobStatus, std::string> execute(const TuningJob& job) const = 0;
};

/// Shells out through build/run command templates. Placeholders:
/// {exe}, {args}, {stats_out}, {workdir}.
class CommandAdapter : public SimulatorAdapter {
 public:
  std::string build_command;  // optional; empty skips the build step
  std::string run_command;
  double timeout_seconds = 600.0;

  static CommandAdapter from_json_file(const std::filesystem::path& path);

  std::pair<JobStatus, std::string> execute(const TuningJob& job) const override;
};

/// In-process gem5 stand-in driven by the synthetic model; deterministic
/// per job and instrumented for concurrency checks.
class MockSimulatorAdapter : public SimulatorAdapter {
 public:
  explicit MockSimulatorAdapter(SyntheticSpec spec) : spec_(std::move(spec)) {}

  // Jobs whose id is listed here report run_failed.
  std::set<std::uint64_t> fail_job_ids;
  // Artificial per-job delay, to make concurrency observable in tests.
  double delay_seconds = 0.0;

  std::pair<JobStatus, std::string> execute(const TuningJob& job) const override;

  int peak_concurrency() const { return peak_.load(); }
  const SyntheticSpec& spec() const { return spec_; }

 private:
  SyntheticSpec spec_;
  mutable std::atomic<int> active_{0};
  mutable std::atomic<int> peak_{0};
};

/// Runs up to n_parallel jobs concurrently; results come back in job
/// order. Ok jobs are parsed, featurized through the window (updated once
/// per batch, after all parses) and scored by the predictor. Failures
/// never abort the batch.
std::vector<JobResult> run_batch(const std::vector<TuningJob>& jobs,
                                 const SimulatorAdapter& adapter,
                                 const StatsMapping& mapping,
                                 const PredictorModel& predictor, WindowState& window,
                                 std::size_t n_parallel);

struct ArchiveEntry {
  TuningJob job;
  JobResult result;
  double archive_score = 0.0;  // +inf sentinel for failed jobs
};

/// Supplies candidate batches; may condition on the archive so far.
/// An empty batch ends the loop early.
class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  virtual std::vector<TuningJob> next_batch(const std::vector<ArchiveEntry>& archive) = 0;
};

/// Uniform-random draws over the synthetic parameter space.
class RandomGenerator : public CandidateGenerator {
 public:
  RandomGenerator(const SyntheticSpec& spec, std::size_t group_index, std::size_t batch_size,
                  std::filesystem::path workdir_root, std::uint64_t seed);
  std::vector<TuningJob> next_batch(const std::vector<ArchiveEntry>& archive) override;

 private:
  const SyntheticSpec& spec_;
  std::size_t group_index_;
  std::size_t batch_size_;
  std::filesystem::path workdir_root_;
  std::mt19937_64 rng_;
  std::uint64_t next_job_id_ = 0;
};

/// Mutates the best-scored archived candidate; Auto-Scheduler stand-in.
class GreedyGenerator : public CandidateGenerator {
 public:
  GreedyGenerator(const SyntheticSpec& spec, std::size_t group_index, std::size_t batch_size,
                  std::filesystem::path workdir_root, std::uint64_t seed);
  std::vector<TuningJob> next_batch(const std::vector<ArchiveEntry>& archive) override;

 private:
  const SyntheticSpec& spec_;
  std::size_t group_index_;
  std::size_t batch_size_;
  std::filesystem::path workdir_root_;
  std::mt19937_64 rng_;
  std::uint64_t next_job_id_ = 0;
};

struct TuningLoopResult {
  std::vector<ArchiveEntry> archive;
  bool exhausted_early = false;
  std::string note;
};

TuningLoopResult tuning_loop(CandidateGenerator& generator, const SimulatorAdapter& adapter,
                             const StatsMapping& mapping, const PredictorModel& predictor,
                             WindowState& window, std::size_t rounds,
                             std::size_t n_parallel);

void save_archive(const TuningLoopResult& result, const std::filesystem::path& path);

}  // namespace simscore
