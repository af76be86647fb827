// Copyright (c) 2026 simscore contributors
// SPDX-License-Identifier: Apache-2.0
#include "simscore/orchestrator.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "simscore/dataset.hpp"

namespace simscore {

using nlohmann::json;

std::string to_string(JobStatus status) {
  switch (status) {
    case JobStatus::kOk: return "ok";
    case JobStatus::kBuildFailed: return "build_failed";
    case JobStatus::kRunFailed: return "run_failed";
    case JobStatus::kTimeout: return "timeout";
    case JobStatus::kParseFailed: return "parse_failed";
  }
  return "?";
}

namespace {

std::string substitute(std::string text, const TuningJob& job) {
  auto replace_all = [&text](const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(key, pos)) != std::string::npos) {
      text.replace(pos, key.size(), value);
      pos += value.size();
    }
  };
  replace_all("{workdir}", job.workdir.string());
  replace_all("{exe}", (job.workdir / "impl_exe").string());
  replace_all("{stats_out}", (job.workdir / "stats.txt").string());
  replace_all("{args}", "'" + job.impl_params_json + "'");
  return text;
}

// Runs a shell command, capturing combined output; returns the exit code.
int exec_shell(const std::string& command, std::string* output) {
  const std::string wrapped = command + " 2>&1";
  FILE* pipe = popen(wrapped.c_str(), "r");
  if (!pipe) return -1;
  char buffer[4096];
  while (std::size_t n = fread(buffer, 1, sizeof buffer, pipe)) output->append(buffer, n);
  const int status = pclose(pipe);
  if (WIFEXITED(status)) return WEXITSTATUS(status);
  return -1;
}

}  // namespace

CommandAdapter CommandAdapter::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open adapter config: " + path.string());
  const json j = json::parse(in);
  CommandAdapter adapter;
  adapter.build_command = j.value("build_command", "");
  adapter.run_command = j.at("run_command").get<std::string>();
  adapter.timeout_seconds = j.value("timeout_seconds", 600.0);
  for (const char* placeholder : {"{stats_out}"})
    if (adapter.run_command.find(placeholder) == std::string::npos)
      throw DataError(std::string("run_command is missing placeholder ") + placeholder);
  return adapter;
}

std::pair<JobStatus, std::string> CommandAdapter::execute(const TuningJob& job) const {
  std::filesystem::create_directories(job.workdir);
  std::string diagnostics;

  if (!build_command.empty()) {
    const int code = exec_shell(substitute(build_command, job), &diagnostics);
    if (code != 0)
      return {JobStatus::kBuildFailed, "build exited with " + std::to_string(code) + "\n" +
                                           diagnostics};
  }

  std::ostringstream cmd;
  cmd << "timeout " << static_cast<long long>(timeout_seconds) << " sh -c "
      << std::quoted(substitute(run_command, job));
  const int code = exec_shell(cmd.str(), &diagnostics);
  if (code == 124) return {JobStatus::kTimeout, diagnostics};
  if (code != 0)
    return {JobStatus::kRunFailed, "run exited with " + std::to_string(code) + "\n" +
                                       diagnostics};
  return {JobStatus::kOk, diagnostics};
}

std::pair<JobStatus, std::string> MockSimulatorAdapter::execute(const TuningJob& job) const {
  const int now = ++active_;
  int seen = peak_.load();
  while (now > seen && !peak_.compare_exchange_weak(seen, now)) {
  }

  auto done = [this](JobStatus status, std::string msg) {
    --active_;
    return std::pair<JobStatus, std::string>{status, std::move(msg)};
  };

  if (delay_seconds > 0.0)
    std::this_thread::sleep_for(std::chrono::duration<double>(delay_seconds));
  if (fail_job_ids.count(job.job_id)) return done(JobStatus::kRunFailed, "injected failure");

  try {
    const std::size_t group_index = group_index_of(spec_, job.group);
    const ImplParams params = ImplParams::from_json(job.impl_params_json);
    std::filesystem::create_directories(job.workdir);
    atomic_write(job.workdir / "stats.txt", mock_stats_text(spec_, group_index, params));
  } catch (const std::exception& e) {
    return done(JobStatus::kRunFailed, e.what());
  }
  return done(JobStatus::kOk, "");
}

std::vector<JobResult> run_batch(const std::vector<TuningJob>& jobs,
                                 const SimulatorAdapter& adapter,
                                 const StatsMapping& mapping,
                                 const PredictorModel& predictor, WindowState& window,
                                 std::size_t n_parallel) {
  if (n_parallel < 1) throw DataError("n_parallel must be at least 1");
  const CacheTopology& topology = predictor.schema.topology;

  std::vector<JobResult> results(jobs.size());
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    while (true) {
      const std::size_t index = next.fetch_add(1);
      if (index >= jobs.size()) return;
      const TuningJob& job = jobs[index];
      JobResult& result = results[index];
      result.job_id = job.job_id;

      auto [status, diagnostics] = adapter.execute(job);
      result.status = status;
      result.diagnostics = std::move(diagnostics);
      if (status != JobStatus::kOk) continue;

      try {
        std::ifstream in(job.workdir / "stats.txt");
        if (!in) throw DataError("missing stats file");
        std::stringstream buf;
        buf << in.rdbuf();
        const auto dumps = parse_stats_text(buf.str());
        result.stats = extract_stat_vector(dumps.back(), mapping, topology);
      } catch (const std::exception& e) {
        result.status = JobStatus::kParseFailed;
        result.diagnostics += e.what();
      }
    }
  };

  std::vector<std::thread> threads;
  const std::size_t thread_count = std::min(n_parallel, jobs.size());
  threads.reserve(thread_count);
  for (std::size_t i = 0; i < thread_count; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  // One window update per batch, so every job in the batch is normalized
  // by the same means.
  std::vector<std::vector<double>> raw_batch;
  std::vector<double> inst_counts;
  std::vector<std::size_t> ok_indices;
  for (std::size_t i = 0; i < results.size(); ++i) {
    if (results[i].status != JobStatus::kOk) continue;
    raw_batch.push_back(raw_features(*results[i].stats, topology));
    inst_counts.push_back(static_cast<double>(results[i].stats->total_instructions));
    ok_indices.push_back(i);
  }
  if (!raw_batch.empty() && window.mode() != WindowMode::kExact)
    window.update(raw_batch, inst_counts);

  if (!ok_indices.empty() && window.ready()) {
    Eigen::MatrixXd features(static_cast<Eigen::Index>(ok_indices.size()),
                             static_cast<Eigen::Index>(predictor.schema.size()));
    for (std::size_t i = 0; i < ok_indices.size(); ++i) {
      const auto fv =
          assemble_feature_vector(*results[ok_indices[i]].stats, window, predictor.schema);
      for (std::size_t c = 0; c < fv.values.size(); ++c)
        features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = fv.values[c];
    }
    const Eigen::VectorXd scores = predict(predictor, features);
    for (std::size_t i = 0; i < ok_indices.size(); ++i)
      results[ok_indices[i]].score = scores(static_cast<Eigen::Index>(i));
  }
  return results;
}

RandomGenerator::RandomGenerator(const SyntheticSpec& spec, std::size_t group_index,
                                 std::size_t batch_size, std::filesystem::path workdir_root,
                                 std::uint64_t seed)
    : spec_(spec),
      group_index_(group_index),
      batch_size_(batch_size),
      workdir_root_(std::move(workdir_root)),
      rng_(seed) {}

std::vector<TuningJob> RandomGenerator::next_batch(const std::vector<ArchiveEntry>&) {
  std::vector<TuningJob> jobs;
  for (std::size_t i = 0; i < batch_size_; ++i) {
    TuningJob job;
    job.job_id = next_job_id_++;
    job.group = spec_.groups[group_index_].group.key();
    job.impl_params_json = random_params(spec_, rng_).to_json();
    job.workdir = workdir_root_ / ("job_" + std::to_string(job.job_id));
    jobs.push_back(std::move(job));
  }
  return jobs;
}

GreedyGenerator::GreedyGenerator(const SyntheticSpec& spec, std::size_t group_index,
                                 std::size_t batch_size, std::filesystem::path workdir_root,
                                 std::uint64_t seed)
    : spec_(spec),
      group_index_(group_index),
      batch_size_(batch_size),
      workdir_root_(std::move(workdir_root)),
      rng_(seed) {}

std::vector<TuningJob> GreedyGenerator::next_batch(const std::vector<ArchiveEntry>& archive) {
  const ArchiveEntry* best = nullptr;
  for (const auto& entry : archive)
    if (!best || entry.archive_score < best->archive_score) best = &entry;

  std::vector<TuningJob> jobs;
  for (std::size_t i = 0; i < batch_size_; ++i) {
    TuningJob job;
    job.job_id = next_job_id_++;
    job.group = spec_.groups[group_index_].group.key();
    if (best) {
      const ImplParams parent = ImplParams::from_json(best->job.impl_params_json);
      job.impl_params_json = mutate_params(spec_, parent, rng_).to_json();
    } else {
      job.impl_params_json = random_params(spec_, rng_).to_json();
    }
    job.workdir = workdir_root_ / ("job_" + std::to_string(job.job_id));
    jobs.push_back(std::move(job));
  }
  return jobs;
}

TuningLoopResult tuning_loop(CandidateGenerator& generator, const SimulatorAdapter& adapter,
                             const StatsMapping& mapping, const PredictorModel& predictor,
                             WindowState& window, std::size_t rounds,
                             std::size_t n_parallel) {
  if (rounds < 1) throw DataError("tuning_loop: rounds must be at least 1");
  TuningLoopResult result;
  for (std::size_t round = 0; round < rounds; ++round) {
    const std::vector<TuningJob> jobs = generator.next_batch(result.archive);
    if (jobs.empty()) {
      result.exhausted_early = true;
      result.note = "generator exhausted after " + std::to_string(round) + " rounds";
      break;
    }
    const std::vector<JobResult> batch =
        run_batch(jobs, adapter, mapping, predictor, window, n_parallel);
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      ArchiveEntry entry;
      entry.job = jobs[i];
      entry.result = batch[i];
      // Failures rank behind every genuine score.
      entry.archive_score = batch[i].score.value_or(std::numeric_limits<double>::infinity());
      result.archive.push_back(std::move(entry));
    }
  }
  return result;
}

void save_archive(const TuningLoopResult& result, const std::filesystem::path& path) {
  std::ostringstream out;
  for (const auto& entry : result.archive) {
    json j = {{"job_id", entry.job.job_id},
              {"kernel_type", entry.job.group.kernel_type},
              {"group_id", entry.job.group.group_id},
              {"impl_params", json::parse(entry.job.impl_params_json)},
              {"status", to_string(entry.result.status)},
              {"archive_score", entry.archive_score}};
    if (entry.result.score) j["score"] = *entry.result.score;
    out << j.dump() << '\n';
  }
  atomic_write(path, out.str());
}

}  // namespace simscore
