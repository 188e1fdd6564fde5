#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cogsa/bench.hpp"
#include "cogsa/engine.hpp"
#include "cogsa/rng.hpp"
#include "cogsa/run_record.hpp"

namespace cogsa::harness {

using BenchmarkFactory = std::function<bench::BenchmarkSpec()>;

// Aggregated statistics for one (benchmark, dimension, algorithm) cell.
// sd uses the sample (n-1) divisor; a single run reports sd = 0 by convention
// (run_count tells the reader).
struct ReportCell {
    std::string benchmark;
    std::size_t dimension = 0;
    std::string algorithm;
    double mean = 0.0;
    double best = 0.0;
    double sd = 0.0;
    std::size_t run_count = 0;
    std::vector<double> finals;  // per-run final fitness, run order
};

struct ExperimentReport {
    std::vector<ReportCell> cells;

    const ReportCell* find(const std::string& benchmark, const std::string& algorithm) const {
        for (const auto& cell : cells)
            if (cell.benchmark == benchmark && cell.algorithm == algorithm) return &cell;
        return nullptr;
    }
};

namespace detail {

inline void fill_stats(ReportCell& cell) {
    std::size_t n = cell.finals.size();
    cell.run_count = n;
    double sum = 0.0;
    double best = cell.finals[0];
    for (double v : cell.finals) {
        sum += v;
        best = std::min(best, v);
    }
    cell.mean = sum / static_cast<double>(n);
    cell.best = best;
    if (n > 1) {
        double ss = 0.0;
        for (double v : cell.finals) ss += (v - cell.mean) * (v - cell.mean);
        cell.sd = std::sqrt(ss / static_cast<double>(n - 1));
    } else {
        cell.sd = 0.0;
    }
}

}  // namespace detail

// Group records by (benchmark, dimension, algorithm) in first-appearance
// order and compute Mean/Best/SD per cell. Failed runs are skipped. When
// `optima` is given, statistics are over fitness error |final - optimum|
// instead of raw final fitness.
inline ExperimentReport summarize(const std::vector<RunRecord>& records,
                                  const std::map<std::string, double>* optima = nullptr) {
    ExperimentReport report;
    for (const RunRecord& rec : records) {
        if (rec.failed) continue;
        double value = rec.final_best_fitness;
        if (optima != nullptr) {
            auto it = optima->find(rec.benchmark);
            if (it != optima->end()) value = std::fabs(value - it->second);
        }
        ReportCell* cell = nullptr;
        for (auto& c : report.cells)
            if (c.benchmark == rec.benchmark && c.dimension == rec.dimension &&
                c.algorithm == rec.algorithm) {
                cell = &c;
                break;
            }
        if (cell == nullptr) {
            report.cells.push_back(
                ReportCell{rec.benchmark, rec.dimension, rec.algorithm, 0, 0, 0, 0, {}});
            cell = &report.cells.back();
        }
        cell->finals.push_back(value);
    }
    for (auto& cell : report.cells) detail::fill_stats(cell);
    return report;
}

// Execute `runs` independent runs; run i is seeded with split_seed(master_seed, i),
// so the batch is fully determined by (config, master_seed) regardless of
// `jobs`. A run that throws is returned flagged instead of aborting the batch.
inline std::vector<RunRecord> run_batch(const std::string& algorithm,
                                        const BenchmarkFactory& make_objective,
                                        const engine::EngineConfig& cfg, std::size_t runs,
                                        std::uint64_t master_seed, unsigned jobs = 1) {
    if (runs < 1) throw std::invalid_argument("run_batch: runs must be >= 1");
    std::vector<RunRecord> records(runs);
    auto work = [&](std::size_t i) {
        std::uint64_t seed = split_seed(master_seed, i);
        try {
            bench::BenchmarkSpec spec = make_objective();
            records[i] = engine::run(spec, cfg, seed, algorithm);
        } catch (const std::exception& e) {
            records[i].algorithm = algorithm;
            records[i].seed = seed;
            records[i].failed = true;
            records[i].error = e.what();
        }
    };
    if (jobs <= 1 || runs == 1) {
        for (std::size_t i = 0; i < runs; ++i) work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        unsigned worker_count = std::min<std::size_t>(jobs, runs);
        workers.reserve(worker_count);
        for (unsigned w = 0; w < worker_count; ++w)
            workers.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < runs; i = next.fetch_add(1)) work(i);
            });
        for (auto& worker : workers) worker.join();
    }
    return records;
}

inline std::vector<RunRecord> run_batch(const std::string& algorithm,
                                        const bench::BenchmarkSpec& objective,
                                        const engine::EngineConfig& cfg, std::size_t runs,
                                        std::uint64_t master_seed, unsigned jobs = 1) {
    return run_batch(
        algorithm, [&objective] { return objective; }, cfg, runs, master_seed, jobs);
}

// Cross product {algorithm} x {benchmark} x {dims} over the scalable
// functions. Every cell reuses the same master seed, so run i is paired
// across algorithms.
inline ExperimentReport scalability_sweep(
    const std::vector<std::pair<std::string, engine::EngineConfig>>& algorithms,
    const std::vector<std::string>& benchmarks, const std::vector<std::size_t>& dims,
    std::size_t runs, std::uint64_t master_seed, unsigned jobs = 1) {
    std::vector<RunRecord> all;
    for (const auto& name : benchmarks)
        if (!bench::is_scalable(name))
            throw std::invalid_argument("scalability_sweep: " + name +
                                        " has a fixed dimension and cannot be swept");
    for (std::size_t dim : dims)
        for (const auto& name : benchmarks)
            for (const auto& [label, cfg] : algorithms) {
                bench::BenchmarkSpec spec = bench::make_benchmark(name, dim);
                auto batch = run_batch(label, spec, cfg, runs, master_seed, jobs);
                all.insert(all.end(), std::make_move_iterator(batch.begin()),
                           std::make_move_iterator(batch.end()));
            }
    return summarize(all);
}

// ---------------------------------------------------------------------------
// Persistence. One record per file: five `key=value` header lines, then one
// `iteration,best_so_far` line per iteration with 17 significant digits
// (lossless double round-trip).
// ---------------------------------------------------------------------------

inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string record_to_string(const RunRecord& rec) {
    std::string out;
    out += "algorithm=" + rec.algorithm + "\n";
    out += "benchmark=" + rec.benchmark + "\n";
    out += "dimension=" + std::to_string(rec.dimension) + "\n";
    out += "seed=" + std::to_string(rec.seed) + "\n";
    out += "evaluations=" + std::to_string(rec.evaluations) + "\n";
    for (std::size_t i = 0; i < rec.best_trace.size(); ++i)
        out += std::to_string(i + 1) + "," + format_double(rec.best_trace[i]) + "\n";
    return out;
}

inline RunRecord record_from_string(const std::string& text) {
    std::istringstream in(text);
    RunRecord rec;
    std::string line;
    auto expect_header = [&](const char* key) {
        if (!std::getline(in, line) || line.rfind(key, 0) != 0)
            throw std::runtime_error(std::string("run record: missing header '") + key + "'");
        return line.substr(std::string(key).size());
    };
    rec.algorithm = expect_header("algorithm=");
    rec.benchmark = expect_header("benchmark=");
    rec.dimension = std::stoull(expect_header("dimension="));
    rec.seed = std::stoull(expect_header("seed="));
    rec.evaluations = std::stoull(expect_header("evaluations="));
    std::size_t expected_iter = 1;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("run record: malformed trace line: " + line);
        if (std::stoull(line.substr(0, comma)) != expected_iter)
            throw std::runtime_error("run record: non-contiguous iteration index: " + line);
        rec.best_trace.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
        ++expected_iter;
    }
    if (rec.best_trace.empty()) throw std::runtime_error("run record: empty trace");
    rec.final_best_fitness = rec.best_trace.back();
    return rec;
}

// write-then-rename so readers never observe a half-written file
inline void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

inline void write_record(const std::filesystem::path& path, const RunRecord& rec) {
    write_text_atomic(path, record_to_string(rec));
}

inline RunRecord read_record(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open record file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return record_from_string(buf.str());
}

inline std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "benchmark,algorithm,mean,best,sd,runs\n";
    for (const auto& cell : report.cells) {
        out += cell.benchmark + "," + cell.algorithm + "," + format_double(cell.mean) + "," +
               format_double(cell.best) + "," + format_double(cell.sd) + "," +
               std::to_string(cell.run_count) + "\n";
    }
    return out;
}

// Long-format per-run finals; the importable "result table" for comparisons,
// including algorithms produced outside this project.
inline std::string runs_table_to_csv(const ExperimentReport& report) {
    std::string out = "benchmark,algorithm,run,final\n";
    for (const auto& cell : report.cells)
        for (std::size_t i = 0; i < cell.finals.size(); ++i)
            out += cell.benchmark + "," + cell.algorithm + "," + std::to_string(i) + "," +
                   format_double(cell.finals[i]) + "\n";
    return out;
}

struct RunsTableEntry {
    std::string benchmark;
    std::string algorithm;
    std::size_t run = 0;
    double final_fitness = 0.0;
};

inline std::vector<RunsTableEntry> parse_runs_table(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "benchmark,algorithm,run,final")
        throw std::runtime_error("runs table: bad header: " + line);
    std::vector<RunsTableEntry> entries;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream fields(line);
        RunsTableEntry entry;
        std::string run_text, final_text;
        if (!std::getline(fields, entry.benchmark, ',') ||
            !std::getline(fields, entry.algorithm, ',') || !std::getline(fields, run_text, ',') ||
            !std::getline(fields, final_text))
            throw std::runtime_error("runs table: malformed line: " + line);
        entry.run = std::stoull(run_text);
        entry.final_fitness = std::strtod(final_text.c_str(), nullptr);
        entries.push_back(std::move(entry));
    }
    return entries;
}

// Scalability grid in the layout of the scalability table: one row per
// (dimension, algorithm), a Mean and SD column pair per benchmark.
inline std::string scalability_to_csv(const ExperimentReport& report,
                                      const std::vector<std::string>& benchmarks,
                                      const std::vector<std::size_t>& dims,
                                      const std::vector<std::string>& algorithms) {
    std::string out = "dim,algorithm";
    for (const auto& b : benchmarks) out += "," + b + "_mean," + b + "_sd";
    out += "\n";
    for (std::size_t dim : dims)
        for (const auto& alg : algorithms) {
            out += std::to_string(dim) + "," + alg;
            for (const auto& b : benchmarks) {
                const ReportCell* cell = nullptr;
                for (const auto& c : report.cells)
                    if (c.benchmark == b && c.dimension == dim && c.algorithm == alg) {
                        cell = &c;
                        break;
                    }
                if (cell == nullptr)
                    throw std::runtime_error("scalability grid: missing cell " + b + "/" + alg);
                out += "," + format_double(cell->mean) + "," + format_double(cell->sd);
            }
            out += "\n";
        }
    return out;
}

}  // namespace cogsa::harness
