#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cogsa::stats {

// k algorithms measured over n paired blocks (a block is a run index or a
// benchmark, the caller decides). blocks[b][j] is algorithm j's value in
// block b; lower is better throughout.
struct PairedResults {
    std::vector<std::string> algorithms;
    std::vector<std::vector<double>> blocks;

    void validate() const {
        if (algorithms.size() < 2)
            throw std::invalid_argument("PairedResults: need k >= 2 algorithms");
        if (blocks.size() < 2) throw std::invalid_argument("PairedResults: need n >= 2 blocks");
        for (const auto& block : blocks)
            if (block.size() != algorithms.size())
                throw std::invalid_argument("PairedResults: ragged block");
    }

    std::size_t algorithm_index(const std::string& name) const {
        auto it = std::find(algorithms.begin(), algorithms.end(), name);
        if (it == algorithms.end())
            throw std::invalid_argument("PairedResults: unknown algorithm " + name);
        return static_cast<std::size_t>(it - algorithms.begin());
    }
};

namespace detail {

// Ascending mid-ranks of one block (rank 1 = smallest; ties share the mean of
// the ranks they span).
inline std::vector<double> midranks(std::span<const double> values) {
    std::size_t k = values.size();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(k);
    std::size_t i = 0;
    while (i < k) {
        std::size_t j = i;
        while (j + 1 < k && values[order[j + 1]] == values[order[i]]) ++j;
        double shared = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = shared;
        i = j + 1;
    }
    return ranks;
}

// Sum of (t^3 - t) over the tie groups of one block.
inline double tie_term(std::span<const double> values) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double total = 0.0;
    std::size_t i = 0;
    while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        auto t = static_cast<double>(j - i + 1);
        total += t * t * t - t;
        i = j + 1;
    }
    return total;
}

inline std::vector<double> rank_column_sums(const PairedResults& data) {
    std::size_t k = data.algorithms.size();
    std::vector<double> sums(k, 0.0);
    for (const auto& block : data.blocks) {
        std::vector<double> ranks = midranks(block);
        for (std::size_t j = 0; j < k; ++j) sums[j] += ranks[j];
    }
    return sums;
}

// Two-sided standard normal tail probability of |z|.
inline double normal_two_sided_p(double z) { return std::erfc(std::fabs(z) / std::sqrt(2.0)); }

}  // namespace detail

struct FriedmanResult {
    double chi_square = 0.0;
    std::size_t dof = 0;
    bool degenerate = false;  // every block fully tied; statistic pinned to 0
};

// Tie-corrected Friedman statistic:
//   chi^2 = 12 * sum_j (R_j - n(k+1)/2)^2 / (n*k*(k+1) - sum_ties(t^3 - t)/(k-1))
// where R_j are rank column sums over n blocks of k mid-ranked values.
inline FriedmanResult friedman_statistic(const PairedResults& data) {
    data.validate();
    std::size_t k = data.algorithms.size();
    auto n = static_cast<double>(data.blocks.size());
    auto kd = static_cast<double>(k);

    std::vector<double> rank_sums = detail::rank_column_sums(data);
    double ties = 0.0;
    for (const auto& block : data.blocks) ties += detail::tie_term(block);

    FriedmanResult result;
    result.dof = k - 1;
    double denominator = n * kd * (kd + 1.0) - ties / (kd - 1.0);
    if (denominator <= 0.0) {
        result.degenerate = true;  // all blocks fully tied
        return result;
    }
    double numerator = 0.0;
    double expected = n * (kd + 1.0) / 2.0;
    for (double r : rank_sums) numerator += (r - expected) * (r - expected);
    result.chi_square = 12.0 * numerator / denominator;
    return result;
}

// Pairwise post-hoc against a reference column: z = (Rbar_ref - Rbar_j) /
// sqrt(k(k+1)/(6n)), two-sided normal p, Bonferroni-multiplied by the k-1
// comparisons and capped at 1.
inline std::map<std::string, double> pairwise_posthoc(const PairedResults& data,
                                                      const std::string& reference,
                                                      double level = 0.01) {
    data.validate();
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("pairwise_posthoc: level must lie in (0, 1)");
    std::size_t ref = data.algorithm_index(reference);
    std::size_t k = data.algorithms.size();
    auto n = static_cast<double>(data.blocks.size());
    auto kd = static_cast<double>(k);

    std::vector<double> rank_sums = detail::rank_column_sums(data);
    double se = std::sqrt(kd * (kd + 1.0) / (6.0 * n));
    std::map<std::string, double> p_values;
    for (std::size_t j = 0; j < k; ++j) {
        if (j == ref) continue;
        double z = (rank_sums[ref] - rank_sums[j]) / n / se;
        double p = detail::normal_two_sided_p(z) * static_cast<double>(k - 1);
        p_values[data.algorithms[j]] = std::min(1.0, p);
    }
    return p_values;
}

// p-value formatting used by the exported tables: two significant digits in
// scientific notation, with the conventional "<2E-16" floor.
inline std::string format_p(double p) {
    if (p < 2e-16) return "<2E-16";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1E", p);
    return buf;
}

struct SignificanceTable {
    std::string reference;
    std::vector<std::string> competitors;                       // column order
    std::vector<std::pair<std::string, std::vector<double>>> rows;  // benchmark -> p per column
};

// One row per benchmark, one column per competitor; cell = Bonferroni p of
// competitor vs the reference on that benchmark's paired blocks. All inputs
// must agree on algorithms and run counts.
inline SignificanceTable significance_table(
    const std::vector<std::pair<std::string, PairedResults>>& per_benchmark,
    const std::string& reference) {
    if (per_benchmark.empty())
        throw std::invalid_argument("significance_table: no benchmarks given");
    SignificanceTable table;
    table.reference = reference;
    const PairedResults& first = per_benchmark.front().second;
    first.validate();
    std::size_t runs = first.blocks.size();
    for (const auto& name : first.algorithms)
        if (name != reference) table.competitors.push_back(name);

    for (const auto& [benchmark, data] : per_benchmark) {
        data.validate();
        if (data.algorithms != first.algorithms)
            throw std::invalid_argument("significance_table: algorithm sets differ at " +
                                        benchmark);
        if (data.blocks.size() != runs)
            throw std::invalid_argument("significance_table: ragged run counts at " + benchmark);
        auto p_values = pairwise_posthoc(data, reference);
        std::vector<double> row;
        row.reserve(table.competitors.size());
        for (const auto& name : table.competitors) row.push_back(p_values.at(name));
        table.rows.emplace_back(benchmark, std::move(row));
    }
    return table;
}

inline std::string significance_to_csv(const SignificanceTable& table) {
    std::string out = "benchmark";
    for (const auto& name : table.competitors) out += "," + name;
    out += "\n";
    for (const auto& [benchmark, row] : table.rows) {
        out += benchmark;
        for (double p : row) out += "," + format_p(p);
        out += "\n";
    }
    return out;
}

}  // namespace cogsa::stats
