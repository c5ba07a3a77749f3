#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "sightkit/errors.hpp"
#include "sightkit/tokenize.hpp"

namespace sightkit {

// Metric value plus a flag marking degenerate input (empty candidate or
// empty reference), which scores 0 rather than erroring.
struct MetricResult {
    double value = 0.0;
    bool degenerate = false;
};

struct BleuOptions {
    bool smooth = false;  // add-one smoothing on n >= 2 precisions
};

namespace detail {

// n-grams keyed as separator-joined strings; counts per distinct n-gram.
inline std::unordered_map<std::string, int> ngram_counts(const TokenList& tokens, int n) {
    std::unordered_map<std::string, int> counts;
    if (static_cast<int>(tokens.size()) < n) return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string key;
        for (int j = 0; j < n; ++j) {
            if (j > 0) key += '\x1f';
            key += tokens[i + j];
        }
        ++counts[key];
    }
    return counts;
}

}  // namespace detail

// Cumulative BLEU: geometric mean of clipped n-gram precisions for
// n = 1..max_n with uniform weights, scaled by the brevity penalty against
// the closest reference length. Orders longer than the candidate are vacuous
// and excluded, so a candidate always scores 1 against itself. Any zero
// precision zeroes the score unless smoothing is enabled.
inline MetricResult bleu(const TokenList& candidate, const std::vector<TokenList>& references,
                         int max_n, BleuOptions options = {}) {
    if (max_n < 1 || max_n > 4) throw ValidationError("bleu: max_n must lie in 1..4");
    if (candidate.empty()) return {0.0, true};
    bool any_reference = false;
    for (const auto& ref : references) {
        if (!ref.empty()) any_reference = true;
    }
    if (!any_reference) return {0.0, true};

    const int c = static_cast<int>(candidate.size());

    double log_precision_sum = 0.0;
    int levels = 0;
    for (int n = 1; n <= max_n; ++n) {
        auto cand_counts = detail::ngram_counts(candidate, n);
        int total = 0;
        for (const auto& [key, count] : cand_counts) total += count;
        if (total == 0) break;  // candidate has fewer than n tokens

        std::unordered_map<std::string, int> max_ref;
        for (const auto& ref : references) {
            for (const auto& [key, count] : detail::ngram_counts(ref, n)) {
                auto& slot = max_ref[key];
                if (count > slot) slot = count;
            }
        }
        int clipped = 0;
        for (const auto& [key, count] : cand_counts) {
            auto it = max_ref.find(key);
            if (it != max_ref.end()) clipped += std::min(count, it->second);
        }

        double numerator = clipped;
        double denominator = total;
        if (options.smooth && n >= 2) {
            numerator += 1.0;
            denominator += 1.0;
        }
        if (numerator <= 0.0) return {0.0, false};
        log_precision_sum += std::log(numerator / denominator);
        ++levels;
    }

    // Closest reference length; ties resolve to the shorter reference.
    int r = 0;
    long best_gap = -1;
    for (const auto& ref : references) {
        if (ref.empty()) continue;
        int len = static_cast<int>(ref.size());
        long gap = std::labs(static_cast<long>(len) - c);
        if (best_gap < 0 || gap < best_gap || (gap == best_gap && len < r)) {
            best_gap = gap;
            r = len;
        }
    }
    double brevity = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / c);

    return {brevity * std::exp(log_precision_sum / levels), false};
}

// Cosine of the token-count vectors over the union vocabulary. Order-free by
// construction.
inline MetricResult cosine_similarity(const TokenList& a, const TokenList& b) {
    if (a.empty() || b.empty()) return {0.0, true};
    std::unordered_map<std::string, int> counts_a, counts_b;
    for (const auto& token : a) ++counts_a[token];
    for (const auto& token : b) ++counts_b[token];

    double dot = 0.0;
    for (const auto& [token, count] : counts_a) {
        auto it = counts_b.find(token);
        if (it != counts_b.end()) dot += static_cast<double>(count) * it->second;
    }
    double norm_a = 0.0, norm_b = 0.0;
    for (const auto& [token, count] : counts_a) norm_a += static_cast<double>(count) * count;
    for (const auto& [token, count] : counts_b) norm_b += static_cast<double>(count) * count;

    return {dot / (std::sqrt(norm_a) * std::sqrt(norm_b)), false};
}

}  // namespace sightkit
