#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sightkit/errors.hpp"

namespace sightkit {

// Next-token probability source. A decode walks states: step() yields the
// log-distribution over the next token given the previous one, plus the
// successor state. Vectors must be valid log-distributions.
class TokenScorer {
public:
    virtual ~TokenScorer() = default;
    virtual int vocab_size() const = 0;
    virtual int start_token() const = 0;
    virtual int end_token() const = 0;
    virtual int start_state() const = 0;
    virtual std::pair<std::vector<double>, int> step(int state, int prev_token) const = 0;
};

// A (possibly partial) decoded sequence. finished holds exactly when the last
// token is the end token or the sequence hit the length cap.
struct Hypothesis {
    std::vector<int> tokens;
    double log_score = 0.0;
    bool finished = false;
};

struct DecodeOptions {
    bool length_normalize = false;  // rank finished hypotheses by score/length
};

namespace detail {

inline double ranking_score(const Hypothesis& hyp, const DecodeOptions& options) {
    if (!options.length_normalize || hyp.tokens.empty()) return hyp.log_score;
    return hyp.log_score / static_cast<double>(hyp.tokens.size());
}

// Higher score wins; equal scores fall back to the lexicographically smaller
// token sequence so every decoder is deterministic.
inline bool better_hypothesis(const Hypothesis& a, const Hypothesis& b,
                              const DecodeOptions& options = {}) {
    double sa = ranking_score(a, options);
    double sb = ranking_score(b, options);
    if (sa != sb) return sa > sb;
    return a.tokens < b.tokens;
}

}  // namespace detail

// Argmax decoding; ties take the lowest token id.
inline Hypothesis greedy_decode(const TokenScorer& scorer, int max_len) {
    if (max_len < 1) throw ValidationError("greedy_decode: max_len must be >= 1");
    Hypothesis hyp;
    int state = scorer.start_state();
    int prev = scorer.start_token();
    while (static_cast<int>(hyp.tokens.size()) < max_len) {
        auto [log_probs, next_state] = scorer.step(state, prev);
        int best = 0;
        for (int t = 1; t < scorer.vocab_size(); ++t) {
            if (log_probs[t] > log_probs[best]) best = t;
        }
        hyp.tokens.push_back(best);
        hyp.log_score += log_probs[best];
        if (best == scorer.end_token()) break;
        state = next_state;
        prev = best;
    }
    hyp.finished = true;
    return hyp;
}

// Standard beam search without length normalization (unless asked for):
// every live hypothesis expands over each token of nonzero probability, the
// top beam_width candidates survive, finished ones retire into a pool, and
// the pool maximum is the answer. Zero-probability branches are skipped: no
// continuation of them can outrank a finite-score hypothesis, and sparse
// transition tables only define rows along possible paths.
inline Hypothesis beam_decode(const TokenScorer& scorer, int beam_width, int max_len,
                              DecodeOptions options = {}) {
    if (beam_width < 1) throw ValidationError("beam_decode: beam_width must be >= 1");
    if (max_len < 1) throw ValidationError("beam_decode: max_len must be >= 1");

    struct Beam {
        std::vector<int> tokens;
        double log_score = 0.0;
        int state = 0;
    };

    std::vector<Beam> live{Beam{{}, 0.0, scorer.start_state()}};
    std::vector<Hypothesis> pool;

    while (!live.empty()) {
        std::vector<Beam> candidates;
        candidates.reserve(live.size() * scorer.vocab_size());
        for (const auto& beam : live) {
            int prev = beam.tokens.empty() ? scorer.start_token() : beam.tokens.back();
            auto [log_probs, next_state] = scorer.step(beam.state, prev);
            for (int t = 0; t < scorer.vocab_size(); ++t) {
                if (log_probs[t] == -std::numeric_limits<double>::infinity()) continue;
                Beam next = beam;
                next.tokens.push_back(t);
                next.log_score += log_probs[t];
                next.state = next_state;
                candidates.push_back(std::move(next));
            }
        }
        std::sort(candidates.begin(), candidates.end(), [](const Beam& a, const Beam& b) {
            if (a.log_score != b.log_score) return a.log_score > b.log_score;
            return a.tokens < b.tokens;
        });
        if (static_cast<int>(candidates.size()) > beam_width) candidates.resize(beam_width);

        live.clear();
        for (auto& cand : candidates) {
            bool ended = cand.tokens.back() == scorer.end_token() ||
                         static_cast<int>(cand.tokens.size()) >= max_len;
            if (ended) {
                pool.push_back(Hypothesis{std::move(cand.tokens), cand.log_score, true});
            } else {
                live.push_back(std::move(cand));
            }
        }
    }

    if (pool.empty()) throw Error("beam_decode: no hypothesis terminated");
    Hypothesis best = pool.front();
    for (std::size_t i = 1; i < pool.size(); ++i) {
        if (detail::better_hypothesis(pool[i], best, options)) best = pool[i];
    }
    return best;
}

// Global optimum over every nonzero-probability terminated sequence up to
// max_len, with the same tie rule as the beam. Test oracle; guarded against
// blowup.
inline Hypothesis exhaustive_decode(const TokenScorer& scorer, int max_len) {
    if (max_len < 1) throw ValidationError("exhaustive_decode: max_len must be >= 1");
    double bound = std::pow(static_cast<double>(scorer.vocab_size()), max_len);
    if (bound > 1e6) {
        throw ValidationError("exhaustive_decode: vocab_size^max_len exceeds the 1e6 guard");
    }

    Hypothesis best;
    bool have_best = false;
    std::vector<int> tokens;

    auto consider = [&](double score) {
        Hypothesis cand{tokens, score, true};
        if (!have_best || detail::better_hypothesis(cand, best)) {
            best = std::move(cand);
            have_best = true;
        }
    };

    auto search = [&](auto&& self, int state, int prev, double score) -> void {
        auto [log_probs, next_state] = scorer.step(state, prev);
        for (int t = 0; t < scorer.vocab_size(); ++t) {
            if (log_probs[t] == -std::numeric_limits<double>::infinity()) continue;
            tokens.push_back(t);
            double next_score = score + log_probs[t];
            if (t == scorer.end_token() || static_cast<int>(tokens.size()) >= max_len) {
                consider(next_score);
            } else {
                self(self, next_state, t, next_score);
            }
            tokens.pop_back();
        }
    };
    search(search, scorer.start_state(), scorer.start_token(), 0.0);
    if (!have_best) throw Error("exhaustive_decode: no hypothesis terminated");
    return best;
}

// Sum of the scorer's step log-probabilities along a token sequence.
inline double replay_log_score(const TokenScorer& scorer, const std::vector<int>& tokens) {
    double total = 0.0;
    int state = scorer.start_state();
    int prev = scorer.start_token();
    for (int token : tokens) {
        auto [log_probs, next_state] = scorer.step(state, prev);
        total += log_probs[token];
        state = next_state;
        prev = token;
    }
    return total;
}

// Table-driven scorer loaded from a JSON fixture: a vocabulary plus explicit
// per-(state, previous-token) probability rows.
class TableScorer : public TokenScorer {
public:
    TableScorer(std::vector<std::string> vocabulary, int start_token, int end_token,
                int start_state)
        : vocabulary_(std::move(vocabulary)),
          start_token_(start_token),
          end_token_(end_token),
          start_state_(start_state) {}

    int vocab_size() const override { return static_cast<int>(vocabulary_.size()); }
    int start_token() const override { return start_token_; }
    int end_token() const override { return end_token_; }
    int start_state() const override { return start_state_; }

    std::pair<std::vector<double>, int> step(int state, int prev_token) const override {
        auto it = rows_.find(key(state, prev_token));
        if (it == rows_.end()) {
            throw ValidationError("scorer has no transition for state " + std::to_string(state) +
                                  ", previous token " + std::to_string(prev_token));
        }
        return {it->second.log_probs, it->second.next_state};
    }

    void add_row(int state, int prev_token, std::vector<double> log_probs, int next_state) {
        if (static_cast<int>(log_probs.size()) != vocab_size()) {
            throw ValidationError("scorer row length does not match vocabulary size");
        }
        double sum = 0.0;
        for (double lp : log_probs) sum += std::exp(lp);
        if (std::abs(sum - 1.0) > 1e-6) {
            throw ValidationError("scorer row for state " + std::to_string(state) +
                                  ", previous token " + std::to_string(prev_token) +
                                  " is not a normalized distribution");
        }
        rows_[key(state, prev_token)] = Row{std::move(log_probs), next_state};
    }

    const std::string& word(int token) const { return vocabulary_.at(token); }

    // Words of a decoded sequence, start/end markers omitted.
    std::string words(const std::vector<int>& tokens) const {
        std::string out;
        for (int token : tokens) {
            if (token == start_token_ || token == end_token_) continue;
            if (!out.empty()) out += ' ';
            out += word(token);
        }
        return out;
    }

    static TableScorer from_json(const nlohmann::json& doc);
    static TableScorer load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open scorer file: " + path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("scorer file " + path + ": " + e.what());
        }
        return from_json(doc);
    }

private:
    struct Row {
        std::vector<double> log_probs;
        int next_state = 0;
    };

    static std::uint64_t key(int state, int prev_token) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(state)) << 32) |
               static_cast<std::uint32_t>(prev_token);
    }

    std::vector<std::string> vocabulary_;
    int start_token_;
    int end_token_;
    int start_state_;
    std::unordered_map<std::uint64_t, Row> rows_;
};

inline TableScorer TableScorer::from_json(const nlohmann::json& doc) {
    try {
        std::vector<std::string> vocabulary = doc.at("vocabulary").get<std::vector<std::string>>();
        if (vocabulary.empty()) throw ValidationError("scorer: vocabulary must be non-empty");
        int vocab = static_cast<int>(vocabulary.size());
        int start_token = doc.at("start_token").get<int>();
        int end_token = doc.at("end_token").get<int>();
        int start_state = doc.value("start_state", 0);
        if (start_token < 0 || start_token >= vocab || end_token < 0 || end_token >= vocab) {
            throw ValidationError("scorer: start/end token ids out of range");
        }

        TableScorer scorer(std::move(vocabulary), start_token, end_token, start_state);
        for (const auto& row : doc.at("transitions")) {
            int state = row.at("state").get<int>();
            int prev = row.at("prev").get<int>();
            int next_state = row.at("next_state").get<int>();
            std::vector<double> log_probs;
            if (row.contains("log_probs")) {
                for (const auto& value : row.at("log_probs")) {
                    // null stands in for log(0); JSON cannot carry -inf
                    log_probs.push_back(value.is_null()
                                            ? -std::numeric_limits<double>::infinity()
                                            : value.get<double>());
                }
            } else {
                for (const auto& value : row.at("probs")) {
                    double p = value.get<double>();
                    if (p < 0.0) throw ValidationError("scorer: negative probability");
                    log_probs.push_back(p == 0.0 ? -std::numeric_limits<double>::infinity()
                                                 : std::log(p));
                }
            }
            scorer.add_row(state, prev, std::move(log_probs), next_state);
        }
        return scorer;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("scorer fixture: ") + e.what());
    }
}

}  // namespace sightkit
