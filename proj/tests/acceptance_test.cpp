// Acceptance gate for the assistive pipelines. Each numbered check prints one
// PASS/FAIL line; the exit code is the number of failed checks. Everything
// runs offline: the CLI checks replay recorded fixtures, the property checks
// drive the library directly with fixed seeds.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "sightkit/sightkit.hpp"
#include "test_support.hpp"

using namespace sightkit;
using testsupport::data_path;
using testsupport::run_cli;
using testsupport::slurp;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int number, const char* title, bool ok, const std::string& detail) {
    std::printf("%s  %d. %s\n", ok ? "PASS" : "FAIL", number, title);
    if (!ok) {
        ++failures;
        if (!detail.empty()) std::printf("      %s\n", detail.c_str());
    }
}

// One timed CLI invocation; fails on wrong bytes, wrong exit or slow runs.
bool cli_golden(const std::string& args, const std::string& expected, std::string& detail) {
    auto begin = Clock::now();
    testsupport::CliResult result = run_cli(args);
    auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - begin).count();
    if (result.exit_code != 0) {
        detail = "exit " + std::to_string(result.exit_code) + " for: " + args;
        return false;
    }
    if (result.out != expected) {
        detail = "wrong output for: " + args + " (got \"" + result.out + "\")";
        return false;
    }
    if (ms >= 1000) {
        detail = "took " + std::to_string(ms) + " ms: " + args;
        return false;
    }
    return true;
}

TextBlock block_at(int id, double center_x, double y_min) {
    TextBlock block;
    block.id = id;
    block.text = "block " + std::to_string(id);
    block.box = BoundingBox{center_x - 10.0, y_min, center_x + 10.0, y_min + 20.0};
    return block;
}

// Random chain scorer over dense distributions, rows for every (state, prev).
TableScorer random_scorer(std::mt19937& rng, int vocab, int max_len) {
    TableScorer scorer(std::vector<std::string>(vocab, "w"), 0, 1, 0);
    std::uniform_real_distribution<double> weight(0.01, 1.0);
    for (int state = 0; state < max_len; ++state) {
        for (int prev = 0; prev < vocab; ++prev) {
            std::vector<double> probs(vocab);
            double total = 0.0;
            for (double& p : probs) total += (p = weight(rng));
            for (double& p : probs) p = std::log(p / total);
            scorer.add_row(state, prev, probs, state + 1);
        }
    }
    return scorer;
}

bool check_discovery_goldens(std::string& detail) {
    struct Scenario {
        const char* command;
        const char* fixture;
        const char* expected;
    };
    const Scenario scenarios[] = {
        {"can you find the laptop", "laptop_left.json", "1 laptop on your left\n"},
        {"where is my laptop", "laptop_left.json", "1 laptop on your left\n"},
        {"find the cup", "cups_left.json", "2 cup on your left\n"},
        {"where is the chair", "chairs_left_right.json",
         "1 chair on your left, 1 chair on your right\n"},
        {"can you find the chair", "chair_absent.json", "chair not found\n"},
        {"where is the extension box", "office_scene.json",
         "object does not exist in the available classes\n"},
        {"find the spoon", "spoon_straight.json", "1 spoon on your straight\n"},
        {"where is my cellphone", "cellphone_right.json", "1 cell phone on your right\n"},
    };
    for (const auto& s : scenarios) {
        std::string args = "run --command \"" + std::string(s.command) + "\" --detections " +
                           data_path(std::string("fixtures/detections/") + s.fixture);
        if (!cli_golden(args, s.expected, detail)) return false;
    }
    return true;
}

bool check_reading_goldens(std::string& detail) {
    if (!cli_golden("read-order --plain --layout " + data_path("fixtures/layout/book_cover.json"),
                    "Steve Jobs by Walter Isaacson\n", detail)) {
        return false;
    }
    return cli_golden(
        "read-order --plain --layout " + data_path("fixtures/layout/two_columns.json"),
        "CORMEN LEISERSON RIVEST STEIN\n"
        "INTRODUCTION TO\n"
        "ALGORITHMS\n"
        "DATABASE SYSTEM CONCEPTS\n"
        "SILBERSCHATZ KORTH SUDARSHAN\n",
        detail);
}

bool check_outlier_loop(std::string& detail) {
    std::mt19937 rng(101);
    std::uniform_int_distribution<int> size_dist(1, 50);
    std::uniform_real_distribution<double> center_dist(0.0, 2000.0);

    for (int trial = 0; trial < 1000; ++trial) {
        int n = size_dist(rng);
        std::vector<TextBlock> blocks;
        for (int i = 0; i < n; ++i) blocks.push_back(block_at(i + 1, center_dist(rng), 10.0 * i));

        OutlierSplit split = remove_outliers(blocks, 1.75);
        if (split.passes > n) {
            detail = "trial " + std::to_string(trial) + ": " + std::to_string(split.passes) +
                     " passes for n = " + std::to_string(n);
            return false;
        }
        if (split.kept.size() + split.removed.size() != blocks.size()) {
            detail = "trial " + std::to_string(trial) + ": blocks lost or duplicated";
            return false;
        }
        if (n <= 4 && !split.removed.empty()) {
            detail = "trial " + std::to_string(trial) + ": removal from a set of " +
                     std::to_string(n);
            return false;
        }
    }

    // small sets can never reach |z| = 1.75 (max population z is sqrt(n-1))
    for (int n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<TextBlock> blocks;
            for (int i = 0; i < n; ++i) blocks.push_back(block_at(i + 1, center_dist(rng), 0.0));
            if (!remove_outliers(blocks, 1.75).removed.empty()) {
                detail = "removal from a set of " + std::to_string(n);
                return false;
            }
        }
    }

    std::vector<TextBlock> hand = {block_at(1, 0, 0), block_at(2, 0, 30), block_at(3, 0, 60),
                                   block_at(4, 0, 90), block_at(5, 100, 120)};
    OutlierSplit split = remove_outliers(hand, 1.75);
    if (split.removed.size() != 1 || split.removed[0].id != 5 || split.kept.size() != 4) {
        detail = "[0,0,0,0,100] did not remove exactly the 100 block";
        return false;
    }
    return true;
}

bool check_kmeans_oracle(std::string& detail) {
    std::mt19937 rng(102);
    std::uniform_int_distribution<int> k_dist(1, 3);
    std::uniform_real_distribution<double> jitter(0.0, 30.0);

    for (int trial = 0; trial < 300; ++trial) {
        // equal-size clusters, inter-cluster gap far above the diameter
        int k = k_dist(rng);
        int m = std::uniform_int_distribution<int>(1, 12 / k)(rng);
        std::vector<double> points;
        for (int c = 0; c < k; ++c) {
            for (int i = 0; i < m; ++i) points.push_back(1000.0 * c + jitter(rng));
        }
        std::shuffle(points.begin(), points.end(), rng);

        ClusterModel lloyd = kmeans_1d(points, k);
        ClusterModel exact = brute_force_clusters(points, k);
        if (lloyd.assignment != exact.assignment) {
            detail = "trial " + std::to_string(trial) + ": assignment differs from brute force";
            return false;
        }
        if (std::abs(lloyd.inertia - exact.inertia) > 1e-9) {
            detail = "trial " + std::to_string(trial) + ": inertia gap " +
                     std::to_string(std::abs(lloyd.inertia - exact.inertia));
            return false;
        }
        for (std::size_t i = 1; i < lloyd.inertia_history.size(); ++i) {
            if (lloyd.inertia_history[i] > lloyd.inertia_history[i - 1] + 1e-9) {
                detail = "trial " + std::to_string(trial) + ": inertia rose between iterations";
                return false;
            }
        }
    }
    return true;
}

bool check_decoders(std::string& detail) {
    std::mt19937 rng(103);
    std::uniform_int_distribution<int> vocab_dist(2, 6);
    std::uniform_int_distribution<int> len_dist(1, 8);

    for (int trial = 0; trial < 100; ++trial) {
        int max_len = len_dist(rng);
        TableScorer scorer = random_scorer(rng, vocab_dist(rng), max_len);
        Hypothesis greedy = greedy_decode(scorer, max_len);
        Hypothesis beam = beam_decode(scorer, 1, max_len);
        if (beam.tokens != greedy.tokens ||
            std::abs(beam.log_score - greedy.log_score) > 1e-9) {
            detail = "trial " + std::to_string(trial) + ": beam(1) differs from greedy";
            return false;
        }
        if (std::abs(replay_log_score(scorer, beam.tokens) - beam.log_score) > 1e-9) {
            detail = "trial " + std::to_string(trial) + ": replay mismatch on beam(1)";
            return false;
        }
    }

    std::uniform_int_distribution<int> small_vocab(2, 4);
    std::uniform_int_distribution<int> small_len(1, 5);
    for (int trial = 0; trial < 60; ++trial) {
        int vocab = small_vocab(rng);
        int max_len = small_len(rng);
        TableScorer scorer = random_scorer(rng, vocab, max_len);
        int width = 1;
        for (int p = 0; p < max_len; ++p) width *= vocab;

        Hypothesis beam = beam_decode(scorer, width, max_len);
        Hypothesis exact = exhaustive_decode(scorer, max_len);
        if (beam.tokens != exact.tokens || std::abs(beam.log_score - exact.log_score) > 1e-9) {
            detail = "trial " + std::to_string(trial) + ": wide beam differs from exhaustive";
            return false;
        }
        if (std::abs(replay_log_score(scorer, exact.tokens) - exact.log_score) > 1e-9) {
            detail = "trial " + std::to_string(trial) + ": replay mismatch on exhaustive";
            return false;
        }
    }

    TableScorer trap = TableScorer::load(data_path("fixtures/scorers/greedy_trap.json"));
    Hypothesis trapped = greedy_decode(trap, 4);
    Hypothesis escaped = beam_decode(trap, 3, 4);
    if (!(escaped.log_score > trapped.log_score)) {
        detail = "beam(3) failed to beat greedy on the trap fixture";
        return false;
    }
    if (std::abs(replay_log_score(trap, escaped.tokens) - escaped.log_score) > 1e-9) {
        detail = "replay mismatch on the trap fixture";
        return false;
    }
    return true;
}

bool check_metrics_oracle(std::string& detail) {
    auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9; };

    if (!close(bleu(tokenize("the the the"), {tokenize("the cat")}, 1).value, 1.0 / 3.0)) {
        detail = "clipped unigram case is off";
        return false;
    }
    if (!close(bleu(tokenize("a b c d"), {tokenize("a b x d")}, 2).value, 0.5)) {
        detail = "cumulative bigram case is off";
        return false;
    }
    if (!close(cosine_similarity(tokenize("a a b"), tokenize("a b b")).value, 0.8)) {
        detail = "cosine count-vector case is off";
        return false;
    }
    TokenList sentence = tokenize("a quick brown fox");
    for (int max_n = 1; max_n <= 4; ++max_n) {
        if (!close(bleu(sentence, {sentence}, max_n).value, 1.0)) {
            detail = "identity bleu is not 1.0 at max_n " + std::to_string(max_n);
            return false;
        }
    }
    if (!close(cosine_similarity(sentence, sentence).value, 1.0)) {
        detail = "identity cosine is not 1.0";
        return false;
    }
    return true;
}

bool check_news_determinism(std::string& detail) {
    std::vector<NewsSource> sources = load_sources(data_path("fixtures/news/sources.json"));
    FixtureProvider provider(data_path("fixtures/news/store"));
    std::string golden = slurp(data_path("fixtures/news/golden_briefing.txt"));
    std::string out_path = (std::filesystem::temp_directory_path() /
                            "sightkit_acceptance_briefing.txt").string();

    for (int run = 0; run < 3; ++run) {
        Briefing briefing = compile_briefing(sources, provider, out_path);
        if (briefing.text != golden) {
            detail = "briefing bytes differ from the golden file on run " + std::to_string(run);
            return false;
        }
        if (slurp(out_path) != golden) {
            detail = "written briefing file differs from the golden bytes";
            return false;
        }
    }

    // cap and pubDate filtering on the 9-dated / 3-undated feed
    NewsSource feed{"Daily Fixture", "http://fixture.test/rss.xml", std::nullopt};
    std::vector<Article> articles = fetch_rss(feed, provider, std::chrono::milliseconds(100));
    if (articles.size() != 5) {
        detail = "per-source cap: expected 5 articles, got " + std::to_string(articles.size());
        return false;
    }
    const char* expected[] = {"Harbour ferry schedule changes announced",
                              "City marathon draws record crowd",
                              "Library expands weekend opening hours",
                              "Transit fares frozen for the year",
                              "Local bakery wins national & regional award"};
    for (int i = 0; i < 5; ++i) {
        if (!articles[i].published) {
            detail = "an undated item slipped through the pubDate filter";
            return false;
        }
        if (articles[i].title != expected[i]) {
            detail = "article " + std::to_string(i) + " is \"" + articles[i].title + "\"";
            return false;
        }
    }
    return true;
}

bool check_permutation_invariant(std::string& detail) {
    std::mt19937 rng(104);
    std::uniform_int_distribution<int> size_dist(1, 30);
    std::uniform_real_distribution<double> center_dist(20.0, 1980.0);
    std::uniform_real_distribution<double> y_dist(0.0, 1900.0);
    Config cfg;

    for (int trial = 0; trial < 1000; ++trial) {
        LayoutDocument doc;
        doc.image_width = 2000;
        doc.image_height = 2000;
        int n = size_dist(rng);
        for (int i = 0; i < n; ++i) {
            doc.blocks.push_back(block_at(i + 1, center_dist(rng), y_dist(rng)));
        }

        OrderedText ordered = reading_order(doc, cfg);
        std::multiset<std::string> produced(ordered.lines.begin(), ordered.lines.end());
        for (int id : ordered.removed_outliers) produced.insert("block " + std::to_string(id));
        std::multiset<std::string> expected;
        for (const auto& block : doc.blocks) expected.insert(block.text);
        if (produced != expected) {
            detail = "trial " + std::to_string(trial) +
                     ": lines + removed ids are not a permutation of the input blocks";
            return false;
        }

        LayoutDocument shuffled = doc;
        std::shuffle(shuffled.blocks.begin(), shuffled.blocks.end(), rng);
        OrderedText again = reading_order(shuffled, cfg);
        if (again.lines != ordered.lines || again.removed_outliers != ordered.removed_outliers ||
            again.column_count != ordered.column_count) {
            detail = "trial " + std::to_string(trial) + ": output depends on block order";
            return false;
        }
    }
    return true;
}

}  // namespace

int main() {
    auto begin = Clock::now();
    std::string detail;

    detail.clear(); report(1, "golden discovery responses", check_discovery_goldens(detail), detail);
    detail.clear(); report(2, "golden reading order", check_reading_goldens(detail), detail);
    detail.clear(); report(3, "outlier loop properties", check_outlier_loop(detail), detail);
    detail.clear(); report(4, "k-means matches the exact oracle", check_kmeans_oracle(detail), detail);
    detail.clear(); report(5, "decoder equivalences", check_decoders(detail), detail);
    detail.clear(); report(6, "metrics oracle values", check_metrics_oracle(detail), detail);
    detail.clear(); report(7, "news determinism and caps", check_news_determinism(detail), detail);
    detail.clear(); report(8, "reading order is permutation invariant",
                           check_permutation_invariant(detail), detail);

    double seconds = std::chrono::duration<double>(Clock::now() - begin).count();
    char budget[96];
    std::snprintf(budget, sizeof(budget), "whole gate ran offline in %.1f s", seconds);
    report(9, "suite finishes under sixty seconds", seconds < 60.0, budget);

    std::printf("%d of 9 criteria passed (%.1f s)\n", 9 - failures, seconds);
    return failures;
}
