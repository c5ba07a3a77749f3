// Command-line front end for the sightkit pipelines. Every subcommand reads
// JSON/text fixtures, so the whole tool runs offline; the news subcommand can
// optionally go live over HTTP when no fixture directory is given.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sightkit/http_provider.hpp"
#include "sightkit/sightkit.hpp"

namespace {

// Exit codes shared with the test suite.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;        // bad flags, bad documents, bad config
constexpr int kExitFetchFailed = 3;  // news source(s) down; partial output written

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sightkit::UsageError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void emit(bool as_json, const nlohmann::json& machine, const std::string& human) {
    if (as_json) {
        std::cout << machine.dump(2) << "\n";
    } else {
        std::cout << human;
    }
}

int run_intent(const std::vector<std::string>& words, bool as_json, const sightkit::Config& cfg) {
    std::string text;
    for (const auto& word : words) {
        if (!text.empty()) text += ' ';
        text += word;
    }
    auto vocab = sightkit::load_vocabulary(cfg);
    auto aliases = sightkit::load_aliases(cfg);
    sightkit::Intent intent = sightkit::parse_command(text, vocab, aliases);

    nlohmann::json machine = {{"kind", sightkit::to_string(intent.kind)}};
    std::string human = sightkit::to_string(intent.kind);
    if (intent.object) {
        machine["object"] = intent.object->name;
        machine["resolved"] = intent.object->resolved;
        human += ": " + intent.object->name;
        if (!intent.object->resolved) human += " (unresolved)";
    }
    emit(as_json, machine, human + "\n");
    return kExitOk;
}

int run_discover(const std::string& detections_path, const std::string& query, bool as_json,
                 const sightkit::Config& cfg) {
    auto vocab = sightkit::load_vocabulary(cfg);
    auto aliases = sightkit::load_aliases(cfg);
    auto doc = sightkit::DetectionDocument::load(detections_path);
    sightkit::ObjectQuery object =
        sightkit::resolve_object_phrase(sightkit::tokenize(query), vocab, aliases);
    std::string text = sightkit::discover(doc, object, vocab, cfg);

    nlohmann::json machine = {
        {"text", text}, {"query", object.name}, {"resolved", object.resolved}};
    if (object.resolved) {
        auto result = sightkit::count_regions(doc, object.name, cfg.score_threshold);
        machine["counts"] = {{"left", result.counts[0]},
                             {"straight", result.counts[1]},
                             {"right", result.counts[2]}};
    }
    emit(as_json, machine, text + "\n");
    return kExitOk;
}

int run_read_order(const std::string& layout_path, bool plain, bool as_json,
                   const sightkit::Config& cfg) {
    auto doc = sightkit::LayoutDocument::load(layout_path);
    sightkit::OrderedText ordered = sightkit::reading_order(doc, cfg);
    std::string text = sightkit::render_text(ordered);

    nlohmann::json machine = {{"lines", ordered.lines},
                              {"column_count", ordered.column_count},
                              {"removed_outlier_ids", ordered.removed_outliers},
                              {"text", text}};
    emit(as_json, machine, text);
    if (!as_json && !plain) {
        std::cerr << "columns: " << ordered.column_count << "\n";
        if (!ordered.removed_outliers.empty()) {
            std::cerr << "removed outlier block ids: "
                      << sightkit::detail::join_ids(ordered.removed_outliers) << "\n";
        }
    }
    return kExitOk;
}

int run_news(const std::string& sources_path, const std::optional<std::string>& fixtures_dir,
             const std::string& out_path, bool as_json, const sightkit::Config& cfg) {
    auto sources = sightkit::load_sources(sources_path);
    sightkit::FixtureProvider fixture_provider(fixtures_dir.value_or(""));
    sightkit::HttpProvider http_provider;
    sightkit::ContentProvider& provider =
        fixtures_dir ? static_cast<sightkit::ContentProvider&>(fixture_provider)
                     : static_cast<sightkit::ContentProvider&>(http_provider);

    sightkit::Briefing briefing = sightkit::compile_briefing(
        sources, provider, out_path, sightkit::NewsOptions::from_config(cfg));

    nlohmann::json machine = {{"text", briefing.text},
                              {"errors", briefing.errors},
                              {"notes", briefing.notes},
                              {"output_path", out_path}};
    emit(as_json, machine, briefing.text);
    for (const auto& note : briefing.notes) std::cerr << "note: " << note << "\n";
    for (const auto& error : briefing.errors) std::cerr << "error: " << error << "\n";
    return briefing.errors.empty() ? kExitOk : kExitFetchFailed;
}

int run_metrics(const std::string& which, const std::string& candidate_path,
                const std::string& reference_path, int max_n, bool as_json) {
    auto candidate = sightkit::tokenize(read_file(candidate_path));
    auto reference = sightkit::tokenize(read_file(reference_path));

    sightkit::MetricResult result;
    nlohmann::json machine;
    if (which == "bleu") {
        result = sightkit::bleu(candidate, {reference}, max_n);
        machine = {{"metric", "bleu"}, {"max_n", max_n}};
    } else {
        result = sightkit::cosine_similarity(candidate, reference);
        machine = {{"metric", "cosine"}};
    }
    machine["value"] = result.value;
    machine["degenerate"] = result.degenerate;

    char line[64];
    std::snprintf(line, sizeof(line), "%.6f\n", result.value);
    emit(as_json, machine, line);
    return kExitOk;
}

int run_decode(const std::string& scorer_path, int beam_width, bool greedy, bool as_json,
               const sightkit::Config& cfg) {
    sightkit::TableScorer scorer = sightkit::TableScorer::load(scorer_path);
    sightkit::DecodeOptions options{cfg.length_normalize};
    sightkit::Hypothesis hyp =
        greedy ? sightkit::greedy_decode(scorer, cfg.max_decode_length)
               : sightkit::beam_decode(scorer, beam_width, cfg.max_decode_length, options);
    std::string words = scorer.words(hyp.tokens);

    nlohmann::json machine = {{"tokens", hyp.tokens},
                              {"words", words},
                              {"log_score", hyp.log_score},
                              {"finished", hyp.finished},
                              {"strategy", greedy ? "greedy" : "beam"},
                              {"beam_width", greedy ? 1 : beam_width}};
    char score_line[64];
    std::snprintf(score_line, sizeof(score_line), "log-score: %.6f\n", hyp.log_score);
    emit(as_json, machine, words + "\n" + score_line);
    return kExitOk;
}

int run_dispatch(const std::string& command, const std::optional<std::string>& detections_path,
                 const std::optional<std::string>& layout_path,
                 const std::optional<std::string>& sources_path,
                 const std::optional<std::string>& fixtures_dir, const std::string& news_out,
                 bool as_json, const sightkit::Config& cfg) {
    sightkit::DispatchInputs inputs;
    if (detections_path) inputs.detections = sightkit::DetectionDocument::load(*detections_path);
    if (layout_path) inputs.layout = sightkit::LayoutDocument::load(*layout_path);
    inputs.sources_path = sources_path;
    inputs.news_output_path = news_out;

    sightkit::FixtureProvider fixture_provider(fixtures_dir.value_or(""));
    sightkit::HttpProvider http_provider;
    if (sources_path) {
        inputs.provider = fixtures_dir ? static_cast<sightkit::ContentProvider*>(&fixture_provider)
                                       : static_cast<sightkit::ContentProvider*>(&http_provider);
    }

    sightkit::Response response = sightkit::dispatch(command, inputs, cfg);
    std::string human = response.text;
    if (human.empty() || human.back() != '\n') human += '\n';
    emit(as_json, sightkit::to_json(response), human);

    bool fetch_failed = false;
    for (const auto& line : response.diagnostics) {
        std::cerr << line << "\n";
        if (line.rfind("source failed:", 0) == 0) fetch_failed = true;
    }
    return fetch_failed ? kExitFetchFailed : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"voice-assistant decision pipelines: intent, discovery, reading order, "
                 "news, metrics, decoding"};
    app.require_subcommand(1);

    std::string config_path;
    bool as_json = false;
    app.add_option("--config", config_path, "JSON config overriding pipeline constants")
        ->check(CLI::ExistingFile);
    app.add_flag("--json", as_json, "machine-readable output");

    auto* intent_cmd = app.add_subcommand("intent", "parse a spoken command");
    std::vector<std::string> intent_words;
    intent_cmd->add_option("text", intent_words, "command text")->required()->expected(-1);

    auto* discover_cmd = app.add_subcommand("discover", "locate an object in a detection document");
    std::string detections_path, query;
    discover_cmd->add_option("--detections", detections_path, "detection document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    discover_cmd->add_option("--query", query, "object phrase to look for")->required();

    auto* read_cmd = app.add_subcommand("read-order", "reconstruct reading order of OCR blocks");
    std::string layout_path;
    bool plain = false;
    read_cmd->add_option("--layout", layout_path, "layout document (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    read_cmd->add_flag("--plain", plain, "suppress the diagnostics footer on stderr");

    auto* news_cmd = app.add_subcommand("news", "compile a headline briefing");
    std::string sources_path, news_out = "news_briefing.txt";
    std::optional<std::string> fixtures_dir;
    news_cmd->add_option("--sources", sources_path, "sources file (JSON array)")
        ->required()
        ->check(CLI::ExistingFile);
    news_cmd->add_option("--fixtures", fixtures_dir, "serve URLs from this recorded-response dir")
        ->check(CLI::ExistingDirectory);
    news_cmd->add_option("--out", news_out, "briefing output file")->required();

    auto* metrics_cmd = app.add_subcommand("metrics", "text similarity scores");
    metrics_cmd->require_subcommand(1);
    std::string candidate_path, reference_path;
    int max_n = 4;
    auto add_metric = [&](const char* name, const char* help) {
        auto* sub = metrics_cmd->add_subcommand(name, help);
        sub->add_option("--candidate", candidate_path, "candidate text file")
            ->required()
            ->check(CLI::ExistingFile);
        sub->add_option("--reference", reference_path, "reference text file")
            ->required()
            ->check(CLI::ExistingFile);
        return sub;
    };
    auto* bleu_cmd = add_metric("bleu", "cumulative BLEU with brevity penalty");
    bleu_cmd->add_option("--max-n", max_n, "highest n-gram order (1..4)")
        ->check(CLI::Range(1, 4));
    add_metric("cosine", "cosine similarity of token-count vectors");

    auto* decode_cmd = app.add_subcommand("decode", "run a decoder over a scorer table");
    std::string scorer_path;
    std::optional<int> beam_width;
    bool greedy = false;
    decode_cmd->add_option("--scorer", scorer_path, "scorer table (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    decode_cmd->add_option("--beam", beam_width, "beam width (default from config)")
        ->check(CLI::PositiveNumber);
    decode_cmd->add_flag("--greedy", greedy, "greedy decode instead of beam search");

    auto* run_cmd = app.add_subcommand("run", "dispatch a command through the full pipeline");
    std::string run_command, run_news_out = "news_briefing.txt";
    std::optional<std::string> run_detections, run_layout, run_sources, run_fixtures;
    run_cmd->add_option("--command", run_command, "spoken command")->required();
    run_cmd->add_option("--detections", run_detections, "detection document (JSON)")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--layout", run_layout, "layout document (JSON)")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--sources", run_sources, "news sources file (JSON array)")
        ->check(CLI::ExistingFile);
    run_cmd->add_option("--fixtures", run_fixtures, "serve URLs from this recorded-response dir")
        ->check(CLI::ExistingDirectory);
    run_cmd->add_option("--news-out", run_news_out, "briefing output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        sightkit::Config cfg = sightkit::load_config(
            config_path.empty() ? std::nullopt : std::optional<std::string>(config_path));

        if (intent_cmd->parsed()) return run_intent(intent_words, as_json, cfg);
        if (discover_cmd->parsed()) return run_discover(detections_path, query, as_json, cfg);
        if (read_cmd->parsed()) return run_read_order(layout_path, plain, as_json, cfg);
        if (news_cmd->parsed()) return run_news(sources_path, fixtures_dir, news_out, as_json, cfg);
        if (metrics_cmd->parsed()) {
            const std::string which = metrics_cmd->get_subcommands().front()->get_name();
            return run_metrics(which, candidate_path, reference_path, max_n, as_json);
        }
        if (decode_cmd->parsed()) {
            return run_decode(scorer_path, beam_width.value_or(cfg.beam_width), greedy, as_json,
                              cfg);
        }
        if (run_cmd->parsed()) {
            return run_dispatch(run_command, run_detections, run_layout, run_sources, run_fixtures,
                                run_news_out, as_json, cfg);
        }
        std::cerr << "no subcommand selected\n";
        return kExitUsage;
    } catch (const sightkit::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}
