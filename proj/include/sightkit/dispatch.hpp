#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sightkit/config.hpp"
#include "sightkit/discovery.hpp"
#include "sightkit/errors.hpp"
#include "sightkit/intent.hpp"
#include "sightkit/layout.hpp"
#include "sightkit/news.hpp"
#include "sightkit/vocabulary.hpp"

namespace sightkit {

// What the assistant says plus which pipeline said it.
struct Response {
    std::string text;
    std::string module;
    std::vector<std::string> diagnostics;
};

// Everything a dispatch may need; only the documents the resolved intent
// requires have to be present.
struct DispatchInputs {
    std::optional<DetectionDocument> detections;
    std::optional<LayoutDocument> layout;
    std::optional<std::string> sources_path;
    ContentProvider* provider = nullptr;
    std::string news_output_path = "news_briefing.txt";
};

inline const char* kRepromptResponse = "command not recognized, please give the command again";
inline const char* kNoTextResponse = "no text detected";
inline const char* kSceneUnavailableResponse =
    "scene description requires an external caption model; run the decode demo with a scorer file";

inline ClassVocabulary load_vocabulary(const Config& cfg) {
    return cfg.vocabulary_path.empty() ? ClassVocabulary::coco80()
                                       : ClassVocabulary::from_file(cfg.vocabulary_path);
}

inline AliasTable load_aliases(const Config& cfg) {
    return cfg.alias_path.empty() ? AliasTable::defaults() : AliasTable::from_file(cfg.alias_path);
}

namespace detail {

inline std::string join_ids(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(ids[i]);
    }
    return out;
}

}  // namespace detail

// Routes a spoken command to the pipeline it names. Same command, inputs and
// config always produce the same Response.
inline Response dispatch(const std::string& command, const DispatchInputs& inputs,
                         const Config& cfg) {
    cfg.validate();
    ClassVocabulary vocab = load_vocabulary(cfg);
    AliasTable aliases = load_aliases(cfg);
    Intent intent = parse_command(normalize_command(command), vocab, aliases);

    switch (intent.kind) {
        case IntentKind::ObjectDiscovery: {
            if (!inputs.detections) {
                throw UsageError("object discovery requires a detections document");
            }
            Response response;
            response.module = "discovery";
            response.text = discover(*inputs.detections, *intent.object, vocab, cfg);
            if (!intent.object->resolved) {
                response.diagnostics.push_back("unresolved object phrase: \"" +
                                               intent.object->name + "\"");
            }
            return response;
        }
        case IntentKind::ReadText: {
            if (!inputs.layout) throw UsageError("text reading requires a layout document");
            Response response;
            response.module = "reading-assistant";
            OrderedText ordered = reading_order(*inputs.layout, cfg);
            response.text = render_text(ordered);
            if (response.text.empty()) response.text = kNoTextResponse;
            response.diagnostics.push_back("columns: " + std::to_string(ordered.column_count));
            if (!ordered.removed_outliers.empty()) {
                response.diagnostics.push_back("removed outlier block ids: " +
                                               detail::join_ids(ordered.removed_outliers));
            }
            return response;
        }
        case IntentKind::News: {
            if (!inputs.sources_path) throw UsageError("news requires a sources file");
            if (!inputs.provider) throw UsageError("news requires a content provider");
            Response response;
            response.module = "news";
            std::vector<NewsSource> sources = load_sources(*inputs.sources_path);
            Briefing briefing = compile_briefing(sources, *inputs.provider,
                                                 inputs.news_output_path,
                                                 NewsOptions::from_config(cfg));
            response.text = briefing.text;
            for (const auto& note : briefing.notes) response.diagnostics.push_back(note);
            for (const auto& error : briefing.errors) {
                response.diagnostics.push_back("source failed: " + error);
            }
            return response;
        }
        case IntentKind::SceneRecognition:
            return Response{kSceneUnavailableResponse, "scene-recognition", {}};
        case IntentKind::Unknown:
        default:
            return Response{kRepromptResponse, "dispatcher", {}};
    }
}

inline nlohmann::json to_json(const Response& response) {
    return {{"module", response.module},
            {"text", response.text},
            {"diagnostics", response.diagnostics}};
}

}  // namespace sightkit
