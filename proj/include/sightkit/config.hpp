#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sightkit/errors.hpp"

namespace sightkit {

enum class GapMode { Pixels, FractionOfWidth };

// Pipeline constants. The defaults are the values the whole system is tuned
// around; a JSON config file can override any subset of them.
struct Config {
    double score_threshold = 0.35;    // detection confidence cutoff
    double z_threshold = 1.75;        // outlier removal cutoff
    double column_gap = 150.0;        // column split distance
    GapMode column_gap_mode = GapMode::Pixels;
    int beam_width = 3;               // decoder beam width
    bool length_normalize = false;    // rank finished hypotheses by score/length
    int max_decode_length = 20;       // decoder sequence cap
    double news_request_timeout_s = 10.0;
    double news_total_budget_s = 60.0;
    int news_parallelism = 4;
    std::string vocabulary_path;      // empty -> built-in 80-label list
    std::string alias_path;           // empty -> built-in alias table

    void validate() const {
        std::vector<std::string> bad;
        if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) bad.push_back("score_threshold");
        if (!(z_threshold > 0.0)) bad.push_back("z_threshold");
        if (!(column_gap > 0.0)) bad.push_back("column_gap");
        if (beam_width < 1) bad.push_back("beam_width");
        if (max_decode_length < 1) bad.push_back("max_decode_length");
        if (!(news_request_timeout_s > 0.0)) bad.push_back("news_request_timeout_s");
        if (!(news_total_budget_s > 0.0)) bad.push_back("news_total_budget_s");
        if (news_parallelism < 1) bad.push_back("news_parallelism");
        if (!bad.empty()) {
            std::string msg = "invalid config value(s):";
            for (const auto& key : bad) msg += " " + key;
            throw ValidationError(msg);
        }
    }
};

namespace detail {

inline int json_line_of(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') ++line;
    }
    return line;
}

template <typename T>
T get_typed(const nlohmann::json& value, const std::string& key) {
    try {
        return value.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ValidationError("config key \"" + key + "\" has the wrong type");
    }
}

}  // namespace detail

// Defaults overlaid with the file's values. Unknown keys are rejected so a
// typo cannot silently leave a threshold at its default.
inline Config load_config(const std::optional<std::string>& path = std::nullopt) {
    Config cfg;
    if (!path) return cfg;

    std::ifstream in(*path);
    if (!in) throw ValidationError("cannot open config file: " + *path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("config file " + *path + " (line " +
                         std::to_string(detail::json_line_of(text, e.byte)) + "): " + e.what());
    }
    if (!doc.is_object()) throw ValidationError("config file " + *path + ": expected a JSON object");

    std::vector<std::string> unknown;
    for (const auto& [key, value] : doc.items()) {
        if (key == "score_threshold") cfg.score_threshold = detail::get_typed<double>(value, key);
        else if (key == "z_threshold") cfg.z_threshold = detail::get_typed<double>(value, key);
        else if (key == "column_gap") cfg.column_gap = detail::get_typed<double>(value, key);
        else if (key == "column_gap_mode") {
            auto mode = detail::get_typed<std::string>(value, key);
            if (mode == "pixels") cfg.column_gap_mode = GapMode::Pixels;
            else if (mode == "fraction_of_width") cfg.column_gap_mode = GapMode::FractionOfWidth;
            else throw ValidationError("config key \"column_gap_mode\" must be \"pixels\" or \"fraction_of_width\"");
        }
        else if (key == "beam_width") cfg.beam_width = detail::get_typed<int>(value, key);
        else if (key == "length_normalize") cfg.length_normalize = detail::get_typed<bool>(value, key);
        else if (key == "max_decode_length") cfg.max_decode_length = detail::get_typed<int>(value, key);
        else if (key == "news_request_timeout_s") cfg.news_request_timeout_s = detail::get_typed<double>(value, key);
        else if (key == "news_total_budget_s") cfg.news_total_budget_s = detail::get_typed<double>(value, key);
        else if (key == "news_parallelism") cfg.news_parallelism = detail::get_typed<int>(value, key);
        else if (key == "vocabulary_path") cfg.vocabulary_path = detail::get_typed<std::string>(value, key);
        else if (key == "alias_path") cfg.alias_path = detail::get_typed<std::string>(value, key);
        else unknown.push_back(key);
    }
    if (!unknown.empty()) {
        std::string msg = "unknown config key(s):";
        for (const auto& key : unknown) msg += " " + key;
        throw ValidationError(msg);
    }
    cfg.validate();
    return cfg;
}

}  // namespace sightkit
