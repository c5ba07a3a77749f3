#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sightkit/tokenize.hpp"
#include "sightkit/vocabulary.hpp"

namespace sightkit {

enum class IntentKind { SceneRecognition, ObjectDiscovery, ReadText, News, Unknown };

inline const char* to_string(IntentKind kind) {
    switch (kind) {
        case IntentKind::SceneRecognition: return "scene-recognition";
        case IntentKind::ObjectDiscovery: return "object-discovery";
        case IntentKind::ReadText: return "read-text";
        case IntentKind::News: return "news";
        case IntentKind::Unknown: return "unknown";
    }
    return "unknown";
}

// The object a discovery command asks for. When the phrase could not be
// matched against the class vocabulary, `resolved` is false and `name`
// carries the raw phrase for the error response.
struct ObjectQuery {
    std::string name;
    bool resolved = false;
};

struct Intent {
    IntentKind kind = IntentKind::Unknown;
    std::optional<ObjectQuery> object;  // present iff kind == ObjectDiscovery
};

struct CommandText {
    std::string raw;
    TokenList tokens;
};

inline CommandText normalize_command(std::string_view raw) {
    return CommandText{std::string(raw), tokenize(raw)};
}

namespace detail {

inline bool has_token(const TokenList& tokens, std::string_view word) {
    for (const auto& t : tokens) {
        if (t == word) return true;
    }
    return false;
}

// Index of the first occurrence of `phrase` as a run of consecutive tokens,
// or -1 if absent.
inline int find_phrase(const TokenList& tokens, const TokenList& phrase) {
    if (phrase.empty() || tokens.size() < phrase.size()) return -1;
    for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
        bool match = true;
        for (std::size_t j = 0; j < phrase.size(); ++j) {
            if (tokens[i + j] != phrase[j]) {
                match = false;
                break;
            }
        }
        if (match) return static_cast<int>(i);
    }
    return -1;
}

inline bool is_determiner(const std::string& token) {
    return token == "the" || token == "my" || token == "a" || token == "an";
}

}  // namespace detail

// Matches a token phrase against the vocabulary: contiguous sub-phrases are
// tried longest first (leftmost wins at equal length), each alias-resolved
// before lookup. No hit yields an unresolved query carrying the whole phrase.
inline ObjectQuery resolve_object_phrase(const TokenList& phrase, const ClassVocabulary& vocab,
                                         const AliasTable& aliases) {
    for (std::size_t len = phrase.size(); len >= 1; --len) {
        for (std::size_t start = 0; start + len <= phrase.size(); ++start) {
            TokenList sub(phrase.begin() + start, phrase.begin() + start + len);
            std::string canonical = aliases.resolve(join_tokens(sub));
            if (vocab.contains(canonical)) return ObjectQuery{canonical, true};
        }
    }
    return ObjectQuery{join_tokens(phrase), false};
}

// The requested object is the noun phrase after the last determiner or
// possessive; commands without one fall back to the words after the
// discovery trigger itself.
inline ObjectQuery extract_object_name(const CommandText& cmd, const ClassVocabulary& vocab,
                                       const AliasTable& aliases) {
    const TokenList& tokens = cmd.tokens;
    int start = -1;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (detail::is_determiner(tokens[i])) start = static_cast<int>(i) + 1;
    }
    if (start < 0) {
        int where_is = detail::find_phrase(tokens, {"where", "is"});
        if (where_is >= 0) {
            start = where_is + 2;
        } else {
            for (std::size_t i = 0; i < tokens.size(); ++i) {
                if (tokens[i] == "find" || tokens[i] == "search") start = static_cast<int>(i) + 1;
            }
        }
    }
    if (start < 0) start = 0;

    TokenList candidate(tokens.begin() + std::min<std::size_t>(start, tokens.size()), tokens.end());
    if (candidate.empty()) return ObjectQuery{"", false};
    return resolve_object_phrase(candidate, vocab, aliases);
}

// Keyword cascade, first match wins. News outranks ReadText so that
// "read the news" goes to the news module.
inline Intent parse_command(const CommandText& cmd, const ClassVocabulary& vocab,
                            const AliasTable& aliases) {
    const TokenList& tokens = cmd.tokens;

    if (detail::has_token(tokens, "news")) return Intent{IntentKind::News, std::nullopt};

    if (detail::has_token(tokens, "read") || detail::has_token(tokens, "text")) {
        return Intent{IntentKind::ReadText, std::nullopt};
    }

    if (detail::find_phrase(tokens, {"where", "is"}) >= 0 || detail::has_token(tokens, "find") ||
        detail::has_token(tokens, "search")) {
        return Intent{IntentKind::ObjectDiscovery, extract_object_name(cmd, vocab, aliases)};
    }

    if (detail::find_phrase(tokens, {"in", "front", "of", "me"}) >= 0 ||
        detail::has_token(tokens, "describe") ||
        detail::find_phrase(tokens, {"what", "do", "you", "see"}) >= 0) {
        return Intent{IntentKind::SceneRecognition, std::nullopt};
    }

    return Intent{IntentKind::Unknown, std::nullopt};
}

inline Intent parse_command(std::string_view raw, const ClassVocabulary& vocab,
                            const AliasTable& aliases) {
    return parse_command(normalize_command(raw), vocab, aliases);
}

}  // namespace sightkit
