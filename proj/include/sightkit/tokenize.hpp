#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace sightkit {

using TokenList = std::vector<std::string>;

// Lowercase alphanumeric tokens: punctuation is dropped, whitespace splits.
// Shared by command parsing and the text metrics so both see the same tokens.
inline TokenList tokenize(std::string_view raw) {
    TokenList tokens;
    std::string current;
    for (char ch : raw) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (std::isalnum(c)) {
            current.push_back(static_cast<char>(std::tolower(c)));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

inline std::string join_tokens(const TokenList& tokens, const std::string& sep = " ") {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += sep;
        out += tokens[i];
    }
    return out;
}

}  // namespace sightkit
