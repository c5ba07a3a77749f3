#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "sightkit/config.hpp"
#include "sightkit/errors.hpp"
#include "sightkit/tokenize.hpp"

namespace sightkit {

inline constexpr int kMaxArticlesPerSource = 5;

// A newspaper entry from the sources file. At least one of the two URLs is
// always present: RSS is preferred, the site URL is the scrape fallback.
struct NewsSource {
    std::string name;
    std::optional<std::string> rss_url;
    std::optional<std::string> site_url;
};

struct Article {
    std::string title;
    std::optional<std::int64_t> published;  // epoch seconds; absent on the fallback path
    std::string source_name;
};

struct FetchResult {
    bool ok = false;
    std::string body;
    std::string error;
};

// Byte source for URLs. The live implementation speaks HTTP; tests replay
// fixture files. Must be safe for concurrent fetches.
class ContentProvider {
public:
    virtual ~ContentProvider() = default;
    virtual FetchResult fetch(const std::string& url, std::chrono::milliseconds timeout) = 0;
};

inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ull;
    }
    return hash;
}

// Replays pre-recorded responses from a directory; the file for a URL is
// named by the URL's FNV-1a hash. A missing file behaves like an
// unreachable server.
class FixtureProvider : public ContentProvider {
public:
    explicit FixtureProvider(std::string directory) : directory_(std::move(directory)) {}

    static std::string url_key(const std::string& url) {
        static const char* hex = "0123456789abcdef";
        std::uint64_t hash = fnv1a64(url);
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i) {
            out[i] = hex[hash & 0xf];
            hash >>= 4;
        }
        return out + ".dat";
    }

    std::string path_for(const std::string& url) const { return directory_ + "/" + url_key(url); }

    FetchResult fetch(const std::string& url, std::chrono::milliseconds) override {
        std::ifstream in(path_for(url), std::ios::binary);
        if (!in) return {false, "", "no fixture recorded for " + url};
        std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        return {true, std::move(body), ""};
    }

private:
    std::string directory_;
};

// Sources file: JSON array of {"name", "rss"?, "url"?}. Order is preserved;
// it drives the briefing layout.
inline std::vector<NewsSource> load_sources(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open sources file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        int line = 1;
        for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') ++line;
        }
        throw ParseError("sources file " + path + " (line " + std::to_string(line) + "): " +
                         e.what());
    }
    if (!doc.is_array()) throw ValidationError("sources file " + path + ": expected a JSON array");

    std::vector<NewsSource> sources;
    for (const auto& item : doc) {
        NewsSource src;
        if (!item.is_object() || !item.contains("name") || !item.at("name").is_string()) {
            throw ValidationError("sources file " + path + ": every source needs a string name");
        }
        src.name = item.at("name").get<std::string>();
        if (item.contains("rss") && !item.at("rss").is_null()) {
            src.rss_url = item.at("rss").get<std::string>();
        }
        if (item.contains("url") && !item.at("url").is_null()) {
            src.site_url = item.at("url").get<std::string>();
        }
        if (!src.rss_url && !src.site_url) {
            throw ValidationError("sources file " + path + ": source \"" + src.name +
                                  "\" has neither an rss nor a url entry");
        }
        sources.push_back(std::move(src));
    }
    return sources;
}

namespace detail {

inline std::string decode_entities(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        if (text[i] != '&') {
            out += text[i++];
            continue;
        }
        std::size_t end = text.find(';', i);
        if (end == std::string::npos || end - i > 10) {
            out += text[i++];
            continue;
        }
        std::string entity = text.substr(i + 1, end - i - 1);
        if (entity == "amp") out += '&';
        else if (entity == "lt") out += '<';
        else if (entity == "gt") out += '>';
        else if (entity == "quot") out += '"';
        else if (entity == "apos") out += '\'';
        else if (entity.size() > 1 && entity[0] == '#') {
            long code = 0;
            try {
                code = (entity[1] == 'x' || entity[1] == 'X')
                           ? std::stol(entity.substr(2), nullptr, 16)
                           : std::stol(entity.substr(1));
            } catch (...) {
                code = -1;
            }
            if (code >= 32 && code < 127) out += static_cast<char>(code);
            else out += ' ';
        } else {
            out += text.substr(i, end - i + 1);  // unknown entity, keep verbatim
        }
        i = end + 1;
    }
    return out;
}

inline std::string collapse_whitespace(const std::string& text) {
    std::string out;
    bool in_space = true;  // also trims leading whitespace
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out += ' ';
            in_space = true;
        } else {
            out += c;
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

inline std::string lowercase(std::string text) {
    for (char& c : text) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return text;
}

// Case-insensitive search for an opening tag; returns the index just past
// its '>' or npos.
inline std::size_t find_tag_open(const std::string& lower, const std::string& tag,
                                 std::size_t from, std::size_t* content_begin) {
    const std::string open = "<" + tag;
    for (std::size_t pos = lower.find(open, from); pos != std::string::npos;
         pos = lower.find(open, pos + 1)) {
        std::size_t after = pos + open.size();
        if (after < lower.size() && (lower[after] == '>' || std::isspace(static_cast<unsigned char>(lower[after])))) {
            std::size_t close = lower.find('>', after);
            if (close == std::string::npos) return std::string::npos;
            *content_begin = close + 1;
            return pos;
        }
    }
    return std::string::npos;
}

// Inner text of the first <tag>...</tag> element at or after `from`.
inline std::optional<std::string> element_text(const std::string& body, const std::string& lower,
                                               const std::string& tag, std::size_t from,
                                               std::size_t to) {
    std::size_t content_begin = 0;
    std::size_t open = find_tag_open(lower, tag, from, &content_begin);
    if (open == std::string::npos || content_begin >= to) return std::nullopt;
    std::size_t close = lower.find("</" + tag, content_begin);
    if (close == std::string::npos || close > to) return std::nullopt;

    std::string inner = body.substr(content_begin, close - content_begin);
    const std::string cdata_open = "<![CDATA[";
    std::size_t cd = inner.find(cdata_open);
    if (cd != std::string::npos) {
        std::size_t cd_end = inner.find("]]>", cd + cdata_open.size());
        if (cd_end != std::string::npos) {
            inner = inner.substr(cd + cdata_open.size(), cd_end - cd - cdata_open.size());
        }
    }
    return collapse_whitespace(decode_entities(inner));
}

inline long days_from_civil(int year, int month, int day) {
    year -= month <= 2;
    const int era = (year >= 0 ? year : year - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(year - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return static_cast<long>(era) * 146097L + static_cast<long>(doe) - 719468L;
}

inline std::optional<int> month_from_name(const std::string& name) {
    static const char* months[] = {"jan", "feb", "mar", "apr", "may", "jun",
                                   "jul", "aug", "sep", "oct", "nov", "dec"};
    if (name.size() < 3) return std::nullopt;
    std::string key = lowercase(name.substr(0, 3));
    for (int i = 0; i < 12; ++i) {
        if (key == months[i]) return i + 1;
    }
    return std::nullopt;
}

inline std::optional<int> zone_offset_seconds(const std::string& zone) {
    if (zone.empty() || zone == "GMT" || zone == "UT" || zone == "UTC" || zone == "Z") return 0;
    struct Named { const char* name; int minutes; };
    static const Named named[] = {{"EST", -300}, {"EDT", -240}, {"CST", -360}, {"CDT", -300},
                                  {"MST", -420}, {"MDT", -360}, {"PST", -480}, {"PDT", -420}};
    for (const auto& entry : named) {
        if (zone == entry.name) return entry.minutes * 60;
    }
    if ((zone[0] == '+' || zone[0] == '-') && zone.size() == 5) {
        bool digits = true;
        for (std::size_t i = 1; i < 5; ++i) {
            if (!std::isdigit(static_cast<unsigned char>(zone[i]))) digits = false;
        }
        if (digits) {
            int hours = (zone[1] - '0') * 10 + (zone[2] - '0');
            int minutes = (zone[3] - '0') * 10 + (zone[4] - '0');
            int total = hours * 3600 + minutes * 60;
            return zone[0] == '-' ? -total : total;
        }
    }
    return std::nullopt;
}

// RFC 822 date-time ("Tue, 05 Mar 2024 09:00:00 GMT") to epoch seconds.
// Anything unparseable comes back empty and the item is treated as undated.
inline std::optional<std::int64_t> parse_rfc822_date(const std::string& text) {
    std::vector<std::string> parts;
    std::string current;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!current.empty()) {
                parts.push_back(current);
                current.clear();
            }
        } else {
            current += c;
        }
    }
    if (!current.empty()) parts.push_back(current);

    std::size_t i = 0;
    if (i < parts.size() && !parts[i].empty() && parts[i].back() == ',') ++i;  // weekday
    if (parts.size() < i + 4) return std::nullopt;

    int day = 0, year = 0;
    try {
        day = std::stoi(parts[i]);
        year = std::stoi(parts[i + 2]);
    } catch (...) {
        return std::nullopt;
    }
    auto month = month_from_name(parts[i + 1]);
    if (!month || day < 1 || day > 31) return std::nullopt;
    if (year < 100) year += year >= 70 ? 1900 : 2000;

    int hour = 0, minute = 0, second = 0;
    const std::string& clock = parts[i + 3];
    if (std::sscanf(clock.c_str(), "%d:%d:%d", &hour, &minute, &second) < 2) return std::nullopt;
    if (hour < 0 || hour > 23 || minute < 0 || minute > 59 || second < 0 || second > 60) {
        return std::nullopt;
    }

    int offset = 0;
    if (parts.size() > i + 4) {
        auto zone = zone_offset_seconds(parts[i + 4]);
        if (!zone) return std::nullopt;
        offset = *zone;
    }

    std::int64_t days = days_from_civil(year, *month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second - offset;
}

struct RssItem {
    std::string title;
    std::optional<std::int64_t> published;
};

// Minimal RSS 2.0 reader: channel items with their titles and pubDates.
inline std::vector<RssItem> parse_rss(const std::string& body) {
    std::string lower = lowercase(body);
    if (lower.find("<rss") == std::string::npos && lower.find("<channel") == std::string::npos) {
        throw SourceError("not an RSS document");
    }
    std::vector<RssItem> items;
    std::size_t pos = 0;
    while (true) {
        std::size_t content_begin = 0;
        std::size_t open = find_tag_open(lower, "item", pos, &content_begin);
        if (open == std::string::npos) break;
        std::size_t close = lower.find("</item", content_begin);
        if (close == std::string::npos) break;

        RssItem item;
        auto title = element_text(body, lower, "title", content_begin, close);
        if (title && !title->empty()) {
            item.title = *title;
            auto date_text = element_text(body, lower, "pubdate", content_begin, close);
            if (date_text) item.published = parse_rfc822_date(*date_text);
            items.push_back(std::move(item));
        }
        pos = close + 1;
    }
    return items;
}

inline std::string strip_tags(const std::string& html) {
    std::string out;
    bool in_tag = false;
    for (char c : html) {
        if (c == '<') in_tag = true;
        else if (c == '>') in_tag = false;
        else if (!in_tag) out += c;
    }
    return out;
}

// Headline candidates from a landing page: anchor elements whose visible
// text has at least four tokens. Short anchors are navigation, not news.
inline std::vector<std::string> extract_headlines(const std::string& body) {
    std::string lower = lowercase(body);
    std::vector<std::string> headlines;
    std::size_t pos = 0;
    while (true) {
        std::size_t content_begin = 0;
        std::size_t open = find_tag_open(lower, "a", pos, &content_begin);
        if (open == std::string::npos) break;
        std::size_t close = lower.find("</a", content_begin);
        if (close == std::string::npos) break;

        std::string text = collapse_whitespace(
            decode_entities(strip_tags(body.substr(content_begin, close - content_begin))));
        if (tokenize(text).size() >= 4) headlines.push_back(std::move(text));
        pos = close + 1;
    }
    return headlines;
}

}  // namespace detail

// RSS path for one source: undated items are dropped, the rest are sorted
// newest-first and capped at 5. Hard failures throw SourceError.
inline std::vector<Article> fetch_rss(const NewsSource& src, ContentProvider& provider,
                                      std::chrono::milliseconds timeout) {
    if (!src.rss_url) throw ValidationError("fetch_rss: source \"" + src.name + "\" has no RSS URL");
    FetchResult result = provider.fetch(*src.rss_url, timeout);
    if (!result.ok) throw SourceError("fetch failed: " + result.error);

    std::vector<detail::RssItem> items = detail::parse_rss(result.body);

    std::vector<Article> articles;
    for (auto& item : items) {
        if (!item.published) continue;  // dated articles only
        articles.push_back(Article{std::move(item.title), item.published, src.name});
    }
    std::stable_sort(articles.begin(), articles.end(),
                     [](const Article& a, const Article& b) { return *a.published > *b.published; });
    if (articles.size() > kMaxArticlesPerSource) articles.resize(kMaxArticlesPerSource);
    return articles;
}

// Scrape path: headline-looking anchor texts from the landing page,
// de-duplicated in document order and capped at 5.
inline std::vector<Article> fetch_fallback(const NewsSource& src, ContentProvider& provider,
                                           std::chrono::milliseconds timeout) {
    if (!src.site_url) {
        throw ValidationError("fetch_fallback: source \"" + src.name + "\" has no site URL");
    }
    FetchResult result = provider.fetch(*src.site_url, timeout);
    if (!result.ok) throw SourceError("fetch failed: " + result.error);

    std::vector<Article> articles;
    std::vector<std::string> seen;
    for (auto& headline : detail::extract_headlines(result.body)) {
        if (std::find(seen.begin(), seen.end(), headline) != seen.end()) continue;
        seen.push_back(headline);
        articles.push_back(Article{std::move(headline), std::nullopt, src.name});
        if (articles.size() == kMaxArticlesPerSource) break;
    }
    return articles;
}

struct NewsOptions {
    std::chrono::milliseconds request_timeout{10000};
    std::chrono::milliseconds total_budget{60000};
    int parallelism = 4;

    static NewsOptions from_config(const Config& cfg) {
        NewsOptions options;
        options.request_timeout =
            std::chrono::milliseconds(static_cast<long>(cfg.news_request_timeout_s * 1000));
        options.total_budget =
            std::chrono::milliseconds(static_cast<long>(cfg.news_total_budget_s * 1000));
        options.parallelism = cfg.news_parallelism;
        return options;
    }
};

struct Briefing {
    std::string text;
    std::vector<std::string> errors;  // sources that produced nothing, input order
    std::vector<std::string> notes;   // recoveries, e.g. RSS failed but fallback worked
};

// Fetches every source (RSS first, scrape fallback), assembles the briefing
// text, and writes it to output_path. One source failing never affects
// another; failures are recorded and aggregation continues.
inline Briefing compile_briefing(const std::vector<NewsSource>& sources,
                                 ContentProvider& provider, const std::string& output_path,
                                 const NewsOptions& options = {}) {
    if (sources.empty()) throw ValidationError("compile_briefing: at least one source required");

    const auto deadline = std::chrono::steady_clock::now() + options.total_budget;
    std::vector<std::vector<Article>> per_source(sources.size());
    std::vector<std::string> per_source_error(sources.size());
    std::vector<std::string> per_source_note(sources.size());

    auto run_source = [&](std::size_t index) {
        const NewsSource& src = sources[index];
        if (std::chrono::steady_clock::now() > deadline) {
            per_source_error[index] = src.name + ": skipped, total news budget exceeded";
            return;
        }
        try {
            if (src.rss_url) {
                try {
                    per_source[index] = fetch_rss(src, provider, options.request_timeout);
                    return;
                } catch (const SourceError& rss_error) {
                    if (!src.site_url) throw;
                    per_source_note[index] =
                        src.name + ": rss failed (" + rss_error.what() + "), used site fallback";
                }
            }
            per_source[index] = fetch_fallback(src, provider, options.request_timeout);
        } catch (const std::exception& e) {
            per_source_error[index] = src.name + ": " + e.what();
            per_source[index].clear();
        }
    };

    const int workers = std::max(1, std::min<int>(options.parallelism,
                                                  static_cast<int>(sources.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < sources.size(); ++i) run_source(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < sources.size(); i = next.fetch_add(1)) {
                    run_source(i);
                }
            });
        }
        for (auto& thread : pool) thread.join();
    }

    Briefing briefing;
    bool first_section = true;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (!per_source_error[i].empty()) briefing.errors.push_back(per_source_error[i]);
        if (!per_source_note[i].empty()) briefing.notes.push_back(per_source_note[i]);
        if (per_source[i].empty()) continue;
        if (!first_section) briefing.text += "\n";
        first_section = false;
        briefing.text += "== " + sources[i].name + " ==\n";
        for (const auto& article : per_source[i]) briefing.text += article.title + "\n";
    }
    if (briefing.text.empty()) briefing.text = "no news available\n";

    std::ofstream out(output_path, std::ios::binary);
    if (!out) throw ValidationError("cannot write briefing file: " + output_path);
    out << briefing.text;
    return briefing;
}

}  // namespace sightkit
