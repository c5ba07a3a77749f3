#pragma once

// Live ContentProvider backed by cpp-httplib. Kept out of news.hpp so that
// library consumers and tests never pull in socket code.

#include <chrono>
#include <string>

#include <httplib.h>

#include "sightkit/news.hpp"

namespace sightkit {

class HttpProvider : public ContentProvider {
public:
    FetchResult fetch(const std::string& url, std::chrono::milliseconds timeout) override {
        std::string scheme, host, path;
        if (!split_url(url, scheme, host, path)) {
            return {false, "", "unsupported url: " + url};
        }
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
        if (scheme == "https") {
            return {false, "", "built without TLS support, cannot fetch " + url};
        }
#endif
        httplib::Client client((scheme + "://" + host).c_str());
        auto seconds = std::chrono::duration_cast<std::chrono::seconds>(timeout);
        client.set_connection_timeout(seconds.count(), 0);
        client.set_read_timeout(seconds.count(), 0);
        client.set_follow_location(true);

        auto response = client.Get(path.c_str());
        if (!response) {
            return {false, "", "request failed: " + httplib::to_string(response.error())};
        }
        if (response->status < 200 || response->status >= 300) {
            return {false, "", "http status " + std::to_string(response->status)};
        }
        return {true, response->body, ""};
    }

private:
    static bool split_url(const std::string& url, std::string& scheme, std::string& host,
                          std::string& path) {
        std::size_t sep = url.find("://");
        if (sep == std::string::npos) return false;
        scheme = url.substr(0, sep);
        if (scheme != "http" && scheme != "https") return false;
        std::size_t slash = url.find('/', sep + 3);
        if (slash == std::string::npos) {
            host = url.substr(sep + 3);
            path = "/";
        } else {
            host = url.substr(sep + 3, slash - sep - 3);
            path = url.substr(slash);
        }
        return !host.empty();
    }
};

}  // namespace sightkit
