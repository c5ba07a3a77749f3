#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "sightkit/errors.hpp"

namespace sightkit {

inline constexpr int kVocabularySize = 80;

// The 80 detector class labels, in the standard COCO order.
inline const std::array<const char*, kVocabularySize>& default_labels() {
    static const std::array<const char*, kVocabularySize> labels = {
        "person",        "bicycle",      "car",           "motorcycle",    "airplane",
        "bus",           "train",        "truck",         "boat",          "traffic light",
        "fire hydrant",  "stop sign",    "parking meter", "bench",         "bird",
        "cat",           "dog",          "horse",         "sheep",         "cow",
        "elephant",      "bear",         "zebra",         "giraffe",       "backpack",
        "umbrella",      "handbag",      "tie",           "suitcase",      "frisbee",
        "skis",          "snowboard",    "sports ball",   "kite",          "baseball bat",
        "baseball glove","skateboard",   "surfboard",     "tennis racket", "bottle",
        "wine glass",    "cup",          "fork",          "knife",         "spoon",
        "bowl",          "banana",       "apple",         "sandwich",      "orange",
        "broccoli",      "carrot",       "hot dog",       "pizza",         "donut",
        "cake",          "chair",        "couch",         "potted plant",  "bed",
        "dining table",  "toilet",       "tv",            "laptop",        "mouse",
        "remote",        "keyboard",     "cell phone",    "microwave",     "oven",
        "toaster",       "sink",         "refrigerator",  "book",          "clock",
        "vase",          "scissors",     "teddy bear",    "hair drier",    "toothbrush"};
    return labels;
}

// Fixed detector class list. Always exactly 80 unique non-empty labels.
class ClassVocabulary {
public:
    explicit ClassVocabulary(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (labels_.size() != kVocabularySize) {
            throw ValidationError("class vocabulary must have exactly " +
                                  std::to_string(kVocabularySize) + " labels, got " +
                                  std::to_string(labels_.size()));
        }
        for (const auto& label : labels_) {
            if (label.empty()) throw ValidationError("class vocabulary contains an empty label");
            if (!set_.insert(label).second) {
                throw ValidationError("class vocabulary contains duplicate label: " + label);
            }
        }
    }

    static ClassVocabulary coco80() {
        std::vector<std::string> labels(default_labels().begin(), default_labels().end());
        return ClassVocabulary(std::move(labels));
    }

    // Newline-delimited label file; blank lines ignored.
    static ClassVocabulary from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open vocabulary file: " + path);
        std::vector<std::string> labels;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            while (!line.empty() && (line.back() == ' ' || line.back() == '\t')) line.pop_back();
            if (!line.empty()) labels.push_back(line);
        }
        return ClassVocabulary(std::move(labels));
    }

    bool contains(const std::string& label) const { return set_.count(label) > 0; }
    const std::vector<std::string>& labels() const { return labels_; }

private:
    std::vector<std::string> labels_;
    std::unordered_set<std::string> set_;
};

// Maps spoken object names onto canonical class labels ("cellphone" -> "cell phone").
class AliasTable {
public:
    AliasTable() = default;
    explicit AliasTable(std::map<std::string, std::string> entries)
        : entries_(std::move(entries)) {}

    static AliasTable defaults() {
        return AliasTable({{"cellphone", "cell phone"},
                           {"mobile", "cell phone"},
                           {"mobile phone", "cell phone"},
                           {"phone", "cell phone"},
                           {"television", "tv"},
                           {"tv monitor", "tv"},
                           {"sofa", "couch"},
                           {"aeroplane", "airplane"},
                           {"motorbike", "motorcycle"}});
    }

    // JSON object mapping alias -> canonical label.
    static AliasTable from_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open alias file: " + path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("alias file " + path + ": " + e.what());
        }
        if (!doc.is_object()) throw ValidationError("alias file " + path + ": expected a JSON object");
        std::map<std::string, std::string> entries;
        for (const auto& [alias, canonical] : doc.items()) {
            if (!canonical.is_string()) {
                throw ValidationError("alias file " + path + ": value for \"" + alias +
                                      "\" must be a string");
            }
            entries[alias] = canonical.get<std::string>();
        }
        return AliasTable(std::move(entries));
    }

    // Canonical form of a phrase, or the phrase itself when no alias applies.
    std::string resolve(const std::string& phrase) const {
        auto it = entries_.find(phrase);
        return it == entries_.end() ? phrase : it->second;
    }

    const std::map<std::string, std::string>& entries() const { return entries_; }

private:
    std::map<std::string, std::string> entries_;
};

}  // namespace sightkit
