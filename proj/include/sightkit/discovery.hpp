#pragma once

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sightkit/config.hpp"
#include "sightkit/errors.hpp"
#include "sightkit/geometry.hpp"
#include "sightkit/intent.hpp"
#include "sightkit/vocabulary.hpp"

namespace sightkit {

// Horizontal thirds of the camera frame, left to right.
enum class Region { Left = 0, Straight = 1, Right = 2 };

inline const char* to_string(Region region) {
    switch (region) {
        case Region::Left: return "left";
        case Region::Straight: return "straight";
        case Region::Right: return "right";
    }
    return "straight";
}

struct Detection {
    std::string label;
    double score = 0.0;
    BoundingBox box;
};

struct DetectionDocument {
    double image_width = 0;
    double image_height = 0;
    std::vector<Detection> detections;

    void validate() const {
        if (image_width <= 0 || image_height <= 0) {
            throw ValidationError("detection document: image dimensions must be positive");
        }
        for (const auto& det : detections) {
            if (det.label.empty()) throw ValidationError("detection document: empty label");
            if (det.score < 0.0 || det.score > 1.0) {
                throw ValidationError("detection document: score out of [0,1] for label " + det.label);
            }
            validate_box_in_frame(det.box, image_width, image_height, "detection " + det.label);
        }
    }

    static DetectionDocument from_json(const nlohmann::json& doc) {
        DetectionDocument out;
        try {
            out.image_width = doc.at("image_width").get<double>();
            out.image_height = doc.at("image_height").get<double>();
            for (const auto& item : doc.at("detections")) {
                Detection det;
                det.label = item.at("label").get<std::string>();
                det.score = item.at("score").get<double>();
                const auto& box = item.at("box");
                if (!box.is_array() || box.size() != 4) {
                    throw ValidationError("detection document: box must be [x_min, y_min, x_max, y_max]");
                }
                det.box = BoundingBox{box[0].get<double>(), box[1].get<double>(),
                                      box[2].get<double>(), box[3].get<double>()};
                out.detections.push_back(std::move(det));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("detection document: ") + e.what());
        }
        out.validate();
        return out;
    }

    static DetectionDocument load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open detections file: " + path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("detections file " + path + ": " + e.what());
        }
        return from_json(doc);
    }

    nlohmann::json to_json() const {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& det : detections) {
            items.push_back({{"label", det.label},
                             {"score", det.score},
                             {"box", {det.box.x_min, det.box.y_min, det.box.x_max, det.box.y_max}}});
        }
        return {{"image_width", image_width}, {"image_height", image_height}, {"detections", items}};
    }
};

// Per-region instance counts for one label.
struct DiscoveryResult {
    std::string label;
    std::array<int, 3> counts = {0, 0, 0};  // indexed by Region

    int count(Region region) const { return counts[static_cast<int>(region)]; }
    int total() const { return counts[0] + counts[1] + counts[2]; }
};

// Detections with the requested label and score >= threshold, input order kept.
inline std::vector<Detection> filter_detections(const DetectionDocument& doc,
                                                const std::string& label, double threshold) {
    if (threshold < 0.0 || threshold > 1.0) {
        throw ValidationError("filter_detections: threshold must lie in [0,1]");
    }
    std::vector<Detection> out;
    for (const auto& det : doc.detections) {
        if (det.label == label && det.score >= threshold) out.push_back(det);
    }
    return out;
}

// Region of a box from its horizontal center: left third, middle third,
// right third. Both boundaries belong to Straight.
inline Region locate(const BoundingBox& box, double image_width) {
    if (image_width <= 0) throw ValidationError("locate: image width must be positive");
    double center = box.center_x();
    if (center < image_width / 3.0) return Region::Left;
    if (center > 2.0 * image_width / 3.0) return Region::Right;
    return Region::Straight;
}

inline DiscoveryResult count_regions(const DetectionDocument& doc, const std::string& label,
                                     double threshold) {
    DiscoveryResult result;
    result.label = label;
    for (const auto& det : filter_detections(doc, label, threshold)) {
        ++result.counts[static_cast<int>(locate(det.box, doc.image_width))];
    }
    return result;
}

inline const char* kUnknownClassResponse = "object does not exist in the available classes";

// Response phrasing: "<n> <label> on your <region>" fragments in
// left/straight/right order, comma-joined; labels never pluralized.
inline std::string render_discovery(const DiscoveryResult& result) {
    if (result.total() == 0) return result.label + " not found";
    std::string out;
    for (Region region : {Region::Left, Region::Straight, Region::Right}) {
        int n = result.count(region);
        if (n == 0) continue;
        if (!out.empty()) out += ", ";
        out += std::to_string(n) + " " + result.label + " on your " + to_string(region);
    }
    return out;
}

// Full discovery pipeline for one query. Error cases come back as the
// response strings the assistant speaks, never as exceptions.
inline std::string discover(const DetectionDocument& doc, const ObjectQuery& query,
                            const ClassVocabulary& vocab, const Config& cfg) {
    if (!query.resolved || !vocab.contains(query.name)) return kUnknownClassResponse;
    return render_discovery(count_regions(doc, query.name, cfg.score_threshold));
}

}  // namespace sightkit
