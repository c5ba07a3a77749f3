#pragma once

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sightkit/config.hpp"
#include "sightkit/errors.hpp"
#include "sightkit/geometry.hpp"
#include "sightkit/numerics.hpp"

namespace sightkit {

// One OCR text block with its pixel bounding box.
struct TextBlock {
    int id = 0;
    std::string text;
    BoundingBox box;
};

struct LayoutDocument {
    double image_width = 0;
    double image_height = 0;
    std::vector<TextBlock> blocks;

    void validate() const {
        if (image_width <= 0 || image_height <= 0) {
            throw ValidationError("layout document: image dimensions must be positive");
        }
        std::set<int> ids;
        for (const auto& block : blocks) {
            if (!ids.insert(block.id).second) {
                throw ValidationError("layout document: duplicate block id " +
                                      std::to_string(block.id));
            }
            std::string trimmed = block.text;
            trimmed.erase(0, trimmed.find_first_not_of(" \t\r\n"));
            if (trimmed.empty()) {
                throw ValidationError("layout document: block " + std::to_string(block.id) +
                                      " has empty text");
            }
            validate_box_in_frame(block.box, image_width, image_height,
                                  "block " + std::to_string(block.id));
        }
    }

    static LayoutDocument from_json(const nlohmann::json& doc) {
        LayoutDocument out;
        try {
            out.image_width = doc.at("image_width").get<double>();
            out.image_height = doc.at("image_height").get<double>();
            for (const auto& item : doc.at("blocks")) {
                TextBlock block;
                block.id = item.at("id").get<int>();
                block.text = item.at("text").get<std::string>();
                const auto& box = item.at("box");
                if (!box.is_array() || box.size() != 4) {
                    throw ValidationError("layout document: box must be [x_min, y_min, x_max, y_max]");
                }
                block.box = BoundingBox{box[0].get<double>(), box[1].get<double>(),
                                        box[2].get<double>(), box[3].get<double>()};
                out.blocks.push_back(std::move(block));
            }
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("layout document: ") + e.what());
        }
        out.validate();
        return out;
    }

    static LayoutDocument load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open layout file: " + path);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("layout file " + path + ": " + e.what());
        }
        return from_json(doc);
    }

    nlohmann::json to_json() const {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& block : blocks) {
            items.push_back({{"id", block.id},
                             {"text", block.text},
                             {"box", {block.box.x_min, block.box.y_min, block.box.x_max,
                                      block.box.y_max}}});
        }
        return {{"image_width", image_width}, {"image_height", image_height}, {"blocks", items}};
    }
};

// Reading-order output. lines plus the removed outlier blocks are always a
// permutation of the input blocks.
struct OrderedText {
    std::vector<std::string> lines;
    std::vector<int> removed_outliers;  // block ids
    int column_count = 1;
};

inline double block_center_x(const TextBlock& block) { return block.box.center_x(); }

struct OutlierSplit {
    std::vector<TextBlock> kept;
    std::vector<TextBlock> removed;
    int passes = 0;
};

// Repeatedly drops every block whose center-x z-score reaches the threshold,
// recomputing mean and deviation each pass, until a pass removes nothing.
// A zero deviation or a single survivor ends the loop.
inline OutlierSplit remove_outliers(const std::vector<TextBlock>& blocks, double z_threshold) {
    if (z_threshold <= 0) throw ValidationError("remove_outliers: z_threshold must be positive");
    OutlierSplit split;
    split.kept = blocks;

    while (split.kept.size() > 1) {
        std::vector<double> centers;
        centers.reserve(split.kept.size());
        for (const auto& block : split.kept) centers.push_back(block_center_x(block));

        if (population_stddev(centers) == 0.0) break;
        std::vector<double> scores = zscores(centers);

        std::vector<TextBlock> next;
        next.reserve(split.kept.size());
        bool removed_any = false;
        for (std::size_t i = 0; i < split.kept.size(); ++i) {
            if (std::abs(scores[i]) >= z_threshold) {
                split.removed.push_back(split.kept[i]);
                removed_any = true;
            } else {
                next.push_back(split.kept[i]);
            }
        }
        ++split.passes;
        if (!removed_any) break;
        split.kept = std::move(next);
    }
    return split;
}

// Number of columns: sort center-x ascending and count the gaps strictly
// wider than the threshold.
inline int count_columns(const std::vector<TextBlock>& blocks, double gap_threshold) {
    if (blocks.empty()) throw ValidationError("count_columns: blocks must be non-empty");
    if (gap_threshold <= 0) throw ValidationError("count_columns: gap_threshold must be positive");
    std::vector<double> centers;
    centers.reserve(blocks.size());
    for (const auto& block : blocks) centers.push_back(block_center_x(block));
    std::sort(centers.begin(), centers.end());
    int columns = 1;
    for (std::size_t i = 1; i < centers.size(); ++i) {
        if (centers[i] - centers[i - 1] > gap_threshold) ++columns;
    }
    return columns;
}

// Cluster blocks into k columns by center-x; column 0 is the leftmost.
inline std::map<int, int> kmeans_columns(const std::vector<TextBlock>& blocks, int k) {
    std::vector<double> centers;
    centers.reserve(blocks.size());
    for (const auto& block : blocks) centers.push_back(block_center_x(block));
    ClusterModel model = kmeans_1d(centers, k);
    std::map<int, int> columns;
    for (std::size_t i = 0; i < blocks.size(); ++i) columns[blocks[i].id] = model.assignment[i];
    return columns;
}

namespace detail {

inline bool reading_before(const TextBlock& a, const TextBlock& b) {
    if (a.box.y_min != b.box.y_min) return a.box.y_min < b.box.y_min;
    if (a.box.x_min != b.box.x_min) return a.box.x_min < b.box.x_min;
    return a.id < b.id;
}

}  // namespace detail

inline double effective_column_gap(const Config& cfg, double image_width) {
    return cfg.column_gap_mode == GapMode::Pixels ? cfg.column_gap
                                                  : cfg.column_gap * image_width;
}

// Full reading-order pipeline: outlier removal, column counting, k-means
// column clustering, then top-to-bottom order inside each column.
inline OrderedText reading_order(const LayoutDocument& doc, const Config& cfg) {
    OrderedText out;
    if (doc.blocks.empty()) return out;

    OutlierSplit split = remove_outliers(doc.blocks, cfg.z_threshold);
    for (const auto& block : split.removed) out.removed_outliers.push_back(block.id);
    // canonical id order, independent of the input block order
    std::sort(out.removed_outliers.begin(), out.removed_outliers.end());
    if (split.kept.empty()) return out;

    double gap = effective_column_gap(cfg, doc.image_width);
    out.column_count = count_columns(split.kept, gap);

    std::vector<std::vector<TextBlock>> columns;
    if (split.kept.size() <= 1 || out.column_count == 1) {
        out.column_count = 1;
        columns.push_back(split.kept);
    } else {
        std::map<int, int> by_id = kmeans_columns(split.kept, out.column_count);
        columns.resize(out.column_count);
        for (const auto& block : split.kept) columns[by_id.at(block.id)].push_back(block);
    }

    for (auto& column : columns) {
        std::sort(column.begin(), column.end(), detail::reading_before);
        for (const auto& block : column) out.lines.push_back(block.text);
    }
    return out;
}

// Lines joined by newlines, with a terminal newline when any line exists.
inline std::string render_text(const OrderedText& ordered) {
    std::string out;
    for (const auto& line : ordered.lines) {
        out += line;
        out += '\n';
    }
    return out;
}

}  // namespace sightkit
