#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "sightkit/discovery.hpp"
#include "test_support.hpp"

using namespace sightkit;
using testsupport::data_path;

namespace {

DetectionDocument make_doc(std::vector<Detection> detections, double width = 900,
                           double height = 600) {
    DetectionDocument doc;
    doc.image_width = width;
    doc.image_height = height;
    doc.detections = std::move(detections);
    return doc;
}

BoundingBox box_at(double center_x, double width = 20) {
    return BoundingBox{center_x - width / 2, 10, center_x + width / 2, 30};
}

// Reverse of render_discovery, used to check the format stays parseable.
DiscoveryResult parse_rendering(const std::string& text, const std::string& label) {
    DiscoveryResult result;
    result.label = label;
    if (text == label + " not found") return result;
    std::stringstream stream(text);
    std::string fragment;
    while (std::getline(stream, fragment, ',')) {
        if (fragment.front() == ' ') fragment.erase(0, 1);
        std::size_t first_space = fragment.find(' ');
        int n = std::stoi(fragment.substr(0, first_space));
        std::string tail = fragment.substr(fragment.rfind(' ') + 1);
        for (Region region : {Region::Left, Region::Straight, Region::Right}) {
            if (tail == to_string(region)) result.counts[static_cast<int>(region)] += n;
        }
    }
    return result;
}

}  // namespace

TEST_CASE("filtering keeps matching labels at or above the threshold") {
    auto doc = make_doc({{"laptop", 0.90, box_at(100)}, {"chair", 0.80, box_at(200)}});
    auto kept = filter_detections(doc, "laptop", 0.35);
    REQUIRE(kept.size() == 1);
    CHECK(kept[0].score == 0.90);

    auto below = make_doc({{"laptop", 0.34, box_at(100)}});
    CHECK(filter_detections(below, "laptop", 0.35).empty());

    auto boundary = make_doc({{"laptop", 0.35, box_at(100)}});
    CHECK(filter_detections(boundary, "laptop", 0.35).size() == 1);  // inclusive

    auto cups = make_doc({{"cup", 0.6, box_at(100)}, {"cup", 0.5, box_at(200)},
                          {"cup", 0.2, box_at(300)}});
    auto surviving = filter_detections(cups, "cup", 0.35);
    REQUIRE(surviving.size() == 2);
    CHECK(surviving[0].score == 0.6);  // input order preserved
    CHECK(surviving[1].score == 0.5);

    CHECK_THROWS_AS(filter_detections(doc, "laptop", 1.5), ValidationError);
}

TEST_CASE("locate splits the frame into thirds, boundaries to straight") {
    CHECK(locate(box_at(100), 900) == Region::Left);
    CHECK(locate(box_at(450), 900) == Region::Straight);
    CHECK(locate(box_at(300), 900) == Region::Straight);  // exactly W/3
    CHECK(locate(box_at(600), 900) == Region::Straight);  // exactly 2W/3
    CHECK(locate(box_at(601), 900) == Region::Right);
    CHECK(locate(box_at(299.5), 900) == Region::Left);
    CHECK_THROWS_AS(locate(box_at(10), 0), ValidationError);
}

TEST_CASE("region depends only on the center relative to the frame") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> center_dist(10.0, 890.0);
    std::uniform_real_distribution<double> scale_dist(0.1, 50.0);
    for (int i = 0; i < 500; ++i) {
        double center = center_dist(rng);
        double scale = scale_dist(rng);
        BoundingBox original = box_at(center);
        BoundingBox scaled{original.x_min * scale, original.y_min, original.x_max * scale,
                           original.y_max};
        CHECK(locate(original, 900) == locate(scaled, 900 * scale));
    }
}

TEST_CASE("translating boxes with the frame keeps every region") {
    // Same thirds rule expressed with shifted cut points: moving the origin
    // moves the cuts with it, so regions cannot change.
    std::mt19937 rng(78);
    std::uniform_real_distribution<double> center_dist(10.0, 890.0);
    std::uniform_real_distribution<double> shift_dist(-500.0, 500.0);
    const double width = 900;
    for (int i = 0; i < 500; ++i) {
        double center = center_dist(rng);
        double shift = shift_dist(rng);
        Region direct = locate(box_at(center), width);
        double moved = center + shift;
        Region shifted = moved < width / 3 + shift     ? Region::Left
                         : moved > 2 * width / 3 + shift ? Region::Right
                                                         : Region::Straight;
        CHECK(direct == shifted);
    }
}

TEST_CASE("rendering matches the spoken response format") {
    DiscoveryResult cups;
    cups.label = "cup";
    cups.counts = {2, 0, 0};
    CHECK(render_discovery(cups) == "2 cup on your left");

    DiscoveryResult none;
    none.label = "chair";
    CHECK(render_discovery(none) == "chair not found");

    DiscoveryResult spoon;
    spoon.label = "spoon";
    spoon.counts = {0, 1, 0};
    CHECK(render_discovery(spoon) == "1 spoon on your straight");

    DiscoveryResult chairs;
    chairs.label = "chair";
    chairs.counts = {1, 0, 1};
    CHECK(render_discovery(chairs) == "1 chair on your left, 1 chair on your right");

    DiscoveryResult everywhere;
    everywhere.label = "book";
    everywhere.counts = {3, 1, 2};
    CHECK(render_discovery(everywhere) == "3 book on your left, 1 book on your straight, 2 book on your right");
}

TEST_CASE("rendering parses back to the same counts") {
    std::mt19937 rng(99);
    std::uniform_int_distribution<int> count_dist(0, 4);
    for (int i = 0; i < 200; ++i) {
        DiscoveryResult result;
        result.label = "bottle";
        result.counts = {count_dist(rng), count_dist(rng), count_dist(rng)};
        DiscoveryResult parsed = parse_rendering(render_discovery(result), result.label);
        CHECK(parsed.counts == result.counts);
    }
}

TEST_CASE("counts partition the surviving detections") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> center_dist(10.0, 890.0);
    std::uniform_real_distribution<double> score_dist(0.0, 1.0);
    std::uniform_int_distribution<int> size_dist(0, 12);
    for (int i = 0; i < 300; ++i) {
        std::vector<Detection> detections;
        int n = size_dist(rng);
        for (int j = 0; j < n; ++j) {
            detections.push_back({"cup", score_dist(rng), box_at(center_dist(rng))});
        }
        auto doc = make_doc(std::move(detections));
        DiscoveryResult result = count_regions(doc, "cup", 0.35);
        CHECK(result.total() ==
              static_cast<int>(filter_detections(doc, "cup", 0.35).size()));
    }
}

TEST_CASE("raising the threshold never increases a region count") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> center_dist(10.0, 890.0);
    std::uniform_real_distribution<double> score_dist(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        std::vector<Detection> detections;
        for (int j = 0; j < 8; ++j) {
            detections.push_back({"tv", score_dist(rng), box_at(center_dist(rng))});
        }
        auto doc = make_doc(std::move(detections));
        double low = score_dist(rng);
        double high = std::min(1.0, low + score_dist(rng));
        DiscoveryResult loose = count_regions(doc, "tv", low);
        DiscoveryResult tight = count_regions(doc, "tv", high);
        for (int r = 0; r < 3; ++r) CHECK(tight.counts[r] <= loose.counts[r]);
    }
}

TEST_CASE("discover composes the whole pipeline against fixtures") {
    Config cfg;
    ClassVocabulary vocab = ClassVocabulary::coco80();

    auto laptop_doc = DetectionDocument::load(data_path("fixtures/detections/laptop_left.json"));
    CHECK(discover(laptop_doc, {"laptop", true}, vocab, cfg) == "1 laptop on your left");

    auto chairs = DetectionDocument::load(data_path("fixtures/detections/chairs_left_right.json"));
    CHECK(discover(chairs, {"chair", true}, vocab, cfg) ==
          "1 chair on your left, 1 chair on your right");

    auto office = DetectionDocument::load(data_path("fixtures/detections/office_scene.json"));
    CHECK(discover(office, {"extension box", false}, vocab, cfg) ==
          "object does not exist in the available classes");
}

TEST_CASE("detection documents survive a JSON round trip") {
    auto doc = DetectionDocument::load(data_path("fixtures/detections/cups_left.json"));
    auto round = DetectionDocument::from_json(doc.to_json());
    REQUIRE(round.detections.size() == doc.detections.size());
    CHECK(round.image_width == doc.image_width);
    for (std::size_t i = 0; i < doc.detections.size(); ++i) {
        CHECK(round.detections[i].label == doc.detections[i].label);
        CHECK(round.detections[i].score == doc.detections[i].score);
        CHECK(round.detections[i].box.x_min == doc.detections[i].box.x_min);
    }
}

TEST_CASE("invalid detection documents are rejected") {
    auto score_high = make_doc({{"cup", 1.2, box_at(100)}});
    CHECK_THROWS_AS(score_high.validate(), ValidationError);

    auto outside = make_doc({{"cup", 0.5, BoundingBox{880, 10, 950, 30}}});
    CHECK_THROWS_AS(outside.validate(), ValidationError);

    auto no_frame = make_doc({}, 0, 600);
    CHECK_THROWS_AS(no_frame.validate(), ValidationError);

    CHECK_THROWS_AS(DetectionDocument::from_json(nlohmann::json{{"image_width", 10}}), ParseError);
}
