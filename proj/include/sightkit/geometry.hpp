#pragma once

#include <string>

#include "sightkit/errors.hpp"

namespace sightkit {

// Axis-aligned box in image pixel coordinates, origin at the top-left.
struct BoundingBox {
    double x_min = 0;
    double y_min = 0;
    double x_max = 0;
    double y_max = 0;

    double center_x() const { return (x_min + x_max) / 2.0; }
    double center_y() const { return (y_min + y_max) / 2.0; }
    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

inline void validate_box(const BoundingBox& box, const std::string& what) {
    if (box.x_min < 0 || box.y_min < 0 || box.x_min > box.x_max || box.y_min > box.y_max) {
        throw ValidationError(what + ": invalid bounding box [" + std::to_string(box.x_min) +
                              ", " + std::to_string(box.y_min) + ", " + std::to_string(box.x_max) +
                              ", " + std::to_string(box.y_max) + "]");
    }
}

inline void validate_box_in_frame(const BoundingBox& box, double image_width,
                                  double image_height, const std::string& what) {
    validate_box(box, what);
    if (box.x_max > image_width || box.y_max > image_height) {
        throw ValidationError(what + ": bounding box exceeds image frame " +
                              std::to_string(image_width) + "x" + std::to_string(image_height));
    }
}

}  // namespace sightkit
