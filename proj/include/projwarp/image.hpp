#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

namespace projwarp {

// Single-channel 8-bit raster. Pixel (x, y) sits at continuous coordinates
// (x, y); the raster spans [-0.5, width-0.5] x [-0.5, height-0.5].
class ImageBuffer {
public:
    ImageBuffer() = default;
    ImageBuffer(int width, int height, std::uint8_t fill = 0);

    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t pixel_count() const { return std::int64_t(width_) * height_; }
    bool empty() const { return pixels_.empty(); }

    std::uint8_t operator()(int x, int y) const {
        return pixels_[std::size_t(y) * width_ + x];
    }
    std::uint8_t& operator()(int x, int y) {
        return pixels_[std::size_t(y) * width_ + x];
    }

    // Clamp-to-edge fetch for out-of-image taps.
    std::uint8_t clamped(int x, int y) const {
        x = std::clamp(x, 0, width_ - 1);
        y = std::clamp(y, 0, height_ - 1);
        return pixels_[std::size_t(y) * width_ + x];
    }

    const std::vector<std::uint8_t>& pixels() const { return pixels_; }
    std::vector<std::uint8_t>& pixels() { return pixels_; }

    double mean() const;

    bool operator==(const ImageBuffer&) const = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> pixels_;
};

}  // namespace projwarp
