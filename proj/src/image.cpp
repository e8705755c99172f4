#include "projwarp/image.hpp"

#include "projwarp/errors.hpp"

namespace projwarp {

ImageBuffer::ImageBuffer(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    if (width <= 0 || height <= 0) {
        throw usage_error("image dimensions must be positive");
    }
    pixels_.assign(std::size_t(width) * std::size_t(height), fill);
}

double ImageBuffer::mean() const {
    if (pixels_.empty()) return 0.0;
    double sum = 0.0;
    for (std::uint8_t p : pixels_) sum += p;
    return sum / double(pixels_.size());
}

}  // namespace projwarp
