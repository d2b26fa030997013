#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tessera/errors.hpp"
#include "tessera/geometry.hpp"
#include "tessera/memory.hpp"

namespace tessera {

struct Shape {
    int height = 0;
    int width = 0;
    int channels = 0;

    std::size_t elem_count() const {
        return static_cast<std::size_t>(height) * static_cast<std::size_t>(width) *
               static_cast<std::size_t>(channels);
    }
    bool operator==(const Shape&) const = default;
};

inline std::string to_string(const Shape& s) {
    return std::to_string(s.height) + "x" + std::to_string(s.width) + "x" +
           std::to_string(s.channels);
}

/// Dense H x W x C grid of doubles, row-major with the channel innermost.
/// Carries x_t, noise, predictions and guide images alike. Storage is
/// counted by the tensor memory tracker.
class ImageTensor {
public:
    ImageTensor() = default;

    ImageTensor(int height, int width, int channels)
        : shape_{height, width, channels}, data_(check_shape(shape_).elem_count(), 0.0) {}

    explicit ImageTensor(const Shape& s) : ImageTensor(s.height, s.width, s.channels) {}

    static ImageTensor filled(int height, int width, int channels, double value) {
        ImageTensor t(height, width, channels);
        for (auto& v : t.data_) v = value;
        return t;
    }

    const Shape& shape() const { return shape_; }
    int height() const { return shape_.height; }
    int width() const { return shape_.width; }
    int channels() const { return shape_.channels; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& at(int row, int col, int ch) { return data_[index(row, col, ch)]; }
    double at(int row, int col, int ch) const { return data_[index(row, col, ch)]; }

    /// Pointer to element (row, col, 0).
    double* row_ptr(int row, int col = 0) { return data_.data() + index(row, col, 0); }
    const double* row_ptr(int row, int col = 0) const { return data_.data() + index(row, col, 0); }

private:
    static const Shape& check_shape(const Shape& s) {
        if (s.height < 1 || s.width < 1 || s.channels < 1)
            throw DimensionError("tensor shape must be positive, got " + to_string(s));
        return s;
    }
    std::size_t index(int row, int col, int ch) const {
        return (static_cast<std::size_t>(row) * shape_.width + col) * shape_.channels + ch;
    }

    Shape shape_;
    std::vector<double, memory::TrackingAllocator<double>> data_;
};

inline void require_same_shape(const ImageTensor& a, const ImageTensor& b,
                               const std::string& what) {
    if (!(a.shape() == b.shape()))
        throw DimensionError(what + ": shape mismatch " + to_string(a.shape()) + " vs " +
                             to_string(b.shape()));
}

/// Copies the region r out of a canvas tensor.
ImageTensor slice_region(const ImageTensor& canvas, const Region& r);

/// Overwrites the region r of the canvas with src (shape must equal the region extents).
void paste_region(ImageTensor& canvas, const Region& r, const ImageTensor& src);

} // namespace tessera
