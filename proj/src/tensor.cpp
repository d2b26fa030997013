#include "tessera/tensor.hpp"

#include <cstring>

namespace tessera {

namespace {

void check_region_in_tensor(const ImageTensor& canvas, const Region& r, const char* what) {
    if (r.row_start < 0 || r.row_start >= r.row_end || r.row_end > canvas.height() ||
        r.col_start < 0 || r.col_start >= r.col_end || r.col_end > canvas.width())
        throw DimensionError(std::string(what) + ": region " + to_string(r) +
                             " outside tensor " + to_string(canvas.shape()));
}

} // namespace

ImageTensor slice_region(const ImageTensor& canvas, const Region& r) {
    check_region_in_tensor(canvas, r, "slice_region");
    const int c = canvas.channels();
    ImageTensor out(r.rows(), r.cols(), c);
    const std::size_t row_bytes = static_cast<std::size_t>(r.cols()) * c * sizeof(double);
    for (int row = 0; row < r.rows(); ++row)
        std::memcpy(out.row_ptr(row), canvas.row_ptr(r.row_start + row, r.col_start), row_bytes);
    return out;
}

void paste_region(ImageTensor& canvas, const Region& r, const ImageTensor& src) {
    check_region_in_tensor(canvas, r, "paste_region");
    if (src.height() != r.rows() || src.width() != r.cols() ||
        src.channels() != canvas.channels())
        throw DimensionError("paste_region: source " + to_string(src.shape()) +
                             " does not match region " + to_string(r));
    const std::size_t row_bytes = static_cast<std::size_t>(r.cols()) * canvas.channels() * sizeof(double);
    for (int row = 0; row < r.rows(); ++row)
        std::memcpy(canvas.row_ptr(r.row_start + row, r.col_start), src.row_ptr(row), row_bytes);
}

} // namespace tessera
