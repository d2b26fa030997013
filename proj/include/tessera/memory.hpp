#pragma once

#include <atomic>
#include <cstddef>
#include <limits>
#include <new>

namespace tessera::memory {

namespace detail {
void record_alloc(std::size_t bytes);
void record_free(std::size_t bytes);
} // namespace detail

/// Bytes of tensor storage currently alive.
std::size_t current_tensor_bytes();

/// High-water mark of tensor storage since start (or the last reset).
/// Releasing tensors never lowers it.
std::size_t peak_tensor_bytes();

/// Sets the high-water mark back to the currently live byte count.
void reset_peak_tensor_bytes();

/// Allocator used by ImageTensor storage; every allocation and release
/// is counted toward the live/peak tensor byte counters.
template <class T>
struct TrackingAllocator {
    using value_type = T;

    TrackingAllocator() = default;
    template <class U>
    constexpr TrackingAllocator(const TrackingAllocator<U>&) noexcept {}

    [[nodiscard]] T* allocate(std::size_t n) {
        if (n > std::numeric_limits<std::size_t>::max() / sizeof(T))
            throw std::bad_array_new_length();
        T* p = static_cast<T*>(::operator new(n * sizeof(T)));
        detail::record_alloc(n * sizeof(T));
        return p;
    }

    void deallocate(T* p, std::size_t n) noexcept {
        detail::record_free(n * sizeof(T));
        ::operator delete(p);
    }
};

template <class T, class U>
bool operator==(const TrackingAllocator<T>&, const TrackingAllocator<U>&) {
    return true;
}
template <class T, class U>
bool operator!=(const TrackingAllocator<T>&, const TrackingAllocator<U>&) {
    return false;
}

} // namespace tessera::memory
