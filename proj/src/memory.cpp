#include "tessera/memory.hpp"

namespace tessera::memory {

namespace {
std::atomic<std::size_t> g_current{0};
std::atomic<std::size_t> g_peak{0};
} // namespace

namespace detail {

void record_alloc(std::size_t bytes) {
    std::size_t now = g_current.fetch_add(bytes, std::memory_order_relaxed) + bytes;
    std::size_t peak = g_peak.load(std::memory_order_relaxed);
    while (now > peak && !g_peak.compare_exchange_weak(peak, now, std::memory_order_relaxed)) {
    }
}

void record_free(std::size_t bytes) {
    g_current.fetch_sub(bytes, std::memory_order_relaxed);
}

} // namespace detail

std::size_t current_tensor_bytes() {
    return g_current.load(std::memory_order_relaxed);
}

std::size_t peak_tensor_bytes() {
    return g_peak.load(std::memory_order_relaxed);
}

void reset_peak_tensor_bytes() {
    g_peak.store(g_current.load(std::memory_order_relaxed), std::memory_order_relaxed);
}

} // namespace tessera::memory
