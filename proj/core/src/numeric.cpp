#include "ergokit/numeric.hpp"

#include <atomic>
#include <cstdlib>

namespace ergokit {

namespace {

int initial_thread_count() {
    if (const char* env = std::getenv("ERGOKIT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

std::atomic<int>& thread_count_slot() {
    static std::atomic<int> count{initial_thread_count()};
    return count;
}

}  // namespace

int thread_count() { return thread_count_slot().load(); }

void set_thread_count(int n) { thread_count_slot().store(n < 1 ? 1 : n); }

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 64) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace ergokit
