#include "fcfv/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace fcfv {

namespace {

std::atomic<int> override_threads{0};

int env_threads()
{
    const char* v = std::getenv("FCFV_THREADS");
    if (v == nullptr) return 0;
    try {
        return std::max(0, std::stoi(v));
    } catch (const std::exception&) {
        return 0;
    }
}

}  // namespace

int max_threads()
{
    if (const int o = override_threads.load(); o > 0) return o;
    if (const int e = env_threads(); e > 0) return e;
    return std::max(1, static_cast<int>(std::thread::hardware_concurrency()));
}

void set_max_threads(int n) { override_threads.store(std::max(0, n)); }

std::vector<Chunk> split_range(int n, int parts)
{
    std::vector<Chunk> out;
    if (n <= 0) return out;
    parts = std::clamp(parts, 1, n);
    const int base = n / parts, extra = n % parts;
    int begin = 0;
    for (int p = 0; p < parts; ++p) {
        const int len = base + (p < extra ? 1 : 0);
        out.push_back({begin, begin + len});
        begin += len;
    }
    return out;
}

}  // namespace fcfv
