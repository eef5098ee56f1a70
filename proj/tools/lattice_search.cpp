// Maintenance tool: searches Korobov multipliers for the embedded rank-1
// lattice table in src/lattice_table.cpp. For each tabulated prime N it
// scores candidate multipliers a by the weighted P2 worst-case error
// criterion of the rule {frac(k * (1, a, a^2, ...) / N)} with product
// weights gamma_j = 1/j^2 up to dimension 100, and prints the best as a
// C++ table. Candidates are drawn deterministically, so the output is
// reproducible. Not built by default; enable with -DEPMGP_BUILD_DEV_TOOLS=ON.

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <thread>
#include <vector>

namespace {

constexpr int kDims = 100;
constexpr int kCandidates = 96;

uint64_t mix64(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

bool is_prime(uint64_t n) {
    if (n < 4) return n > 1;
    if (n % 2 == 0) return false;
    for (uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

// P2 criterion: -1 + (1/N) sum_k prod_j (1 + gamma_j * 2 pi^2 B2(frac(k a^{j-1} / N))).
double p2_criterion(uint64_t n, uint64_t a) {
    static std::vector<double> gamma;
    if (gamma.empty()) {
        gamma.resize(kDims);
        for (int j = 0; j < kDims; ++j) gamma[j] = 1.0 / ((j + 1.0) * (j + 1.0));
    }
    const double two_pi_sq = 2.0 * M_PI * M_PI;
    const double inv_n = 1.0 / static_cast<double>(n);
    double total = 0.0;
    for (uint64_t k = 0; k < n; ++k) {
        uint64_t t = k;  // k * a^{j-1} mod N, advanced by one power per dim
        double prod = 1.0;
        for (int j = 0; j < kDims; ++j) {
            const double x = static_cast<double>(t) * inv_n;
            prod *= 1.0 + gamma[j] * two_pi_sq * (x * x - x + 1.0 / 6.0);
            t = (t * a) % n;
        }
        total += prod;
    }
    return total * inv_n - 1.0;
}

}  // namespace

int main() {
    const std::vector<uint64_t> table_sizes = {1021,   2039,   4093,   8191,
                                               16381,  32749,  65521,  131071,
                                               262139, 524287, 1048573};
    for (uint64_t n : table_sizes) {
        if (!is_prime(n)) {
            std::fprintf(stderr, "N=%" PRIu64 " is not prime\n", n);
            return 1;
        }
    }

    std::printf("// Generated by tools/lattice_search.cpp (P2 criterion, weights 1/j^2, d=%d)\n",
                kDims);
    std::printf("constexpr LatticeEntry kLatticeTable[] = {\n");
    for (uint64_t n : table_sizes) {
        std::set<uint64_t> cands;
        uint64_t salt = 0;
        while (cands.size() < kCandidates) {
            const uint64_t a = 2 + mix64(n * 0x9E3779B97F4A7C15ull + salt++) % (n - 3);
            cands.insert(a);
        }
        std::vector<uint64_t> cand_list(cands.begin(), cands.end());
        std::vector<double> scores(cand_list.size());
        std::vector<std::thread> pool;
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        for (unsigned t = 0; t < hw; ++t) {
            pool.emplace_back([&, t]() {
                for (std::size_t i = t; i < cand_list.size(); i += hw)
                    scores[i] = p2_criterion(n, cand_list[i]);
            });
        }
        for (auto& th : pool) th.join();
        std::size_t best = 0;
        for (std::size_t i = 1; i < cand_list.size(); ++i)
            if (scores[i] < scores[best]) best = i;
        std::printf("    {%" PRIu64 "ull, %" PRIu64 "ull},  // P2 = %.6e\n", n,
                    cand_list[best], scores[best]);
        std::fflush(stdout);
    }
    std::printf("};\n");
    return 0;
}
