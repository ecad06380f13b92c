#pragma once

#include "cantorsaw/cayley.hpp"
#include "cantorsaw/numeric.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cantorsaw {

enum class VisitedMode { Auto, Arena, Hash };

struct CountOptions {
    int workers = 1;                  // 0 selects the hardware concurrency
    int prefix_depth = 4;             // walks are split into subtrees at this length
    std::optional<std::chrono::milliseconds> time_limit;
    std::size_t max_arena_vertices = 10'000'000;
    VisitedMode visited = VisitedMode::Auto;
};

struct SawCountTable {
    std::string graph_key;
    int n_max = 0;                    // requested length
    std::vector<BigInt> counts;       // c_0 .. c_k, exact
    bool truncated = false;           // true when k < n_max because a budget ran out
    std::vector<double> wall_time;    // seconds elapsed when c_n became known

    int complete_through() const noexcept { return static_cast<int>(counts.size()) - 1; }
};

// Exact c_0..c_{n_max}. Parallel over walk prefixes; the counts do not depend
// on the worker count. When the time limit runs out the table holds the
// lengths that were completed and is marked truncated.
SawCountTable count_saws(const CayleyGraph& g, int n_max, const CountOptions& options = {});

// Deliberately plain recursion over an explicit vertex list. Shares no
// traversal code with count_saws.
BigInt naive_count_oracle(const CayleyGraph& g, int n);

// Rigorous bounds c_n^(1/n) (n >= 1) and their running minimum, plus the
// non-rigorous ratio estimates c_{n+1}/c_n.
struct MuEstimate {
    unsigned digits = 12;
    int n_max = 0;
    std::vector<Decimal> upper_bounds;   // index n-1 holds c_n^(1/n)
    std::vector<Decimal> running_min;    // index n-1 holds min_{k<=n} c_k^(1/k)
    std::vector<Rational> ratios;        // index n-1 holds c_{n+1}/c_n, heuristic only

    const Decimal& bound() const { return running_min.back(); }
};

// Throws FiniteGraph when some c_n vanishes.
MuEstimate mu_bounds(const SawCountTable& table, unsigned digits = 12);

struct StrictnessWitness {
    int n = 0;
    BigInt base_count;
    BigInt quotient_count;
};

// Least n with c_n(quotient) < c_n(base) over the common range.
std::optional<StrictnessWitness> first_strict_decrease(const SawCountTable& base, const SawCountTable& quotient);

struct StrictnessResult {
    std::optional<StrictnessWitness> witness;  // empty: inconclusive up to n_max
    int n_max = 0;
    SawCountTable base;
    SawCountTable quotient;
};

// Count-level witness for mu(G/N) < mu(G), N = <m_i g_i : i in mask>.
// Throws Precondition when N = {1} or when the radius-2 ball meets N.
StrictnessResult strictness_witness(const CayleyGraph& base, const ModuliMask& mask, int n_max,
                                    const CountOptions& options = {});

struct FeketeReport {
    std::size_t pairs_checked = 0;
    std::vector<std::pair<int, int>> violations;  // (m, n), m <= n, with c_{m+n} > c_m c_n

    bool ok() const noexcept { return violations.empty(); }
};

FeketeReport fekete_check(const SawCountTable& table);

// First n where lower.counts[n] > upper.counts[n], if any.
std::optional<int> first_domination_violation(const SawCountTable& lower, const SawCountTable& upper);

// c_0 = 1, c_1 = d, c_2 = d(d-1). Throws InvariantViolation otherwise.
void verify_basic_invariants(const SawCountTable& table, std::size_t degree);

} // namespace cantorsaw
