#pragma once

#include "cantorsaw/group.hpp"

#include <functional>
#include <span>
#include <vector>

namespace cantorsaw {

// <m_i g_i> for the listed (index, multiple) pairs of a group's central
// basis. A multiple of 0 contributes the trivial subgroup; several entries
// on one index combine through gcd.
struct CentralSubgroupSpec {
    struct Generator {
        std::size_t index = 0;
        std::int64_t multiple = 0;
    };
    std::vector<Generator> generators;

    static CentralSubgroupSpec from_mask(const ModuliMask& mask);
    static CentralSubgroupSpec single(std::size_t index, std::int64_t multiple);
};

// G / <m_i g_i : i in mask>.
Group central_quotient(const Group& group, const ModuliMask& mask);

// g in <m_i g_i>? True iff every coordinate outside the central basis is
// trivial and each central coordinate a_i is a multiple of the generator
// (taken modulo any modulus the group already applies at i).
bool subgroup_member(const Group& group, const Element& g, const CentralSubgroupSpec& spec);

// Whether the spec denotes N = {1} inside `group`.
bool is_trivial(const Group& group, const CentralSubgroupSpec& spec);

struct StabilizationReport {
    int n0 = 0;            // least index from which N_n cap F = N_inf cap F up to the horizon
    int horizon = 0;       // last index sampled; stabilization is only verified up to here
    std::vector<std::string> limit_intersection;  // N_inf cap F, canonical text
    std::vector<std::string> last_mismatch;       // N_{n0-1} cap F when n0 > first index
};

// Samples n = first .. horizon. Throws NoStabilization when the last sampled
// index still disagrees with the limit.
StabilizationReport stabilization_check(const Group& group,
                                        const std::function<CentralSubgroupSpec(int)>& family,
                                        const CentralSubgroupSpec& limit, std::span<const Element> finite_set,
                                        int first, int horizon);

// Elements of word length <= 2 in Cay(G, S), identity first.
std::vector<Element> radius_two_ball(const Group& group, const GeneratingSet& gens);

// True iff the radius-2 ball around 1 meets N only at 1. Throws
// TrivialSubgroup when N = {1}.
bool si_hypothesis_check(const Group& group, const GeneratingSet& gens, const CentralSubgroupSpec& spec);

} // namespace cantorsaw
