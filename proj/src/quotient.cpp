#include "cantorsaw/quotient.hpp"

#include "cantorsaw/error.hpp"

#include <numeric>
#include <unordered_set>

namespace cantorsaw {

CentralSubgroupSpec CentralSubgroupSpec::from_mask(const ModuliMask& mask)
{
    CentralSubgroupSpec spec;
    for (std::size_t i = 0; i < mask.entries.size(); ++i)
        if (mask.entries[i])
            spec.generators.push_back({i, *mask.entries[i]});
    return spec;
}

CentralSubgroupSpec CentralSubgroupSpec::single(std::size_t index, std::int64_t multiple)
{
    return CentralSubgroupSpec{{{index, multiple}}};
}

Group central_quotient(const Group& group, const ModuliMask& mask)
{
    mask.validate(group.central_rank());
    return group.quotient(mask);
}

namespace {

// Step d such that the subgroup's trace on central coordinate i is dZ (mod M).
std::vector<std::int64_t> coordinate_steps(const Group& group, const CentralSubgroupSpec& spec)
{
    std::vector<std::int64_t> steps(group.central_rank(), 0);
    for (const auto& gen : spec.generators) {
        if (gen.index >= group.central_rank())
            throw Error(ErrorKind::InvalidArgument,
                        "subgroup generator index " + std::to_string(gen.index) + " outside central basis of "
                            + group.key());
        std::int64_t& d = steps[gen.index];
        d = std::gcd(d, gen.multiple < 0 ? -gen.multiple : gen.multiple);
    }
    for (std::size_t i = 0; i < steps.size(); ++i)
        steps[i] = std::gcd(steps[i], group.central_modulus(i));
    return steps;
}

} // namespace

bool subgroup_member(const Group& group, const Element& g, const CentralSubgroupSpec& spec)
{
    group.validate(g);
    const auto steps = coordinate_steps(group, spec);

    Element rest = g;
    for (std::size_t i = 0; i < group.central_rank(); ++i)
        rest.data[group.central_position(i)] = 0;
    if (!group.is_identity(rest))
        return false;

    for (std::size_t i = 0; i < group.central_rank(); ++i) {
        const std::int64_t a = g.data[group.central_position(i)];
        const std::int64_t d = steps[i];
        if (d == 0 ? a != 0 : a % d != 0)
            return false;
    }
    return true;
}

bool is_trivial(const Group& group, const CentralSubgroupSpec& spec)
{
    const auto steps = coordinate_steps(group, spec);
    for (std::size_t i = 0; i < steps.size(); ++i) {
        const std::int64_t m = group.central_modulus(i);
        // N's trace at i is dZ / (dZ cap MZ); trivial iff d == M (d divides M).
        if (steps[i] != 0 && steps[i] != m)
            return false;
    }
    return true;
}

StabilizationReport stabilization_check(const Group& group,
                                        const std::function<CentralSubgroupSpec(int)>& family,
                                        const CentralSubgroupSpec& limit, std::span<const Element> finite_set,
                                        int first, int horizon)
{
    if (horizon < first)
        throw Error(ErrorKind::InvalidArgument, "stabilization horizon precedes the first index");

    auto trace = [&](const CentralSubgroupSpec& spec) {
        std::vector<bool> in(finite_set.size());
        for (std::size_t j = 0; j < finite_set.size(); ++j)
            in[j] = subgroup_member(group, finite_set[j], spec);
        return in;
    };
    auto describe = [&](const std::vector<bool>& in) {
        std::vector<std::string> out;
        for (std::size_t j = 0; j < in.size(); ++j)
            if (in[j])
                out.push_back(group.format(finite_set[j]));
        return out;
    };

    const auto target = trace(limit);
    StabilizationReport report;
    report.horizon = horizon;
    report.limit_intersection = describe(target);
    report.n0 = first;
    for (int n = first; n <= horizon; ++n) {
        auto current = trace(family(n));
        if (current != target) {
            report.n0 = n + 1;
            report.last_mismatch = describe(current);
        }
    }
    if (report.n0 > horizon)
        throw Error(ErrorKind::NoStabilization,
                    "N_n cap F still differs from N_inf cap F at the horizon n = " + std::to_string(horizon));
    return report;
}

std::vector<Element> radius_two_ball(const Group& group, const GeneratingSet& gens)
{
    std::vector<Element> ball{group.identity()};
    std::unordered_set<Element, ElementHash> seen{group.identity()};
    for (const Element& s : gens.closure)
        if (seen.insert(s).second)
            ball.push_back(s);
    for (const Element& s : gens.closure) {
        for (const Element& t : gens.closure) {
            Element st = group.multiply(s, t);
            if (seen.insert(st).second)
                ball.push_back(std::move(st));
        }
    }
    return ball;
}

bool si_hypothesis_check(const Group& group, const GeneratingSet& gens, const CentralSubgroupSpec& spec)
{
    if (is_trivial(group, spec))
        throw Error(ErrorKind::TrivialSubgroup, "N = {1}: the strict-inequality hypothesis needs N != {1}");
    const auto ball = radius_two_ball(group, gens);
    for (std::size_t j = 1; j < ball.size(); ++j)
        if (subgroup_member(group, ball[j], spec))
            return false;
    return true;
}

} // namespace cantorsaw
