#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantorsaw/error.hpp"
#include "cantorsaw/quotient.hpp"
#include "cantorsaw/saw.hpp"

#include <random>
#include <set>

using namespace cantorsaw;

namespace {

Element el(std::vector<std::int64_t> v)
{
    return Element{std::move(v)};
}

} // namespace

TEST_CASE("central quotient reduces the masked coordinate")
{
    Group z3 = Group::parse("Z^2 x Z");
    Group q = central_quotient(z3, ModuliMask::single(0, 3));
    CHECK(q.key() == "quot(Z^2 x Z; mask=10; m=[3,_])");
    CHECK(q.multiply(el({2, 0, 0}), el({2, 5, -1})) == el({1, 5, -1}));

    CHECK(central_quotient(z3, ModuliMask{}).key() == z3.key());

    CHECK_THROWS_AS(central_quotient(z3, ModuliMask::single(2, 3)), Error);   // index out of range
    CHECK_THROWS_AS(central_quotient(z3, ModuliMask::single(0, 1)), Error);   // modulus < 2
    CHECK_THROWS_AS(central_quotient(q, ModuliMask::single(0, 5)), Error);    // already quotiented
}

TEST_CASE("heisenberg quotient by 4z matches the matrix law mod 4")
{
    Group hq = central_quotient(Group::parse("H3 x Z"), ModuliMask::single(0, 4));
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<std::int64_t> c(-5, 5), z(0, 3);
    for (int t = 0; t < 300; ++t) {
        Element a = el({c(rng), c(rng), z(rng), c(rng)});
        Element b = el({c(rng), c(rng), z(rng), c(rng)});
        Element ab = hq.multiply(a, b);
        std::int64_t zz = a.data[2] + b.data[2] + a.data[0] * b.data[1];
        CHECK(ab == el({a.data[0] + b.data[0], a.data[1] + b.data[1], ((zz % 4) + 4) % 4, a.data[3] + b.data[3]}));
    }
}

TEST_CASE("quotients compose")
{
    auto g = CayleyGraph::parse("Z^3");
    auto step = quotient_graph(quotient_graph(g, ModuliMask::single(0, 3)), ModuliMask::single(2, 5));
    auto once = quotient_graph(g, parse_mask("101", "[3,_,5]"));
    CHECK(step.key() == once.key());
    CHECK(count_saws(step, 7).counts == count_saws(once, 7).counts);
}

TEST_CASE("subgroup membership")
{
    Group z3 = Group::parse("Z^3");
    auto spec = CentralSubgroupSpec::single(0, 3);
    CHECK(subgroup_member(z3, el({6, 0, 0}), spec));
    CHECK_FALSE(subgroup_member(z3, el({5, 0, 0}), spec));
    CHECK_FALSE(subgroup_member(z3, el({3, 1, 0}), spec));
    CHECK(subgroup_member(z3, el({0, 0, 0}), spec));

    // non-central coordinates must vanish
    Group h = Group::parse("H3 x Z");
    CHECK(subgroup_member(h, el({0, 0, 6, 0}), CentralSubgroupSpec::single(0, 2)));
    CHECK_FALSE(subgroup_member(h, el({1, 0, 6, 0}), CentralSubgroupSpec::single(0, 2)));
    CHECK_FALSE(subgroup_member(h, el({0, 0, 0, 2}), CentralSubgroupSpec::single(0, 2)));
}

TEST_CASE("membership agrees with brute-force enumeration of products")
{
    Group g = Group::parse("Z^3");
    CentralSubgroupSpec spec{{{0, 3}, {2, 2}}};
    const int bound = 3 * 3;
    std::set<Element> generated;
    for (int a = -bound; a <= bound; ++a)
        for (int c = -bound; c <= bound; ++c)
            generated.insert(g.multiply(g.central_power(0, 3 * a), g.central_power(2, 2 * c)));
    for (int x = -bound; x <= bound; ++x)
        for (int y = -2; y <= 2; ++y)
            for (int z = -bound; z <= bound; ++z) {
                Element e = el({x, y, z});
                CHECK(subgroup_member(g, e, spec) == (generated.count(e) == 1));
            }

    // inside an existing quotient: <4 g_0> in Z/6 is <2>
    Group q = central_quotient(Group::parse("Z^2"), ModuliMask::single(0, 6));
    std::set<Element> sub;
    for (int k = -12; k <= 12; ++k)
        sub.insert(q.central_power(0, 4 * k));
    for (int x = 0; x < 6; ++x)
        CHECK(subgroup_member(q, el({x, 0}), CentralSubgroupSpec::single(0, 4)) == (sub.count(el({x, 0})) == 1));
}

TEST_CASE("stabilization check")
{
    Group z = Group::parse("Z");
    auto family = [](int k) { return CentralSubgroupSpec::single(0, k); };
    const CentralSubgroupSpec trivial;

    std::vector<Element> f;
    for (int j = -2; j <= 2; ++j)
        f.push_back(el({j}));
    // brute force over k <= 10: k Z cap F = {0} exactly when k = 0 or k >= 3
    for (int k = 0; k <= 10; ++k) {
        int hits = 0;
        for (const auto& e : f)
            hits += subgroup_member(z, e, family(k));
        CHECK((hits == 1) == (k == 0 || k >= 3));
    }
    auto report = stabilization_check(z, family, trivial, f, 0, 64);
    CHECK(report.n0 == 3);
    CHECK(report.limit_intersection == std::vector<std::string>{"(0)"});

    std::vector<Element> origin{el({0})};
    CHECK(stabilization_check(z, family, trivial, origin, 0, 64).n0 == 0);

    // radius-2 ball of Z^3 under N_k = <k e_1>
    auto g = CayleyGraph::parse("Z^3");
    auto ball2 = radius_two_ball(g.group, g.gens);
    CHECK(ball2.size() == 25);
    CHECK(stabilization_check(g.group, family, trivial, ball2, 0, 64).n0 == 3);

    // the limit never reached
    auto never = [](int) { return CentralSubgroupSpec::single(0, 1); };
    try {
        stabilization_check(z, never, trivial, f, 0, 10);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoStabilization);
    }
}

TEST_CASE("radius-2 hypothesis")
{
    auto g = CayleyGraph::parse("Z^2");
    CHECK(radius_two_ball(g.group, g.gens).size() == 13);
    CHECK(si_hypothesis_check(g.group, g.gens, CentralSubgroupSpec::single(0, 3)));
    CHECK_FALSE(si_hypothesis_check(g.group, g.gens, CentralSubgroupSpec::single(0, 2)));
    try {
        si_hypothesis_check(g.group, g.gens, CentralSubgroupSpec{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TrivialSubgroup);
    }
    CHECK_THROWS_AS(si_hypothesis_check(g.group, g.gens, CentralSubgroupSpec::single(0, 0)), Error);
}

TEST_CASE("passing the radius-2 hypothesis keeps generator images distinct")
{
    for (std::string term : {"Z^2", "Z^3", "H3 x Z", "Z^2 x Z"}) {
        auto g = CayleyGraph::parse(term);
        for (std::int64_t m = 2; m <= 6; ++m) {
            auto spec = CentralSubgroupSpec::single(0, m);
            if (!si_hypothesis_check(g.group, g.gens, spec))
                continue;
            auto q = quotient_graph(g, ModuliMask::single(0, m));
            CHECK(q.degree() == g.degree());
        }
    }
}
