#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cantorsaw/cayley.hpp"
#include "cantorsaw/error.hpp"
#include "cantorsaw/saw.hpp"
#include "test_support.hpp"

#include <array>
#include <map>
#include <set>

using namespace cantorsaw;

namespace {

Element el(std::vector<std::int64_t> v)
{
    return Element{std::move(v)};
}

CayleyGraph torus(int k)
{
    return quotient_graph(CayleyGraph::parse("Z^3"), ModuliMask::single(0, k));
}

// Oracle: BFS in Z^3 over plain coordinate triples.
std::map<std::array<int, 3>, int> lattice_ball(int r)
{
    std::map<std::array<int, 3>, int> dist{{{0, 0, 0}, 0}};
    std::vector<std::array<int, 3>> frontier{{0, 0, 0}};
    for (int d = 1; d <= r; ++d) {
        std::vector<std::array<int, 3>> next;
        for (auto p : frontier)
            for (int axis = 0; axis < 3; ++axis)
                for (int step : {-1, 1}) {
                    auto q = p;
                    q[axis] += step;
                    if (dist.emplace(q, d).second)
                        next.push_back(q);
                }
        frontier = next;
    }
    return dist;
}

RootedBall reindexed(const RootedBall& b, const std::vector<int>& perm)
{
    // perm[old] = new, root fixed
    RootedBall out;
    out.radius = b.radius;
    out.vertices.resize(b.size());
    out.distance.resize(b.size());
    out.adjacency.resize(b.size());
    for (std::size_t v = 0; v < b.size(); ++v) {
        out.vertices[perm[v]] = b.vertices[v];
        out.distance[perm[v]] = b.distance[v];
    }
    for (auto [i, j] : b.edges) {
        int a = perm[i], c = perm[j];
        out.edges.emplace_back(std::min(a, c), std::max(a, c));
        out.adjacency[a].push_back(c);
        out.adjacency[c].push_back(a);
    }
    std::sort(out.edges.begin(), out.edges.end());
    for (auto& adj : out.adjacency)
        std::sort(adj.begin(), adj.end());
    for (const auto& [arc, labels] : b.arc_labels)
        out.arc_labels[{perm[arc.first], perm[arc.second]}] = labels;
    return out;
}

} // namespace

TEST_CASE("neighbors")
{
    auto z2 = CayleyGraph::parse("Z^2");
    CHECK(neighbors(z2, z2.root).size() == 4);

    auto cz = CayleyGraph::parse("Z/2 x Z");
    CHECK(neighbors(cz, cz.root).size() == 3);

    auto z = CayleyGraph::parse("Z");
    auto nb = neighbors(z, el({5}));
    CHECK(std::set<Element>(nb.begin(), nb.end()) == std::set<Element>{el({4}), el({6})});

    CHECK_THROWS_AS(neighbors(z, el({1, 2})), Error);
}

TEST_CASE("balls")
{
    auto z2 = CayleyGraph::parse("Z^2");
    auto b1 = ball(z2, 1);
    CHECK(b1.size() == 5);
    CHECK(b1.edges.size() == 4);
    CHECK(ball(z2, 2).size() == 13);
    CHECK(ball(CayleyGraph::parse("F_2"), 2).size() == 17);
    CHECK(ball(z2, 0).size() == 1);

    // vertex counts match an independent BFS and are monotone
    std::size_t previous = 0;
    for (int r = 0; r <= 5; ++r) {
        auto b = ball(CayleyGraph::parse("Z^3"), r);
        CHECK(b.size() == lattice_ball(r).size());
        CHECK(b.size() >= previous);
        previous = b.size();
        for (std::size_t v = 1; v < b.size(); ++v) {
            CHECK(b.distance[v] <= r);
            bool closer = false;
            for (int w : b.adjacency[v])
                closer |= b.distance[w] == b.distance[v] - 1;
            CHECK(closer);
        }
    }

    // walk convention drops edges between two vertices at distance r
    auto c5 = CayleyGraph::parse("Z/5");
    CHECK(ball(c5, 2).edges.size() == 4);
    CHECK(ball(c5, 2, {10'000'000, BallEdges::Induced}).edges.size() == 5);

    try {
        ball(CayleyGraph::parse("F_3"), 6, {100, BallEdges::Walk});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ResourceExhausted);
        CHECK(std::string(e.what()).find("radius 6") != std::string::npos);
    }
}

TEST_CASE("rooted isomorphism examples")
{
    auto b = ball(CayleyGraph::parse("Z^2"), 2);
    std::vector<int> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i == 0 ? 0 : static_cast<int>(perm.size() - i);
    auto shuffled = reindexed(b, perm);
    CHECK(rooted_isomorphic(b, shuffled));
    CHECK(search_isomorphic(b, shuffled));

    CHECK_FALSE(rooted_isomorphic(ball(CayleyGraph::parse("Z^2"), 1), ball(CayleyGraph::parse("Z/2 x Z"), 1)));
    CHECK(rooted_isomorphic(ball(CayleyGraph::parse("Z^3"), 2), ball(torus(7), 2)));
    CHECK(search_isomorphic(ball(CayleyGraph::parse("Z^3"), 2), ball(torus(7), 2)));
}

TEST_CASE("torus balls against an explicit coordinate map")
{
    // Oracle: for k >= 5, (x, y, z) -> (x mod k, y, z) is a bijection of
    // radius-2 balls preserving walk-convention edges; for k <= 4 the vertex
    // counts already differ.
    const auto lattice = lattice_ball(2);
    const auto limit = ball(CayleyGraph::parse("Z^3"), 2);
    for (int k = 2; k <= 12; ++k) {
        CAPTURE(k);
        std::set<std::array<int, 3>> image;
        for (const auto& [p, d] : lattice)
            image.insert({((p[0] % k) + k) % k, p[1], p[2]});
        const bool bijective = image.size() == lattice.size();
        auto b = ball(torus(k), 2);
        CHECK(b.size() == image.size());
        bool edges_match = bijective;
        if (bijective) {
            std::set<std::pair<std::array<int, 3>, std::array<int, 3>>> lattice_edges, torus_edges;
            auto wrap = [&](std::array<int, 3> p) { return std::array<int, 3>{((p[0] % k) + k) % k, p[1], p[2]}; };
            for (const auto& [p, d] : lattice) {
                if (d == 2)
                    continue;
                for (int axis = 0; axis < 3; ++axis)
                    for (int step : {-1, 1}) {
                        auto q = p;
                        q[axis] += step;
                        lattice_edges.insert(std::minmax(wrap(p), wrap(q)));
                    }
            }
            edges_match = lattice_edges.size() == b.edges.size();
        }
        const bool expected = k >= 5;
        CHECK((bijective && edges_match) == expected);
        CHECK(rooted_isomorphic(b, limit) == expected);
        CHECK(search_isomorphic(b, limit) == expected);
    }
}

TEST_CASE("isomorphism is an equivalence and the fast path never contradicts the search")
{
    std::vector<RootedBall> balls;
    for (std::string term : {"Z^2", "Z/2 x Z", "Z/3 x Z", "Z/4 x Z", "Z/5 x Z", "F_2", "Z^3", "Z/5 x Z^2", "H3 x Z"})
        for (int r : {1, 2})
            balls.push_back(ball(CayleyGraph::parse(term), r));
    balls.push_back(ball(quotient_graph(CayleyGraph::parse("Z^2"), ModuliMask::single(0, 5)), 2));
    for (const auto& a : balls) {
        CHECK(rooted_isomorphic(a, a));
        for (const auto& b : balls) {
            const bool ab = rooted_isomorphic(a, b);
            CHECK(ab == rooted_isomorphic(b, a));
            if (labeled_isomorphic(a, b))
                CHECK(search_isomorphic(a, b));
            CHECK(ab == search_isomorphic(a, b));
            for (const auto& c : balls)
                if (ab && rooted_isomorphic(b, c))
                    CHECK(rooted_isomorphic(a, c));
        }
    }
    // the quotient by 5 e_1 and the explicit product Z/5 x Z agree
    CHECK(search_isomorphic(balls.back(), ball(CayleyGraph::parse("Z/5 x Z"), 2)));
}

TEST_CASE("local convergence radius")
{
    const auto limit = CayleyGraph::parse("Z^3");
    CHECK(local_convergence_radius(torus, 2, limit, 2, 12) == 5);
    // keeping every edge between ball vertices also closes cycles of length 2r + 1
    CHECK(local_convergence_radius(torus, 2, limit, 2, 12, {10'000'000, BallEdges::Induced}) == 6);
    CHECK(local_convergence_radius(torus, 2, limit, 0, 12) == 2);
    auto constant = [&](int) { return limit; };
    CHECK(local_convergence_radius(constant, 3, limit, 2, 8) == 3);
    try {
        local_convergence_radius(torus, 2, limit, 2, 4);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NoStabilization);
    }
}

TEST_CASE("product with the line")
{
    auto z = CayleyGraph::parse("Z");
    auto zz = product_with_line(z);
    CHECK(zz.degree() == 4);
    CHECK(count_saws(zz, 8).counts == count_saws(CayleyGraph::parse("Z^2"), 8).counts);

    auto cyl = product_with_line(CayleyGraph::parse("Z/3"));
    CHECK(cyl.degree() == 4);
    CHECK(product_with_line(CayleyGraph::parse("F_2")).degree() == 6);

    for (const auto& term : testing::menagerie()) {
        auto g = CayleyGraph::parse(term);
        auto p = product_with_line(g);
        CHECK(p.degree() == g.degree() + 2);
        CHECK(p.group.central_rank() == g.group.central_rank());
        CHECK_FALSE(first_domination_violation(count_saws(g, 6), count_saws(p, 6)));
    }

    // a product with the line keeps the quotient structure of its factor
    auto q = quotient_graph(CayleyGraph::parse("Z^2 x Z"), ModuliMask::single(0, 3));
    auto pq = product_with_line(q);
    CHECK(pq.key() == "quot(Z^2 x Z; mask=10; m=[3,_]) x Z");
    CHECK(pq.degree() == 8);
}
