#pragma once

#include "cantorsaw/group.hpp"
#include "cantorsaw/quotient.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cantorsaw {

struct CayleyGraph {
    Group group;
    GeneratingSet gens;
    Element root;

    CayleyGraph(Group g, const std::vector<Element>& generators);
    // Standard generators of every factor.
    static CayleyGraph standard(Group g);
    static CayleyGraph parse(std::string_view term) { return standard(Group::parse(term)); }

    std::size_t degree() const noexcept { return gens.degree(); }
    // The group key, extended with the generators when they are not the
    // standard ones.
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

// {v s : s in S u S^-1}, deduplicated, in closure order.
std::vector<Element> neighbors(const CayleyGraph& g, const Element& v);

// Which edges a ball keeps. Walk keeps the edges traversed by walks of
// length <= r from the root (at least one endpoint at distance < r); Induced
// keeps every edge between ball vertices.
enum class BallEdges { Walk, Induced };

struct BallOptions {
    std::size_t max_vertices = 10'000'000;
    BallEdges edges = BallEdges::Walk;
};

struct RootedBall {
    int radius = 0;
    std::vector<std::string> vertices;          // canonical text, root at index 0
    std::vector<Element> elements;              // parallel to vertices
    std::vector<int> distance;
    std::vector<std::vector<int>> adjacency;    // sorted
    std::vector<std::pair<int, int>> edges;     // i < j, sorted
    // Generator labels of the arc u -> v = u s. Auxiliary data for the
    // labeled fast path only.
    std::map<std::pair<int, int>, std::vector<GeneratorLabel>> arc_labels;

    std::size_t size() const noexcept { return vertices.size(); }
};

// BFS-exact ball with deterministic indexing. Throws ResourceExhausted when
// the vertex budget is exceeded.
RootedBall ball(const CayleyGraph& g, int radius, const BallOptions& options = {});

// Sufficient test: identical canonical forms of the generator-labeled balls.
bool labeled_isomorphic(const RootedBall& a, const RootedBall& b);
// Exact root-preserving isomorphism by refinement and backtracking.
bool search_isomorphic(const RootedBall& a, const RootedBall& b);
// Labeled fast path, falling back to the exact search.
bool rooted_isomorphic(const RootedBall& a, const RootedBall& b);

// Least n0 in [first, horizon] with B_n(r) ~ B_inf(r) for every n0 <= n <= horizon.
// Throws NoStabilization when B_horizon(r) still differs.
int local_convergence_radius(const std::function<CayleyGraph(int)>& family, int first, const CayleyGraph& limit,
                             int radius, int horizon, const BallOptions& options = {});

// Cay(G x Z, S x {0} u {(1, 1)}): the Cartesian product with the line graph.
CayleyGraph product_with_line(const CayleyGraph& g);

// Cay(G / <m_i g_i>, images of S).
CayleyGraph quotient_graph(const CayleyGraph& g, const ModuliMask& mask);

} // namespace cantorsaw
