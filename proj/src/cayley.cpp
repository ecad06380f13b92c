#include "cantorsaw/cayley.hpp"

#include "cantorsaw/error.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <unordered_map>

namespace cantorsaw {

CayleyGraph::CayleyGraph(Group g, const std::vector<Element>& generators)
    : group(std::move(g))
    , gens(symmetric_closure(group, generators))
    , root(group.identity())
    , key_(group.key())
{
    if (generators != group.standard_generators()) {
        key_ += " | S=[";
        for (std::size_t i = 0; i < generators.size(); ++i)
            key_ += (i ? "," : "") + group.format(generators[i]);
        key_ += "]";
    }
}

CayleyGraph CayleyGraph::standard(Group g)
{
    auto generators = g.standard_generators();
    return CayleyGraph(std::move(g), generators);
}

std::vector<Element> neighbors(const CayleyGraph& g, const Element& v)
{
    g.group.validate(v);
    std::vector<Element> out;
    out.reserve(g.gens.closure.size());
    for (const Element& s : g.gens.closure) {
        Element u = g.group.multiply(v, s);
        if (std::find(out.begin(), out.end(), u) == out.end())
            out.push_back(std::move(u));
    }
    return out;
}

RootedBall ball(const CayleyGraph& g, int radius, const BallOptions& options)
{
    if (radius < 0)
        throw Error(ErrorKind::InvalidArgument, "ball radius must be >= 0");

    RootedBall b;
    b.radius = radius;
    std::vector<Element> elements{g.root};
    std::unordered_map<Element, int, ElementHash> index{{g.root, 0}};
    b.distance.push_back(0);
    std::set<std::pair<int, int>> edges;

    for (std::size_t head = 0; head < elements.size(); ++head) {
        const int d = b.distance[head];
        const bool expand = d < radius;
        if (!expand && options.edges == BallEdges::Walk)
            continue;
        const Element u = elements[head];
        for (std::size_t si = 0; si < g.gens.closure.size(); ++si) {
            Element v = g.group.multiply(u, g.gens.closure[si]);
            auto it = index.find(v);
            int vi;
            if (it == index.end()) {
                if (!expand)
                    continue;
                if (elements.size() >= options.max_vertices)
                    throw Error(ErrorKind::ResourceExhausted,
                                "ball of radius " + std::to_string(radius) + " in " + g.key() + " exceeds "
                                    + std::to_string(options.max_vertices) + " vertices");
                vi = static_cast<int>(elements.size());
                index.emplace(v, vi);
                elements.push_back(std::move(v));
                b.distance.push_back(d + 1);
            } else {
                vi = it->second;
            }
            const int ui = static_cast<int>(head);
            auto& labels = b.arc_labels[{ui, vi}];
            labels.insert(labels.end(), g.gens.labels[si].begin(), g.gens.labels[si].end());
            std::sort(labels.begin(), labels.end());
            labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
            edges.insert({std::min(ui, vi), std::max(ui, vi)});
        }
    }

    b.vertices.reserve(elements.size());
    for (const Element& e : elements)
        b.vertices.push_back(g.group.format(e));
    b.adjacency.resize(elements.size());
    b.elements = std::move(elements);
    for (auto [i, j] : edges) {
        b.edges.emplace_back(i, j);
        b.adjacency[i].push_back(j);
        b.adjacency[j].push_back(i);
    }
    for (auto& adj : b.adjacency)
        std::sort(adj.begin(), adj.end());
    return b;
}

namespace {

using LabeledArc = std::tuple<int, std::vector<GeneratorLabel>, int>;

// Relabels vertices in BFS order, expanding arcs by label, and returns the
// resulting arc list. Equal outputs imply a root-preserving isomorphism.
std::vector<LabeledArc> labeled_form(const RootedBall& b)
{
    std::vector<std::vector<std::pair<std::vector<GeneratorLabel>, int>>> out(b.size());
    for (const auto& [arc, labels] : b.arc_labels)
        out[arc.first].emplace_back(labels, arc.second);
    for (auto& arcs : out)
        std::sort(arcs.begin(), arcs.end());

    std::vector<int> relabel(b.size(), -1);
    std::deque<int> queue{0};
    relabel[0] = 0;
    int next = 1;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& [labels, v] : out[u]) {
            if (relabel[v] < 0) {
                relabel[v] = next++;
                queue.push_back(v);
            }
        }
    }

    std::vector<LabeledArc> form;
    for (const auto& [arc, labels] : b.arc_labels)
        form.emplace_back(relabel[arc.first], labels, relabel[arc.second]);
    std::sort(form.begin(), form.end());
    return form;
}

bool adjacent(const RootedBall& b, int u, int v)
{
    return std::binary_search(b.adjacency[u].begin(), b.adjacency[u].end(), v);
}

// Joint color refinement over both balls, seeded with the distance to the root.
std::pair<std::vector<int>, std::vector<int>> refine(const RootedBall& a, const RootedBall& b)
{
    std::vector<int> ca(a.distance), cb(b.distance);
    std::size_t classes = 0;
    for (;;) {
        std::map<std::pair<int, std::vector<int>>, int> palette;
        auto signature = [](const RootedBall& g, const std::vector<int>& c, int v) {
            std::vector<int> nb;
            for (int w : g.adjacency[v])
                nb.push_back(c[w]);
            std::sort(nb.begin(), nb.end());
            return std::make_pair(c[v], std::move(nb));
        };
        std::vector<std::pair<int, std::vector<int>>> sa, sb;
        for (std::size_t v = 0; v < a.size(); ++v)
            sa.push_back(signature(a, ca, static_cast<int>(v)));
        for (std::size_t v = 0; v < b.size(); ++v)
            sb.push_back(signature(b, cb, static_cast<int>(v)));
        for (const auto& s : sa)
            palette.emplace(s, 0);
        for (const auto& s : sb)
            palette.emplace(s, 0);
        int id = 0;
        for (auto& [sig, color] : palette)
            color = id++;
        for (std::size_t v = 0; v < a.size(); ++v)
            ca[v] = palette.at(sa[v]);
        for (std::size_t v = 0; v < b.size(); ++v)
            cb[v] = palette.at(sb[v]);
        if (palette.size() == classes)
            break;
        classes = palette.size();
    }
    return {ca, cb};
}

class Matcher {
public:
    Matcher(const RootedBall& a, const RootedBall& b, std::vector<int> ca, std::vector<int> cb)
        : a_(a), b_(b), ca_(std::move(ca)), cb_(std::move(cb)), fwd_(a.size(), -1), bwd_(b.size(), -1)
    {
        // BFS index order: every non-root vertex has an earlier neighbor.
        order_.resize(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            order_[i] = static_cast<int>(i);
        std::stable_sort(order_.begin(), order_.end(),
                         [&](int x, int y) { return a.distance[x] < a.distance[y]; });
    }

    bool run()
    {
        if (ca_[0] != cb_[0])
            return false;
        return extend(0);
    }

private:
    bool feasible(int u, int v) const
    {
        if (bwd_[v] >= 0 || ca_[u] != cb_[v])
            return false;
        int mapped_u = 0;
        for (int w : a_.adjacency[u]) {
            if (fwd_[w] < 0)
                continue;
            ++mapped_u;
            if (!adjacent(b_, v, fwd_[w]))
                return false;
        }
        int mapped_v = 0;
        for (int w : b_.adjacency[v])
            if (bwd_[w] >= 0)
                ++mapped_v;
        return mapped_u == mapped_v;
    }

    bool extend(std::size_t depth)
    {
        if (depth == order_.size())
            return true;
        const int u = order_[depth];
        std::vector<int> candidates;
        if (depth == 0) {
            candidates.push_back(0);
        } else {
            int anchor = -1;
            for (int w : a_.adjacency[u])
                if (fwd_[w] >= 0) {
                    anchor = fwd_[w];
                    break;
                }
            if (anchor >= 0) {
                candidates = b_.adjacency[anchor];
            } else {
                for (std::size_t v = 0; v < b_.size(); ++v)
                    candidates.push_back(static_cast<int>(v));
            }
        }
        for (int v : candidates) {
            if (!feasible(u, v))
                continue;
            fwd_[u] = v;
            bwd_[v] = u;
            if (extend(depth + 1))
                return true;
            fwd_[u] = -1;
            bwd_[v] = -1;
        }
        return false;
    }

    const RootedBall& a_;
    const RootedBall& b_;
    std::vector<int> ca_, cb_;
    std::vector<int> fwd_, bwd_;
    std::vector<int> order_;
};

} // namespace

bool labeled_isomorphic(const RootedBall& a, const RootedBall& b)
{
    if (a.size() != b.size() || a.edges.size() != b.edges.size() || a.arc_labels.size() != b.arc_labels.size())
        return false;
    if (a.arc_labels.empty())
        return a.edges.empty() && b.edges.empty();
    return labeled_form(a) == labeled_form(b);
}

bool search_isomorphic(const RootedBall& a, const RootedBall& b)
{
    if (a.size() != b.size() || a.edges.size() != b.edges.size())
        return false;
    if (a.size() == 0)
        return true;
    auto [ca, cb] = refine(a, b);
    auto sorted_a = ca, sorted_b = cb;
    std::sort(sorted_a.begin(), sorted_a.end());
    std::sort(sorted_b.begin(), sorted_b.end());
    if (sorted_a != sorted_b)
        return false;
    return Matcher(a, b, std::move(ca), std::move(cb)).run();
}

bool rooted_isomorphic(const RootedBall& a, const RootedBall& b)
{
    return labeled_isomorphic(a, b) || search_isomorphic(a, b);
}

int local_convergence_radius(const std::function<CayleyGraph(int)>& family, int first, const CayleyGraph& limit,
                             int radius, int horizon, const BallOptions& options)
{
    if (horizon < first)
        throw Error(ErrorKind::InvalidArgument, "local convergence horizon precedes the first index");
    const RootedBall target = ball(limit, radius, options);
    int n0 = first;
    for (int n = first; n <= horizon; ++n)
        if (!rooted_isomorphic(ball(family(n), radius, options), target))
            n0 = n + 1;
    if (n0 > horizon)
        throw Error(ErrorKind::NoStabilization,
                    "B_n(" + std::to_string(radius) + ") still differs from the limit ball at n = "
                        + std::to_string(horizon));
    return n0;
}

namespace {

Element with_line_coordinate(const Group& base, const Element& e, std::int64_t t)
{
    Element out = e;
    out.data.insert(out.data.begin() + static_cast<std::ptrdiff_t>(base.fixed_size()), t);
    return out;
}

} // namespace

CayleyGraph product_with_line(const CayleyGraph& g)
{
    Group product(Term::product({g.group.term(), Term::free_abelian(1)}));
    std::vector<Element> generators;
    for (const Element& s : g.gens.generators)
        generators.push_back(with_line_coordinate(g.group, s, 0));
    generators.push_back(with_line_coordinate(g.group, g.group.identity(), 1));
    CayleyGraph out(std::move(product), generators);
    out.root = with_line_coordinate(g.group, g.root, 0);
    return out;
}

CayleyGraph quotient_graph(const CayleyGraph& g, const ModuliMask& mask)
{
    Group q = central_quotient(g.group, mask);
    std::vector<Element> generators;
    for (const Element& s : g.gens.generators)
        generators.push_back(q.image(s));
    CayleyGraph out(std::move(q), generators);
    out.root = out.group.image(g.root);
    return out;
}

} // namespace cantorsaw
