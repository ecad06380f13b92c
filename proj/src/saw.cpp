#include "cantorsaw/saw.hpp"

#include "cantorsaw/error.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <unordered_map>
#include <unordered_set>

namespace cantorsaw {

namespace {

using Clock = std::chrono::steady_clock;

struct Interrupted {};

// Shared stop signal; polled every few thousand search nodes.
class Deadline {
public:
    explicit Deadline(std::optional<Clock::time_point> at) : at_(at) {}

    void poll(std::uint32_t& ticks)
    {
        if (++ticks & 0xfff)
            return;
        if (stopped_.load(std::memory_order_relaxed))
            throw Interrupted{};
        if (at_ && Clock::now() >= *at_) {
            stopped_.store(true, std::memory_order_relaxed);
            throw Interrupted{};
        }
    }

private:
    std::optional<Clock::time_point> at_;
    std::atomic<bool> stopped_{false};
};

// Dense vertex ids for the ball of radius n_max, neighbor lists (CSR) for the
// vertices that a walk of length <= n_max can leave from.
struct Arena {
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> targets;
    std::size_t vertex_count = 0;
};

std::optional<Arena> build_arena(const CayleyGraph& g, int n_max, std::size_t budget, Deadline& deadline)
{
    std::uint32_t ticks = 0;
    std::vector<Element> elements{g.root};
    std::vector<int> distance{0};
    std::unordered_map<Element, std::uint32_t, ElementHash> index{{g.root, 0}};
    Arena arena;
    arena.offsets.push_back(0);
    for (std::size_t head = 0; head < elements.size(); ++head) {
        deadline.poll(ticks);
        if (distance[head] < n_max) {
            const Element u = elements[head];
            for (const Element& s : g.gens.closure) {
                Element v = g.group.multiply(u, s);
                auto [it, inserted] = index.try_emplace(std::move(v), static_cast<std::uint32_t>(elements.size()));
                if (inserted) {
                    if (elements.size() >= budget)
                        return std::nullopt;
                    elements.push_back(it->first);
                    distance.push_back(distance[head] + 1);
                }
                arena.targets.push_back(it->second);
            }
        }
        arena.offsets.push_back(static_cast<std::uint32_t>(arena.targets.size()));
    }
    arena.vertex_count = elements.size();
    return arena;
}

class ArenaState {
public:
    using Vertex = std::uint32_t;

    explicit ArenaState(const Arena& a) : arena_(&a), visited_(a.vertex_count, 0) {}

    bool visited(Vertex v) const { return visited_[v] != 0; }
    void mark(Vertex v) { visited_[v] = 1; }
    void unmark(Vertex v) { visited_[v] = 0; }
    Vertex root() const { return 0; }

    template <class F>
    void for_each_neighbor(Vertex v, F&& f) const
    {
        for (std::uint32_t i = arena_->offsets[v]; i < arena_->offsets[v + 1]; ++i)
            f(arena_->targets[i]);
    }

private:
    const Arena* arena_;
    std::vector<std::uint8_t> visited_;
};

class HashState {
public:
    using Vertex = Element;

    explicit HashState(const CayleyGraph& g) : g_(&g) {}

    bool visited(const Vertex& v) const { return visited_.count(v) != 0; }
    void mark(const Vertex& v) { visited_.insert(v); }
    void unmark(const Vertex& v) { visited_.erase(v); }
    Vertex root() const { return g_->root; }

    template <class F>
    void for_each_neighbor(const Vertex& v, F&& f) const
    {
        std::vector<Element> out;
        out.reserve(g_->gens.closure.size());
        for (const Element& s : g_->gens.closure)
            out.push_back(g_->group.multiply(v, s));
        for (const Element& w : out)
            f(w);
    }

private:
    const CayleyGraph* g_;
    std::unordered_set<Element, ElementHash> visited_;
};

template <class State>
class Search {
public:
    using Vertex = typename State::Vertex;

    Search(State state, int length, Deadline& deadline)
        : state_(std::move(state)), length_(length), deadline_(&deadline), counts_(length + 1, 0)
    {
    }

    // Counts every extension of the walk ending at v, which has `depth` edges.
    void descend(const Vertex& v, int depth)
    {
        deadline_->poll(ticks_);
        if (depth == length_)
            return;
        if (depth + 1 == length_) {
            std::uint64_t free = 0;
            state_.for_each_neighbor(v, [&](const Vertex& w) { free += !state_.visited(w); });
            counts_[length_] += free;
            return;
        }
        state_.for_each_neighbor(v, [&](const Vertex& w) {
            if (state_.visited(w))
                return;
            ++counts_[depth + 1];
            state_.mark(w);
            descend(w, depth + 1);
            state_.unmark(w);
        });
    }

    // Walks of exactly `prefix` edges, counting all shorter lengths on the way.
    void collect(const Vertex& v, int depth, int prefix, std::vector<Vertex>& path,
                 std::vector<std::vector<Vertex>>& out)
    {
        if (depth == prefix) {
            out.push_back(path);
            return;
        }
        state_.for_each_neighbor(v, [&](const Vertex& w) {
            if (state_.visited(w))
                return;
            ++counts_[depth + 1];
            state_.mark(w);
            path.push_back(w);
            collect(w, depth + 1, prefix, path, out);
            path.pop_back();
            state_.unmark(w);
        });
    }

    void run_prefix(const std::vector<Vertex>& path, int prefix)
    {
        for (const Vertex& v : path)
            state_.mark(v);
        descend(path.back(), prefix);
        for (const Vertex& v : path)
            state_.unmark(v);
    }

    void count_root() { counts_[0] = 1; }

    State& state() { return state_; }
    const std::vector<std::uint64_t>& counts() const { return counts_; }

private:
    State state_;
    int length_;
    Deadline* deadline_;
    std::vector<std::uint64_t> counts_;
    std::uint32_t ticks_ = 0;
};

// One full pass counting c_0..c_length. Throws Interrupted on deadline.
template <class State, class MakeState>
std::vector<BigInt> count_pass(MakeState make_state, int length, const CountOptions& options, Deadline& deadline)
{
    using Vertex = typename State::Vertex;
    const int prefix = std::clamp(options.prefix_depth, 0, length);

    Search<State> head(make_state(), length, deadline);
    const Vertex root = head.state().root();
    std::vector<Vertex> path{root};
    std::vector<std::vector<Vertex>> prefixes;
    head.state().mark(root);
    head.count_root();
    head.collect(root, 0, prefix, path, prefixes);
    head.state().unmark(root);

    std::vector<BigInt> totals(length + 1);
    for (int n = 0; n <= length; ++n)
        totals[n] = head.counts()[n];
    if (prefix == length)
        return totals;

    int workers = options.workers <= 0 ? static_cast<int>(std::thread::hardware_concurrency()) : options.workers;
    workers = std::max(1, std::min<int>(workers, static_cast<int>(prefixes.size())));

    std::vector<Search<State>> searches;
    for (int w = 0; w < workers; ++w)
        searches.emplace_back(make_state(), length, deadline);

    std::atomic<std::size_t> next{0};
    auto work = [&](Search<State>& search) {
        for (std::size_t i = next.fetch_add(1); i < prefixes.size(); i = next.fetch_add(1))
            search.run_prefix(prefixes[i], prefix);
    };

    if (workers == 1) {
        work(searches.front());
    } else {
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> threads;
        for (int w = 0; w < workers; ++w)
            threads.emplace_back([&, w] {
                try {
                    work(searches[w]);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& t : threads)
            t.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }

    // Fixed merge order: worker 0, 1, ...
    for (const auto& search : searches)
        for (int n = prefix + 1; n <= length; ++n)
            totals[n] += search.counts()[n];
    return totals;
}

} // namespace

SawCountTable count_saws(const CayleyGraph& g, int n_max, const CountOptions& options)
{
    if (n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");

    const auto start = Clock::now();
    std::optional<Clock::time_point> deadline_at;
    if (options.time_limit)
        deadline_at = start + *options.time_limit;
    Deadline deadline(deadline_at);

    // The arena for the ball of radius `length`, or nothing when the hash
    // path is selected or the ball exceeds the vertex budget.
    auto make_arena = [&](int length) {
        std::optional<Arena> arena;
        if (options.visited == VisitedMode::Hash)
            return arena;
        arena = build_arena(g, length, options.max_arena_vertices, deadline);
        if (!arena && options.visited == VisitedMode::Arena)
            throw Error(ErrorKind::ResourceExhausted,
                        "ball of radius " + std::to_string(length) + " in " + g.key() + " exceeds "
                            + std::to_string(options.max_arena_vertices) + " vertices");
        return arena;
    };
    auto pass = [&](int length) {
        auto arena = make_arena(length);
        if (arena)
            return count_pass<ArenaState>([&] { return ArenaState(*arena); }, length, options, deadline);
        return count_pass<HashState>([&] { return HashState(g); }, length, options, deadline);
    };
    auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

    SawCountTable table;
    table.graph_key = g.key();
    table.n_max = n_max;

    if (!options.time_limit) {
        table.counts = pass(n_max);
        table.wall_time.assign(table.counts.size(), elapsed());
        return table;
    }

    // With a time budget, deepen one length at a time so every finished
    // length is exact even if a later pass is interrupted.
    table.counts = {BigInt(1)};
    table.wall_time = {elapsed()};
    try {
        for (int length = 1; length <= n_max; ++length) {
            auto counts = pass(length);
            table.counts.push_back(counts.back());
            table.wall_time.push_back(elapsed());
        }
    } catch (const Interrupted&) {
        table.truncated = true;
    }
    return table;
}

namespace {

void naive_extend(const CayleyGraph& g, std::vector<Element>& walk, int remaining, BigInt& total)
{
    if (remaining == 0) {
        ++total;
        return;
    }
    for (const Element& s : g.gens.closure) {
        Element next = g.group.multiply(walk.back(), s);
        bool fresh = true;
        for (const Element& seen : walk)
            if (seen == next) {
                fresh = false;
                break;
            }
        if (!fresh)
            continue;
        walk.push_back(std::move(next));
        naive_extend(g, walk, remaining - 1, total);
        walk.pop_back();
    }
}

} // namespace

BigInt naive_count_oracle(const CayleyGraph& g, int n)
{
    if (n < 0)
        throw Error(ErrorKind::InvalidArgument, "walk length must be >= 0");
    if (n > 16)
        throw Error(ErrorKind::ResourceExhausted, "naive oracle is limited to n <= 16");
    std::vector<Element> walk{g.root};
    BigInt total = 0;
    naive_extend(g, walk, n, total);
    return total;
}

MuEstimate mu_bounds(const SawCountTable& table, unsigned digits)
{
    const int n_max = table.complete_through();
    if (n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "mu bounds need c_1 at least");
    MuEstimate est;
    est.digits = digits;
    est.n_max = n_max;
    for (int n = 1; n <= n_max; ++n) {
        if (table.counts[n] == 0)
            throw Error(ErrorKind::FiniteGraph,
                        "c_" + std::to_string(n) + " = 0 for " + table.graph_key + ": the graph is finite and mu is undefined");
        Decimal root = nth_root_rounded(table.counts[n], static_cast<unsigned>(n), digits);
        Decimal low = est.running_min.empty() || root.scaled < est.running_min.back().scaled ? root
                                                                                             : est.running_min.back();
        est.upper_bounds.push_back(std::move(root));
        est.running_min.push_back(std::move(low));
    }
    for (int n = 1; n < n_max; ++n)
        est.ratios.emplace_back(table.counts[n + 1], table.counts[n]);
    return est;
}

std::optional<StrictnessWitness> first_strict_decrease(const SawCountTable& base, const SawCountTable& quotient)
{
    const int common = std::min(base.complete_through(), quotient.complete_through());
    for (int n = 0; n <= common; ++n)
        if (quotient.counts[n] < base.counts[n])
            return StrictnessWitness{n, base.counts[n], quotient.counts[n]};
    return std::nullopt;
}

StrictnessResult strictness_witness(const CayleyGraph& base, const ModuliMask& mask, int n_max,
                                    const CountOptions& options)
{
    if (mask.empty())
        throw Error(ErrorKind::Precondition, "empty mask: N = {1}, no strict inequality to witness");
    const auto spec = CentralSubgroupSpec::from_mask(mask);
    if (!si_hypothesis_check(base.group, base.gens, spec))
        throw Error(ErrorKind::Precondition,
                    "the radius-2 ball of " + base.key() + " meets N = <" + mask.moduli_text()
                        + "> outside the identity");
    StrictnessResult result;
    result.n_max = n_max;
    result.base = count_saws(base, n_max, options);
    result.quotient = count_saws(quotient_graph(base, mask), n_max, options);
    result.witness = first_strict_decrease(result.base, result.quotient);
    return result;
}

FeketeReport fekete_check(const SawCountTable& table)
{
    FeketeReport report;
    const int n_max = table.complete_through();
    for (int m = 1; m <= n_max; ++m)
        for (int n = m; m + n <= n_max; ++n) {
            ++report.pairs_checked;
            if (table.counts[m + n] > table.counts[m] * table.counts[n])
                report.violations.emplace_back(m, n);
        }
    return report;
}

std::optional<int> first_domination_violation(const SawCountTable& lower, const SawCountTable& upper)
{
    const int common = std::min(lower.complete_through(), upper.complete_through());
    for (int n = 0; n <= common; ++n)
        if (lower.counts[n] > upper.counts[n])
            return n;
    return std::nullopt;
}

void verify_basic_invariants(const SawCountTable& table, std::size_t degree)
{
    const BigInt d = degree;
    auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::InvariantViolation, table.graph_key + ": " + what);
    };
    if (table.counts.empty() || table.counts[0] != 1)
        fail("c_0 != 1");
    if (table.counts.size() > 1 && table.counts[1] != d)
        fail("c_1 != degree " + d.str());
    if (table.counts.size() > 2 && table.counts[2] != d * (d - 1))
        fail("c_2 != d(d-1)");
}

} // namespace cantorsaw
