#include "cantorsaw/driver.hpp"

#include "cantorsaw/error.hpp"

#include <algorithm>

namespace cantorsaw {

BinaryWord::BinaryWord(std::string b) : bits(std::move(b))
{
    if (bits.find_first_not_of("01") != std::string::npos)
        throw Error(ErrorKind::InvalidArgument, "binary word '" + bits + "' has letters outside {0,1}");
}

BinaryWord BinaryWord::prefix(std::size_t n) const
{
    return BinaryWord(bits.substr(0, n));
}

BinaryWord BinaryWord::extended(char letter) const
{
    return BinaryWord(bits + letter);
}

bool BinaryWord::is_prefix_of(const BinaryWord& other) const
{
    return other.bits.compare(0, bits.size(), bits) == 0 && bits.size() <= other.bits.size();
}

std::vector<BinaryWord> words_of_length(std::size_t n)
{
    std::vector<BinaryWord> out{BinaryWord{}};
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<BinaryWord> next;
        for (const auto& w : out) {
            next.push_back(w.extended('0'));
            next.push_back(w.extended('1'));
        }
        out = std::move(next);
    }
    return out;
}

InfiniteWordSpec InfiniteWordSpec::parse(const std::string& text)
{
    InfiniteWordSpec spec;
    const auto open = text.find('(');
    spec.prefix = BinaryWord(text.substr(0, open));
    if (open != std::string::npos) {
        if (text.back() != ')' || text.size() < open + 3)
            throw Error(ErrorKind::InvalidArgument, "infinite word '" + text + "' must look like 10(01)");
        spec.period = BinaryWord(text.substr(open + 1, text.size() - open - 2));
        if (spec.period.bits.find('1') == std::string::npos)
            spec.period = BinaryWord{};
    }
    return spec;
}

std::string InfiniteWordSpec::to_string() const
{
    return prefix.bits + "(" + (period.size() ? period.bits : std::string("0")) + ")";
}

char InfiniteWordSpec::letter(std::size_t i) const
{
    if (i < prefix.size())
        return prefix.bits[i];
    if (period.size() == 0)
        return '0';
    return period.bits[(i - prefix.size()) % period.size()];
}

BinaryWord InfiniteWordSpec::truncated(std::size_t n) const
{
    std::string bits;
    for (std::size_t i = 0; i < n; ++i)
        bits.push_back(letter(i));
    return BinaryWord(bits);
}

SawCountTable MemoryTableSource::table(const CayleyGraph& g, int n_max)
{
    const auto key = std::make_pair(g.key(), n_max);
    {
        std::lock_guard lock(mutex_);
        if (auto it = tables_.find(key); it != tables_.end())
            return it->second;
    }
    SawCountTable t = count_saws(g, n_max, options_);
    std::lock_guard lock(mutex_);
    return tables_.try_emplace(key, std::move(t)).first->second;
}

const Node& ConstructionState::node(const BinaryWord& w) const
{
    auto it = nodes.find(w);
    if (it == nodes.end())
        throw Error(ErrorKind::InvalidArgument, "no group has been built for word '" + w.bits + "'");
    return it->second;
}

CayleyGraph ConstructionState::base_graph() const
{
    return CayleyGraph::parse(base);
}

CayleyGraph ConstructionState::graph(const BinaryWord& w) const
{
    const Node& n = node(w);
    if (n.mask.empty())
        return base_graph();
    return quotient_graph(base_graph(), n.mask);
}

namespace {

std::string word_label(const BinaryWord& w)
{
    return w.size() ? w.bits : std::string("(empty)");
}

Node make_node(const BinaryWord& word, const ModuliMask& mask, const CayleyGraph& g, const DriverConfig& config,
               TableSource& source)
{
    Node n;
    n.word = word;
    n.descriptor = g.key();
    n.mask = mask.normalized();
    n.table = source.table(g, config.n_max);
    verify_basic_invariants(n.table, g.degree());
    n.estimate = mu_bounds(n.table, config.digits);
    const CayleyGraph line = product_with_line(g);
    n.line_table = source.table(line, config.n_max);
    verify_basic_invariants(n.line_table, line.degree());
    n.line_estimate = mu_bounds(n.line_table, config.digits);
    if (auto bad = first_domination_violation(n.table, n.line_table))
        throw Error(ErrorKind::InvariantViolation,
                    "c_" + std::to_string(*bad) + " of " + n.descriptor + " exceeds that of its product with the line");
    return n;
}

} // namespace

ConstructionState init_state(const DriverConfig& config, TableSource& source)
{
    if (config.margin <= 0)
        throw Error(ErrorKind::InvalidArgument, "margin must be positive");
    if (config.n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "n_max must be >= 1");
    if (config.m_limit < 2)
        throw Error(ErrorKind::InvalidArgument, "m_limit must be >= 2");

    auto [group, gens] = make_construction_group(config.k, config.variant);
    ConstructionState state;
    state.config = config;
    state.base = group.key();
    const CayleyGraph g = state.base_graph();
    state.nodes.emplace(BinaryWord{}, make_node(BinaryWord{}, ModuliMask{}, g, config, source));
    return state;
}

ConstructionState extend_level(const ConstructionState& state, TableSource& source)
{
    const std::size_t n = state.depth;
    const DriverConfig& config = state.config;
    if (n >= config.k)
        throw Error(ErrorKind::Precondition,
                    "depth " + std::to_string(n) + " already uses all K = " + std::to_string(config.k)
                        + " central generators");

    const auto parents = words_of_length(n);
    LevelRecord level;
    level.index = n;

    for (std::int64_t m = 2; m <= config.m_limit; ++m) {
        CandidateAttempt attempt;
        attempt.modulus = m;
        std::map<BinaryWord, Node> children;
        std::map<BinaryWord, StrictnessWitness> witnesses;

        for (const BinaryWord& w : parents) {
            const Node& parent = state.node(w);
            const CayleyGraph pg = state.graph(w);
            auto fail = [&](const std::string& why) { attempt.failures.push_back("w=" + word_label(w) + ": " + why); };

            if (!si_hypothesis_check(pg.group, pg.gens, CentralSubgroupSpec::single(n, m))) {
                fail("radius-2 condition violated at m=" + std::to_string(m));
                break;
            }

            const ModuliMask mask = parent.mask.merged(ModuliMask::single(n, m));
            const CayleyGraph cg = quotient_graph(state.base_graph(), mask);
            SawCountTable table = source.table(cg, config.n_max);
            verify_basic_invariants(table, cg.degree());
            if (auto bad = first_domination_violation(table, parent.table))
                throw Error(ErrorKind::InvariantViolation,
                            "c_" + std::to_string(*bad) + " of " + cg.key() + " exceeds that of its cover "
                                + parent.descriptor);

            auto witness = first_strict_decrease(parent.table, table);
            if (!witness) {
                fail("no strict decrease of c_k for k <= " + std::to_string(config.n_max) + " at m="
                     + std::to_string(m));
                break;
            }

            const Rational x = mu_bounds(table, config.digits).bound().to_rational();
            const Rational ceiling = parent.statistic() - config.margin;
            if (!(x < ceiling)) {
                fail("estimate " + rational_to_string(x) + " not below parent estimate minus margin "
                     + rational_to_string(ceiling) + " at m=" + std::to_string(m));
                break;
            }
            // Separators of the prefixes after which w continues with 0 lie
            // below G_w; the new leaf must stay above them.
            bool above = true;
            for (std::size_t j = 0; j < n && above; ++j) {
                if (w.bits[j] != '0')
                    continue;
                const BinaryWord alpha = w.prefix(j);
                const Rational floor = state.separators.at(alpha) + config.margin;
                if (!(x > floor)) {
                    fail("estimate " + rational_to_string(x) + " not above separator b_{" + alpha.bits
                         + "*} plus margin " + rational_to_string(floor) + " at m=" + std::to_string(m));
                    above = false;
                }
            }
            if (!above)
                break;

            witnesses.emplace(w, *witness);
            children.emplace(w.extended('1'), make_node(w.extended('1'), mask, cg, config, source));
        }

        attempt.accepted = attempt.failures.empty();
        level.attempts.push_back(attempt);
        if (!attempt.accepted)
            continue;

        ConstructionState next = state;
        next.depth = n + 1;
        next.moduli.push_back(m);
        for (const BinaryWord& w : parents) {
            Node zero = state.node(w);
            zero.word = w.extended('0');
            const Node& one = children.at(w.extended('1'));
            next.separators.emplace(w, (zero.statistic() + one.statistic()) / 2);
            next.nodes.emplace(zero.word, std::move(zero));
            next.nodes.emplace(one.word, one);
        }
        level.modulus = m;
        level.witnesses = std::move(witnesses);
        next.levels.push_back(std::move(level));
        return next;
    }

    std::string message = "no modulus m <= " + std::to_string(config.m_limit) + " works for g_" + std::to_string(n);
    for (const auto& attempt : level.attempts)
        for (const auto& f : attempt.failures)
            message += "\n  " + f;
    throw Error(ErrorKind::ConstructionFailure, message);
}

namespace {

// no-letter < 0 < * < 1, as a plain string order.
std::string order_key(const std::string& label)
{
    std::string key;
    for (char c : label)
        key.push_back(c == '0' ? 'a' : c == '*' ? 'b' : 'c');
    return key;
}

} // namespace

OrderReport order_check(const ConstructionState& state)
{
    OrderReport report;
    report.required_gap = state.config.margin / 2;
    for (const auto& w : words_of_length(state.depth))
        report.entries.push_back({w.bits, state.node(w).statistic(), false});
    for (const auto& [w, b] : state.separators)
        report.entries.push_back({w.bits + "*", b, true});
    std::sort(report.entries.begin(), report.entries.end(),
              [](const OrderEntry& a, const OrderEntry& b) { return order_key(a.label) < order_key(b.label); });

    for (std::size_t i = 0; i < report.entries.size(); ++i)
        for (std::size_t j = i + 1; j < report.entries.size(); ++j) {
            const Rational gap = report.entries[i].value - report.entries[j].value;
            if (!(gap > report.required_gap))
                report.violations.push_back({report.entries[i].label, report.entries[j].label, gap});
        }
    return report;
}

WordEvaluation evaluate_word(const ConstructionState& state, const InfiniteWordSpec& w, std::size_t d)
{
    if (d > state.depth)
        throw Error(ErrorKind::InvalidArgument,
                    "evaluation depth " + std::to_string(d) + " exceeds the constructed depth "
                        + std::to_string(state.depth));
    WordEvaluation out;
    for (std::size_t j = 0; j <= d; ++j) {
        const Node& node = state.node(w.truncated(j));
        out.prefixes.push_back(node.word.bits);
        out.estimates.push_back(node.statistic());
        out.line_estimates.push_back(node.line_estimate.bound().to_rational());
        out.descriptor = node.descriptor;
    }
    return out;
}

InjectivityReport injectivity_witness(const ConstructionState& state, const InfiniteWordSpec& w,
                                      const InfiniteWordSpec& w_other, std::size_t d)
{
    if (d > state.depth)
        throw Error(ErrorKind::InvalidArgument,
                    "depth " + std::to_string(d) + " exceeds the constructed depth " + std::to_string(state.depth));
    std::size_t i = 0;
    while (i < d && w.letter(i) == w_other.letter(i))
        ++i;
    if (i == d)
        throw Error(ErrorKind::InvalidArgument, "the words agree on every index below " + std::to_string(d));

    InjectivityReport r;
    r.index = i;
    r.swapped = w.letter(i) == '1';
    const InfiniteWordSpec& zero = r.swapped ? w_other : w;
    const InfiniteWordSpec& one = r.swapped ? w : w_other;

    const BinaryWord wi = zero.truncated(i);
    r.w_prefix = wi.bits;
    const Node& far = state.node(one.truncated(d));
    const Node& branch = state.node(wi.extended('1'));
    const Node& fork = state.node(wi);
    r.upper_quotient = far.statistic();
    r.branch = branch.statistic();
    r.separator = state.separators.at(wi);
    r.chain_holds = r.upper_quotient <= r.branch && r.branch < r.separator;
    for (std::size_t j = i + 1; j <= d; ++j) {
        r.tail.push_back(state.node(zero.truncated(j)).statistic());
        r.chain_holds = r.chain_holds && r.separator < r.tail.back();
    }
    r.counts_dominated = !first_domination_violation(far.table, fork.table)
                         && !first_domination_violation(far.table, branch.table);
    return r;
}

} // namespace cantorsaw
