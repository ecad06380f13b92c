#include "cantorsaw/serialize.hpp"

#include "cantorsaw/error.hpp"

namespace cantorsaw {

namespace {

Json counts_to_json(const std::vector<BigInt>& counts)
{
    Json out = Json::array();
    for (const auto& c : counts)
        out.push_back(c.str());
    return out;
}

std::vector<BigInt> counts_from_json(const Json& j)
{
    std::vector<BigInt> out;
    for (const auto& item : j) {
        const auto text = item.get<std::string>();
        if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
            throw Error(ErrorKind::InvalidArgument, "count '" + text + "' is not a nonnegative decimal integer");
        out.emplace_back(text);
    }
    return out;
}

Json mask_to_json(const ModuliMask& mask)
{
    return Json{{"bits", mask.word()}, {"moduli", mask.moduli_text()}};
}

ModuliMask mask_from_json(const Json& j)
{
    const auto bits = j.at("bits").get<std::string>();
    if (bits.empty())
        return ModuliMask{};
    return parse_mask(bits, j.at("moduli").get<std::string>());
}

Json witness_to_json(const StrictnessWitness& w)
{
    return Json{{"n", w.n}, {"base_count", w.base_count.str()}, {"quotient_count", w.quotient_count.str()}};
}

const char* variant_name(HVariant v)
{
    return v == HVariant::FreeAbelian ? "free-abelian" : "heisenberg-extended";
}

HVariant variant_from_name(const std::string& name)
{
    if (name == "free-abelian")
        return HVariant::FreeAbelian;
    if (name == "heisenberg-extended")
        return HVariant::HeisenbergExtended;
    throw Error(ErrorKind::InvalidArgument, "unknown group variant '" + name + "'");
}

} // namespace

Json table_to_json(const SawCountTable& table)
{
    return Json{{"graph_key", table.graph_key},
                {"counts", counts_to_json(table.counts)},
                {"n_max", table.n_max},
                {"truncated", table.truncated},
                {"timings", Json{{"seconds", table.wall_time}}}};
}

SawCountTable table_from_json(const Json& j)
{
    SawCountTable t;
    t.graph_key = j.at("graph_key").get<std::string>();
    t.counts = counts_from_json(j.at("counts"));
    t.n_max = j.at("n_max").get<int>();
    t.truncated = j.value("truncated", false);
    if (j.contains("timings") && j["timings"].contains("seconds"))
        t.wall_time = j["timings"]["seconds"].get<std::vector<double>>();
    if (t.counts.empty())
        throw Error(ErrorKind::InvalidArgument, "count table for " + t.graph_key + " is empty");
    return t;
}

Json rational_to_json(const Rational& value)
{
    return Json{{"exact", rational_exact_string(value)}, {"decimal", rational_to_string(value)}};
}

Rational rational_from_json(const Json& j)
{
    return parse_rational(j.at("exact").get<std::string>());
}

Json estimate_to_json(const MuEstimate& e)
{
    Json bounds = Json::array(), mins = Json::array(), ratios = Json::array();
    for (const auto& b : e.upper_bounds)
        bounds.push_back(b.to_string());
    for (const auto& m : e.running_min)
        mins.push_back(m.to_string());
    for (const auto& r : e.ratios)
        ratios.push_back(rational_to_json(r));
    return Json{{"digits", e.digits},
                {"n_max", e.n_max},
                {"upper_bounds", bounds},
                {"running_min", mins},
                {"bound", e.bound().to_string()},
                {"ratio_estimates", ratios},
                {"rigorous", "upper_bounds and running_min bound mu from above"},
                {"heuristic", "ratio_estimates are point estimates, not bounds"}};
}

Json ball_to_json(const RootedBall& ball)
{
    Json edges = Json::array();
    for (auto [i, j] : ball.edges)
        edges.push_back(Json::array({i, j}));
    return Json{{"radius", ball.radius}, {"root", 0}, {"vertices", ball.vertices}, {"edges", edges}};
}

Json order_report_to_json(const OrderReport& report)
{
    Json entries = Json::array(), violations = Json::array();
    for (const auto& e : report.entries)
        entries.push_back(Json{{"label", e.label}, {"separator", e.separator}, {"value", rational_to_json(e.value)}});
    for (const auto& v : report.violations)
        violations.push_back(Json{{"lower", v.lower_word}, {"upper", v.upper_word}, {"gap", rational_to_json(v.gap)}});
    return Json{{"ok", report.ok()},
                {"required_gap", rational_to_json(report.required_gap)},
                {"entries", entries},
                {"violations", violations}};
}

Json state_to_json(const ConstructionState& state)
{
    const DriverConfig& c = state.config;
    Json j;
    j["schema_version"] = kManifestSchemaVersion;
    j["base_group"] = state.base;
    j["config"] = Json{{"K", c.k},
                       {"variant", variant_name(c.variant)},
                       {"n_max", c.n_max},
                       {"margin", rational_exact_string(c.margin)},
                       {"precision", c.digits},
                       {"m_limit", c.m_limit}};
    j["depth"] = state.depth;
    j["moduli"] = state.moduli;

    Json tables = Json::object(), table_times = Json::object();
    Json nodes = Json::object();
    for (const auto& [w, n] : state.nodes) {
        for (const SawCountTable* t : {&n.table, &n.line_table}) {
            Json tj = table_to_json(*t);
            table_times[t->graph_key] = tj["timings"];
            tj.erase("timings");
            tables[t->graph_key] = tj;
        }
        nodes[w.bits] = Json{{"descriptor", n.descriptor},
                             {"mask", mask_to_json(n.mask)},
                             {"graph", n.table.graph_key},
                             {"line_graph", n.line_table.graph_key},
                             {"estimate", estimate_to_json(n.estimate)},
                             {"line_estimate", estimate_to_json(n.line_estimate)},
                             {"statistic", rational_to_json(n.statistic())}};
    }
    j["nodes"] = nodes;
    j["tables"] = tables;

    Json separators = Json::object();
    for (const auto& [w, b] : state.separators)
        separators[w.bits] = rational_to_json(b);
    j["separators"] = separators;

    Json levels = Json::array();
    for (const auto& level : state.levels) {
        Json attempts = Json::array();
        for (const auto& a : level.attempts)
            attempts.push_back(Json{{"m", a.modulus}, {"accepted", a.accepted}, {"failures", a.failures}});
        Json witnesses = Json::object();
        for (const auto& [w, wit] : level.witnesses)
            witnesses[w.bits] = witness_to_json(wit);
        levels.push_back(Json{{"index", level.index},
                              {"modulus", level.modulus},
                              {"attempts", attempts},
                              {"witnesses", witnesses}});
    }
    j["levels"] = levels;
    j["timings"] = Json{{"tables", table_times}};
    return j;
}

ConstructionState state_from_json(const Json& j)
{
    try {
        if (j.at("schema_version").get<int>() != kManifestSchemaVersion)
            throw Error(ErrorKind::InvalidArgument, "unsupported manifest schema version");
        ConstructionState s;
        const Json& c = j.at("config");
        s.config.k = c.at("K").get<std::size_t>();
        s.config.variant = variant_from_name(c.at("variant").get<std::string>());
        s.config.n_max = c.at("n_max").get<int>();
        s.config.margin = parse_rational(c.at("margin").get<std::string>());
        s.config.digits = c.at("precision").get<unsigned>();
        s.config.m_limit = c.at("m_limit").get<std::int64_t>();
        s.base = j.at("base_group").get<std::string>();
        s.depth = j.at("depth").get<std::size_t>();
        s.moduli = j.at("moduli").get<std::vector<std::int64_t>>();

        const Json& tables = j.at("tables");
        const Json& times = j.contains("timings") ? j["timings"].value("tables", Json::object()) : Json::object();
        auto table = [&](const std::string& key) {
            Json tj = tables.at(key);
            if (times.contains(key))
                tj["timings"] = times[key];
            return table_from_json(tj);
        };
        for (const auto& [word, nj] : j.at("nodes").items()) {
            Node n;
            n.word = BinaryWord(word);
            n.descriptor = nj.at("descriptor").get<std::string>();
            n.mask = mask_from_json(nj.at("mask"));
            n.table = table(nj.at("graph").get<std::string>());
            n.estimate = mu_bounds(n.table, s.config.digits);
            n.line_table = table(nj.at("line_graph").get<std::string>());
            n.line_estimate = mu_bounds(n.line_table, s.config.digits);
            s.nodes.emplace(n.word, std::move(n));
        }
        for (const auto& [word, bj] : j.at("separators").items())
            s.separators.emplace(BinaryWord(word), rational_from_json(bj));
        for (const auto& lj : j.at("levels")) {
            LevelRecord level;
            level.index = lj.at("index").get<std::size_t>();
            level.modulus = lj.at("modulus").get<std::int64_t>();
            for (const auto& aj : lj.at("attempts"))
                level.attempts.push_back(CandidateAttempt{aj.at("m").get<std::int64_t>(), aj.at("accepted").get<bool>(),
                                                          aj.at("failures").get<std::vector<std::string>>()});
            for (const auto& [word, wj] : lj.at("witnesses").items())
                level.witnesses.emplace(BinaryWord(word),
                                        StrictnessWitness{wj.at("n").get<int>(),
                                                          BigInt(wj.at("base_count").get<std::string>()),
                                                          BigInt(wj.at("quotient_count").get<std::string>())});
            s.levels.push_back(std::move(level));
        }
        return s;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, std::string("malformed manifest: ") + e.what());
    }
}

Json without_timings(const Json& j)
{
    if (j.is_object()) {
        Json out = Json::object();
        for (const auto& [key, value] : j.items())
            if (key != "timings")
                out[key] = without_timings(value);
        return out;
    }
    if (j.is_array()) {
        Json out = Json::array();
        for (const auto& value : j)
            out.push_back(without_timings(value));
        return out;
    }
    return j;
}

} // namespace cantorsaw
