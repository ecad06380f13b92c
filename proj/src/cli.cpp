#include "cantorsaw/cli.hpp"

#include "cantorsaw/cache.hpp"
#include "cantorsaw/diagram.hpp"
#include "cantorsaw/error.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace cantorsaw {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::InvariantViolation:
        return kExitInvariant;
    case ErrorKind::ResourceExhausted:
    case ErrorKind::NoStabilization:
        return kExitBudget;
    case ErrorKind::FiniteGraph:
        return kExitFinite;
    case ErrorKind::ConstructionFailure:
        return kExitConstruction;
    case ErrorKind::InvalidArgument:
    case ErrorKind::MalformedElement:
    case ErrorKind::EmptyGeneratingSet:
    case ErrorKind::Precondition:
    case ErrorKind::TrivialSubgroup:
        break;
    }
    return kExitUsage;
}

HVariant parse_group_family(const std::string& text)
{
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            s.push_back(c);
    if (s == "Z^KxZ")
        return HVariant::FreeAbelian;
    if (s == "H3xZ")
        return HVariant::HeisenbergExtended;
    throw Error(ErrorKind::InvalidArgument, "group family must be \"Z^K x Z\" or \"H3 x Z\", got \"" + text + "\"");
}

Json build_manifest(const DriverConfig& config, std::size_t depth, TableSource& source, ConstructionState* final_state)
{
    if (depth > config.k)
        throw Error(ErrorKind::Precondition,
                    "depth " + std::to_string(depth) + " exceeds K = " + std::to_string(config.k));
    ConstructionState state = init_state(config, source);
    Json checks = Json::array();
    auto check = [&] {
        OrderReport report = order_check(state);
        Json j = order_report_to_json(report);
        j["depth"] = state.depth;
        checks.push_back(j);
        return report.ok();
    };
    bool ordered = check();
    while (state.depth < depth) {
        state = extend_level(state, source);
        ordered = check() && ordered;
    }
    Json manifest = state_to_json(state);
    manifest["order_checks"] = checks;
    manifest["order_ok"] = ordered;
    if (final_state != nullptr)
        *final_state = std::move(state);
    return manifest;
}

namespace {

struct RunConfig {
    std::string group;
    int n_max = 10;
    unsigned precision = 12;
    int workers = 1;
    double time_limit = 0;  // seconds; 0 means none
    std::string cache_dir;
    std::string format = "text";

    std::string mask;
    std::string moduli;
    int radius = 2;
    int horizon = 64;
    std::string edges = "walk";
    std::size_t max_vertices = 10'000'000;

    std::string family = "Z^K x Z";
    std::size_t k = 2;
    std::size_t depth = 2;
    std::string margin = "1/1000";
    std::int64_t m_limit = 64;
    int build_n_max = 8;
    std::string out_path;
    std::string diagram = "ascii";
    std::string diagram_out;

    std::string manifest;
    std::string word;
    std::string against;
    int word_depth = -1;
};

CountOptions count_options(const RunConfig& rc)
{
    CountOptions o;
    o.workers = rc.workers;
    if (rc.time_limit > 0)
        o.time_limit = std::chrono::milliseconds(static_cast<std::int64_t>(rc.time_limit * 1000.0));
    return o;
}

std::unique_ptr<TableSource> make_source(const RunConfig& rc, std::ostream& err)
{
    if (auto dir = resolve_cache_dir(rc.cache_dir))
        return std::make_unique<DiskTableSource>(*dir, count_options(rc), &err);
    return std::make_unique<MemoryTableSource>(count_options(rc));
}

void emit(const Json& j, std::ostream& out)
{
    out << j.dump(2) << '\n';
}

Json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
    try {
        return Json::parse(in);
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidArgument, path + " is not valid JSON: " + e.what());
    }
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    out << text;
    if (!out)
        throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
}

// ---- saw-count

void print_table(const SawCountTable& t, const MuEstimate* e, const std::string& format, std::ostream& out)
{
    if (format == "json") {
        Json j{{"graph", t.graph_key}, {"table", table_to_json(t)}, {"truncated", t.truncated}};
        if (e != nullptr)
            j["estimate"] = estimate_to_json(*e);
        emit(j, out);
        return;
    }
    if (format == "csv") {
        out << "n,count,upper_bound,ratio\n";
        for (int n = 1; n <= t.complete_through(); ++n) {
            const auto i = static_cast<std::size_t>(n);
            out << n << ',' << t.counts[i].str() << ',';
            if (e != nullptr)
                out << e->upper_bounds[i - 1].to_string();
            out << ',' << rational_to_string(Rational(t.counts[i], t.counts[i - 1])) << '\n';
        }
        return;
    }
    out << "graph " << t.graph_key << '\n';
    out << "n\tc_n\tc_n^(1/n)\trunning min\n";
    for (int n = 1; n <= t.complete_through(); ++n) {
        const auto i = static_cast<std::size_t>(n);
        out << n << '\t' << t.counts[i].str();
        if (e != nullptr)
            out << '\t' << e->upper_bounds[i - 1].to_string() << '\t' << e->running_min[i - 1].to_string();
        out << '\n';
    }
    if (e != nullptr)
        out << "mu <= " << e->bound().to_string() << " (rigorous, rounded to nearest)\n";
    if (t.truncated)
        out << "TRUNCATED: complete through n = " << t.complete_through() << " of " << t.n_max << '\n';
}

int cmd_saw_count(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    if (rc.n_max < 1)
        throw Error(ErrorKind::InvalidArgument, "--n-max must be at least 1");
    CayleyGraph g = CayleyGraph::parse(rc.group);
    auto source = make_source(rc, err);
    SawCountTable t = source->table(g, rc.n_max);
    verify_basic_invariants(t, g.degree());
    if (t.complete_through() < 1) {
        print_table(t, nullptr, rc.format, out);
        err << "budget exhausted before c_1\n";
        return kExitBudget;
    }
    const MuEstimate e = mu_bounds(t, rc.precision);
    print_table(t, &e, rc.format, out);
    if (t.truncated) {
        err << "budget exhausted: counts complete through n = " << t.complete_through() << '\n';
        return kExitBudget;
    }
    return kExitOk;
}

// ---- verify-facts

ModuliMask cli_mask(const RunConfig& rc)
{
    if (rc.mask.empty() || rc.mask.find('1') == std::string::npos)
        throw Error(ErrorKind::TrivialSubgroup, "empty mask: N is trivial, nothing to verify");
    std::string moduli = rc.moduli;
    if (!moduli.empty() && moduli.front() != '[')
        moduli = "[" + moduli + "]";
    return parse_mask(rc.mask, moduli);
}

ModuliMask scaled(const ModuliMask& mask, int factor)
{
    ModuliMask m = mask;
    for (auto& e : m.entries)
        if (e)
            *e *= factor;
    return m;
}

int cmd_verify_facts(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    CayleyGraph g = CayleyGraph::parse(rc.group);
    const ModuliMask mask = cli_mask(rc);
    mask.validate(g.group.central_rank());
    const auto spec = CentralSubgroupSpec::from_mask(mask);
    if (is_trivial(g.group, spec))
        throw Error(ErrorKind::TrivialSubgroup, "N is trivial in " + g.key());
    CayleyGraph q = quotient_graph(g, mask);
    auto source = make_source(rc, err);

    Json facts = Json::array();
    std::vector<std::string> warnings;
    auto fact = [&](const std::string& name, const std::string& status, Json detail) {
        facts.push_back(Json{{"fact", name}, {"status", status}, {"detail", std::move(detail)}});
    };

    SawCountTable base = source->table(g, rc.n_max);
    SawCountTable quot = source->table(q, rc.n_max);
    verify_basic_invariants(base, g.degree());
    verify_basic_invariants(quot, q.degree());
    if (auto bad = first_domination_violation(quot, base))
        throw Error(ErrorKind::InvariantViolation, "c_" + std::to_string(*bad) + "(" + q.key() + ") exceeds c_" +
                                                      std::to_string(*bad) + "(" + g.key() + ")");
    fact("quotient-domination", "pass",
         Json{{"n_max", std::min(base.complete_through(), quot.complete_through())}, {"quotient", q.key()}});

    const bool hypothesis = si_hypothesis_check(g.group, g.gens, spec);
    if (hypothesis) {
        fact("radius-two-hypothesis", "pass", Json{{"ball_size", radius_two_ball(g.group, g.gens).size()}});
    } else {
        fact("radius-two-hypothesis", "fail", Json{{"reason", "N meets the radius-2 ball outside the identity"}});
        warnings.push_back("radius-2 hypothesis fails for N = <" + mask.moduli_text() + ">; strictness is not implied");
    }

    if (auto w = first_strict_decrease(base, quot)) {
        fact("strict-decrease", "pass",
             Json{{"n", w->n}, {"base_count", w->base_count.str()}, {"quotient_count", w->quotient_count.str()}});
    } else {
        fact("strict-decrease", "inconclusive", Json{{"n_max", rc.n_max}});
    }

    // N_n = <n m_i g_i> shrinks to {1}; F is the ball of radius 2r.
    const RootedBall f = ball(g, 2 * rc.radius, BallOptions{rc.max_vertices, BallEdges::Walk});
    auto family = [&](int n) { return CentralSubgroupSpec::from_mask(scaled(mask, n)); };
    CentralSubgroupSpec limit;
    try {
        const auto report = stabilization_check(g.group, family, limit, f.elements, 1, rc.horizon);
        fact("stabilization", "pass",
             Json{{"F", "B(" + std::to_string(2 * rc.radius) + ")"}, {"n0", report.n0}, {"horizon", report.horizon}});
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoStabilization)
            throw;
        fact("stabilization", "inconclusive", Json{{"reason", e.what()}});
    }
    try {
        auto graphs = [&](int n) { return quotient_graph(g, scaled(mask, n)); };
        const int n0 = local_convergence_radius(graphs, 1, g, rc.radius, rc.horizon,
                                                BallOptions{rc.max_vertices, BallEdges::Walk});
        fact("local-convergence", "pass", Json{{"radius", rc.radius}, {"n0", n0}, {"horizon", rc.horizon}});
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoStabilization)
            throw;
        fact("local-convergence", "inconclusive", Json{{"reason", e.what()}});
    }

    if (rc.format == "json") {
        emit(Json{{"base", g.key()}, {"mask", mask.word()}, {"moduli", mask.moduli_text()}, {"facts", facts},
                  {"warnings", warnings}},
             out);
    } else {
        out << "base " << g.key() << ", N = <" << mask.moduli_text() << ">\n";
        for (const auto& f : facts)
            out << f["fact"].get<std::string>() << ": " << f["status"].get<std::string>() << "  "
                << f["detail"].dump() << '\n';
    }
    for (const auto& w : warnings)
        err << "warning: " << w << '\n';
    return kExitOk;
}

// ---- cantor-build, replay

DriverConfig driver_config(const RunConfig& rc)
{
    DriverConfig c;
    c.k = rc.k;
    c.variant = parse_group_family(rc.family);
    c.n_max = rc.build_n_max;
    c.margin = parse_rational(rc.margin);
    c.digits = rc.precision;
    c.m_limit = rc.m_limit;
    c.count = count_options(rc);
    c.count.time_limit.reset();
    return c;
}

int cmd_cantor_build(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    auto source = make_source(rc, err);
    ConstructionState state;
    const Json manifest = build_manifest(driver_config(rc), rc.depth, *source, &state);

    if (rc.out_path.empty())
        emit(manifest, out);
    else
        write_file(rc.out_path, manifest.dump(2) + "\n");

    if (rc.diagram != "none") {
        const std::string picture = rc.diagram == "svg" ? render_svg(state) : render_ascii(state);
        if (!rc.diagram_out.empty())
            write_file(rc.diagram_out, picture);
        else if (!rc.out_path.empty())
            out << picture;
        else
            err << picture;
    }
    if (!manifest["order_ok"].get<bool>()) {
        err << "order check failed; see order_checks in the manifest\n";
        return kExitConstruction;
    }
    return kExitOk;
}

int cmd_replay(const RunConfig& rc, std::ostream& out, std::ostream& err)
{
    const Json recorded = read_json_file(rc.manifest);
    const ConstructionState state = state_from_json(recorded);
    DriverConfig config = state.config;
    config.count = count_options(rc);
    config.count.time_limit.reset();
    auto source = make_source(rc, err);
    const Json fresh = build_manifest(config, state.depth, *source);

    const std::string a = without_timings(recorded).dump(2);
    const std::string b = without_timings(fresh).dump(2);
    if (a == b) {
        out << "replay identical: depth " << state.depth << ", moduli " << Json(state.moduli).dump() << '\n';
        return kExitOk;
    }
    const Json patch = Json::diff(without_timings(recorded), without_timings(fresh));
    out << "replay differs at " << patch.size() << " place(s)\n";
    for (const auto& op : patch)
        out << "  " << op.value("path", std::string()) << '\n';
    return kExitInvariant;
}

// ---- evaluate-word, ball

int cmd_evaluate_word(const RunConfig& rc, std::ostream& out, std::ostream&)
{
    const ConstructionState state = state_from_json(read_json_file(rc.manifest));
    const std::size_t d = rc.word_depth < 0 ? state.depth : static_cast<std::size_t>(rc.word_depth);
    const InfiniteWordSpec w = InfiniteWordSpec::parse(rc.word);

    auto list = [](const std::vector<Rational>& v) {
        Json a = Json::array();
        for (const auto& x : v)
            a.push_back(rational_to_json(x));
        return a;
    };

    if (rc.against.empty()) {
        const WordEvaluation e = evaluate_word(state, w, d);
        emit(Json{{"word", w.to_string()},
                  {"depth", d},
                  {"prefixes", e.prefixes},
                  {"estimates", list(e.estimates)},
                  {"line_estimates", list(e.line_estimates)},
                  {"descriptor", e.descriptor}},
             out);
        return kExitOk;
    }
    const InfiniteWordSpec other = InfiniteWordSpec::parse(rc.against);
    const InjectivityReport r = injectivity_witness(state, w, other, d);
    emit(Json{{"word", w.to_string()},
              {"against", other.to_string()},
              {"depth", d},
              {"index", r.index},
              {"swapped", r.swapped},
              {"prefix", r.w_prefix},
              {"upper_quotient", rational_to_json(r.upper_quotient)},
              {"branch", rational_to_json(r.branch)},
              {"separator", rational_to_json(r.separator)},
              {"tail", list(r.tail)},
              {"chain_holds", r.chain_holds},
              {"counts_dominated", r.counts_dominated}},
         out);
    if (!r.counts_dominated)
        return kExitInvariant;
    return kExitOk;
}

int cmd_ball(const RunConfig& rc, std::ostream& out, std::ostream&)
{
    if (rc.edges != "walk" && rc.edges != "induced")
        throw Error(ErrorKind::InvalidArgument, "--edges must be walk or induced");
    CayleyGraph g = CayleyGraph::parse(rc.group);
    const RootedBall b =
        ball(g, rc.radius, BallOptions{rc.max_vertices, rc.edges == "walk" ? BallEdges::Walk : BallEdges::Induced});
    Json j = ball_to_json(b);
    j["graph"] = g.key();
    j["edge_convention"] = rc.edges;
    emit(j, out);
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    RunConfig rc;
    CLI::App app{"Exact self-avoiding walk counts on Cayley graphs and the Cantor-set construction driver",
                 "cantor_saw"};
    app.require_subcommand(1);

    auto add_count_flags = [&](CLI::App* sub) {
        sub->add_option("--workers", rc.workers, "worker threads, 0 = all cores")->check(CLI::NonNegativeNumber);
        sub->add_option("--cache-dir", rc.cache_dir, std::string("table cache directory (or $") + kCacheDirEnv + ")");
    };

    auto* count = app.add_subcommand("saw-count", "count self-avoiding walks and bound the connective constant");
    count->add_option("--group", rc.group, "group term, e.g. \"Z^2\" or \"quot(Z^3; mask=1; m=[3])\"")->required();
    count->add_option("--n-max", rc.n_max, "largest walk length")->check(CLI::PositiveNumber);
    count->add_option("--precision", rc.precision, "decimal digits of the root bounds")->check(CLI::Range(1, 60));
    count->add_option("--format", rc.format)->check(CLI::IsMember({"json", "csv", "text"}));
    count->add_option("--time-limit", rc.time_limit, "seconds; partial tables exit with 3")
        ->check(CLI::NonNegativeNumber);
    add_count_flags(count);

    auto* facts = app.add_subcommand("verify-facts", "check the quotient facts for G and N = <m_i g_i>");
    facts->add_option("--group", rc.group)->required();
    facts->add_option("--mask", rc.mask, "bits over the central basis, e.g. 1 or 01")->required();
    facts->add_option("--moduli", rc.moduli, "e.g. [3] or [_,5]")->required();
    facts->add_option("--n-max", rc.n_max)->check(CLI::PositiveNumber);
    facts->add_option("--radius", rc.radius, "ball radius for local convergence")->check(CLI::NonNegativeNumber);
    facts->add_option("--horizon", rc.horizon, "last family index sampled")->check(CLI::PositiveNumber);
    facts->add_option("--format", rc.format)->check(CLI::IsMember({"json", "text"}));
    add_count_flags(facts);

    auto* build = app.add_subcommand("cantor-build", "run the inductive construction and emit a manifest");
    build->add_option("--group-family", rc.family, "\"Z^K x Z\" or \"H3 x Z\"");
    build->add_option("--K", rc.k, "number of central generators")->check(CLI::PositiveNumber);
    build->add_option("--depth", rc.depth);
    build->add_option("--n-max", rc.build_n_max)->check(CLI::PositiveNumber);
    build->add_option("--margin", rc.margin, "separation margin, e.g. 1/1000 or 1e-3");
    build->add_option("--m-limit", rc.m_limit);
    build->add_option("--precision", rc.precision)->check(CLI::Range(1, 60));
    build->add_option("--out", rc.out_path, "manifest path (default stdout)");
    build->add_option("--diagram", rc.diagram)->check(CLI::IsMember({"ascii", "svg", "none"}));
    build->add_option("--diagram-out", rc.diagram_out);
    add_count_flags(build);

    auto* replay = app.add_subcommand("replay", "rebuild a manifest and compare it with the recorded one");
    replay->add_option("--manifest", rc.manifest)->required();
    add_count_flags(replay);

    auto* eval = app.add_subcommand("evaluate-word", "estimates along the prefixes of an infinite word");
    eval->add_option("--manifest", rc.manifest)->required();
    eval->add_option("--word", rc.word, "prefix with optional period, e.g. 10(01)")->required();
    eval->add_option("--depth", rc.word_depth);
    eval->add_option("--against", rc.against, "second word for an injectivity witness");

    auto* ballcmd = app.add_subcommand("ball", "rooted ball of a Cayley graph");
    ballcmd->add_option("--group", rc.group)->required();
    ballcmd->add_option("--radius", rc.radius)->required()->check(CLI::NonNegativeNumber);
    ballcmd->add_option("--edges", rc.edges)->check(CLI::IsMember({"walk", "induced"}));
    ballcmd->add_option("--max-vertices", rc.max_vertices);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (count->parsed())
            return cmd_saw_count(rc, out, err);
        if (facts->parsed())
            return cmd_verify_facts(rc, out, err);
        if (build->parsed())
            return cmd_cantor_build(rc, out, err);
        if (replay->parsed())
            return cmd_replay(rc, out, err);
        if (eval->parsed())
            return cmd_evaluate_word(rc, out, err);
        return cmd_ball(rc, out, err);
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvariant;
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i)
        args.emplace_back(argv[i]);
    return run_cli(args, out, err);
}

} // namespace cantorsaw
