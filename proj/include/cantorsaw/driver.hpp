#pragma once

// The inductive construction of the groups G_w, w a finite binary word:
// G_{w0} = G_w and G_{w1} = G_w / <m_n g_n> with n = |w|, where m_n is the
// least modulus that works for every w of length n at once, plus the
// separators b_{w*} placed between the estimates of G_{w0} and G_{w1}.
//
// Every comparison between connective constants is made on the same
// statistic: the running minimum of c_k^(1/k) over k <= n_max. That is a
// rigorous upper bound for mu, not mu itself, so order relations are
// verified at estimate level only; count-level facts are exact.

#include "cantorsaw/saw.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace cantorsaw {

struct BinaryWord {
    std::string bits;  // over {'0', '1'}

    BinaryWord() = default;
    explicit BinaryWord(std::string b);

    std::size_t size() const noexcept { return bits.size(); }
    BinaryWord prefix(std::size_t n) const;
    BinaryWord extended(char letter) const;
    bool is_prefix_of(const BinaryWord& other) const;

    friend bool operator==(const BinaryWord&, const BinaryWord&) = default;
    friend auto operator<=>(const BinaryWord&, const BinaryWord&) = default;
};

// All words of length n in lexicographic order.
std::vector<BinaryWord> words_of_length(std::size_t n);

// An infinite word given by a finite prefix and an all-zero or periodic tail.
// Text form: "10" (zero tail), "10(01)" (periodic tail 0101...).
struct InfiniteWordSpec {
    BinaryWord prefix;
    BinaryWord period;  // empty: all-zero tail

    static InfiniteWordSpec parse(const std::string& text);
    std::string to_string() const;
    char letter(std::size_t i) const;
    BinaryWord truncated(std::size_t n) const;
};

struct DriverConfig {
    std::size_t k = 2;                     // central generators g_0..g_{K-1}
    HVariant variant = HVariant::FreeAbelian;
    int n_max = 8;
    Rational margin = Rational(1, 1000);
    unsigned digits = 12;
    std::int64_t m_limit = 64;
    CountOptions count;
};

// Supplies exact SAW tables. Implementations must behave as a map with
// atomic get-or-insert.
class TableSource {
public:
    virtual ~TableSource() = default;
    virtual SawCountTable table(const CayleyGraph& g, int n_max) = 0;
};

class MemoryTableSource : public TableSource {
public:
    explicit MemoryTableSource(CountOptions options = {}) : options_(options) {}
    SawCountTable table(const CayleyGraph& g, int n_max) override;

private:
    CountOptions options_;
    std::mutex mutex_;
    std::map<std::pair<std::string, int>, SawCountTable> tables_;
};

struct Node {
    BinaryWord word;
    std::string descriptor;   // canonical group term of G_w
    ModuliMask mask;          // G_w = G / <mask>
    SawCountTable table;      // Cay(G_w, S)
    MuEstimate estimate;
    SawCountTable line_table; // Cay(G_w, S) x Z
    MuEstimate line_estimate;

    // The comparison statistic.
    Rational statistic() const { return estimate.bound().to_rational(); }
};

struct CandidateAttempt {
    std::int64_t modulus = 0;
    bool accepted = false;
    std::vector<std::string> failures;   // "w=01: reason"
};

struct LevelRecord {
    std::size_t index = 0;               // central generator g_index being quotiented
    std::int64_t modulus = 0;            // the chosen m_index
    std::vector<CandidateAttempt> attempts;
    std::map<BinaryWord, StrictnessWitness> witnesses;  // per parent word
};

struct ConstructionState {
    DriverConfig config;
    std::string base;                    // canonical term of G
    std::size_t depth = 0;
    std::vector<std::int64_t> moduli;    // m_0 .. m_{depth-1}
    std::map<BinaryWord, Node> nodes;    // every word of length <= depth
    std::map<BinaryWord, Rational> separators;  // b_{w*} for |w| < depth
    std::vector<LevelRecord> levels;

    const Node& node(const BinaryWord& w) const;
    CayleyGraph base_graph() const;
    CayleyGraph graph(const BinaryWord& w) const;
};

// Depth-0 state holding G itself. Throws InvalidArgument for K = 0 or a
// non-positive margin.
ConstructionState init_state(const DriverConfig& config, TableSource& source);

// Chooses the least admissible m_n and returns the state at depth n+1.
// Throws Precondition at depth K and ConstructionFailure (with the per-m
// diagnostics in the message) when no m <= m_limit works.
ConstructionState extend_level(const ConstructionState& state, TableSource& source);

struct OrderEntry {
    std::string label;     // word over {0, *, 1}
    Rational value;
    bool separator = false;
};

struct OrderViolation {
    std::string lower_word;   // lexicographically smaller
    std::string upper_word;
    Rational gap;             // value(lower_word) - value(upper_word)
};

struct OrderReport {
    std::vector<OrderEntry> entries;          // lexicographic order, no-letter < 0 < * < 1
    Rational required_gap;                    // half the margin
    std::vector<OrderViolation> violations;

    bool ok() const noexcept { return violations.empty(); }
};

// Checks that lexicographic order on S_n reverses numeric order, with every
// pair separated by at least half the margin (separators sit at midpoints).
OrderReport order_check(const ConstructionState& state);

struct WordEvaluation {
    std::vector<std::string> prefixes;
    std::vector<Rational> estimates;        // statistic of Cay(G_{w_j}, S), j = 0..d
    std::vector<Rational> line_estimates;   // same for the product with the line
    std::string descriptor;                 // G_{w_d}
};

WordEvaluation evaluate_word(const ConstructionState& state, const InfiniteWordSpec& w, std::size_t d);

struct InjectivityReport {
    std::size_t index = 0;          // first disagreement
    bool swapped = false;           // inputs exchanged so that w(i) = 0
    std::string w_prefix;           // w_i
    Rational upper_quotient;        // statistic of G_{w'_d}
    Rational branch;                // statistic of G_{w_i 1}
    Rational separator;             // b_{w_i *}
    std::vector<Rational> tail;     // statistics of G_{w_j}, i < j <= d
    bool chain_holds = false;       // estimate-level chain
    bool counts_dominated = false;  // exact: c_k(G_{w'_d}) <= c_k(G_{w_i}) and <= c_k(G_{w_i 1})
};

InjectivityReport injectivity_witness(const ConstructionState& state, const InfiniteWordSpec& w,
                                      const InfiniteWordSpec& w_other, std::size_t d);

} // namespace cantorsaw
