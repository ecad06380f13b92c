#pragma once

#include "cantorsaw/term.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cantorsaw {

// Normal form of a group element. Fixed-width coordinates come first
// (abelian, cyclic and Heisenberg factors, in factor order); each free
// factor then appends its reduced word as [length, letters...] with
// letters +-(1..k). Two elements of the same group are equal iff their
// data vectors are equal.
struct Element {
    std::vector<std::int64_t> data;

    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
};

struct ElementHash {
    std::size_t operator()(const Element& e) const noexcept;
};

// Identifies which original generator (or its inverse) a closure element is.
struct GeneratorLabel {
    int generator = 0;
    bool inverse = false;

    friend bool operator==(const GeneratorLabel&, const GeneratorLabel&) = default;
    friend auto operator<=>(const GeneratorLabel&, const GeneratorLabel&) = default;
};

struct GeneratingSet {
    std::vector<Element> generators;
    // S u S^-1 without the identity, duplicates collapsed, sorted by the
    // canonical text of each element.
    std::vector<Element> closure;
    std::vector<std::vector<GeneratorLabel>> labels;  // parallel to closure

    std::size_t degree() const noexcept { return closure.size(); }
};

enum class HVariant { FreeAbelian, HeisenbergExtended };

// A concrete group built from a canonical Term: multiplication, inverses and
// the designated central basis (g_0, ..., g_{K-1}) plus the optional line
// generator a. Immutable after construction.
class Group {
public:
    explicit Group(const Term& term);
    static Group parse(std::string_view text) { return Group(parse_term(text)); }

    const Term& term() const noexcept { return term_; }
    // Canonical serialization; two descriptors denote the same construction
    // iff their keys agree.
    const std::string& key() const noexcept { return key_; }

    Element identity() const;
    Element multiply(const Element& a, const Element& b) const;
    Element inverse(const Element& a) const;
    bool is_identity(const Element& a) const;
    void validate(const Element& a) const;

    std::string format(const Element& a) const;

    std::vector<Element> standard_generators() const;

    std::size_t central_rank() const noexcept { return central_pos_.size(); }
    const std::vector<Element>& central_basis() const noexcept { return central_basis_; }
    std::size_t central_position(std::size_t index) const;
    // g_index^k.
    Element central_power(std::size_t index, std::int64_t k) const;
    // Modulus applied to the central coordinate `index`, 0 when unquotiented.
    std::int64_t central_modulus(std::size_t index) const;

    const std::optional<Element>& line_generator() const noexcept { return line_generator_; }

    // Quotient by <m_i g_i : i in mask>, as a new descriptor.
    Group quotient(const ModuliMask& mask) const;
    // The image in this group of an element of a group sharing this layout
    // (typically a cover of which this is a central quotient).
    Element image(const Element& a) const;

    std::size_t fixed_size() const noexcept { return modulus_.size(); }

    friend bool operator==(const Group& a, const Group& b) { return a.key_ == b.key_; }

private:
    enum class LeafKind { Abelian, Cyclic, Heisenberg, Free };
    struct Leaf {
        LeafKind kind;
        std::int64_t rank = 0;   // abelian rank or free rank
        std::size_t offset = 0;  // first fixed coordinate
    };
    struct Built {
        std::vector<std::size_t> central;
        std::optional<std::size_t> line;
    };

    Built build(const Term& t);
    void reduce(std::vector<std::int64_t>& data) const;
    // Offsets of the free words inside `data`, validated against the layout.
    std::vector<std::size_t> word_offsets(const Element& a) const;

    Term term_;
    std::string key_;
    std::vector<Leaf> leaves_;
    std::vector<std::int64_t> modulus_;  // per fixed coordinate, 0 for Z
    std::size_t free_count_ = 0;
    std::vector<std::size_t> central_pos_;
    std::vector<Element> central_basis_;
    std::optional<Element> line_generator_;
};

// Brings quotients into canonical form: nested quotients merged, masks padded
// to the central rank, empty masks dropped.
Term canonicalize(const Term& term);

GeneratingSet symmetric_closure(const Group& group, const std::vector<Element>& generators);

// G = H x <a> with S = S_H x {1} u {(1, a)}.
std::pair<Group, GeneratingSet> make_construction_group(std::size_t k, HVariant variant);

} // namespace cantorsaw
