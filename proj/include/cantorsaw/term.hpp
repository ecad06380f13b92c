#pragma once

// Group descriptor terms and their canonical text syntax.
//
//   term    := product
//   product := atom ('x' atom)*
//   atom    := 'Z' | 'Z^' int | 'Z/' int | 'F_' int | 'H3'
//            | '(' product ')'
//            | 'quot(' product ';' 'mask=' bits ';' 'm=[' entries ']' ')'
//   entries := (int | '_') (',' (int | '_'))*
//
// Whitespace is ignored. A product whose last factor is exactly `Z` treats
// that factor as the distinguished line <a>; it is excluded from the
// central basis. The canonical form is re-emitted by to_string().

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cantorsaw {

// Per central-basis index: no modulus (unquotiented) or a modulus m_i >= 2.
struct ModuliMask {
    std::vector<std::optional<std::int64_t>> entries;

    static ModuliMask single(std::size_t index, std::int64_t modulus);

    bool empty() const noexcept;               // no index quotiented
    std::string word() const;                  // "0110"
    std::string moduli_text() const;           // "[_,3,5,_]"
    std::optional<std::int64_t> at(std::size_t index) const;

    // Throws InvalidArgument unless every modulus is >= 2 and the length
    // does not exceed `rank`.
    void validate(std::size_t rank) const;

    // Union of two masks over disjoint indices.
    ModuliMask merged(const ModuliMask& other) const;

    // Strips trailing unquotiented entries so equal masks compare equal.
    ModuliMask normalized() const;

    friend bool operator==(const ModuliMask&, const ModuliMask&) = default;
};

// Parses "mask=0110" style bits plus "[_,3,5,_]" moduli into a mask.
ModuliMask parse_mask(std::string_view bits, std::string_view moduli);

enum class TermKind { FreeAbelian, Cyclic, FreeGroup, Heisenberg, Product, Quotient };

struct Term {
    TermKind kind = TermKind::FreeAbelian;
    std::int64_t param = 0;       // rank, modulus or free rank
    std::vector<Term> children;   // product factors, or the single quotient base
    ModuliMask mask;              // quotient only

    static Term free_abelian(std::int64_t rank);
    static Term cyclic(std::int64_t modulus);
    static Term free_group(std::int64_t rank);
    static Term heisenberg();
    static Term product(std::vector<Term> factors);
    static Term quotient(Term base, ModuliMask mask);

    bool is_line() const noexcept { return kind == TermKind::FreeAbelian && param == 1; }

    friend bool operator==(const Term&, const Term&) = default;
};

Term parse_term(std::string_view text);
std::string to_string(const Term& term);

} // namespace cantorsaw
