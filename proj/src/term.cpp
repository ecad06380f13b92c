#include "cantorsaw/term.hpp"

#include "cantorsaw/error.hpp"

#include <cctype>
#include <limits>

namespace cantorsaw {

ModuliMask ModuliMask::single(std::size_t index, std::int64_t modulus)
{
    ModuliMask mask;
    mask.entries.resize(index + 1);
    mask.entries[index] = modulus;
    return mask;
}

bool ModuliMask::empty() const noexcept
{
    for (const auto& e : entries)
        if (e)
            return false;
    return true;
}

std::string ModuliMask::word() const
{
    std::string w;
    for (const auto& e : entries)
        w.push_back(e ? '1' : '0');
    return w;
}

std::string ModuliMask::moduli_text() const
{
    std::string s = "[";
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (i)
            s += ",";
        s += entries[i] ? std::to_string(*entries[i]) : "_";
    }
    return s + "]";
}

std::optional<std::int64_t> ModuliMask::at(std::size_t index) const
{
    return index < entries.size() ? entries[index] : std::nullopt;
}

void ModuliMask::validate(std::size_t rank) const
{
    if (entries.size() > rank)
        throw Error(ErrorKind::InvalidArgument,
                    "mask has " + std::to_string(entries.size()) + " entries but the central basis has rank "
                        + std::to_string(rank));
    for (std::size_t i = 0; i < entries.size(); ++i)
        if (entries[i] && *entries[i] < 2)
            throw Error(ErrorKind::InvalidArgument,
                        "modulus at index " + std::to_string(i) + " is " + std::to_string(*entries[i])
                            + "; moduli must be >= 2");
}

ModuliMask ModuliMask::merged(const ModuliMask& other) const
{
    ModuliMask out = *this;
    if (out.entries.size() < other.entries.size())
        out.entries.resize(other.entries.size());
    for (std::size_t i = 0; i < other.entries.size(); ++i) {
        if (!other.entries[i])
            continue;
        if (out.entries[i])
            throw Error(ErrorKind::InvalidArgument,
                        "central index " + std::to_string(i) + " is already quotiented");
        out.entries[i] = other.entries[i];
    }
    return out;
}

ModuliMask ModuliMask::normalized() const
{
    ModuliMask out = *this;
    while (!out.entries.empty() && !out.entries.back())
        out.entries.pop_back();
    return out;
}

Term Term::free_abelian(std::int64_t rank)
{
    if (rank < 0)
        throw Error(ErrorKind::InvalidArgument, "free abelian rank must be >= 0");
    return Term{TermKind::FreeAbelian, rank, {}, {}};
}

Term Term::cyclic(std::int64_t modulus)
{
    if (modulus < 2)
        throw Error(ErrorKind::InvalidArgument, "cyclic modulus must be >= 2");
    return Term{TermKind::Cyclic, modulus, {}, {}};
}

Term Term::free_group(std::int64_t rank)
{
    if (rank < 1)
        throw Error(ErrorKind::InvalidArgument, "free group rank must be >= 1");
    return Term{TermKind::FreeGroup, rank, {}, {}};
}

Term Term::heisenberg()
{
    return Term{TermKind::Heisenberg, 0, {}, {}};
}

Term Term::product(std::vector<Term> factors)
{
    if (factors.empty())
        throw Error(ErrorKind::InvalidArgument, "product needs at least one factor");
    if (factors.size() == 1)
        return std::move(factors.front());
    return Term{TermKind::Product, 0, std::move(factors), {}};
}

Term Term::quotient(Term base, ModuliMask mask)
{
    return Term{TermKind::Quotient, 0, {std::move(base)}, std::move(mask)};
}

namespace {

class Parser {
public:
    explicit Parser(std::string_view text)
    {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c)))
                s_.push_back(c);
    }

    Term parse()
    {
        Term t = product();
        if (pos_ != s_.size())
            fail("unexpected '" + s_.substr(pos_) + "'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& why) const
    {
        throw Error(ErrorKind::InvalidArgument,
                    "group term '" + s_ + "' at offset " + std::to_string(pos_) + ": " + why);
    }

    bool eat(std::string_view token)
    {
        if (s_.compare(pos_, token.size(), token) == 0) {
            pos_ += token.size();
            return true;
        }
        return false;
    }

    void expect(std::string_view token)
    {
        if (!eat(token))
            fail("expected '" + std::string(token) + "'");
    }

    std::int64_t integer()
    {
        std::size_t start = pos_;
        std::int64_t v = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10)
                fail("integer too large");
            v = v * 10 + (s_[pos_++] - '0');
        }
        if (pos_ == start)
            fail("expected integer");
        return v;
    }

    Term product()
    {
        std::vector<Term> factors;
        factors.push_back(atom());
        while (eat("x"))
            factors.push_back(atom());
        return Term::product(std::move(factors));
    }

    Term atom()
    {
        if (eat("(")) {
            Term t = product();
            expect(")");
            return t;
        }
        if (eat("quot(")) {
            Term base = product();
            expect(";");
            expect("mask=");
            std::size_t start = pos_;
            while (pos_ < s_.size() && (s_[pos_] == '0' || s_[pos_] == '1'))
                ++pos_;
            std::string bits = s_.substr(start, pos_ - start);
            expect(";");
            expect("m=");
            start = pos_;
            if (!eat("["))
                fail("expected '['");
            while (pos_ < s_.size() && s_[pos_] != ']')
                ++pos_;
            expect("]");
            std::string moduli = s_.substr(start, pos_ - start);
            expect(")");
            try {
                return Term::quotient(std::move(base), parse_mask(bits, moduli));
            } catch (const Error& e) {
                fail(e.what());
            }
        }
        if (eat("H3"))
            return Term::heisenberg();
        if (eat("F_")) {
            auto k = integer();
            if (k < 1)
                fail("free group rank must be >= 1");
            return Term::free_group(k);
        }
        if (eat("Z")) {
            if (eat("^"))
                return Term::free_abelian(integer());
            if (eat("/")) {
                auto m = integer();
                if (m < 2)
                    fail("cyclic modulus must be >= 2");
                return Term::cyclic(m);
            }
            return Term::free_abelian(1);
        }
        fail("expected a group atom");
    }

    std::string s_;
    std::size_t pos_ = 0;
};

void emit(const Term& t, std::string& out, bool nested)
{
    switch (t.kind) {
    case TermKind::FreeAbelian:
        out += t.param == 1 ? std::string("Z") : "Z^" + std::to_string(t.param);
        break;
    case TermKind::Cyclic:
        out += "Z/" + std::to_string(t.param);
        break;
    case TermKind::FreeGroup:
        out += "F_" + std::to_string(t.param);
        break;
    case TermKind::Heisenberg:
        out += "H3";
        break;
    case TermKind::Product:
        if (nested)
            out += "(";
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            if (i)
                out += " x ";
            emit(t.children[i], out, true);
        }
        if (nested)
            out += ")";
        break;
    case TermKind::Quotient:
        out += "quot(";
        emit(t.children.front(), out, false);
        out += "; mask=" + t.mask.word() + "; m=" + t.mask.moduli_text() + ")";
        break;
    }
}

} // namespace

ModuliMask parse_mask(std::string_view bits, std::string_view moduli)
{
    std::string m(moduli);
    if (m.size() < 2 || m.front() != '[' || m.back() != ']')
        throw Error(ErrorKind::InvalidArgument, "moduli list must look like [3,_,5]");
    m = m.substr(1, m.size() - 2);

    std::vector<std::string> items;
    std::string cur;
    for (char c : m) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        if (c == ',') {
            items.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    items.push_back(cur);

    if (items.size() != bits.size())
        throw Error(ErrorKind::InvalidArgument, "mask bits and moduli list differ in length");

    ModuliMask mask;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        const std::string& item = items[i];
        if (bits[i] == '0') {
            if (item != "_")
                throw Error(ErrorKind::InvalidArgument, "mask bit 0 at index " + std::to_string(i) + " needs '_'");
            mask.entries.emplace_back();
        } else if (bits[i] == '1') {
            if (item.empty() || item.find_first_not_of("0123456789") != std::string::npos || item.size() > 17)
                throw Error(ErrorKind::InvalidArgument, "mask bit 1 at index " + std::to_string(i) + " needs a modulus");
            mask.entries.emplace_back(std::stoll(item));
        } else {
            throw Error(ErrorKind::InvalidArgument, "mask bits must be 0 or 1");
        }
    }
    mask.validate(mask.entries.size());
    return mask;
}

Term parse_term(std::string_view text)
{
    return Parser(text).parse();
}

std::string to_string(const Term& term)
{
    std::string out;
    emit(term, out, false);
    return out;
}

} // namespace cantorsaw
