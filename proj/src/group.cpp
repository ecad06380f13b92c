#include "cantorsaw/group.hpp"

#include "cantorsaw/error.hpp"

#include <algorithm>
#include <map>

namespace cantorsaw {

namespace {

std::size_t central_rank_of(const Term& t)
{
    switch (t.kind) {
    case TermKind::FreeAbelian: return static_cast<std::size_t>(t.param);
    case TermKind::Cyclic: return 0;
    case TermKind::FreeGroup: return 0;
    case TermKind::Heisenberg: return 1;
    case TermKind::Product: {
        std::size_t rank = 0;
        for (const Term& c : t.children)
            rank += central_rank_of(c);
        return t.children.back().is_line() ? rank - 1 : rank;
    }
    case TermKind::Quotient: return central_rank_of(t.children.front());
    }
    return 0;
}

std::int64_t mod_floor(std::int64_t v, std::int64_t m)
{
    std::int64_t r = v % m;
    return r < 0 ? r + m : r;
}

[[noreturn]] void malformed(const std::string& why)
{
    throw Error(ErrorKind::MalformedElement, why);
}

} // namespace

std::size_t ElementHash::operator()(const Element& e) const noexcept
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ e.data.size();
    for (std::int64_t v : e.data) {
        std::uint64_t x = static_cast<std::uint64_t>(v) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        x ^= x >> 33;
        x *= 0xff51afd7ed558ccdULL;
        x ^= x >> 33;
        h ^= x;
    }
    return static_cast<std::size_t>(h);
}

Term canonicalize(const Term& term)
{
    switch (term.kind) {
    case TermKind::Product: {
        std::vector<Term> factors;
        for (const Term& c : term.children)
            factors.push_back(canonicalize(c));
        return Term::product(std::move(factors));
    }
    case TermKind::Quotient: {
        Term base = canonicalize(term.children.front());
        ModuliMask mask = term.mask;
        if (base.kind == TermKind::Quotient) {
            mask = base.mask.merged(mask);
            base = Term(base.children.front());
        }
        const std::size_t rank = central_rank_of(base);
        mask = mask.normalized();
        mask.validate(rank);
        if (mask.empty())
            return base;
        mask.entries.resize(rank);
        return Term::quotient(std::move(base), std::move(mask));
    }
    default:
        return term;
    }
}

Group::Group(const Term& term)
    : term_(canonicalize(term))
    , key_(to_string(term_))
{
    Built b = build(term_);
    central_pos_ = b.central;
    for (std::size_t i = 0; i < central_pos_.size(); ++i)
        central_basis_.push_back(central_power(i, 1));
    if (b.line) {
        Element a = identity();
        a.data[*b.line] = 1;
        line_generator_ = std::move(a);
    }
}

Group::Built Group::build(const Term& t)
{
    Built out;
    switch (t.kind) {
    case TermKind::FreeAbelian: {
        Leaf leaf{LeafKind::Abelian, t.param, modulus_.size()};
        for (std::int64_t i = 0; i < t.param; ++i) {
            out.central.push_back(modulus_.size());
            modulus_.push_back(0);
        }
        leaves_.push_back(leaf);
        break;
    }
    case TermKind::Cyclic:
        leaves_.push_back(Leaf{LeafKind::Cyclic, 1, modulus_.size()});
        modulus_.push_back(t.param);
        break;
    case TermKind::Heisenberg:
        leaves_.push_back(Leaf{LeafKind::Heisenberg, 3, modulus_.size()});
        out.central.push_back(modulus_.size() + 2);
        modulus_.insert(modulus_.end(), 3, 0);
        break;
    case TermKind::FreeGroup:
        leaves_.push_back(Leaf{LeafKind::Free, t.param, free_count_++});
        break;
    case TermKind::Product:
        for (std::size_t i = 0; i < t.children.size(); ++i) {
            Built child = build(t.children[i]);
            if (i + 1 == t.children.size() && t.children[i].is_line())
                out.line = child.central.front();
            else
                out.central.insert(out.central.end(), child.central.begin(), child.central.end());
        }
        break;
    case TermKind::Quotient: {
        out = build(t.children.front());
        t.mask.validate(out.central.size());
        for (std::size_t i = 0; i < t.mask.entries.size(); ++i) {
            if (!t.mask.entries[i])
                continue;
            std::int64_t& m = modulus_[out.central[i]];
            if (m != 0)
                throw Error(ErrorKind::InvalidArgument,
                            "central index " + std::to_string(i) + " is already quotiented");
            m = *t.mask.entries[i];
        }
        break;
    }
    }
    return out;
}

Element Group::identity() const
{
    Element e;
    e.data.assign(modulus_.size() + free_count_, 0);
    return e;
}

std::vector<std::size_t> Group::word_offsets(const Element& a) const
{
    std::vector<std::size_t> offsets;
    std::size_t pos = modulus_.size();
    if (a.data.size() < pos)
        malformed("element of " + key_ + " is too short");
    for (const Leaf& leaf : leaves_) {
        if (leaf.kind != LeafKind::Free)
            continue;
        if (pos >= a.data.size())
            malformed("element of " + key_ + " is missing a free word");
        const std::int64_t len = a.data[pos];
        if (len < 0 || static_cast<std::size_t>(len) > a.data.size() - pos - 1)
            malformed("free word length out of range in element of " + key_);
        offsets.push_back(pos);
        pos += 1 + static_cast<std::size_t>(len);
    }
    if (pos != a.data.size())
        malformed("element of " + key_ + " has trailing data");
    return offsets;
}

void Group::validate(const Element& a) const
{
    auto offsets = word_offsets(a);
    for (std::size_t i = 0; i < modulus_.size(); ++i)
        if (modulus_[i] != 0 && (a.data[i] < 0 || a.data[i] >= modulus_[i]))
            malformed("coordinate " + std::to_string(i) + " of element of " + key_ + " is not reduced mod "
                      + std::to_string(modulus_[i]));
    std::size_t w = 0;
    for (const Leaf& leaf : leaves_) {
        if (leaf.kind != LeafKind::Free)
            continue;
        const std::size_t off = offsets[w++];
        const auto len = static_cast<std::size_t>(a.data[off]);
        for (std::size_t j = 0; j < len; ++j) {
            const std::int64_t letter = a.data[off + 1 + j];
            if (letter == 0 || letter > leaf.rank || -letter > leaf.rank)
                malformed("free letter out of range in element of " + key_);
            if (j > 0 && letter == -a.data[off + j])
                malformed("free word not reduced in element of " + key_);
        }
    }
}

void Group::reduce(std::vector<std::int64_t>& data) const
{
    for (std::size_t i = 0; i < modulus_.size(); ++i)
        if (modulus_[i] != 0)
            data[i] = mod_floor(data[i], modulus_[i]);
}

Element Group::multiply(const Element& a, const Element& b) const
{
    const auto wa = word_offsets(a);
    const auto wb = word_offsets(b);

    Element r;
    r.data.resize(modulus_.size());
    std::size_t w = 0;
    for (const Leaf& leaf : leaves_) {
        const std::size_t o = leaf.offset;
        switch (leaf.kind) {
        case LeafKind::Abelian:
        case LeafKind::Cyclic:
            for (std::int64_t j = 0; j < leaf.rank; ++j)
                r.data[o + j] = a.data[o + j] + b.data[o + j];
            break;
        case LeafKind::Heisenberg:
            // (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy'): upper unitriangular matrices
            r.data[o] = a.data[o] + b.data[o];
            r.data[o + 1] = a.data[o + 1] + b.data[o + 1];
            r.data[o + 2] = a.data[o + 2] + b.data[o + 2] + a.data[o] * b.data[o + 1];
            break;
        case LeafKind::Free: {
            const std::size_t oa = wa[w], ob = wb[w];
            ++w;
            auto la = static_cast<std::size_t>(a.data[oa]);
            const auto lb = static_cast<std::size_t>(b.data[ob]);
            std::size_t skip = 0;
            while (la > 0 && skip < lb && a.data[oa + la] == -b.data[ob + 1 + skip]) {
                --la;
                ++skip;
            }
            r.data.push_back(static_cast<std::int64_t>(la + lb - skip));
            r.data.insert(r.data.end(), a.data.begin() + oa + 1, a.data.begin() + oa + 1 + la);
            r.data.insert(r.data.end(), b.data.begin() + ob + 1 + skip, b.data.begin() + ob + 1 + lb);
            break;
        }
        }
    }
    reduce(r.data);
    return r;
}

Element Group::inverse(const Element& a) const
{
    const auto wa = word_offsets(a);
    Element r;
    r.data.resize(modulus_.size());
    std::size_t w = 0;
    for (const Leaf& leaf : leaves_) {
        const std::size_t o = leaf.offset;
        switch (leaf.kind) {
        case LeafKind::Abelian:
        case LeafKind::Cyclic:
            for (std::int64_t j = 0; j < leaf.rank; ++j)
                r.data[o + j] = -a.data[o + j];
            break;
        case LeafKind::Heisenberg:
            r.data[o] = -a.data[o];
            r.data[o + 1] = -a.data[o + 1];
            r.data[o + 2] = -a.data[o + 2] + a.data[o] * a.data[o + 1];
            break;
        case LeafKind::Free: {
            const std::size_t oa = wa[w++];
            const std::int64_t len = a.data[oa];
            r.data.push_back(len);
            for (std::int64_t j = len; j >= 1; --j)
                r.data.push_back(-a.data[oa + j]);
            break;
        }
        }
    }
    reduce(r.data);
    return r;
}

bool Group::is_identity(const Element& a) const
{
    return a == identity();
}

std::string Group::format(const Element& a) const
{
    const auto wa = word_offsets(a);
    std::string s = "(";
    std::size_t w = 0;
    for (std::size_t li = 0; li < leaves_.size(); ++li) {
        const Leaf& leaf = leaves_[li];
        if (li)
            s += ";";
        if (leaf.kind == LeafKind::Free) {
            const std::size_t oa = wa[w++];
            const std::int64_t len = a.data[oa];
            if (len == 0)
                s += "e";
            for (std::int64_t j = 1; j <= len; ++j) {
                const std::int64_t letter = a.data[oa + j];
                if (j > 1)
                    s += ".";
                s += (letter > 0 ? "x" : "X") + std::to_string(letter > 0 ? letter : -letter);
            }
            continue;
        }
        for (std::int64_t j = 0; j < leaf.rank; ++j) {
            if (j)
                s += ",";
            s += std::to_string(a.data[leaf.offset + j]);
        }
    }
    return s + ")";
}

std::vector<Element> Group::standard_generators() const
{
    std::vector<Element> gens;
    std::size_t w = 0;
    for (const Leaf& leaf : leaves_) {
        switch (leaf.kind) {
        case LeafKind::Abelian:
        case LeafKind::Cyclic:
            for (std::int64_t j = 0; j < leaf.rank; ++j) {
                Element e = identity();
                e.data[leaf.offset + j] = 1;
                gens.push_back(std::move(e));
            }
            break;
        case LeafKind::Heisenberg:
            for (std::size_t j = 0; j < 2; ++j) {
                Element e = identity();
                e.data[leaf.offset + j] = 1;
                gens.push_back(std::move(e));
            }
            break;
        case LeafKind::Free:
            for (std::int64_t letter = 1; letter <= leaf.rank; ++letter) {
                Element e;
                e.data.assign(modulus_.size(), 0);
                for (std::size_t k = 0; k < free_count_; ++k) {
                    if (k == w) {
                        e.data.push_back(1);
                        e.data.push_back(letter);
                    } else {
                        e.data.push_back(0);
                    }
                }
                gens.push_back(std::move(e));
            }
            ++w;
            break;
        }
    }
    for (Element& g : gens)
        reduce(g.data);
    return gens;
}

std::size_t Group::central_position(std::size_t index) const
{
    if (index >= central_pos_.size())
        throw Error(ErrorKind::InvalidArgument,
                    "central index " + std::to_string(index) + " out of range for " + key_);
    return central_pos_[index];
}

Element Group::central_power(std::size_t index, std::int64_t k) const
{
    Element e = identity();
    e.data[central_position(index)] = k;
    reduce(e.data);
    return e;
}

std::int64_t Group::central_modulus(std::size_t index) const
{
    return modulus_[central_position(index)];
}

Group Group::quotient(const ModuliMask& mask) const
{
    return Group(Term::quotient(term_, mask));
}

Element Group::image(const Element& a) const
{
    Element r = a;
    if (r.data.size() < modulus_.size())
        malformed("cannot map element into " + key_);
    reduce(r.data);
    validate(r);
    return r;
}

GeneratingSet symmetric_closure(const Group& group, const std::vector<Element>& generators)
{
    if (generators.empty())
        throw Error(ErrorKind::EmptyGeneratingSet, "generating set for " + group.key() + " is empty");

    std::map<std::string, std::pair<Element, std::vector<GeneratorLabel>>> sorted;
    for (std::size_t i = 0; i < generators.size(); ++i) {
        group.validate(generators[i]);
        for (bool inv : {false, true}) {
            Element s = inv ? group.inverse(generators[i]) : generators[i];
            if (group.is_identity(s))
                continue;
            auto& slot = sorted[group.format(s)];
            slot.first = std::move(s);
            slot.second.push_back(GeneratorLabel{static_cast<int>(i), inv});
        }
    }

    GeneratingSet set;
    set.generators = generators;
    for (auto& [text, entry] : sorted) {
        std::sort(entry.second.begin(), entry.second.end());
        set.closure.push_back(std::move(entry.first));
        set.labels.push_back(std::move(entry.second));
    }
    return set;
}

std::pair<Group, GeneratingSet> make_construction_group(std::size_t k, HVariant variant)
{
    Term h;
    if (variant == HVariant::FreeAbelian) {
        if (k == 0)
            throw Error(ErrorKind::InvalidArgument, "construction needs at least one central generator (K >= 1)");
        h = Term::free_abelian(static_cast<std::int64_t>(k));
    } else {
        if (k != 1)
            throw Error(ErrorKind::InvalidArgument, "the Heisenberg-extended group has a rank-1 center (K = 1)");
        h = Term::heisenberg();
    }
    Group g(Term::product({h, Term::free_abelian(1)}));
    GeneratingSet s = symmetric_closure(g, g.standard_generators());
    return {std::move(g), std::move(s)};
}

} // namespace cantorsaw
