#include "cantorsaw/numeric.hpp"

#include "cantorsaw/error.hpp"

#include <cctype>
#include <numeric>

namespace cantorsaw {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::MalformedElement: return "malformed-element";
    case ErrorKind::EmptyGeneratingSet: return "empty-generating-set";
    case ErrorKind::ResourceExhausted: return "resource-exhausted";
    case ErrorKind::FiniteGraph: return "finite-graph";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::TrivialSubgroup: return "trivial-subgroup";
    case ErrorKind::NoStabilization: return "no-stabilization-within-horizon";
    case ErrorKind::ConstructionFailure: return "level-construction-failure";
    case ErrorKind::InvariantViolation: return "invariant-violation";
    }
    return "unknown";
}

BigInt integer_root(const BigInt& value, unsigned k)
{
    if (k == 0)
        throw Error(ErrorKind::InvalidArgument, "integer_root: k must be positive");
    if (value < 0)
        throw Error(ErrorKind::InvalidArgument, "integer_root: negative radicand");
    if (value < 2 || k == 1)
        return value;

    // Newton iteration from an overestimate 2^ceil(bits/k).
    const auto bits = boost::multiprecision::msb(value) + 1;
    BigInt x = BigInt(1) << ((bits + k - 1) / k);
    for (;;) {
        BigInt y = (BigInt(k - 1) * x + value / boost::multiprecision::pow(x, k - 1)) / k;
        if (y >= x)
            break;
        x = std::move(y);
    }
    while (boost::multiprecision::pow(x, k) > value)
        --x;
    while (boost::multiprecision::pow(x + 1, k) <= value)
        ++x;
    return x;
}

BigInt pow10(unsigned digits)
{
    return boost::multiprecision::pow(BigInt(10), digits);
}

Rational Decimal::to_rational() const
{
    return Rational(scaled, pow10(digits));
}

std::string Decimal::to_string() const
{
    BigInt magnitude = scaled < 0 ? BigInt(-scaled) : scaled;
    std::string body = magnitude.str();
    if (digits > 0) {
        if (body.size() <= digits)
            body.insert(0, digits + 1 - body.size(), '0');
        body.insert(body.size() - digits, ".");
    }
    return scaled < 0 ? "-" + body : body;
}

double Decimal::to_double() const
{
    return std::stod(to_string());
}

Decimal nth_root_rounded(const BigInt& value, unsigned k, unsigned digits)
{
    // round(v^(1/k) * 10^D): with q = floor((v * 10^(Dk))^(1/k)),
    // round up iff (q + 1/2)^k <= v * 10^(Dk), i.e. (2q+1)^k <= v * 10^(Dk) * 2^k.
    const BigInt radicand = value * boost::multiprecision::pow(pow10(digits), k);
    BigInt q = integer_root(radicand, k);
    if (boost::multiprecision::pow(2 * q + 1, k) <= radicand * (BigInt(1) << k))
        ++q;
    return Decimal{q, digits};
}

Decimal round_rational(const Rational& value, unsigned digits)
{
    const Rational scaled = value * pow10(digits);
    BigInt num = boost::multiprecision::numerator(scaled);
    BigInt den = boost::multiprecision::denominator(scaled);
    // floor(num/den + 1/2) = floor((2 num + den) / (2 den))
    BigInt top = 2 * num + den;
    BigInt bottom = 2 * den;
    BigInt q = top / bottom;
    if (top % bottom != 0 && top < 0)
        --q;
    return Decimal{q, digits};
}

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char c : raw)
        if (!std::isspace(static_cast<unsigned char>(c)))
            text.push_back(c);
    auto fail = [&] { return Error(ErrorKind::InvalidArgument, "cannot parse rational '" + raw + "'"); };
    if (text.empty())
        throw fail();

    if (auto slash = text.find('/'); slash != std::string::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0)
            throw fail();
        return num / den;
    }

    std::size_t pos = 0;
    bool negative = false;
    if (text[pos] == '+' || text[pos] == '-')
        negative = text[pos++] == '-';
    BigInt mantissa = 0;
    long exponent = 0;
    bool any_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (std::isdigit(static_cast<unsigned char>(c))) {
            mantissa = mantissa * 10 + (c - '0');
            if (seen_point)
                --exponent;
            any_digit = true;
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else {
            break;
        }
    }
    if (!any_digit)
        throw fail();
    if (pos < text.size()) {
        if (text[pos] != 'e' && text[pos] != 'E')
            throw fail();
        std::size_t used = 0;
        long e = 0;
        try {
            e = std::stol(text.substr(pos + 1), &used);
        } catch (const std::exception&) {
            throw fail();
        }
        if (used != text.size() - pos - 1 || e > 4096 || e < -4096)
            throw fail();
        exponent += e;
    }
    Rational result(mantissa);
    if (exponent > 0)
        result *= pow10(static_cast<unsigned>(exponent));
    else if (exponent < 0)
        result /= pow10(static_cast<unsigned>(-exponent));
    return negative ? Rational(-result) : result;
}

std::string rational_to_string(const Rational& value)
{
    return round_rational(value, 15).to_string();
}

std::string rational_exact_string(const Rational& value)
{
    const BigInt& den = boost::multiprecision::denominator(value);
    if (den == 1)
        return boost::multiprecision::numerator(value).str();
    return boost::multiprecision::numerator(value).str() + "/" + den.str();
}

std::int64_t gcd64(std::int64_t a, std::int64_t b)
{
    return std::gcd(a, b);
}

} // namespace cantorsaw
