#include "fpres/rational.hpp"

#include "fpres/errors.hpp"

#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

namespace fpres {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidInput: return "invalid-input";
        case ErrorKind::Structural: return "structural";
        case ErrorKind::Inconsistency: return "internal-inconsistency";
        case ErrorKind::NotApplicable: return "not-applicable";
        case ErrorKind::IncompleteInput: return "incomplete-input";
        case ErrorKind::ResourceLimit: return "resource-limit";
        case ErrorKind::FusionIntegrality: return "fusion-integrality-violation";
        case ErrorKind::MalformedBundle: return "malformed-bundle";
        case ErrorKind::InvalidExtension: return "invalid-extension";
        case ErrorKind::ResolutionInconsistency: return "resolution-inconsistency";
        case ErrorKind::Schema: return "schema-violation";
    }
    return "unknown";
}

Rational frac(const Rational& r) {
    std::int64_t n = r.numerator() % r.denominator();
    if (n < 0) n += r.denominator();
    return Rational(n, r.denominator());
}

cplx expi(const Rational& turns) {
    Rational f = frac(turns);
    std::int64_t n = f.numerator(), d = f.denominator();
    // fold into the first octant-ish range for accuracy of exact cases
    if (n == 0) return {1.0, 0.0};
    if (4 * n == d) return {0.0, 1.0};
    if (2 * n == d) return {-1.0, 0.0};
    if (4 * n == 3 * d) return {0.0, -1.0};
    double ang = 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(d);
    if (2 * n > d) ang -= 2.0 * std::numbers::pi;
    return {std::cos(ang), std::sin(ang)};
}

std::string to_string(const Rational& r) {
    if (r.denominator() == 1) return std::to_string(r.numerator());
    return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

static std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        fail(ErrorKind::Schema, "cannot parse rational '" + std::string(whole) + "'");
    return v;
}

Rational parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text, text));
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) fail(ErrorKind::Schema, "zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
}

Rational snap_phase(cplx z, std::int64_t modulus, double* deviation) {
    double turns = std::arg(z) / (2.0 * std::numbers::pi);
    auto k = static_cast<std::int64_t>(std::llround(turns * static_cast<double>(modulus)));
    Rational r = frac(Rational(k, modulus));
    if (deviation) *deviation = std::abs(z - expi(r));
    return r;
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

}  // namespace fpres
