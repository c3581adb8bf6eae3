#pragma once

#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>

namespace fpres {

using Rational = boost::rational<std::int64_t>;
using cplx = std::complex<double>;

// Fractional part in [0, 1).
Rational frac(const Rational& r);

// exp(2 pi i * turns), evaluated from the reduced fraction for accuracy.
cplx expi(const Rational& turns);

std::string to_string(const Rational& r);
Rational parse_rational(std::string_view text);

// Argument of z in turns, rounded to a multiple of 1/modulus.
// |z - expi(result)| is written to *deviation when given.
Rational snap_phase(cplx z, std::int64_t modulus, double* deviation = nullptr);

std::int64_t lcm64(std::int64_t a, std::int64_t b);

}  // namespace fpres
