#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace fpres {

using IntMatrix = std::vector<std::vector<std::int64_t>>;

// P * A * Q = D with P, Q unimodular and D diagonal, d_i | d_{i+1}.
struct SmithForm {
    IntMatrix D, P, Q, Qinv;
    std::vector<std::int64_t> diagonal() const;
};

SmithForm smith_normal_form(const IntMatrix& A);

// Integer row vector x with x * A = t, if one exists.
std::optional<std::vector<std::int64_t>> solve_left(const IntMatrix& A,
                                                    const std::vector<std::int64_t>& t);

// Generators of the integer left kernel {x : x * A = 0}.
IntMatrix left_kernel(const IntMatrix& A);

}  // namespace fpres
