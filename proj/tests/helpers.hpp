#pragma once

#include "dressim/linalg.hpp"
#include "dressim/rng.hpp"

namespace testing_helpers {

using dressim::Complex;
using dressim::Index;
using dressim::Matrix;
using dressim::Vector;

inline Matrix random_matrix(Index n, dressim::Rng& rng) {
    Matrix m(n, n);
    for (Index r = 0; r < n; ++r)
        for (Index c = 0; c < n; ++c)
            m(r, c) = Complex(rng.gaussian(1.0), rng.gaussian(1.0));
    return m;
}

inline Matrix random_hermitian(Index n, dressim::Rng& rng) {
    const Matrix m = random_matrix(n, rng);
    return 0.5 * (m + m.adjoint().eval());
}

inline Vector random_state(Index n, dressim::Rng& rng) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = Complex(rng.gaussian(1.0), rng.gaussian(1.0));
    v /= v.norm();
    return v;
}

} // namespace testing_helpers
