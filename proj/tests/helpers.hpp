// helpers.hpp - small builders shared by the unit tests
#pragma once

#include <random>
#include <vector>

#include "qscatter/qcoeff.hpp"

namespace qt {

// sum c[i] s^(low+i)
inline qs::LPoly lp(std::vector<long> c, int low = 0) {
    qs::LPoly p;
    for (size_t i = 0; i < c.size(); ++i) p = p + qs::LPoly::monomial(c[i], low + static_cast<int>(i));
    return p;
}

inline qs::QScalar sc(std::vector<long> c, int low = 0) { return qs::QScalar(lp(std::move(c), low), qs::LPoly(1)); }

inline qs::QScalar s(int k) { return qs::QScalar::s_pow(k); }

inline qs::LPoly random_lpoly(std::mt19937& rng, int maxlen = 4, int span = 3, bool nonzero = false) {
    std::uniform_int_distribution<int> len(nonzero ? 1 : 0, maxlen);
    std::uniform_int_distribution<int> lo(-span, span);
    std::uniform_int_distribution<int> co(-3, 3);
    for (;;) {
        int n = len(rng);
        std::vector<long> c;
        for (int i = 0; i < n; ++i) c.push_back(co(rng));
        qs::LPoly p = lp(c, lo(rng));
        if (!nonzero || !p.is_zero()) return p;
    }
}

inline qs::QScalar random_qscalar(std::mt19937& rng) {
    return qs::QScalar(random_lpoly(rng), random_lpoly(rng, 3, 2, true));
}

}  // namespace qt
