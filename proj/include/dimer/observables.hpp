#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string_view>

namespace dimer {

/// The quantities reported for a state of the dimer.
struct ObservableSet {
    double current = 0.0;                ///< 2 Omega Im<s2+ s1->
    std::complex<double> coherence{};    ///< <s2+ s1-> = <e1 g2|rho|g1 e2>
    double pop1 = 0.0;                   ///< excited-state population of molecule 1
    double pop2 = 0.0;                   ///< excited-state population of molecule 2
    double zz = 0.0;                     ///< <s1z s2z>
};

enum class Observable { current, coherence_re, coherence_im, pop1, pop2, zz };

inline constexpr std::array<std::string_view, 6> kObservableNames = {
    "current", "coherence_re", "coherence_im", "pop1", "pop2", "zz"};

inline double value(const ObservableSet& o, Observable which) {
    switch (which) {
        case Observable::current: return o.current;
        case Observable::coherence_re: return o.coherence.real();
        case Observable::coherence_im: return o.coherence.imag();
        case Observable::pop1: return o.pop1;
        case Observable::pop2: return o.pop2;
        case Observable::zz: return o.zz;
    }
    return 0.0;
}

inline std::optional<Observable> parse_observable(std::string_view name) {
    for (std::size_t i = 0; i < kObservableNames.size(); ++i) {
        if (kObservableNames[i] == name) return static_cast<Observable>(i);
    }
    return std::nullopt;
}

}  // namespace dimer
