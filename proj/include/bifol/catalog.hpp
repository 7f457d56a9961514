#pragma once

#include "fixtures.hpp"
#include "periodic.hpp"

#include <functional>

namespace bifol::gen {

struct NamedFinite {
    std::string name;
    std::function<FinitePattern()> make;
};

struct NamedPeriodic {
    std::string name;
    std::function<PeriodicPattern()> make;
};

/// Width of the materialized skew windows.
inline constexpr long long kSkewWindow = 16;

/// Every shipped finite fixture, crossing points marked up to the cap of 30.
inline std::vector<NamedFinite> catalog() {
    std::vector<NamedFinite> out;
    auto add = [&](std::string name, std::function<FinitePattern()> f) {
        out.push_back({std::move(name), [f] { return with_crossing_points(f()); }});
    };
    add("grid3", grid3);
    add("loz1", [] { return lozenge(true); });
    add("chain3", [] { return chain(3); });
    add("prong3", [] { return prong(3); });
    for (int m = 1; m <= 3; ++m) add("prongdiv" + std::to_string(m), [m] { return prongdiv(m); });
    add("prongnondiv", prongnondiv);
    add("partlink", partlink);
    for (int n = 1; n <= 8; ++n) add("ladder" + std::to_string(n), [n] { return ladder(n); });
    for (int m = 1; m <= 6; ++m) add("sinestrip" + std::to_string(m), [m] { return sinestrip(m); });
    for (int w = 2; w <= 4; ++w)
        add("skew" + std::to_string(w) + "_w" + std::to_string(kSkewWindow),
            [w] { return materialize_window(skew(w), 0, kSkewWindow - 1); });
    return out;
}

inline std::vector<NamedPeriodic> periodic_catalog() {
    return {{"skew2", [] { return skew(2); }},
            {"skew3", [] { return skew(3); }},
            {"skew4", [] { return skew(4); }},
            {"trivial_periodic", trivial_periodic},
            {"ladder_periodic", ladder_periodic},
            {"scalloped", scalloped}};
}

inline FinitePattern finite_by_name(std::string_view name) {
    for (const auto& f : catalog())
        if (f.name == name) return f.make();
    throw UnknownId("unknown fixture " + std::string(name));
}

inline PeriodicPattern periodic_by_name(std::string_view name) {
    for (const auto& f : periodic_catalog())
        if (f.name == name) return f.make();
    throw UnknownId("unknown periodic fixture " + std::string(name));
}

} // namespace bifol::gen
