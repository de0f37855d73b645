#pragma once

#include <random>
#include <vector>

#include "annulus/measure.hpp"

namespace testgen {

/// Random p[r, mu1, mu2] with a few atoms per measure and optional uniform
/// parts, normalized to total mass one.
inline annulus::ParametricPSpec random_pspec(std::mt19937_64& rng, double r) {
    using annulus::Atom;
    using annulus::CircleMeasure;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, 4);
    auto draw = [&](std::vector<Atom>& atoms, double& uniform) {
        const int n = count(rng);
        for (int i = 0; i < n; ++i) atoms.push_back({2.0 * M_PI * unit(rng), unit(rng)});
        uniform = unit(rng) < 0.3 ? unit(rng) : 0.0;
    };
    std::vector<Atom> a1, a2;
    double u1 = 0.0, u2 = 0.0;
    draw(a1, u1);
    draw(a2, u2);
    double total = u1 + u2;
    for (auto& a : a1) total += a.mass;
    for (auto& a : a2) total += a.mass;
    if (total == 0.0) {
        a1.push_back({0.0, 1.0});
        total = 1.0;
    }
    for (auto& a : a1) a.mass /= total;
    for (auto& a : a2) a.mass /= total;
    return annulus::ParametricPSpec(annulus::AnnulusParam(r), CircleMeasure(a1, u1 / total),
                                    CircleMeasure(a2, u2 / total));
}

}  // namespace testgen
