#include "annulus/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace annulus {

Driver::Driver() : f_([](double) { return 0.0; }), label_("constant") {}

Driver Driver::constant(double value) {
    return custom([value](double) { return value; }, {}, "constant");
}

Driver Driver::linear(double value0, double slope) {
    return custom([value0, slope](double t) { return value0 + slope * t; }, {}, "linear");
}

Driver Driver::cosine(double offset, double amplitude, double frequency, double phase) {
    return custom([=](double t) { return offset + amplitude * std::cos(frequency * t + phase); }, {}, "cosine");
}

Driver Driver::piecewise_constant(std::vector<double> times, std::vector<double> values) {
    if (values.size() != times.size() + 1)
        throw std::invalid_argument("piecewise_constant: need exactly one more value than jump times");
    if (!std::is_sorted(times.begin(), times.end()) ||
        std::adjacent_find(times.begin(), times.end()) != times.end())
        throw std::invalid_argument("piecewise_constant: jump times must be strictly increasing");
    auto f = [times, values](double t) {
        const auto it = std::upper_bound(times.begin(), times.end(), t);
        return values[static_cast<std::size_t>(it - times.begin())];
    };
    return custom(f, times, "piecewise_constant");
}

Driver Driver::custom(std::function<double(double)> f, std::vector<double> jumps, std::string label) {
    Driver d;
    d.f_ = std::move(f);
    std::sort(jumps.begin(), jumps.end());
    jumps.erase(std::unique(jumps.begin(), jumps.end()), jumps.end());
    d.jumps_ = std::move(jumps);
    d.label_ = std::move(label);
    return d;
}

Driver Driver::scaled(double factor) const {
    auto f = f_;
    return custom([f, factor](double t) { return factor * f(t); }, jumps_, label_);
}

Driver Driver::shifted(double offset) const {
    auto f = f_;
    return custom([f, offset](double t) { return f(t) + offset; }, jumps_, label_);
}

std::vector<double> merge_jumps(std::initializer_list<const std::vector<double>*> lists) {
    std::vector<double> out;
    for (const auto* l : lists) out.insert(out.end(), l->begin(), l->end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace annulus
