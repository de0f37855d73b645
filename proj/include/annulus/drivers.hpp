#pragma once

#include <functional>
#include <string>
#include <vector>

namespace annulus {

/// Real-valued, piecewise-continuous function of time with declared jump
/// times. Values at a jump are taken from the right.
class Driver {
public:
    Driver();

    static Driver constant(double value);
    static Driver linear(double value0, double slope);
    /// offset + amplitude * cos(frequency * t + phase)
    static Driver cosine(double offset, double amplitude, double frequency, double phase);
    /// values[0] on [0, times[0]), values[k] on [times[k-1], times[k]), ...
    static Driver piecewise_constant(std::vector<double> times, std::vector<double> values);
    static Driver custom(std::function<double(double)> f, std::vector<double> jumps = {},
                         std::string label = "custom");

    double operator()(double t) const { return f_(t); }
    const std::vector<double>& jumps() const { return jumps_; }
    const std::string& label() const { return label_; }

    Driver scaled(double factor) const;
    Driver shifted(double offset) const;

private:
    std::function<double(double)> f_;
    std::vector<double> jumps_;
    std::string label_;
};

/// Sorted union of jump lists, duplicates removed.
std::vector<double> merge_jumps(std::initializer_list<const std::vector<double>*> lists);

}  // namespace annulus
