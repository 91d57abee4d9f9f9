#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace pasym {

struct Axis {
    std::string name;
    std::vector<double> nodes;  // strictly increasing
};

/**
 * Scalar field sampled on a rectangular space x time grid.
 *
 * values are stored row-major by time: value(it, ix) = values[it * space.size() + ix].
 * Immutable after construction.
 */
class GridField {
public:
    GridField(Axis space, Axis time, std::vector<double> values, std::string label);

    const Axis& space() const { return space_; }
    const Axis& time() const { return time_; }
    const std::string& label() const { return label_; }
    std::size_t space_size() const { return space_.nodes.size(); }
    std::size_t time_size() const { return time_.nodes.size(); }

    double value(std::size_t it, std::size_t ix) const { return values_[it * space_size() + ix]; }
    std::span<const double> row(std::size_t it) const;
    std::span<const double> values() const { return values_; }

    // Index of the time level equal to t within relative tolerance 1e-12; CoverageError otherwise.
    std::size_t time_index(double t) const;

    // Bilinear interpolation; CoverageError outside the grid.
    double interpolate(double x, double t) const;

    bool same_axes(const GridField& other) const;

    // Header "<space>,<time>,value,label", one sample per line, rows ordered by time then space.
    void write_csv(std::ostream& out) const;
    static GridField read_csv(std::istream& in);

    void save_csv(const std::string& path) const;

private:
    Axis space_;
    Axis time_;
    std::vector<double> values_;
    std::string label_;
};

// Formats a double with 17 significant digits.
std::string format_real(double value);

}  // namespace pasym
