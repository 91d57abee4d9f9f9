#include "pasym/grid_field.hpp"

#include "pasym/errors.hpp"
#include "pasym/numerics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace pasym {

namespace {

void check_axis(const Axis& axis, std::size_t min_size) {
    if (axis.nodes.size() < min_size) {
        throw UsageError("GridField: axis '" + axis.name + "' needs at least " +
                         std::to_string(min_size) + " nodes");
    }
    for (std::size_t i = 1; i < axis.nodes.size(); ++i) {
        if (!(axis.nodes[i] > axis.nodes[i - 1])) {
            throw UsageError("GridField: axis '" + axis.name + "' is not strictly increasing");
        }
    }
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(cell);
    }
    return out;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

GridField::GridField(Axis space, Axis time, std::vector<double> values, std::string label)
    : space_(std::move(space)), time_(std::move(time)), values_(std::move(values)), label_(std::move(label)) {
    check_axis(space_, 3);
    check_axis(time_, 1);
    if (values_.size() != space_.nodes.size() * time_.nodes.size()) {
        throw UsageError("GridField: value count does not match the axes");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw InstabilityError("GridField '" + label_ + "': non-finite sample");
        }
    }
}

std::span<const double> GridField::row(std::size_t it) const {
    return std::span<const double>(values_).subspan(it * space_size(), space_size());
}

std::size_t GridField::time_index(double t) const {
    const auto& nodes = time_.nodes;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (std::abs(nodes[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            return i;
        }
    }
    std::ostringstream msg;
    msg << "GridField '" << label_ << "': no " << time_.name << " level at " << t;
    throw CoverageError(msg.str());
}

double GridField::interpolate(double x, double t) const {
    const auto& xs = space_.nodes;
    const auto& ts = time_.nodes;
    if (x < xs.front() || x > xs.back() || t < ts.front() || t > ts.back()) {
        std::ostringstream msg;
        msg << "GridField '" << label_ << "': (" << x << ", " << t << ") outside ["
            << xs.front() << ", " << xs.back() << "] x [" << ts.front() << ", " << ts.back() << "]";
        throw CoverageError(msg.str());
    }
    if (ts.size() == 1) {
        return numerics::interp_linear(xs, row(0), x);
    }
    const std::size_t it = numerics::bracket(ts, t);
    const double w = (t - ts[it]) / (ts[it + 1] - ts[it]);
    const double lo = numerics::interp_linear(xs, row(it), x);
    const double hi = numerics::interp_linear(xs, row(it + 1), x);
    return (1.0 - w) * lo + w * hi;
}

bool GridField::same_axes(const GridField& other) const {
    return space_.nodes == other.space_.nodes && time_.nodes == other.time_.nodes;
}

void GridField::write_csv(std::ostream& out) const {
    out << space_.name << ',' << time_.name << ",value,label\n";
    for (std::size_t it = 0; it < time_size(); ++it) {
        const std::string t = format_real(time_.nodes[it]);
        for (std::size_t ix = 0; ix < space_size(); ++ix) {
            out << format_real(space_.nodes[ix]) << ',' << t << ',' << format_real(value(it, ix)) << ','
                << label_ << '\n';
        }
    }
}

GridField GridField::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("GridField CSV: missing header");
    }
    const auto header = split_csv(line);
    if (header.size() != 4 || header[2] != "value" || header[3] != "label") {
        throw IoError("GridField CSV: header must be '<space>,<time>,value,label'");
    }
    Axis space{header[0], {}};
    Axis time{header[1], {}};
    std::vector<double> values;
    std::string label;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 4) {
            throw IoError("GridField CSV: malformed line '" + line + "'");
        }
        const double x = std::stod(cells[0]);
        const double t = std::stod(cells[1]);
        if (time.nodes.empty() || time.nodes.back() != t) {
            time.nodes.push_back(t);
        }
        if (time.nodes.size() == 1) {
            space.nodes.push_back(x);
        }
        values.push_back(std::stod(cells[2]));
        label = cells[3];
    }
    return GridField(std::move(space), std::move(time), std::move(values), std::move(label));
}

void GridField::save_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_csv(out);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

}  // namespace pasym
