#include "pasym/outer.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

namespace pasym::outer {

template class OuterTable<double>;
template class OuterTable<Rational>;

template <class Scalar>
void OuterTable<Scalar>::write_text(std::ostream& out, int max_m) const {
    char alpha[64];
    for (const auto& [index, series] : table_) {
        const auto [m, n] = index;
        if (m > max_m) {
            continue;
        }
        for (const auto& [key, value] : series.terms()) {
            std::snprintf(alpha, sizeof alpha, "%.16e", to_double(value));
            out << to_string(side()) << ' ' << m << ' ' << n << ' ' << key.s << ' ' << key.k << ' '
                << alpha << '\n';
        }
    }
}

OuterData<double> outer_data(const ProblemInstance& problem, Side side, int max_order) {
    const auto& flux = problem.flux();
    const auto& init = problem.init();
    OuterData<double> data;
    data.side = side;
    data.base = init.far_state(side);
    data.speed = flux.derivative(1, data.base);
    const int q_top = std::min(max_order, flux.max_order());
    double factorial = 1.0;
    for (int q = 0; q <= q_top; ++q) {
        if (q > 0) {
            factorial *= static_cast<double>(q);
        }
        data.taylor.push_back(flux.derivative(q, data.base) / factorial);
    }
    const int m_top = std::min(max_order, init.tail_order() - 1);
    for (int m = 0; m <= m_top; ++m) {
        data.tail.push_back(init.tail_coeff(side, m));
    }
    return data;
}

OuterData<Rational> burgers_rational_data(Side side, const Rational& nu0,
                                          std::vector<Rational> tail_from_1) {
    OuterData<Rational> data;
    data.side = side;
    data.base = nu0;
    data.speed = nu0;
    data.taylor = {nu0 * nu0 / 2, nu0, Rational(1, 2)};
    // Burgers: phi^(q) = 0 for q >= 3, padded so any order is "available".
    data.taylor.resize(OuterTable<Rational>::kDefaultMaxOrder + 2, Rational(0));
    data.tail.push_back(nu0);
    for (auto& v : tail_from_1) {
        data.tail.push_back(std::move(v));
    }
    return data;
}

bool in_outer_domain(Side side, double x, double t, double shock_speed, double epsilon,
                     double delta0, double margin) {
    const double width = std::max(std::pow(epsilon, 1.0 - delta0), margin);
    const double offset = x - shock_speed * t;
    return side == Side::plus ? offset > width : offset < -width;
}

std::vector<ReportLine> read_text(std::istream& in) {
    std::vector<ReportLine> lines;
    std::string side;
    ReportLine line{};
    while (in >> side >> line.m >> line.n >> line.s >> line.k >> line.alpha) {
        line.side = parse_side(side);
        lines.push_back(line);
    }
    if (!in.eof()) {
        throw IoError("outer report: malformed line after " + std::to_string(lines.size()) +
                      " entries");
    }
    return lines;
}

}  // namespace pasym::outer
