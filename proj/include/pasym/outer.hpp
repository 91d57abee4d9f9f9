#pragma once

#include "pasym/errors.hpp"
#include "pasym/model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstdlib>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace pasym::outer {

using Rational = boost::multiprecision::cpp_rational;

template <class Scalar>
double to_double(const Scalar& value) {
    if constexpr (std::is_same_v<Scalar, double>) {
        return value;
    } else {
        return value.template convert_to<double>();
    }
}

// Exponents of one term alpha * t^s * (x - c t)^(-k).
struct TermKey {
    int s = 0;
    int k = 1;
    auto operator<=>(const TermKey&) const = default;
};

/**
 * Finite sum of terms alpha * t^s / (x - c t)^k sharing one characteristic speed c.
 *
 * Stored canonically: one coefficient per (s, k), zero coefficients dropped, keys
 * ordered by (s, k). Two series are equal iff their maps are equal.
 */
template <class Scalar>
class CharacteristicSeries {
public:
    using TermMap = std::map<TermKey, Scalar>;

    CharacteristicSeries() = default;
    explicit CharacteristicSeries(Side side) : side_(side) {}

    Side side() const { return side_; }
    const TermMap& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    void add(int s, int k, const Scalar& alpha) {
        if (s < 0 || k < 1) {
            throw UsageError("CharacteristicSeries: need s >= 0 and k >= 1");
        }
        if constexpr (std::is_same_v<Scalar, double>) {
            if (!std::isfinite(alpha)) {
                throw DomainError("CharacteristicSeries: non-finite coefficient");
            }
        }
        if (alpha == Scalar(0)) {
            return;
        }
        auto [it, inserted] = terms_.try_emplace(TermKey{s, k}, alpha);
        if (!inserted) {
            it->second += alpha;
            if (it->second == Scalar(0)) {
                terms_.erase(it);
            }
        }
    }

    Scalar coeff(int s, int k) const {
        auto it = terms_.find(TermKey{s, k});
        return it == terms_.end() ? Scalar(0) : it->second;
    }

    CharacteristicSeries& operator+=(const CharacteristicSeries& other) {
        require_same_side(other);
        for (const auto& [key, alpha] : other.terms_) {
            add(key.s, key.k, alpha);
        }
        return *this;
    }

    CharacteristicSeries& operator-=(const CharacteristicSeries& other) {
        require_same_side(other);
        for (const auto& [key, alpha] : other.terms_) {
            add(key.s, key.k, -alpha);
        }
        return *this;
    }

    CharacteristicSeries& operator*=(const Scalar& factor) {
        if (factor == Scalar(0)) {
            terms_.clear();
            return *this;
        }
        for (auto& [key, alpha] : terms_) {
            alpha *= factor;
        }
        return *this;
    }

    // sum alpha t^s (x - c t)^(-k)
    double evaluate(double x, double t, double speed) const {
        const double base = x - speed * t;
        double total = 0.0;
        for (const auto& [key, alpha] : terms_) {
            total += to_double(alpha) * std::pow(t, key.s) * std::pow(base, -key.k);
        }
        return total;
    }

    friend bool operator==(const CharacteristicSeries& a, const CharacteristicSeries& b) {
        return a.side_ == b.side_ && a.terms_ == b.terms_;
    }

    void require_same_side(const CharacteristicSeries& other) const {
        if (other.side_ != side_) {
            throw UsageError("CharacteristicSeries: operands live on different sides of the shock");
        }
    }

private:
    Side side_ = Side::plus;
    TermMap terms_;
};

using Series = CharacteristicSeries<double>;
using RationalSeries = CharacteristicSeries<Rational>;

// d^order/dx^order, order 1 or 2.
template <class Scalar>
CharacteristicSeries<Scalar> series_derivative_x(const CharacteristicSeries<Scalar>& series,
                                                 int order) {
    if (order != 1 && order != 2) {
        throw UsageError("series_derivative_x: order must be 1 or 2");
    }
    CharacteristicSeries<Scalar> out(series.side());
    for (const auto& [key, alpha] : series.terms()) {
        Scalar factor(-key.k);
        int k = key.k + 1;
        if (order == 2) {
            factor *= Scalar(-k);
            ++k;
        }
        out.add(key.s, k, alpha * factor);
    }
    return out;
}

template <class Scalar>
CharacteristicSeries<Scalar> series_product(const CharacteristicSeries<Scalar>& a,
                                            const CharacteristicSeries<Scalar>& b) {
    a.require_same_side(b);
    CharacteristicSeries<Scalar> out(a.side());
    for (const auto& [ka, va] : a.terms()) {
        for (const auto& [kb, vb] : b.terms()) {
            out.add(ka.s + kb.s, ka.k + kb.k, va * vb);
        }
    }
    return out;
}

// Product of q >= 1 factors, left to right.
template <class Scalar>
CharacteristicSeries<Scalar> series_product(std::span<const CharacteristicSeries<Scalar>> factors) {
    if (factors.empty()) {
        throw UsageError("series_product: no factors");
    }
    CharacteristicSeries<Scalar> out = factors.front();
    for (std::size_t i = 1; i < factors.size(); ++i) {
        out = series_product(out, factors[i]);
    }
    return out;
}

// (d/dt + c d/dx) applied term-wise; the pole factor is invariant along characteristics, so
// only the t^s factor is differentiated.
template <class Scalar>
CharacteristicSeries<Scalar> series_transport(const CharacteristicSeries<Scalar>& series) {
    CharacteristicSeries<Scalar> out(series.side());
    for (const auto& [key, alpha] : series.terms()) {
        if (key.s > 0) {
            out.add(key.s - 1, key.k, alpha * Scalar(key.s));
        }
    }
    return out;
}

// Checks k == m + s and n <= s <= m - 1 for every term.
template <class Scalar>
bool satisfies_term_structure(const CharacteristicSeries<Scalar>& series, int m, int n) {
    return std::all_of(series.terms().begin(), series.terms().end(), [&](const auto& entry) {
        const TermKey& key = entry.first;
        return key.k == m + key.s && key.s >= n && key.s <= m - 1;
    });
}

/**
 * Data the outer recurrence on one side needs: the far state nu0, the characteristic
 * speed phi'(nu0), the Taylor factors phi^(q)(nu0)/q! and the tail coefficients nu_m.
 */
template <class Scalar>
struct OuterData {
    Side side = Side::plus;
    Scalar base{};                 // nu0
    Scalar speed{};                // phi'(nu0)
    std::vector<Scalar> taylor;    // taylor[q] = phi^(q)(nu0)/q!
    std::vector<Scalar> tail;      // tail[m] = nu_m, tail[0] = nu0
};

// Initial-data contribution plus characteristic integration of the forcing:
// alpha t^s (x-ct)^-k  ->  alpha t^(s+1)/(s+1) (x-ct)^-k,  plus nu_m (x-ct)^-m when n == 0.
template <class Scalar>
CharacteristicSeries<Scalar> integrate_characteristic(const CharacteristicSeries<Scalar>& forcing,
                                                      int m, int n, const Scalar& initial_coeff) {
    CharacteristicSeries<Scalar> out(forcing.side());
    for (const auto& [key, alpha] : forcing.terms()) {
        out.add(key.s + 1, key.k, alpha / Scalar(key.s + 1));
    }
    if (n == 0) {
        out.add(0, m, initial_coeff);
    }
    if (!satisfies_term_structure(out, m, n)) {
        std::ostringstream msg;
        msg << "integrate_characteristic: u_{" << m << "," << n
            << "} leaves the t^s/(x-ct)^(m+s), n<=s<=m-1 family";
        throw InternalConsistencyError(msg.str());
    }
    return out;
}

/**
 * Memoized table of outer coefficients u_{m,n}, 1 <= m <= cap, 0 <= n <= m-1, on one side.
 *
 * Filling is single-writer; after populate(M) returns, concurrent const access is safe.
 */
template <class Scalar>
class OuterTable {
public:
    static constexpr int kDefaultMaxOrder = 12;

    explicit OuterTable(OuterData<Scalar> data, int max_order = kDefaultMaxOrder)
        : data_(std::move(data)), max_order_(max_order) {}

    const OuterData<Scalar>& data() const { return data_; }
    Side side() const { return data_.side; }
    int max_order() const { return max_order_; }

    bool contains(int m, int n) const { return table_.count({m, n}) != 0; }

    const CharacteristicSeries<Scalar>& at(int m, int n) const {
        auto it = table_.find({m, n});
        if (it == table_.end()) {
            std::ostringstream msg;
            msg << "outer table: u_{" << m << "," << n << "} has not been computed";
            throw SequencingError(msg.str());
        }
        return it->second;
    }

    // u_{m,n}, computing every dependency first.
    const CharacteristicSeries<Scalar>& coefficient(int m, int n) {
        check_index(m, n);
        if (auto it = table_.find({m, n}); it != table_.end()) {
            return it->second;
        }
        for (int i = 1; i < m; ++i) {
            for (int j = 0; j < i; ++j) {
                coefficient(i, j);
            }
        }
        auto forcing = forcing_term(m, n);
        auto value = integrate_characteristic(forcing, m, n, n == 0 ? tail(m) : Scalar(0));
        return table_.emplace(std::make_pair(m, n), std::move(value)).first->second;
    }

    void populate(int max_m) {
        for (int m = 1; m <= max_m; ++m) {
            for (int n = 0; n < m; ++n) {
                coefficient(m, n);
            }
        }
    }

    /**
     * F_{m,n} = d2/dx2 u_{m-1,n-1}
     *         - sum_{q=2}^{m-n} phi^(q)(nu0)/q! * d/dx sum_{ordered (i_p, j_p)} prod_p u_{i_p, j_p}
     * with sum i_p = m, sum j_p = n, i_p >= 1, 0 <= j_p <= i_p - 1. Requires every u_{i,j}
     * with i < m to be present.
     */
    CharacteristicSeries<Scalar> forcing_term(int m, int n) const {
        check_index(m, n);
        CharacteristicSeries<Scalar> result(side());
        if (n >= 1) {
            result += series_derivative_x(at(m - 1, n - 1), 2);
        }
        const int q_max = m - n;
        if (q_max < 2) {
            return result;
        }
        if (static_cast<int>(data_.taylor.size()) <= q_max) {
            std::ostringstream msg;
            msg << "forcing_term(" << m << "," << n << "): flux derivatives up to order " << q_max
                << " are required";
            throw IndexError(msg.str());
        }
        for (int i = 1; i < m; ++i) {
            for (int j = 0; j < i; ++j) {
                at(i, j);  // throws SequencingError when absent
            }
        }

        // power[(a, b)] holds the sum over ordered q-tuples with sum i = a, sum j = b.
        using Key = std::pair<int, int>;
        std::map<Key, CharacteristicSeries<Scalar>> power;
        for (int a = 1; a < m; ++a) {
            for (int b = 0; b < a && b <= n; ++b) {
                power.emplace(Key{a, b}, at(a, b));
            }
        }
        CharacteristicSeries<Scalar> nonlinear(side());
        for (int q = 2; q <= q_max; ++q) {
            std::map<Key, CharacteristicSeries<Scalar>> next;
            for (const auto& [key, partial] : power) {
                for (int i = 1; key.first + i <= m; ++i) {
                    for (int j = 0; j < i && key.second + j <= n; ++j) {
                        const Key target{key.first + i, key.second + j};
                        auto [it, inserted] =
                            next.try_emplace(target, CharacteristicSeries<Scalar>(side()));
                        it->second += series_product(partial, at(i, j));
                    }
                }
            }
            power = std::move(next);
            const Scalar& factor = data_.taylor[static_cast<std::size_t>(q)];
            if (factor != Scalar(0)) {
                if (auto it = power.find(Key{m, n}); it != power.end()) {
                    auto term = it->second;
                    term *= factor;
                    nonlinear += term;
                }
            }
        }
        result -= series_derivative_x(nonlinear, 1);
        return result;
    }

    // nu0 + sum_{m=1}^{M} sum_{n=0}^{m-1} rho^(m-n) eps^n u_{m,n}(x, t)
    double partial_sum(int max_m, double x, double t, double epsilon, double rho) const {
        if (t < 0.0) {
            throw DomainError("outer_partial_sum: t must be >= 0");
        }
        const double speed = to_double(data_.speed);
        const double distance = std::abs(x - speed * t);
        const double tolerance = 1e-6 * std::max({1.0, std::abs(x), std::abs(t)});
        if (max_m >= 1 && distance < tolerance) {
            std::ostringstream msg;
            msg << "outer_partial_sum: |x - c t| = " << distance << " below pole tolerance "
                << tolerance;
            throw PoleProximityError(msg.str());
        }
        double total = to_double(data_.base);
        for (int m = 1; m <= max_m; ++m) {
            for (int n = 0; n < m; ++n) {
                const double gauge = std::pow(rho, m - n) * std::pow(epsilon, n);
                total += gauge * at(m, n).evaluate(x, t, speed);
            }
        }
        return total;
    }

    // Lines "side m n s k alpha" for every stored entry with m <= max_m.
    void write_text(std::ostream& out, int max_m) const;

private:
    void check_index(int m, int n) const {
        if (m < 1 || n < 0 || n > m - 1) {
            std::ostringstream msg;
            msg << "outer coefficient index (" << m << "," << n << ") outside 1 <= m, 0 <= n <= m-1";
            throw IndexError(msg.str());
        }
        if (m > max_order_) {
            std::ostringstream msg;
            msg << "outer coefficient order " << m << " exceeds the table cap " << max_order_;
            throw IndexError(msg.str());
        }
    }

    Scalar tail(int m) const {
        if (m >= static_cast<int>(data_.tail.size())) {
            throw IndexError("outer table: tail coefficient nu_" + std::to_string(m) +
                             " not available");
        }
        return data_.tail[static_cast<std::size_t>(m)];
    }

    OuterData<Scalar> data_;
    int max_order_;
    std::map<std::pair<int, int>, CharacteristicSeries<Scalar>> table_;
};

// Public entry points mirroring the table methods.
template <class Scalar>
CharacteristicSeries<Scalar> forcing_term(const OuterTable<Scalar>& table, int m, int n) {
    return table.forcing_term(m, n);
}

template <class Scalar>
const CharacteristicSeries<Scalar>& outer_coefficient(OuterTable<Scalar>& table, int m, int n) {
    return table.coefficient(m, n);
}

template <class Scalar>
double outer_partial_sum(const OuterTable<Scalar>& table, int max_m, double x, double t,
                         double epsilon, double rho) {
    return table.partial_sum(max_m, x, t, epsilon, rho);
}

// Double-precision recurrence data for one side of a problem, Taylor factors and tail
// coefficients up to max_order (or as far as the flux/init provide them).
OuterData<double> outer_data(const ProblemInstance& problem, Side side,
                             int max_order = OuterTable<double>::kDefaultMaxOrder);

// Burgers recurrence data with exact rational states and tail coefficients.
OuterData<Rational> burgers_rational_data(Side side, const Rational& nu0,
                                          std::vector<Rational> tail_from_1);

// True when (x, t) lies in the outer region of `side`: beyond the shock line x = shock_speed*t
// by more than max(eps^(1-delta0), margin).
bool in_outer_domain(Side side, double x, double t, double shock_speed, double epsilon,
                     double delta0, double margin);

// One parsed line of the text report.
struct ReportLine {
    Side side;
    int m;
    int n;
    int s;
    int k;
    double alpha;
};

std::vector<ReportLine> read_text(std::istream& in);

extern template class OuterTable<double>;
extern template class OuterTable<Rational>;

}  // namespace pasym::outer
