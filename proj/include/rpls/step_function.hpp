#pragma once

#include "rpls/scalar.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace rpls {

/// Piecewise-constant function on [lo, hi], kept in canonical form:
/// strictly increasing breakpoints x_0 = lo < ... < x_m = hi and one value
/// per open piece (x_{t-1}, x_t). Values at the breakpoints themselves are
/// not represented; all operations and equality are Lebesgue-a.e.
template <class S>
class StepFunction {
public:
    struct Piece {
        S left, right, value;
    };

    StepFunction() = default;

    static StepFunction constant(const S& lo, const S& hi, const S& value) {
        return from_pieces(lo, hi, {{lo, hi, value}});
    }

    static StepFunction zero(const S& lo, const S& hi) { return constant(lo, hi, S(0)); }

    /// 1 on [a, b) within [lo, hi], 0 elsewhere. Degenerate a == b gives 0.
    static StepFunction indicator(const S& lo, const S& hi, const S& a, const S& b) {
        return from_pieces(lo, hi, {{a, b, S(1)}});
    }

    /// Builds the sum of the given (possibly overlapping) weighted pieces,
    /// clipped to [lo, hi].
    static StepFunction from_pieces(const S& lo, const S& hi, std::vector<Piece> pieces) {
        if (!(lo < hi)) throw std::invalid_argument("StepFunction: empty domain");
        // endpoint sweep: value change +v at left, -v at right
        std::vector<std::pair<S, S>> events;
        events.reserve(2 * pieces.size());
        for (auto& p : pieces) {
            S a = std::max(p.left, lo), b = std::min(p.right, hi);
            if (!(a < b) || sign(p.value) == 0) continue;
            events.emplace_back(std::move(a), p.value);
            events.emplace_back(std::move(b), S(-p.value));
        }
        std::sort(events.begin(), events.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

        StepFunction f;
        f.breaks_.push_back(lo);
        S running(0);
        size_t i = 0;
        while (i < events.size()) {
            const S& x = events[i].first;
            S delta(0);
            size_t j = i;
            while (j < events.size() && scalars_equal(events[j].first, x)) {
                delta += events[j].second;
                ++j;
            }
            if (sign(delta) != 0) {
                if (!scalars_equal(x, f.breaks_.back()) && x > f.breaks_.back()) {
                    f.values_.push_back(running);
                    f.breaks_.push_back(x);
                }
                running += delta;
            }
            i = j;
        }
        if (!scalars_equal(f.breaks_.back(), hi)) {
            f.values_.push_back(running);
            f.breaks_.push_back(hi);
        } else if (f.breaks_.size() == 1) {  // no events at all
            f.values_.push_back(S(0));
            f.breaks_.push_back(hi);
        }
        f.merge_equal_neighbors();
        return f;
    }

    const S& domain_lo() const { return breaks_.front(); }
    const S& domain_hi() const { return breaks_.back(); }
    size_t piece_count() const { return values_.size(); }
    const std::vector<S>& breakpoints() const { return breaks_; }
    const std::vector<S>& values() const { return values_; }
    Piece piece(size_t t) const { return {breaks_[t], breaks_[t + 1], values_[t]}; }

    /// Value of the piece containing x; at a breakpoint the right piece is
    /// used (values on the null set of breakpoints are unspecified anyway).
    const S& value_at(const S& x) const {
        if (x < domain_lo() || x > domain_hi()) throw std::domain_error("value_at: outside domain");
        size_t idx = std::upper_bound(breaks_.begin(), breaks_.end(), x) - breaks_.begin();
        if (idx == 0) idx = 1;
        if (idx > values_.size()) idx = values_.size();
        return values_[idx - 1];
    }

    S integral() const {
        S total(0);
        for (size_t t = 0; t < values_.size(); ++t) total += values_[t] * (breaks_[t + 1] - breaks_[t]);
        return total;
    }

    S integral(const S& a, const S& b) const {
        if (a > b) throw std::invalid_argument("integral: reversed bounds");
        S total(0);
        for (size_t t = 0; t < values_.size(); ++t) {
            S l = std::max(breaks_[t], a), r = std::min(breaks_[t + 1], b);
            if (l < r) total += values_[t] * (r - l);
        }
        return total;
    }

    StepFunction scaled(const S& c) const {
        std::vector<Piece> ps;
        ps.reserve(values_.size());
        for (size_t t = 0; t < values_.size(); ++t) ps.push_back({breaks_[t], breaks_[t + 1], values_[t] * c});
        return from_pieces(domain_lo(), domain_hi(), std::move(ps));
    }

    friend StepFunction operator+(const StepFunction& f, const StepFunction& g) {
        f.require_same_domain(g);
        std::vector<Piece> ps;
        ps.reserve(f.piece_count() + g.piece_count());
        for (size_t t = 0; t < f.piece_count(); ++t) ps.push_back(f.piece(t));
        for (size_t t = 0; t < g.piece_count(); ++t) ps.push_back(g.piece(t));
        return from_pieces(f.domain_lo(), f.domain_hi(), std::move(ps));
    }
    friend StepFunction operator-(const StepFunction& f, const StepFunction& g) { return f + g.scaled(S(-1)); }
    StepFunction& operator+=(const StepFunction& g) { return *this = *this + g; }

    friend bool operator==(const StepFunction& f, const StepFunction& g) {
        if (f.values_.size() != g.values_.size()) return false;
        for (size_t t = 0; t < f.breaks_.size(); ++t)
            if (!scalars_equal(f.breaks_[t], g.breaks_[t])) return false;
        for (size_t t = 0; t < f.values_.size(); ++t)
            if (!scalars_equal(f.values_[t], g.values_[t])) return false;
        return true;
    }
    friend bool operator!=(const StepFunction& f, const StepFunction& g) { return !(f == g); }

    friend S l1_distance(const StepFunction& f, const StepFunction& g) {
        f.require_same_domain(g);
        S total(0);
        visit_merged(f, g, [&](const S& l, const S& r, const S& vf, const S& vg) {
            total += abs_value(S(vf - vg)) * (r - l);
        });
        return total;
    }

    friend S sup_distance(const StepFunction& f, const StepFunction& g) {
        f.require_same_domain(g);
        S best(0);
        visit_merged(f, g, [&](const S&, const S&, const S& vf, const S& vg) {
            S d = abs_value(S(vf - vg));
            if (d > best) best = d;
        });
        return best;
    }

    bool nonnegative() const {
        for (const S& v : values_)
            if (sign(v) < 0) return false;
        return true;
    }
    bool nonpositive() const {
        for (const S& v : values_)
            if (sign(v) > 0) return false;
        return true;
    }
    bool is_zero() const {
        return values_.size() == 1 && sign(values_[0]) == 0;
    }

    /// Pieces with strictly positive (resp. negative) value; zero pieces
    /// belong to neither part.
    StepFunction positive_part() const { return signed_part(1); }
    StepFunction negative_part() const { return signed_part(-1); }  // returned non-negative

private:
    template <class Fn>
    static void visit_merged(const StepFunction& f, const StepFunction& g, Fn&& fn) {
        size_t i = 0, j = 0;
        S left = f.domain_lo();
        while (i < f.piece_count() && j < g.piece_count()) {
            const S& fr = f.breaks_[i + 1];
            const S& gr = g.breaks_[j + 1];
            S right = std::min(fr, gr);
            if (left < right) fn(left, right, f.values_[i], g.values_[j]);
            if (fr <= right) ++i;
            if (gr <= right) ++j;
            left = std::move(right);
        }
    }

    StepFunction signed_part(int sgn) const {
        std::vector<Piece> ps;
        for (size_t t = 0; t < values_.size(); ++t)
            if (sign(values_[t]) == sgn) ps.push_back({breaks_[t], breaks_[t + 1], sgn > 0 ? values_[t] : S(-values_[t])});
        return from_pieces(domain_lo(), domain_hi(), std::move(ps));
    }

    void require_same_domain(const StepFunction& g) const {
        if (!scalars_equal(domain_lo(), g.domain_lo()) || !scalars_equal(domain_hi(), g.domain_hi()))
            throw std::invalid_argument("StepFunction: domain mismatch");
    }

    void merge_equal_neighbors() {
        size_t out = 0;
        for (size_t t = 1; t < values_.size(); ++t) {
            if (scalars_equal(values_[out], values_[t])) {
                breaks_[out + 1] = breaks_[t + 1];
            } else {
                ++out;
                values_[out] = values_[t];
                breaks_[out + 1] = breaks_[t + 1];
            }
        }
        values_.resize(out + 1);
        breaks_.resize(out + 2);
    }

    std::vector<S> breaks_;
    std::vector<S> values_;
};

}  // namespace rpls
