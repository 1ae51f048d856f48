#pragma once

#include <sstream>
#include <string>
#include <vector>

namespace whc {

/// Finite description of a Borel subset of the line: a list of points plus
/// a list of disjoint intervals with explicit endpoint inclusion.
struct SetDescriptor {
    struct Interval {
        double lo = 0.0;
        double hi = 0.0;
        bool lo_closed = true;
        bool hi_closed = false;
    };

    std::vector<double> atoms;
    std::vector<Interval> intervals;

    bool empty() const { return atoms.empty() && intervals.empty(); }

    bool contains(double x) const {
        for (double a : atoms) {
            if (x == a) return true;
        }
        for (const Interval& iv : intervals) {
            const bool above = iv.lo_closed ? x >= iv.lo : x > iv.lo;
            const bool below = iv.hi_closed ? x <= iv.hi : x < iv.hi;
            if (above && below) return true;
        }
        return false;
    }

    std::string to_string() const {
        std::ostringstream os;
        os << "{";
        bool first = true;
        for (double a : atoms) {
            os << (first ? "" : ", ") << a;
            first = false;
        }
        for (const Interval& iv : intervals) {
            os << (first ? "" : ", ") << (iv.lo_closed ? '[' : '(') << iv.lo << ", "
               << iv.hi << (iv.hi_closed ? ']' : ')');
            first = false;
        }
        os << "}";
        return os.str();
    }
};

}  // namespace whc
