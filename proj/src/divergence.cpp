#include "whc/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace whc {

namespace {

// Joint breakpoint grid covering the continuous parts of both laws,
// clamped to the union of their finite integration windows.
std::vector<double> joint_breakpoints(const DistributionPair& pair) {
    const auto& pc = pair.p().continuous();
    const auto& qc = pair.q().continuous();
    if (!pc && !qc) return {};
    double lo = HUGE_VAL, hi = -HUGE_VAL;
    if (pc) {
        lo = std::min(lo, pc->window_lo);
        hi = std::max(hi, pc->window_hi);
    }
    if (qc) {
        lo = std::min(lo, qc->window_lo);
        hi = std::max(hi, qc->window_hi);
    }
    std::vector<double> brk{lo, hi};
    auto add = [&](const std::vector<double>& src) {
        for (double b : src) {
            if (b > lo && b < hi) brk.push_back(b);
        }
    };
    if (pc) add(pc->breakpoints);
    if (qc) add(qc->breakpoints);
    add(pair.dominating_atoms());
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());
    return brk;
}

}  // namespace

DivergenceReport divergences(const DistributionPair& pair, const QuadratureOptions& opts) {
    DivergenceReport r;
    const bool dominated = pair.q_dominated_by_p();
    double tv = 0.0, kl = 0.0, chi2 = 0.0, hell = 0.0, bc = 0.0;

    for (double a : pair.dominating_atoms()) {
        const double pm = pair.p().atom_mass_at(a);
        const double qm = pair.q().atom_mass_at(a);
        tv += 0.5 * std::abs(pm - qm);
        hell += 0.5 * (std::sqrt(qm) - std::sqrt(pm)) * (std::sqrt(qm) - std::sqrt(pm));
        bc += std::sqrt(pm * qm);
        if (dominated) {
            if (qm > 0.0) kl += qm * std::log(qm / pm);
            if (pm > 0.0) chi2 += (qm - pm) * (qm - pm) / pm;
        }
    }

    const std::vector<double> brk = joint_breakpoints(pair);
    if (!brk.empty()) {
        const Distribution& P = pair.p();
        const Distribution& Q = pair.q();
        tv += integrate_pieces(
            [&](double x) { return 0.5 * std::abs(P.density_at(x) - Q.density_at(x)); },
            brk, opts);
        hell += integrate_pieces(
            [&](double x) {
                const double s = std::sqrt(Q.density_at(x)) - std::sqrt(P.density_at(x));
                return 0.5 * s * s;
            },
            brk, opts);
        bc += integrate_pieces(
            [&](double x) { return std::sqrt(P.density_at(x) * Q.density_at(x)); }, brk,
            opts);
        if (dominated) {
            kl += integrate_pieces(
                [&](double x) {
                    const double q = Q.density_at(x);
                    if (q <= 0.0) return 0.0;
                    return q * std::log(q / P.density_at(x));
                },
                brk, opts);
            chi2 += integrate_pieces(
                [&](double x) {
                    const double p = P.density_at(x);
                    if (p <= 0.0) return 0.0;
                    const double d = Q.density_at(x) - p;
                    return d * d / p;
                },
                brk, opts);
        }
    }

    r.tv = tv;
    r.hellinger_sq = hell;
    r.bhattacharyya = bc;
    r.kl = dominated ? kl : HUGE_VAL;
    r.chi2 = dominated ? chi2 : HUGE_VAL;
    r.rho = r.chi2 + 1.0;
    return r;
}

namespace {

constexpr int kScanPoints = 4096;

// Locate the boundary of {predicate} in (lo, hi] by bisection, assuming the
// predicate value differs between lo and hi.
double bisect_boundary(const std::function<bool(double)>& pred, double lo, double hi) {
    const bool at_lo = pred(lo);
    while (hi - lo > 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)})) {
        const double mid = 0.5 * (lo + hi);
        if (pred(mid) == at_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return hi;
}

// Maximal intervals of {x in (window) : predicate(x)} scanned on the joint
// grid and refined at the flips.
std::vector<SetDescriptor::Interval> predicate_intervals(
    const DistributionPair& pair, const std::function<bool(double)>& pred,
    int interval_budget) {
    const std::vector<double> brk = joint_breakpoints(pair);
    if (brk.empty()) return {};
    std::vector<double> grid;
    const double lo = brk.front(), hi = brk.back();
    grid.reserve(static_cast<std::size_t>(kScanPoints) + brk.size());
    for (int i = 0; i <= kScanPoints; ++i) {
        grid.push_back(lo + (hi - lo) * i / kScanPoints);
    }
    grid.insert(grid.end(), brk.begin(), brk.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    std::vector<SetDescriptor::Interval> out;
    bool inside = pred(grid.front());
    double start = grid.front();
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool now = pred(grid[i]);
        if (now == inside) continue;
        const double boundary = bisect_boundary(pred, grid[i - 1], grid[i]);
        if (inside) {
            out.push_back({start, boundary, true, false});
            if (static_cast<int>(out.size()) > interval_budget) {
                throw std::runtime_error(
                    "density comparison produced more sign changes than the interval budget");
            }
        } else {
            start = boundary;
        }
        inside = now;
    }
    if (inside) out.push_back({start, grid.back(), true, false});
    if (static_cast<int>(out.size()) > interval_budget) {
        throw std::runtime_error(
            "density comparison produced more sign changes than the interval budget");
    }
    return out;
}

// Points in `exclude` that fall strictly inside an interval split it into
// two open-ended halves, so the set keeps zero mass at those points.
std::vector<SetDescriptor::Interval> split_at(
    std::vector<SetDescriptor::Interval> ivs, const std::vector<double>& exclude) {
    std::vector<SetDescriptor::Interval> out;
    for (const auto& iv : ivs) {
        std::vector<double> cuts;
        for (double a : exclude) {
            if (a > iv.lo && a < iv.hi) cuts.push_back(a);
        }
        std::sort(cuts.begin(), cuts.end());
        if (cuts.empty()) {
            out.push_back(iv);
            continue;
        }
        double lo = iv.lo;
        bool lo_closed = iv.lo_closed;
        for (double c : cuts) {
            out.push_back({lo, c, lo_closed, false});
            lo = c;
            lo_closed = false;
        }
        out.push_back({lo, iv.hi, lo_closed, iv.hi_closed});
    }
    return out;
}

double continuous_mass(const Distribution& d,
                       const std::vector<SetDescriptor::Interval>& ivs) {
    if (!d.continuous()) return 0.0;
    double m = 0.0;
    for (const auto& iv : ivs) {
        m += d.continuous()->cdf(iv.hi) - d.continuous()->cdf(iv.lo);
    }
    return m;
}

}  // namespace

DensitySetResult tv_via_density_set(const DistributionPair& pair, int interval_budget) {
    DensitySetResult res;
    std::vector<double> excluded_atoms;
    for (double a : pair.dominating_atoms()) {
        if (pair.p().atom_mass_at(a) > pair.q().atom_mass_at(a)) {
            res.set.atoms.push_back(a);
        } else {
            excluded_atoms.push_back(a);
        }
    }
    auto pred = [&pair](double x) {
        return pair.p().density_at(x) > pair.q().density_at(x);
    };
    res.set.intervals = split_at(predicate_intervals(pair, pred, interval_budget),
                                 excluded_atoms);
    res.p_mass = set_probability(pair.p(), res.set);
    res.q_mass = set_probability(pair.q(), res.set);
    res.value = res.p_mass - res.q_mass;
    return res;
}

SetDescriptor null_witness_set(const DistributionPair& pair) {
    if (pair.q_dominated_by_p()) {
        throw std::invalid_argument(
            "null_witness_set: Q is absolutely continuous with respect to P; "
            "no P-null set with positive Q-mass exists");
    }
    SetDescriptor set;
    std::vector<double> p_atoms;
    for (const Atom& a : pair.p().atoms()) p_atoms.push_back(a.location);
    for (const Atom& a : pair.q().atoms()) {
        if (pair.p().atom_mass_at(a.location) == 0.0) set.atoms.push_back(a.location);
    }
    auto pred = [&pair](double x) {
        return pair.q().density_at(x) > 0.0 && pair.p().density_at(x) == 0.0;
    };
    set.intervals = split_at(predicate_intervals(pair, pred, 1 << 12), p_atoms);
    if (set.empty()) {
        throw std::runtime_error(
            "null_witness_set: failed to locate a P-null set with positive Q-mass");
    }
    return set;
}

double set_probability(const Distribution& d, const SetDescriptor& set) {
    double m = 0.0;
    for (const Atom& a : d.atoms()) {
        if (set.contains(a.location)) m += a.mass;
    }
    m += continuous_mass(d, set.intervals);
    return m;
}

}  // namespace whc
