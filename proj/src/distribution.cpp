#include "whc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "whc/quadrature.hpp"

namespace whc {

namespace {

constexpr double kNormWindowSigmas = 13.0;  // mass beyond is < 1e-38

double normal_pdf(double x, double mu, double sigma) {
    const double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

double normal_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

}  // namespace

// Acklam's rational approximation for the standard normal quantile,
// followed by one Halley step against erfc to reach full double precision.
double normal_quantile(double u) {
    if (!(u > 0.0 && u < 1.0)) {
        if (u == 0.0) return -HUGE_VAL;
        if (u == 1.0) return HUGE_VAL;
        throw std::domain_error("normal_quantile: u outside [0,1]");
    }
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (u < plow) {
        const double q = std::sqrt(-2.0 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (u <= 1.0 - plow) {
        const double q = u - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley refinement on F(x) - u = 0.
    const double e = normal_cdf(x, 0.0, 1.0) - u;
    const double p = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    return x - p / (1.0 + 0.5 * x * p);
}

void Distribution::validate() const {
    double atom_sum = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (!(atoms_[i].mass > 0.0)) {
            throw std::invalid_argument("distribution '" + label_ +
                                        "': atom masses must be strictly positive");
        }
        if (i > 0 && !(atoms_[i - 1].location < atoms_[i].location)) {
            throw std::invalid_argument("distribution '" + label_ +
                                        "': atom locations must be distinct");
        }
        atom_sum += atoms_[i].mass;
    }
    double cont_mass = 0.0;
    if (cont_) {
        if (!(cont_->lo < cont_->hi)) {
            throw std::invalid_argument("distribution '" + label_ +
                                        "': continuous support requires lo < hi");
        }
        cont_mass = cont_->total_mass;
        // Cross-check the declared mass against quadrature over the window.
        const double integral =
            integrate_pieces([this](double x) { return cont_->density(x); },
                             cont_->breakpoints);
        if (std::abs(integral - cont_mass) > 1e-9) {
            throw std::invalid_argument("distribution '" + label_ +
                                        "': density does not integrate to the declared mass");
        }
    }
    if (std::abs(atom_sum + cont_mass - 1.0) > 1e-9) {
        throw std::invalid_argument("distribution '" + label_ +
                                    "': total mass must be 1");
    }
}

Distribution Distribution::mixed(std::vector<Atom> atoms,
                                 std::optional<ContinuousPart> cont,
                                 std::string label) {
    Distribution d;
    std::sort(atoms.begin(), atoms.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    d.atoms_ = std::move(atoms);
    d.cont_ = std::move(cont);
    d.label_ = std::move(label);
    double mean = 0.0;
    for (const Atom& a : d.atoms_) mean += a.location * a.mass;
    if (d.cont_) mean += d.cont_->mean_contrib;
    d.mean_ = mean;
    d.validate();
    return d;
}

Distribution Distribution::dirac(double x) {
    return mixed({Atom{x, 1.0}}, std::nullopt, "dirac(" + std::to_string(x) + ")");
}

Distribution Distribution::bernoulli(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("bernoulli parameter must lie in (0,1)");
    }
    return mixed({Atom{0.0, 1.0 - p}, Atom{1.0, p}}, std::nullopt,
                 "bernoulli(" + std::to_string(p) + ")");
}

Distribution Distribution::uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform requires a < b");
    ContinuousPart c;
    const double inv = 1.0 / (b - a);
    c.density = [a, b, inv](double x) { return (x >= a && x < b) ? inv : 0.0; };
    c.cdf = [a, b, inv](double x) {
        if (x <= a) return 0.0;
        if (x >= b) return 1.0;
        return (x - a) * inv;
    };
    c.quantile = [a, b](double u) { return a + u * (b - a); };
    c.lo = a;
    c.hi = b;
    c.total_mass = 1.0;
    c.mean_contrib = 0.5 * (a + b);
    c.breakpoints = {a, b};
    c.window_lo = a;
    c.window_hi = b;
    return mixed({}, std::move(c),
                 "uniform(" + std::to_string(a) + "," + std::to_string(b) + ")");
}

Distribution Distribution::gaussian(double mean, double stddev) {
    if (!(stddev > 0.0)) throw std::invalid_argument("gaussian requires stddev > 0");
    ContinuousPart c;
    c.density = [mean, stddev](double x) { return normal_pdf(x, mean, stddev); };
    c.cdf = [mean, stddev](double x) { return normal_cdf(x, mean, stddev); };
    c.quantile = [mean, stddev](double u) { return mean + stddev * normal_quantile(u); };
    c.lo = -HUGE_VAL;
    c.hi = HUGE_VAL;
    c.total_mass = 1.0;
    c.mean_contrib = mean;
    c.window_lo = mean - kNormWindowSigmas * stddev;
    c.window_hi = mean + kNormWindowSigmas * stddev;
    c.breakpoints = {c.window_lo, mean, c.window_hi};
    return mixed({}, std::move(c),
                 "gaussian(" + std::to_string(mean) + "," + std::to_string(stddev) + ")");
}

Distribution Distribution::piecewise_constant(std::vector<double> breaks,
                                              std::vector<double> values,
                                              std::string label) {
    if (breaks.size() < 2 || values.size() + 1 != breaks.size()) {
        throw std::invalid_argument("piecewise_constant: need n+1 breaks for n values");
    }
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (!(breaks[i - 1] < breaks[i])) {
            throw std::invalid_argument("piecewise_constant: breaks must be increasing");
        }
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw std::invalid_argument("piecewise_constant: density values must be finite and >= 0");
        }
    }
    const auto brk = std::make_shared<std::vector<double>>(std::move(breaks));
    const auto val = std::make_shared<std::vector<double>>(std::move(values));
    // cumulative mass at each breakpoint
    auto cum = std::make_shared<std::vector<double>>(brk->size(), 0.0);
    double mean_contrib = 0.0;
    for (std::size_t i = 0; i < val->size(); ++i) {
        const double lo = (*brk)[i], hi = (*brk)[i + 1];
        (*cum)[i + 1] = (*cum)[i] + (*val)[i] * (hi - lo);
        mean_contrib += (*val)[i] * 0.5 * (hi * hi - lo * lo);
    }
    ContinuousPart c;
    c.lo = brk->front();
    c.hi = brk->back();
    c.total_mass = cum->back();
    c.mean_contrib = mean_contrib;
    c.breakpoints = *brk;
    c.window_lo = c.lo;
    c.window_hi = c.hi;
    c.density = [brk, val](double x) {
        if (x < brk->front() || x >= brk->back()) return 0.0;
        const auto it = std::upper_bound(brk->begin(), brk->end(), x);
        return (*val)[static_cast<std::size_t>(it - brk->begin()) - 1];
    };
    c.cdf = [brk, val, cum](double x) {
        if (x <= brk->front()) return 0.0;
        if (x >= brk->back()) return cum->back();
        const auto it = std::upper_bound(brk->begin(), brk->end(), x);
        const std::size_t i = static_cast<std::size_t>(it - brk->begin()) - 1;
        return (*cum)[i] + (*val)[i] * (x - (*brk)[i]);
    };
    c.quantile = [brk, val, cum](double u) {
        const double target = u * cum->back();
        auto it = std::upper_bound(cum->begin(), cum->end(), target);
        std::size_t i = it == cum->begin()
                            ? 0
                            : static_cast<std::size_t>(it - cum->begin()) - 1;
        i = std::min(i, val->size() - 1);
        // skip zero-density pieces
        while (i + 1 < val->size() && (*val)[i] == 0.0) ++i;
        const double dv = (*val)[i];
        if (dv == 0.0) return (*brk)[i];
        return (*brk)[i] + (target - (*cum)[i]) / dv;
    };
    return mixed({}, std::move(c), std::move(label));
}

double Distribution::atom_mass_at(double x) const {
    for (const Atom& a : atoms_) {
        if (a.location == x) return a.mass;
    }
    return 0.0;
}

double Distribution::density_at(double x) const {
    return cont_ ? cont_->density(x) : 0.0;
}

double Distribution::cdf(double x) const {
    double m = 0.0;
    for (const Atom& a : atoms_) {
        if (a.location <= x) m += a.mass;
    }
    if (cont_) m += cont_->cdf(x);
    return m;
}

double Distribution::support_lo() const {
    double lo = HUGE_VAL;
    if (!atoms_.empty()) lo = atoms_.front().location;
    if (cont_) lo = std::min(lo, cont_->lo);
    return lo;
}

double Distribution::support_hi() const {
    double hi = -HUGE_VAL;
    if (!atoms_.empty()) hi = atoms_.back().location;
    if (cont_) hi = std::max(hi, cont_->hi);
    return hi;
}

bool Distribution::bounded_support() const {
    return std::isfinite(support_lo()) && std::isfinite(support_hi());
}

double Distribution::sample(Rng& rng) const {
    const double u = rng.uniform();
    double cum = 0.0;
    for (const Atom& a : atoms_) {
        cum += a.mass;
        if (u < cum) return a.location;
    }
    if (!cont_) return atoms_.back().location;  // guard against u ~ 1 rounding
    return cont_->quantile(rng.uniform());
}

Distribution build_prop3_density(const std::vector<long long>& kprime, int depth) {
    if (depth < 2) throw std::invalid_argument("build_prop3_density: depth must be >= 2");
    if (depth > 50) throw std::invalid_argument("build_prop3_density: depth must be <= 50");
    if (kprime.size() < static_cast<std::size_t>(depth)) {
        throw std::invalid_argument("build_prop3_density: need at least `depth` sequence entries");
    }
    if (kprime[0] < 1) throw std::invalid_argument("build_prop3_density: k'_1 must be >= 1");
    for (int m = 1; m < depth; ++m) {
        if (kprime[m] < kprime[m - 1]) {
            throw std::invalid_argument("build_prop3_density: sequence must be nondecreasing");
        }
    }
    // Pieces listed from the deepest dyadic interval upward.
    std::vector<double> breaks(static_cast<std::size_t>(depth) + 1);
    std::vector<double> values(static_cast<std::size_t>(depth));
    for (int m = depth; m >= 1; --m) {
        breaks[static_cast<std::size_t>(depth - m)] = std::ldexp(1.0, -m);
    }
    breaks.back() = 1.0;
    values[static_cast<std::size_t>(depth - 1)] =
        (1.0 - 1.0 / static_cast<double>(kprime[0])) + 0.5;
    for (int m = 2; m <= depth; ++m) {
        const double diff = 1.0 / static_cast<double>(kprime[m - 2]) -
                            1.0 / static_cast<double>(kprime[m - 1]);
        values[static_cast<std::size_t>(depth - m)] = std::ldexp(1.0, m - 1) * diff + 0.5;
    }
    double mass = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        mass += values[i] * (breaks[i + 1] - breaks[i]);
    }
    // Fold the residual tail mass into the deepest retained piece.
    const double residual = 1.0 - mass;
    values[0] += residual / (breaks[1] - breaks[0]);
    if (values[0] < 0.0 && values[0] > -1e-12) values[0] = 0.0;
    return Distribution::piecewise_constant(std::move(breaks), std::move(values),
                                            "prop3(depth=" + std::to_string(depth) + ")");
}

}  // namespace whc
