#include "whc/distribution_pair.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace whc {

namespace {

// Q << P iff every q-atom sits on a p-atom and the q-density is supported
// where the p-density is positive. The continuous check scans piece
// midpoints of the combined breakpoint grid, which is exact for the
// piecewise-smooth densities used here.
bool detect_domination(const Distribution& p, const Distribution& q) {
    for (const Atom& a : q.atoms()) {
        if (p.atom_mass_at(a.location) <= 0.0) return false;
    }
    if (!q.continuous()) return true;
    if (!p.continuous()) return false;
    const ContinuousPart& qc = *q.continuous();
    std::vector<double> grid = qc.breakpoints;
    for (double b : p.continuous()->breakpoints) {
        if (b >= qc.window_lo && b <= qc.window_hi) grid.push_back(b);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    constexpr int kSamplesPerPiece = 64;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double lo = grid[i - 1], hi = grid[i];
        for (int s = 0; s < kSamplesPerPiece; ++s) {
            const double x = lo + (hi - lo) * (s + 0.5) / kSamplesPerPiece;
            if (q.density_at(x) > 0.0 && p.density_at(x) <= 0.0) return false;
        }
    }
    return true;
}

}  // namespace

DistributionPair::DistributionPair(Distribution p, Distribution q, std::string name)
    : p_(std::move(p)), q_(std::move(q)), name_(std::move(name)) {
    for (const Atom& a : p_.atoms()) dominating_atoms_.push_back(a.location);
    for (const Atom& a : q_.atoms()) dominating_atoms_.push_back(a.location);
    std::sort(dominating_atoms_.begin(), dominating_atoms_.end());
    dominating_atoms_.erase(
        std::unique(dominating_atoms_.begin(), dominating_atoms_.end()),
        dominating_atoms_.end());
    q_dominated_by_p_ = detect_domination(p_, q_);
}

bool DistributionPair::is_atom_location(double x) const {
    return std::binary_search(dominating_atoms_.begin(), dominating_atoms_.end(), x);
}

double DistributionPair::p_weight(double x) const {
    return is_atom_location(x) ? p_.atom_mass_at(x) : p_.density_at(x);
}

double DistributionPair::q_weight(double x) const {
    return is_atom_location(x) ? q_.atom_mass_at(x) : q_.density_at(x);
}

double DistributionPair::log_ratio(double x) const {
    const double pw = p_weight(x);
    const double qw = q_weight(x);
    if (pw == 0.0 && qw == 0.0) {
        throw std::domain_error("log_ratio: both laws assign zero density at x=" +
                                std::to_string(x));
    }
    if (qw == 0.0) return -HUGE_VAL;
    if (pw == 0.0) return HUGE_VAL;
    return std::log(qw / pw);
}

namespace {

void require_params(const std::string& name, const std::vector<double>& params,
                    std::size_t lo, std::size_t hi) {
    if (params.size() < lo || params.size() > hi) {
        throw std::invalid_argument("named_pair '" + name + "': expected " +
                                    (lo == hi ? std::to_string(lo)
                                              : std::to_string(lo) + ".." + std::to_string(hi)) +
                                    " parameter(s), got " + std::to_string(params.size()));
    }
}

std::string canonical_name(const std::string& name, const std::vector<double>& params) {
    std::ostringstream os;
    os << name;
    for (std::size_t i = 0; i < params.size(); ++i) {
        os << (i == 0 ? ':' : ',') << params[i];
    }
    return os.str();
}

}  // namespace

DistributionPair named_pair(const std::string& name, const std::vector<double>& params) {
    const std::string canon = canonical_name(name, params);
    if (name == "bernoulli_dirac") {
        require_params(name, params, 1, 1);
        return DistributionPair(Distribution::bernoulli(params[0]),
                                Distribution::dirac(1.0), canon);
    }
    if (name == "bernoulli_bernoulli") {
        require_params(name, params, 2, 2);
        return DistributionPair(Distribution::bernoulli(params[0]),
                                Distribution::bernoulli(params[1]), canon);
    }
    if (name == "uniform_shift") {
        require_params(name, params, 1, 1);
        const double s = params[0];
        if (!(s >= 0.0)) throw std::invalid_argument("uniform_shift: shift must be >= 0");
        return DistributionPair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(s, 1.0 + s), canon);
    }
    if (name == "gaussian_shift") {
        require_params(name, params, 1, 1);
        return DistributionPair(Distribution::gaussian(0.0, 1.0),
                                Distribution::gaussian(params[0], 1.0), canon);
    }
    if (name == "uniform_vs_prop3") {
        require_params(name, params, 0, 1);
        const int depth = params.empty() ? 24 : static_cast<int>(params[0]);
        if (depth < 2 || depth > 50) {
            throw std::invalid_argument("uniform_vs_prop3: depth must be in [2, 50]");
        }
        std::vector<long long> kprime(static_cast<std::size_t>(depth));
        for (int m = 0; m < depth; ++m) kprime[static_cast<std::size_t>(m)] = 1LL << m;
        return DistributionPair(Distribution::uniform(0.0, 1.0),
                                build_prop3_density(kprime, depth), canon);
    }
    if (name == "disjoint_uniform") {
        require_params(name, params, 0, 0);
        return DistributionPair(Distribution::uniform(0.0, 1.0),
                                Distribution::uniform(1.0, 2.0), canon);
    }
    throw std::invalid_argument("unknown pair name '" + name + "'");
}

DistributionPair parse_pair_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::string rest = spec.substr(colon + 1);
        std::stringstream ss(rest);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            std::size_t pos = 0;
            double v;
            try {
                v = std::stod(tok, &pos);
            } catch (const std::exception&) {
                throw std::invalid_argument("pair spec '" + spec + "': bad parameter '" + tok + "'");
            }
            if (pos != tok.size()) {
                throw std::invalid_argument("pair spec '" + spec + "': bad parameter '" + tok + "'");
            }
            params.push_back(v);
        }
    }
    return named_pair(name, params);
}

}  // namespace whc
