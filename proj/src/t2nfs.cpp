#include "flcsim/t2nfs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "flcsim/smoothing.hpp"

namespace flcsim {

double membership(double xi, double c, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("membership: sigma must be positive");
    const double n = (xi - c) / sigma;
    return std::exp(-n * n);
}

namespace {

std::vector<double> even_centers(std::size_t n, double half_range) {
    std::vector<double> c(n, 0.0);
    if (n == 1) return c;
    for (std::size_t k = 0; k < n; ++k)
        c[k] = -half_range + 2.0 * half_range * static_cast<double>(k) / static_cast<double>(n - 1);
    return c;
}

// Log-firing -(N1i^2 + N2j^2) of every rule for one family.
std::vector<double> log_firing(const MembershipFamily& fam, std::size_t I, std::size_t J,
                               double xi1, double xi2) {
    std::vector<double> e1(I), e2(J);
    for (std::size_t i = 0; i < I; ++i) {
        const double n = (xi1 - fam.center[0][i]) / fam.sigma[0][i];
        e1[i] = -n * n;
    }
    for (std::size_t j = 0; j < J; ++j) {
        const double n = (xi2 - fam.center[1][j]) / fam.sigma[1][j];
        e2[j] = -n * n;
    }
    std::vector<double> out(I * J);
    for (std::size_t i = 0; i < I; ++i)
        for (std::size_t j = 0; j < J; ++j) out[i * J + j] = e1[i] + e2[j];
    return out;
}

void normalize(const std::vector<double>& log_w, std::vector<double>& raw,
               std::vector<double>& norm) {
    const double peak = *std::max_element(log_w.begin(), log_w.end());
    raw.resize(log_w.size());
    norm.resize(log_w.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < log_w.size(); ++k) {
        raw[k] = std::exp(log_w[k]);
        norm[k] = std::exp(log_w[k] - peak);
        sum += norm[k];
    }
    // The shifted peak contributes exactly 1, so this only trips on NaN input.
    if (!(sum >= 1e-300)) throw std::runtime_error("T2NFS: degenerate firing strengths");
    // Rules far from the inputs can underflow to 0 even after the shift; the
    // exact values are positive, so keep them at the smallest normal double.
    for (double& w : norm) w = std::max(w / sum, std::numeric_limits<double>::min());
}

void check_family(const MembershipFamily& fam, std::size_t I, std::size_t J, const char* name) {
    for (int in = 0; in < 2; ++in) {
        const std::size_t n = in == 0 ? I : J;
        if (fam.center[in].size() != n || fam.sigma[in].size() != n)
            throw std::invalid_argument(std::string("T2NFS ") + name + " family has wrong shape");
        for (double s : fam.sigma[in])
            if (!(s > 0.0))
                throw std::invalid_argument(std::string("T2NFS ") + name +
                                            " spreads must be positive");
    }
}

}  // namespace

T2nfsParams T2nfsParams::make(std::size_t I, std::size_t J, double alpha, const T2nfsInit& init) {
    if (I == 0 || J == 0) throw std::invalid_argument("T2NFS needs at least one set per input");
    if (!(alpha >= 0.0)) throw std::invalid_argument("T2NFS learning rate must be non-negative");
    if (!(init.half_range > 0.0) || !(init.upper_spread_ratio > 0.0))
        throw std::invalid_argument("T2NFS init: half_range and upper_spread_ratio must be positive");

    T2nfsParams p;
    p.I = I;
    p.J = J;
    p.alpha = alpha;
    p.q = init.q0;
    p.f.assign(I * J, init.f0);
    const std::array<std::size_t, 2> counts{I, J};
    for (int in = 0; in < 2; ++in) {
        const std::size_t n = counts[in];
        const double spread =
            n > 1 ? 2.0 * init.half_range / static_cast<double>(n - 1) : init.half_range;
        p.lower.center[in] = even_centers(n, init.half_range);
        p.upper.center[in] = p.lower.center[in];
        p.lower.sigma[in].assign(n, spread);
        p.upper.sigma[in].assign(n, init.upper_spread_ratio * spread);
    }
    return p;
}

void T2nfsParams::validate() const {
    if (I == 0 || J == 0) throw std::invalid_argument("T2NFS shape must be non-empty");
    check_family(lower, I, J, "lower");
    check_family(upper, I, J, "upper");
    if (f.size() != I * J) throw std::invalid_argument("T2NFS consequent table has wrong size");
}

GuardCounters& GuardCounters::operator+=(const GuardCounters& o) noexcept {
    sigma_singular += o.sigma_singular;
    sigma_step += o.sigma_step;
    sigma_floor += o.sigma_floor;
    f_frozen += o.f_frozen;
    q_frozen += o.q_frozen;
    return *this;
}

FiringState forward(const T2nfsParams& params, double xi1, double xi2) {
    FiringState fs;
    fs.I = params.I;
    fs.J = params.J;
    normalize(log_firing(params.lower, params.I, params.J, xi1, xi2), fs.w_lower, fs.w_norm_lower);
    normalize(log_firing(params.upper, params.I, params.J, xi1, xi2), fs.w_upper, fs.w_norm_upper);

    double lo = 0.0;
    double up = 0.0;
    for (std::size_t k = 0; k < params.f.size(); ++k) {
        lo += params.f[k] * fs.w_norm_lower[k];
        up += params.f[k] * fs.w_norm_upper[k];
    }
    fs.tau_n = params.q * lo + (1.0 - params.q) * up;
    return fs;
}

AdaptResult adapt(const T2nfsParams& params, const FiringState& firing, double xi1, double xi2,
                  double xi1_rate, double xi2_rate, double s, double dt,
                  const AdaptOptions& opt) {
    if (!(dt > 0.0)) throw std::invalid_argument("adapt: dt must be positive");
    if (firing.w_norm_lower.size() != params.rules() || firing.w_norm_upper.size() != params.rules())
        throw std::invalid_argument("adapt: firing state does not match parameter shape");

    AdaptResult out{params, {}};
    T2nfsParams& next = out.params;
    GuardCounters& guards = out.guards;

    const double g = params.alpha * smoothed_sign(s, opt.sgn_delta);
    const std::array<double, 2> xi{xi1, xi2};
    const std::array<double, 2> xi_rate{xi1_rate, xi2_rate};

    auto update_family = [&](const MembershipFamily& cur, MembershipFamily& nxt) {
        for (int in = 0; in < 2; ++in) {
            for (std::size_t k = 0; k < cur.center[in].size(); ++k) {
                const double c = cur.center[in][k];
                const double sigma = cur.sigma[in][k];
                nxt.center[in][k] = c + dt * (xi_rate[in] + xi[in] * g);

                const double diff = xi[in] - c;
                if (std::abs(diff) < opt.guard_eps) {
                    ++guards.sigma_singular;
                    continue;
                }
                const double step = -dt * sigma / diff * (xi[in] + sigma * sigma / diff) * g;
                if (!(std::abs(step) <= opt.sigma_max_rel_step * sigma)) {
                    ++guards.sigma_step;
                    continue;
                }
                double updated = sigma + step;
                if (updated < opt.sigma_floor) {
                    updated = opt.sigma_floor;
                    ++guards.sigma_floor;
                }
                nxt.sigma[in][k] = updated;
            }
        }
    };
    update_family(params.lower, next.lower);
    update_family(params.upper, next.upper);

    const double q = params.q;
    std::vector<double> combined(params.rules());
    double norm2 = 0.0;
    double f_dw = 0.0;
    for (std::size_t k = 0; k < params.rules(); ++k) {
        combined[k] = q * firing.w_norm_lower[k] + (1.0 - q) * firing.w_norm_upper[k];
        norm2 += combined[k] * combined[k];
        f_dw += params.f[k] * (firing.w_norm_lower[k] - firing.w_norm_upper[k]);
    }

    if (norm2 < opt.guard_eps) {
        ++guards.f_frozen;
    } else {
        for (std::size_t k = 0; k < params.rules(); ++k)
            next.f[k] = params.f[k] - dt * combined[k] / norm2 * g;
    }

    if (std::abs(f_dw) < opt.guard_eps) {
        ++guards.q_frozen;
    } else {
        next.q = q - dt * g / f_dw;
    }
    return out;
}

double tau_n_rate_oracle(const T2nfsParams& before, const T2nfsParams& after, double xi1,
                         double xi2, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("tau_n_rate_oracle: dt must be positive");
    return (forward(after, xi1, xi2).tau_n - forward(before, xi1, xi2).tau_n) / dt;
}

T2nfsParams to_type1(const T2nfsParams& params) {
    T2nfsParams out = params;
    out.upper = out.lower;
    return out;
}

bool is_type1(const T2nfsParams& params) { return params.lower == params.upper; }

namespace {

std::string label(const char* field, int input, std::size_t k) {
    return std::string(field) + "[" + std::to_string(input) + "][" + std::to_string(k) + "]";
}

}  // namespace

std::vector<std::pair<std::string, double>> to_table(const T2nfsParams& p) {
    std::vector<std::pair<std::string, double>> rows;
    auto emit = [&](const char* field, const std::array<std::vector<double>, 2>& v) {
        for (int in = 0; in < 2; ++in)
            for (std::size_t k = 0; k < v[in].size(); ++k) rows.emplace_back(label(field, in, k), v[in][k]);
    };
    emit("c_lower", p.lower.center);
    emit("c_upper", p.upper.center);
    emit("sigma_lower", p.lower.sigma);
    emit("sigma_upper", p.upper.sigma);
    for (std::size_t i = 0; i < p.I; ++i)
        for (std::size_t j = 0; j < p.J; ++j)
            rows.emplace_back("f[" + std::to_string(i) + "][" + std::to_string(j) + "]", p.f_at(i, j));
    rows.emplace_back("q", p.q);
    rows.emplace_back("alpha", p.alpha);
    return rows;
}

T2nfsParams from_table(std::size_t I, std::size_t J,
                       const std::vector<std::pair<std::string, double>>& rows) {
    T2nfsParams p = T2nfsParams::make(I, J, 0.0);
    const auto expected = to_table(p);
    if (rows.size() != expected.size())
        throw std::invalid_argument("T2NFS table has " + std::to_string(rows.size()) +
                                    " rows, expected " + std::to_string(expected.size()));
    std::size_t r = 0;
    auto take = [&](double& dst) {
        if (rows[r].first != expected[r].first)
            throw std::invalid_argument("T2NFS table row " + std::to_string(r) + " is '" +
                                        rows[r].first + "', expected '" + expected[r].first + "'");
        dst = rows[r++].second;
    };
    auto fill = [&](std::array<std::vector<double>, 2>& v) {
        for (int in = 0; in < 2; ++in)
            for (double& x : v[in]) take(x);
    };
    fill(p.lower.center);
    fill(p.upper.center);
    fill(p.lower.sigma);
    fill(p.upper.sigma);
    for (double& x : p.f) take(x);
    take(p.q);
    take(p.alpha);
    p.validate();
    return p;
}

}  // namespace flcsim
